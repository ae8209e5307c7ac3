// Multi-beam hierarchical beam search with fine correction.
//
// Round 1 sweeps every bin once and ranks the bins by measured SNR. Rounds
// 2..log2(M) halve the candidate set of the best bin with one multi-beam sweep
// each, keeping the swept half only when it beats eta_th = eta_max / 2. A single
// probe beam then fixes a pivot direction p, and the nearest neighbour of p in
// each of the top-T bins is swept with a full-array beam. The strongest of
// those T wins.
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ristrain/channel.hpp"
#include "ristrain/codebook.hpp"

namespace ristrain {

struct SearchConfig {
  int beams_per_sweep = 8;  // M
  int refine_bins = 0;      // T; 0 selects T = L
  bool noise_enabled = true;

  /// Effective T for a codebook with L bins.
  int refine_count(int bin_count) const { return refine_bins == 0 ? bin_count : refine_bins; }
  /// Throws std::invalid_argument if M does not fit n or T is outside 1..L.
  void validate(int n) const;
};

struct SweepRecord {
  int round = 0;
  std::vector<int> directions;
  double measured = 0.0;
};

/// Measured SNR for one training symbol sweeping `directions` in `round`.
using MeasureFn = std::function<double(int round, std::span<const int> directions)>;

struct SearchState {
  int round = 0;
  std::vector<double> bin_snr;    // eta(1, B(l)), indexed by l-1
  std::vector<int> ranked_bins;   // bin numbers in descending round-1 SNR; ties keep bin order
  int refine_bins = 0;            // T
  std::vector<int> candidates;    // surviving directions of the best bin
  double eta_max = 0.0;
  double eta_th = 0.0;
  int probe_slot = 0;             // m, 1-based slot of candidates.front() in the best bin
  int chosen_slot = 0;            // k
  int pivot = 0;                  // p
  std::vector<int> fine;          // D(1..T)
  int symbol_count = 0;
  std::vector<SweepRecord> sweep_log;
};

struct SearchResult {
  int chosen_index = 1;
  ComplexVec chosen_vector;
  int symbol_count = 0;
  std::vector<SweepRecord> sweep_log;
};

/// Sweeps every bin once.
SearchState first_round(const Codebook& cb, const MeasureFn& measure);

/// Orders bins by descending SNR (stable), keeps the first T, seeds the candidate set
/// with the best bin and fixes eta_th = eta_max / 2.
void rank_bins(const Codebook& cb, SearchState& state, int refine_bins);

/// One halving round r in 2..log2(M). Throws std::logic_error when called out of order.
void coarse_round(const Codebook& cb, SearchState& state, int round, const MeasureFn& measure);

/// Probe sweep at round log2(M)+1 and the nearest-to-pivot candidate per top-T bin.
void fine_candidates(const Codebook& cb, SearchState& state, const MeasureFn& measure);

/// T single-beam sweeps over the fine candidates; lowest l wins ties.
SearchResult fine_round(const Codebook& cb, SearchState& state, const MeasureFn& measure);

/// Coarse search through the probe round; the search state afterwards holds the pivot.
SearchState run_coarse_phase(const Codebook& cb, int refine_bins, const MeasureFn& measure);

/// Full search: coarse phase followed by the fine round.
SearchResult run_search(const Codebook& cb, int refine_bins, const MeasureFn& measure);

/// Measurement callback for beam training at the RIS with the user beam held fixed.
MeasureFn ris_prober(const FactoredLink& link, const Codebook& cb, const ComplexVec& w_u, Rng& rng,
                     bool noise_enabled);

/// Measurement callback for beam training at the user node with the RIS phases held fixed.
MeasureFn user_prober(const FactoredLink& link, const Codebook& cb, const ComplexVec& xi_h,
                      Rng& rng, bool noise_enabled);

/// Unit-norm user beam u_h(N_t, grid value of index).
ComplexVec user_beam(const Codebook& cb, int index);

/// Beam training at the RIS while the user transmits from a single element.
SearchResult run_ris_training(const ScenarioConfig& cfg, const ChannelRealization& real,
                              const SearchConfig& search, double gamma_tot, Rng& rng);

/// Beam training at the user node with the RIS azimuth beam xi_h fixed.
/// N_t = 1 returns the only direction without sweeping.
SearchResult run_user_training(const ScenarioConfig& cfg, const ChannelRealization& real,
                               const ComplexVec& xi_h, const SearchConfig& search,
                               double gamma_tot, Rng& rng);

/// Training-symbol count L + log2(M) + T + 1 as stated for the method.
/// The sweeps actually issued by run_search number one fewer: L + log2(M) + T.
int training_symbol_budget(int bin_count, int beams_per_sweep, int refine_bins);

/// Sweeps issued by run_search: L first-round, log2(M)-1 halving, one probe, T fine.
int instrumented_symbol_count(int bin_count, int beams_per_sweep, int refine_bins);

}  // namespace ristrain
