#include "ristrain/search.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ristrain {

namespace {

double sweep(SearchState& state, int round, std::vector<int> directions,
             const MeasureFn& measure) {
  const double eta = measure(round, directions);
  state.sweep_log.push_back({round, std::move(directions), eta});
  ++state.symbol_count;
  return eta;
}

const std::vector<int>& ranked(const Codebook& cb, const SearchState& state, int rank) {
  return cb.bin(state.ranked_bins.at(rank - 1));
}

}  // namespace

void SearchConfig::validate(int n) const {
  const Codebook cb(n, beams_per_sweep);
  const int t = refine_count(cb.bin_count());
  if (t < 1 || t > cb.bin_count()) {
    throw std::invalid_argument("search: T = " + std::to_string(t) + " must lie in 1..L = " +
                                std::to_string(cb.bin_count()));
  }
}

SearchState first_round(const Codebook& cb, const MeasureFn& measure) {
  SearchState state;
  state.round = 1;
  state.bin_snr.reserve(cb.bin_count());
  for (int l = 1; l <= cb.bin_count(); ++l) {
    state.bin_snr.push_back(sweep(state, 1, cb.bin(l), measure));
  }
  return state;
}

void rank_bins(const Codebook& cb, SearchState& state, int refine_bins) {
  if (state.round != 1 || static_cast<int>(state.bin_snr.size()) != cb.bin_count()) {
    throw std::logic_error("rank_bins: first round has not been swept");
  }
  if (refine_bins < 1 || refine_bins > cb.bin_count()) {
    throw std::invalid_argument("rank_bins: T must lie in 1..L");
  }
  state.ranked_bins.resize(cb.bin_count());
  std::iota(state.ranked_bins.begin(), state.ranked_bins.end(), 1);
  std::stable_sort(state.ranked_bins.begin(), state.ranked_bins.end(), [&](int a, int b) {
    return state.bin_snr[a - 1] > state.bin_snr[b - 1];
  });
  state.refine_bins = refine_bins;
  state.candidates = ranked(cb, state, 1);
  state.eta_max = state.bin_snr[state.ranked_bins.front() - 1];
  state.eta_th = state.eta_max / 2.0;
}

void coarse_round(const Codebook& cb, SearchState& state, int round, const MeasureFn& measure) {
  if (round < 2 || round > cb.coarse_rounds()) {
    throw std::logic_error("coarse_round: round " + std::to_string(round) + " outside 2.." +
                           std::to_string(cb.coarse_rounds()));
  }
  if (state.round != round - 1 || state.ranked_bins.empty()) {
    throw std::logic_error("coarse_round: round " + std::to_string(round) +
                           " requested after round " + std::to_string(state.round));
  }
  const int half = cb.directions_in_round(round);
  std::vector<int> swept(state.candidates.begin(), state.candidates.begin() + half);
  const double eta = sweep(state, round, swept, measure);
  if (eta > state.eta_th) {
    state.candidates = std::move(swept);
  } else {
    state.candidates.erase(state.candidates.begin(), state.candidates.begin() + half);
  }
  state.round = round;
}

void fine_candidates(const Codebook& cb, SearchState& state, const MeasureFn& measure) {
  if (state.round != cb.coarse_rounds() || state.ranked_bins.empty() ||
      state.candidates.size() != 2) {
    throw std::logic_error("fine_candidates: coarse search is not complete");
  }
  const auto& best = ranked(cb, state, 1);
  const auto it = std::find(best.begin(), best.end(), state.candidates.front());
  if (it == best.end() || it + 1 == best.end() || *(it + 1) != state.candidates.back()) {
    throw std::logic_error("fine_candidates: surviving pair is not adjacent in the best bin");
  }
  const int m = static_cast<int>(it - best.begin()) + 1;
  state.probe_slot = m;

  const int probe_round = cb.coarse_rounds() + 1;
  const double eta = sweep(state, probe_round, {best[m - 1]}, measure);
  state.chosen_slot = eta > state.eta_th ? m : m + 1;
  state.pivot = best[state.chosen_slot - 1];
  state.round = probe_round;

  const int p = state.pivot;
  state.fine.clear();
  for (int l = 1; l <= state.refine_bins; ++l) {
    const auto& bin = ranked(cb, state, l);
    const int lo = bin[m - 1];
    const int hi = bin[m];
    const int dlo = std::abs(lo - p);
    const int dhi = std::abs(hi - p);
    if (dlo < dhi) {
      state.fine.push_back(lo);
    } else if (dlo > dhi) {
      state.fine.push_back(hi);
    } else {
      state.fine.push_back(bin[state.chosen_slot - 1]);
    }
  }
}

SearchResult fine_round(const Codebook& cb, SearchState& state, const MeasureFn& measure) {
  if (state.round != cb.coarse_rounds() + 1 || state.fine.empty()) {
    throw std::logic_error("fine_round: fine candidates have not been computed");
  }
  const int round = cb.coarse_rounds() + 2;
  std::size_t best = 0;
  double best_eta = 0.0;
  for (std::size_t l = 0; l < state.fine.size(); ++l) {
    const double eta = sweep(state, round, {state.fine[l]}, measure);
    if (l == 0 || eta > best_eta) {
      best = l;
      best_eta = eta;
    }
  }
  state.round = round;

  SearchResult result;
  result.chosen_index = state.fine[best];
  result.chosen_vector = single_beam(cb, result.chosen_index);
  result.symbol_count = state.symbol_count;
  result.sweep_log = state.sweep_log;
  return result;
}

SearchState run_coarse_phase(const Codebook& cb, int refine_bins, const MeasureFn& measure) {
  SearchState state = first_round(cb, measure);
  rank_bins(cb, state, refine_bins);
  for (int r = 2; r <= cb.coarse_rounds(); ++r) coarse_round(cb, state, r, measure);
  fine_candidates(cb, state, measure);
  return state;
}

SearchResult run_search(const Codebook& cb, int refine_bins, const MeasureFn& measure) {
  SearchState state = run_coarse_phase(cb, refine_bins, measure);
  return fine_round(cb, state, measure);
}

MeasureFn ris_prober(const FactoredLink& link, const Codebook& cb, const ComplexVec& w_u, Rng& rng,
                     bool noise_enabled) {
  return [&link, &cb, &w_u, &rng, noise_enabled](int round, std::span<const int> dirs) {
    return link.measure(multibeam_vector(cb, round, dirs), link.matched_xi_v(), w_u, rng,
                        noise_enabled);
  };
}

MeasureFn user_prober(const FactoredLink& link, const Codebook& cb, const ComplexVec& xi_h,
                      Rng& rng, bool noise_enabled) {
  const double norm = 1.0 / std::sqrt(static_cast<double>(cb.size()));
  return [&link, &cb, &xi_h, &rng, noise_enabled, norm](int round, std::span<const int> dirs) {
    const ComplexVec w_u = norm * multibeam_vector(cb, round, dirs);
    return link.measure(xi_h, link.matched_xi_v(), w_u, rng, noise_enabled);
  };
}

ComplexVec user_beam(const Codebook& cb, int index) {
  return steering_h(cb.size(), cb.grid().value(index));
}

SearchResult run_ris_training(const ScenarioConfig& cfg, const ChannelRealization& real,
                              const SearchConfig& search, double gamma_tot, Rng& rng) {
  const Codebook cb(cfg.n_h, search.beams_per_sweep);
  const FactoredLink link(cfg, real, gamma_tot);
  const ComplexVec w_u = omni_user_beam(cfg.n_t);
  return run_search(cb, search.refine_count(cb.bin_count()),
                    ris_prober(link, cb, w_u, rng, search.noise_enabled));
}

SearchResult run_user_training(const ScenarioConfig& cfg, const ChannelRealization& real,
                               const ComplexVec& xi_h, const SearchConfig& search,
                               double gamma_tot, Rng& rng) {
  if (cfg.n_t == 1) {
    SearchResult trivial;
    trivial.chosen_vector = ComplexVec::Ones(1);
    return trivial;
  }
  const Codebook cb(cfg.n_t, search.beams_per_sweep);
  const FactoredLink link(cfg, real, gamma_tot);
  SearchResult result = run_search(cb, search.refine_count(cb.bin_count()),
                                   user_prober(link, cb, xi_h, rng, search.noise_enabled));
  result.chosen_vector = user_beam(cb, result.chosen_index);
  return result;
}

int training_symbol_budget(int bin_count, int beams_per_sweep, int refine_bins) {
  return bin_count + std::countr_zero(static_cast<unsigned>(beams_per_sweep)) + refine_bins + 1;
}

int instrumented_symbol_count(int bin_count, int beams_per_sweep, int refine_bins) {
  return bin_count + std::countr_zero(static_cast<unsigned>(beams_per_sweep)) + refine_bins;
}

}  // namespace ristrain
