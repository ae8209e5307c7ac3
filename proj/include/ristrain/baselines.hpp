// Exhaustive-search oracle and the comparison schemes: coarse search without
// refinement (CS) at the RIS and hierarchical bisection (BS) at the user node.
#pragma once

#include "ristrain/channel.hpp"
#include "ristrain/codebook.hpp"
#include "ristrain/search.hpp"

namespace ristrain {

struct OraclePair {
  int ris_index = 1;
  int user_index = 1;
  double snr = 0.0;
};

/// Noiseless SNR at grid pair (ris_index on the N_h grid, user_index on the N_t grid)
/// with the elevation beam matched.
double pair_snr(const FactoredLink& link, const Codebook& ris_grid_cb, int ris_index,
                const DirectionGrid& user_grid, int user_index);

/// Best of all N_h x N_t grid pairs by noiseless SNR; lowest (ris, user) on ties.
OraclePair exhaustive_search(const ScenarioConfig& cfg, const ChannelRealization& real,
                             double gamma_tot);

/// Grid index nearest to target; the lower index wins an exact midpoint tie.
int optimal_direction(const DirectionGrid& grid, double target);

/// RIS search that stops after the probe round and returns the pivot p.
/// Uses L + log2(M) training symbols.
SearchResult cs_search(const ScenarioConfig& cfg, const ChannelRealization& real,
                       const SearchConfig& search, double gamma_tot, Rng& rng);

/// Binary search over the user grid with the RIS azimuth beam xi_h fixed.
///
/// Each level splits the surviving index interval into halves and probes each with
/// a beam from the first s = 2N/n elements (n = current interval size) steered at
/// the half's centre; the stronger half survives. log2(N_t) levels, two symbols each.
/// Throws std::invalid_argument unless N_t is a power of 2.
SearchResult bs_search(const ScenarioConfig& cfg, const ChannelRealization& real,
                       const ComplexVec& xi_h, double gamma_tot, Rng& rng,
                       bool noise_enabled = true);

}  // namespace ristrain
