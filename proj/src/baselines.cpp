#include "ristrain/baselines.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ristrain {

double pair_snr(const FactoredLink& link, const Codebook& ris_cb, int ris_index,
                const DirectionGrid& user_grid, int user_index) {
  return link.snr(single_beam(ris_cb, ris_index), link.matched_xi_v(),
                  steering_h(user_grid.size(), user_grid.value(user_index)));
}

OraclePair exhaustive_search(const ScenarioConfig& cfg, const ChannelRealization& real,
                             double gamma_tot) {
  const FactoredLink link(cfg, real, gamma_tot);
  const DirectionGrid ris_grid(cfg.n_h);
  const DirectionGrid user_grid(cfg.n_t);

  std::vector<ComplexVec> ris_beams;
  ris_beams.reserve(cfg.n_h);
  for (int j = 1; j <= cfg.n_h; ++j) {
    ris_beams.push_back(std::sqrt(static_cast<double>(cfg.n_h)) *
                        steering_h(cfg.n_h, ris_grid.value(j)));
  }
  std::vector<ComplexVec> user_beams;
  user_beams.reserve(cfg.n_t);
  for (int i = 1; i <= cfg.n_t; ++i) user_beams.push_back(steering_h(cfg.n_t, user_grid.value(i)));

  OraclePair best;
  bool first = true;
  for (int j = 1; j <= cfg.n_h; ++j) {
    for (int i = 1; i <= cfg.n_t; ++i) {
      const double eta = link.snr(ris_beams[j - 1], link.matched_xi_v(), user_beams[i - 1]);
      if (first || eta > best.snr) {
        best = {j, i, eta};
        first = false;
      }
    }
  }
  return best;
}

int optimal_direction(const DirectionGrid& grid, double target) {
  int best = 1;
  double best_dist = std::abs(grid.value(1) - target);
  for (int l = 2; l <= grid.size(); ++l) {
    const double d = std::abs(grid.value(l) - target);
    if (d < best_dist) {
      best = l;
      best_dist = d;
    }
  }
  return best;
}

SearchResult cs_search(const ScenarioConfig& cfg, const ChannelRealization& real,
                       const SearchConfig& search, double gamma_tot, Rng& rng) {
  const Codebook cb(cfg.n_h, search.beams_per_sweep);
  const FactoredLink link(cfg, real, gamma_tot);
  const ComplexVec w_u = omni_user_beam(cfg.n_t);
  // T only shapes the unused fine candidates here.
  const SearchState state =
      run_coarse_phase(cb, 1, ris_prober(link, cb, w_u, rng, search.noise_enabled));
  SearchResult result;
  result.chosen_index = state.pivot;
  result.chosen_vector = single_beam(cb, state.pivot);
  result.symbol_count = state.symbol_count;
  result.sweep_log = state.sweep_log;
  return result;
}

SearchResult bs_search(const ScenarioConfig& cfg, const ChannelRealization& real,
                       const ComplexVec& xi_h, double gamma_tot, Rng& rng, bool noise_enabled) {
  const int n = cfg.n_t;
  if (!std::has_single_bit(static_cast<unsigned>(n))) {
    throw std::invalid_argument("bs_search: N_t = " + std::to_string(n) +
                                " must be a power of 2");
  }
  SearchResult result;
  if (n == 1) {
    result.chosen_vector = ComplexVec::Ones(1);
    return result;
  }

  const FactoredLink link(cfg, real, gamma_tot);
  const DirectionGrid grid(n);
  int lo = 1;  // surviving indices lo .. lo + width - 1
  int width = n;
  int level = 0;
  while (width > 1) {
    ++level;
    const int half = width / 2;
    const int active = std::min(n, 2 * n / width);
    double eta[2];
    for (int side = 0; side < 2; ++side) {
      const int first = lo + side * half;
      const double centre = 0.5 * (grid.value(first) + grid.value(first + half - 1));
      ComplexVec w = ComplexVec::Zero(n);
      w.head(active) = steering_h(active, centre);
      eta[side] = link.measure(xi_h, link.matched_xi_v(), w, rng, noise_enabled);
      result.sweep_log.push_back({level, {first, first + half - 1}, eta[side]});
      ++result.symbol_count;
    }
    if (eta[1] > eta[0]) lo += half;
    width = half;
  }
  result.chosen_index = lo;
  result.chosen_vector = steering_h(n, grid.value(lo));
  return result;
}

}  // namespace ristrain
