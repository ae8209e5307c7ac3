#include "ristrain/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ristrain {

namespace {

ComplexVec random_phases(int n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  ComplexVec v(n);
  for (auto& z : v) z = std::polar(1.0, u(rng));
  return v;
}

ComplexVec random_unit_vector(int n, Rng& rng) {
  ComplexVec v(n);
  for (auto& z : v) z = sample_cn(rng);
  return v / v.norm();
}

}  // namespace

CheckResult check_factorization(const ScenarioConfig& cfg, int draws, std::uint64_t seed) {
  CheckResult res{"factorization equivalence", true, ""};
  Rng rng = make_substream(seed, {0xfac});
  std::uniform_real_distribution<double> freq(-1.0, 1.0);
  double worst = 0.0;
  for (int d = 0; d < draws; ++d) {
    ChannelRealization real;
    real.mu_ui = sample_cn(rng);
    real.mu_ia = sample_cn(rng);
    real.omega_u = freq(rng);
    real.omega_i = freq(rng);
    real.omega_a = freq(rng);
    real.omega_r = freq(rng);
    real.phi_i = freq(rng);
    real.phi_r = freq(rng);
    const ComplexVec xi_h = random_phases(cfg.n_h, rng);
    const ComplexVec xi_v = random_phases(cfg.n_v, rng);
    const ComplexVec w_u = random_unit_vector(cfg.n_t, rng);
    const double gamma = 1.0;
    const double full = received_snr_full(cfg, real, kron(xi_h, xi_v), w_u, gamma);
    const double fact = received_snr_factored(cfg, real, xi_h, xi_v, w_u, gamma);
    const double rel = std::abs(full - fact) / std::max({full, fact, 1e-300});
    worst = std::max(worst, rel);
  }
  res.passed = worst <= 1e-10;
  std::ostringstream os;
  os << draws << " draws, worst relative error " << worst;
  res.detail = os.str();
  return res;
}

CheckResult check_codebook_vectors(const Codebook& cb) {
  CheckResult res{"slice identity and unit modulus", true, ""};
  const int n = cb.size();
  const int l = cb.bin_count();
  double worst_slice = 0.0;
  for (int j = 1; j <= n; ++j) {
    const double alpha = cb.grid().value(j);
    const ComplexVec full = steering_h(n, alpha);
    const ComplexVec part = steering_h(l, alpha);
    for (int m = 1; m <= cb.beams_per_sweep(); ++m) {
      const Complex phase = std::polar(1.0, std::numbers::pi * (m - 1) * l * alpha);
      const ComplexVec expect = phase * std::sqrt(static_cast<double>(l) / n) * part;
      worst_slice =
          std::max(worst_slice, (full.segment((m - 1) * l, l) - expect).cwiseAbs().maxCoeff());
    }
  }
  double worst_mod = 0.0;
  for (int r = 1; r <= cb.coarse_rounds() + 1; ++r) {
    const int width = cb.directions_in_round(r);
    for (const auto& bin : cb.bins()) {
      for (int start = 0; start + width <= cb.beams_per_sweep(); start += width) {
        const std::vector<int> dirs(bin.begin() + start, bin.begin() + start + width);
        const ComplexVec v = multibeam_vector(cb, r, dirs);
        worst_mod = std::max(worst_mod, (v.cwiseAbs().array() - 1.0).abs().maxCoeff());
      }
    }
  }
  res.passed = worst_slice <= 1e-12 && worst_mod <= 1e-12;
  std::ostringstream os;
  os << "max slice error " << worst_slice << ", max modulus error " << worst_mod;
  res.detail = os.str();
  return res;
}

CheckResult check_noiseless_soundness(const ScenarioConfig& cfg, int beams_per_sweep,
                                      bool user_node) {
  CheckResult res{user_node ? "noiseless soundness (user node)" : "noiseless soundness (RIS)",
                  true, ""};
  const int n = user_node ? cfg.n_t : cfg.n_h;
  const DirectionGrid grid(n);
  SearchConfig search{beams_per_sweep, 0, false};
  Rng rng = make_substream(0, {0x50d});
  int misses = 0;
  int first_miss = 0;
  for (int j = 1; j <= n; ++j) {
    ChannelRealization real = geometric_realization(cfg);
    real.mu_ui = sample_rician(200.0, rng);
    real.mu_ia = sample_rician(200.0, rng);
    int chosen = 0;
    if (user_node) {
      real.omega_u = grid.value(j);
      const ComplexVec xi_h = std::sqrt(static_cast<double>(cfg.n_h)) *
                              steering_h(cfg.n_h, real.omega_tilde());
      chosen = run_user_training(cfg, real, xi_h, search, 1.0, rng).chosen_index;
    } else {
      real.omega_i = wrap_mod2(real.omega_r - grid.value(j));
      chosen = run_ris_training(cfg, real, search, 1.0, rng).chosen_index;
    }
    if (chosen != j) {
      if (misses == 0) first_miss = j;
      ++misses;
    }
  }
  res.passed = misses == 0;
  std::ostringstream os;
  os << n - misses << "/" << n << " grid directions recovered";
  if (misses > 0) os << " (first miss at index " << first_miss << ")";
  res.detail = os.str();
  return res;
}

CheckResult check_symbol_accounting(const ScenarioConfig& cfg, const SearchConfig& search) {
  CheckResult res{"symbol accounting", true, ""};
  const Codebook cb(cfg.n_h, search.beams_per_sweep);
  const int t = search.refine_count(cb.bin_count());
  Rng rng = make_substream(0, {0x5b});
  ChannelRealization real = geometric_realization(cfg, sample_rician(cfg.kappa_ui_db, rng),
                                                  sample_rician(cfg.kappa_ia_db, rng));
  SearchConfig noisy = search;
  noisy.noise_enabled = true;
  const SearchResult r = run_ris_training(cfg, real, noisy, 1.0, rng);
  const int expected = instrumented_symbol_count(cb.bin_count(), cb.beams_per_sweep(), t);
  const int budget = training_symbol_budget(cb.bin_count(), cb.beams_per_sweep(), t);
  res.passed = r.symbol_count == expected && static_cast<int>(r.sweep_log.size()) == expected &&
               budget == expected + 1;
  std::ostringstream os;
  os << "instrumented " << r.symbol_count << " (L + log2 M + T = " << expected
     << "), stated budget L + log2 M + T + 1 = " << budget;
  res.detail = os.str();
  return res;
}

std::vector<CheckResult> run_invariant_suite(const ExperimentPlan& plan) {
  const ScenarioConfig& cfg = plan.scenario;
  // Full-matrix evaluation is O(N_r N_I); keep the total work bounded on large arrays.
  const double cost = static_cast<double>(cfg.n_r) * cfg.n_i() + static_cast<double>(cfg.n_i()) * cfg.n_t;
  const int draws = std::clamp(static_cast<int>(2e7 / cost), 3, 200);

  std::vector<CheckResult> out;
  out.push_back(check_factorization(cfg, draws, plan.master_seed));
  out.push_back(check_codebook_vectors(Codebook(cfg.n_h, plan.ris_search.beams_per_sweep)));
  out.push_back(check_noiseless_soundness(cfg, plan.ris_search.beams_per_sweep, false));
  if (cfg.n_t > 1) {
    out.push_back(check_codebook_vectors(Codebook(cfg.n_t, plan.user_search.beams_per_sweep)));
    out.push_back(check_noiseless_soundness(cfg, plan.user_search.beams_per_sweep, true));
  }
  out.push_back(check_symbol_accounting(cfg, plan.ris_search));
  return out;
}

}  // namespace ristrain
