#include <doctest.h>

#include <cmath>
#include <random>

#include "ristrain/baselines.hpp"

using namespace ristrain;

namespace {

ScenarioConfig small(int n_h, int n_t) {
  ScenarioConfig cfg;
  cfg.n_h = n_h;
  cfg.n_v = 2;
  cfg.n_r = 2;
  cfg.n_t = n_t;
  return cfg;
}

ChannelRealization random_realization(const ScenarioConfig& cfg, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ChannelRealization r = geometric_realization(cfg, sample_rician(10.0, rng),
                                               sample_rician(5.0, rng));
  r.omega_i = u(rng);
  r.omega_u = u(rng);
  return r;
}

}  // namespace

TEST_CASE("nearest grid direction") {
  const DirectionGrid g(64);
  CHECK(optimal_direction(g, 0.0) == 32);  // midpoint between 32 and 33
  CHECK(optimal_direction(g, g.value(17)) == 17);
  CHECK(optimal_direction(g, -1.0) == 1);
  CHECK(optimal_direction(g, 0.999) == 64);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double t = u(rng);
    const int got = optimal_direction(g, t);
    for (int j = 1; j <= 64; ++j) {
      CHECK(std::abs(g.value(got) - t) <= std::abs(g.value(j) - t));
    }
  }
}

TEST_CASE("exhaustive search agrees with a full-matrix double loop") {
  const ScenarioConfig cfg = small(8, 4);
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const ChannelRealization r = random_realization(cfg, rng);
    const OraclePair best = exhaustive_search(cfg, r, 1.0);
    const DirectionGrid hg(cfg.n_h), tg(cfg.n_t);
    const ComplexVec xi_v = std::sqrt(double(cfg.n_v)) * steering_v(cfg.n_v, r.phi_tilde());
    double top = -1.0;
    int bj = 0, bi = 0;
    for (int j = 1; j <= cfg.n_h; ++j) {
      const ComplexVec xi_h = std::sqrt(double(cfg.n_h)) * steering_h(cfg.n_h, hg.value(j));
      for (int i = 1; i <= cfg.n_t; ++i) {
        const double eta =
            received_snr_full(cfg, r, kron(xi_h, xi_v), steering_h(cfg.n_t, tg.value(i)), 1.0);
        if (eta > top * (1 + 1e-12)) {
          top = eta;
          bj = j;
          bi = i;
        }
      }
    }
    CHECK(best.ris_index == bj);
    CHECK(best.user_index == bi);
    CHECK(best.snr == doctest::Approx(top).epsilon(1e-10));
  }
}

TEST_CASE("exhaustive search breaks ties toward the lowest pair") {
  const ScenarioConfig cfg = small(8, 4);
  const ChannelRealization r = geometric_realization(cfg, 0.0, 1.0);
  const OraclePair best = exhaustive_search(cfg, r, 1.0);
  CHECK(best.ris_index == 1);
  CHECK(best.user_index == 1);
  CHECK(best.snr == 0.0);
}

TEST_CASE("mirrored geometry mirrors the oracle pair") {
  // Negating both spatial frequencies maps grid index j to N + 1 - j with equal SNR.
  const ScenarioConfig cfg = small(16, 8);
  Rng rng(44);
  for (int trial = 0; trial < 20; ++trial) {
    ChannelRealization r = random_realization(cfg, rng);
    r.phi_i = r.phi_r;  // elevation matched either way
    ChannelRealization m = r;
    m.omega_i = wrap_mod2(2.0 * r.omega_r - r.omega_i);
    m.omega_u = -r.omega_u;
    REQUIRE(std::abs(wrap_mod2(m.omega_tilde() + r.omega_tilde())) < 1e-12);
    const OraclePair a = exhaustive_search(cfg, r, 1.0);
    const OraclePair b = exhaustive_search(cfg, m, 1.0);
    CHECK(b.snr == doctest::Approx(a.snr).epsilon(1e-9));
    CHECK(b.ris_index == cfg.n_h + 1 - a.ris_index);
    CHECK(b.user_index == cfg.n_t + 1 - a.user_index);
  }
}

TEST_CASE("the oracle dominates every search scheme") {
  const ScenarioConfig cfg = small(32, 8);
  const Codebook ris_cb(32, 4);
  const DirectionGrid user_grid(8);
  const SearchConfig ris{4, 0, true};
  const SearchConfig user{2, 0, true};
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const ChannelRealization r = random_realization(cfg, rng);
    const double gamma = 1e-3;
    const OraclePair best = exhaustive_search(cfg, r, gamma);
    const FactoredLink link(cfg, r, gamma);
    const SearchResult at_ris = run_ris_training(cfg, r, ris, gamma, rng);
    const SearchResult at_user =
        run_user_training(cfg, r, at_ris.chosen_vector, user, gamma, rng);
    const double eta = pair_snr(link, ris_cb, at_ris.chosen_index, user_grid,
                                at_user.chosen_index);
    CHECK(best.snr >= eta * (1 - 1e-12));
    const SearchResult cs = cs_search(cfg, r, ris, gamma, rng);
    const SearchResult bs = bs_search(cfg, r, cs.chosen_vector, gamma, rng);
    CHECK(best.snr >=
          pair_snr(link, ris_cb, cs.chosen_index, user_grid, bs.chosen_index) * (1 - 1e-12));
  }
}

TEST_CASE("coarse search stops at the pivot") {
  const ScenarioConfig cfg = [] {
    ScenarioConfig c = small(32, 1);
    c.n_v = 8;
    c.n_r = 8;
    return c;
  }();
  const DirectionGrid grid(32);
  const SearchConfig search{4, 0, false};
  Rng rng(1);
  for (int j = 1; j <= 32; ++j) {
    ChannelRealization r = geometric_realization(cfg);
    r.omega_i = wrap_mod2(r.omega_r - grid.value(j));
    const SearchResult cs = cs_search(cfg, r, search, 1.0, rng);
    const SearchResult ps = run_ris_training(cfg, r, search, 1.0, rng);
    CHECK(cs.symbol_count == 8 + 2);
    CHECK(cs.chosen_index == ps.chosen_index);
    CHECK(cs.chosen_index == j);
  }
}

TEST_CASE("binary search finds every on-grid user direction without noise") {
  for (int n_t : {2, 4, 8, 16, 32}) {
    const ScenarioConfig cfg = small(16, n_t);
    const DirectionGrid grid(n_t);
    Rng rng(1);
    for (int j = 1; j <= n_t; ++j) {
      ChannelRealization r = geometric_realization(cfg);
      r.omega_u = grid.value(j);
      const ComplexVec xi_h = std::sqrt(16.0) * steering_h(16, r.omega_tilde());
      const SearchResult bs = bs_search(cfg, r, xi_h, 1.0, rng, false);
      CHECK(bs.chosen_index == j);
      CHECK(bs.symbol_count == 2 * static_cast<int>(std::log2(n_t)));
      CHECK(bs.chosen_vector.norm() == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("binary search rejects non power-of-two arrays and skips single antennas") {
  const ScenarioConfig six = small(16, 6);
  Rng rng(1);
  const ComplexVec xi_h = ComplexVec::Ones(16);
  CHECK_THROWS_AS(bs_search(six, geometric_realization(six), xi_h, 1.0, rng),
                  std::invalid_argument);
  const ScenarioConfig one = small(16, 1);
  const SearchResult bs = bs_search(one, geometric_realization(one), xi_h, 1.0, rng);
  CHECK(bs.chosen_index == 1);
  CHECK(bs.symbol_count == 0);
}
