// RIS-assisted uplink channel: Rician gains, cascaded channel matrices and the
// received-SNR model used by beam training.
#pragma once

#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>

#include "ristrain/array_geometry.hpp"

namespace ristrain {

using Rng = std::mt19937_64;

/// Deterministic independent stream for a tuple of keys (master seed, trial index, ...).
/// Keys are mixed with splitmix64, so neighbouring indices give unrelated streams.
Rng make_substream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> keys);

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

/// Physical and geometric scenario. Angles in radians, powers in the unit named.
struct ScenarioConfig {
  double carrier_freq_hz = 30e9;
  double d_ui = 2.0;   // user-RIS distance, m
  double d_ia = 10.0;  // RIS-AP distance, m
  double zeta0_db = -62.0;
  double delta_ui = 2.3;
  double delta_ia = 2.0;
  double kappa_ui_db = 10.0;
  double kappa_ia_db = 5.0;
  double noise_power_dbm = -109.0;

  int n_t = 1;
  int n_r = 64;
  int n_h = 160;
  int n_v = 160;

  double theta_u = deg_to_rad(60.0);
  double theta_i = deg_to_rad(60.0);
  double vartheta_i = deg_to_rad(80.0);
  double theta_r = deg_to_rad(30.0);
  double vartheta_r = deg_to_rad(70.0);
  double theta_a = deg_to_rad(45.0);

  double p_per_w = 1e-3;
  int n_tact = 1;

  int n_i() const { return n_h * n_v; }
  double p_tot_w() const { return p_per_w * n_tact; }
  double noise_power_w() const;

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;
};

/// One fading draw plus the spatial frequencies that define the link geometry.
struct ChannelRealization {
  Complex mu_ui{1.0, 0.0};
  Complex mu_ia{1.0, 0.0};
  double omega_u = 0.0;
  double omega_i = 0.0;
  double omega_a = 0.0;
  double omega_r = 0.0;
  double phi_i = 0.0;
  double phi_r = 0.0;

  /// Azimuth phase gradient the RIS must impose, wrap(omega_r - omega_i).
  double omega_tilde() const { return wrap_mod2(omega_r - omega_i); }
  double phi_tilde() const { return wrap_mod2(phi_r - phi_i); }
};

/// Realization whose spatial frequencies follow the scenario angles.
ChannelRealization geometric_realization(const ScenarioConfig& cfg, Complex mu_ui = 1.0,
                                          Complex mu_ia = 1.0);

/// Unit-average-power Rician gain with K-factor kappa_db (dB).
/// kappa_db = -inf gives Rayleigh, large kappa_db a pure LoS unit phasor.
Complex sample_rician(double kappa_db, Rng& rng);

/// Circularly symmetric complex Gaussian with unit variance.
Complex sample_cn(Rng& rng);

/// User-RIS channel H (N_I x N_t).
ComplexMat channel_H(const ScenarioConfig& cfg, const ChannelRealization& real);

/// RIS-AP channel G (N_r x N_I).
ComplexMat channel_G(const ScenarioConfig& cfg, const ChannelRealization& real);

/// Matched AP combiner u_h(N_r, omega_a).
ComplexVec ap_combiner(const ScenarioConfig& cfg, const ChannelRealization& real);

/// gamma_tot * |w_a^H G diag(xi) H w_u|^2 evaluated with the full matrices.
double received_snr_full(const ScenarioConfig& cfg, const ChannelRealization& real,
                         const ComplexVec& xi, const ComplexVec& w_u, double gamma_tot);

/// Per-trial cache of the separable factors of the received SNR.
///
/// The cascaded gain separates into scalar inner products
///   a = sqrt(gamma N_r N_t) mu_ui mu_ia (q_h^H xi_h)(q_v^H xi_v)(u_h(N_t, omega_u)^H w_u),
/// and the received SNR is |a|^2. Each evaluation is O(N_h + N_v + N_t).
class FactoredLink {
 public:
  FactoredLink(const ScenarioConfig& cfg, const ChannelRealization& real, double gamma_tot);

  /// Complex amplitude of one training symbol normalized to the noise level.
  /// Throws std::invalid_argument on wrong lengths or a non-unit-modulus xi element.
  Complex amplitude(const ComplexVec& xi_h, const ComplexVec& xi_v, const ComplexVec& w_u) const;

  double snr(const ComplexVec& xi_h, const ComplexVec& xi_v, const ComplexVec& w_u) const {
    return std::norm(amplitude(xi_h, xi_v, w_u));
  }

  /// Energy-detector estimate |a + z|^2 with z ~ CN(0, 1); |a|^2 when noise is disabled.
  double measure(const ComplexVec& xi_h, const ComplexVec& xi_v, const ComplexVec& w_u, Rng& rng,
                 bool noise_enabled) const;

  /// sqrt(N_v) u_v(N_v, phi_tilde): the elevation beam the controller can set directly.
  const ComplexVec& matched_xi_v() const { return q_v_; }
  const ComplexVec& user_steering() const { return u_user_; }
  int n_h() const { return static_cast<int>(q_h_.size()); }
  int n_t() const { return static_cast<int>(u_user_.size()); }

 private:
  Complex scale_;
  ComplexVec q_h_;
  ComplexVec q_v_;
  ComplexVec u_user_;
};

/// Received SNR via the separable form. Same contract as FactoredLink::snr.
double received_snr_factored(const ScenarioConfig& cfg, const ChannelRealization& real,
                             const ComplexVec& xi_h, const ComplexVec& xi_v, const ComplexVec& w_u,
                             double gamma_tot);

/// Simulates one training symbol and returns the SNR the AP feeds back.
double measure_training_snr(const ScenarioConfig& cfg, const ChannelRealization& real,
                            const ComplexVec& xi_h, const ComplexVec& xi_v, const ComplexVec& w_u,
                            double gamma_tot, Rng& rng, bool noise_enabled = true);

/// Single active element at the user node: [1, 0, ..., 0].
ComplexVec omni_user_beam(int n_t);

}  // namespace ristrain
