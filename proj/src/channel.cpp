#include "ristrain/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ristrain {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("scenario: " + what);
}

void check_unit_modulus(const ComplexVec& v, const char* name) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (std::abs(std::abs(v[k]) - 1.0) > 1e-9) {
      throw std::invalid_argument(std::string(name) + ": element " + std::to_string(k) +
                                  " violates the unit-modulus RIS constraint");
    }
  }
}

}  // namespace

Rng make_substream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = splitmix64(master_seed);
  for (auto k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  return Rng(seq);
}

double ScenarioConfig::noise_power_w() const {
  return std::pow(10.0, (noise_power_dbm - 30.0) / 10.0);
}

void ScenarioConfig::validate() const {
  require(n_t >= 1, "n_t must be >= 1");
  require(n_r >= 1, "n_r must be >= 1");
  require(n_h >= 1, "n_h must be >= 1");
  require(n_v >= 1, "n_v must be >= 1");
  require(n_tact >= 1 && n_tact <= n_t, "n_tact must satisfy 1 <= n_tact <= n_t");
  require(d_ui > 0 && d_ia > 0, "distances must be positive");
  require(p_per_w > 0, "p_per_w must be positive");
  require(carrier_freq_hz > 0, "carrier_freq_hz must be positive");
  for (double a : {theta_u, theta_i, vartheta_i, theta_r, vartheta_r, theta_a}) {
    require(std::isfinite(a), "angles must be finite");
  }
}

ChannelRealization geometric_realization(const ScenarioConfig& cfg, Complex mu_ui, Complex mu_ia) {
  ChannelRealization r;
  r.mu_ui = mu_ui;
  r.mu_ia = mu_ia;
  r.omega_u = azimuth_frequency(cfg.theta_u, cfg.vartheta_i);
  r.omega_i = azimuth_frequency(cfg.theta_i, cfg.vartheta_i);
  r.phi_i = elevation_frequency(cfg.vartheta_i);
  r.omega_r = azimuth_frequency(cfg.theta_r, cfg.vartheta_r);
  r.phi_r = elevation_frequency(cfg.vartheta_r);
  r.omega_a = azimuth_frequency(cfg.theta_a, cfg.vartheta_r);
  return r;
}

Complex sample_cn(Rng& rng) {
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  const double re = gauss(rng);
  const double im = gauss(rng);
  return {re, im};
}

Complex sample_rician(double kappa_db, Rng& rng) {
  const double kappa = std::pow(10.0, kappa_db / 10.0);
  double los_w = 1.0;
  double nlos_w = 0.0;
  if (std::isfinite(kappa)) {
    los_w = kappa / (1.0 + kappa);
    nlos_w = 1.0 / (1.0 + kappa);
  }
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const double phi = phase(rng);
  const Complex z = sample_cn(rng);
  return std::sqrt(los_w) * std::polar(1.0, phi) + std::sqrt(nlos_w) * z;
}

ComplexMat channel_H(const ScenarioConfig& cfg, const ChannelRealization& real) {
  const ComplexVec ui = planar_steering(cfg.n_h, cfg.n_v, real.omega_i, real.phi_i);
  const ComplexVec ut = steering_h(cfg.n_t, real.omega_u);
  const double scale = std::sqrt(static_cast<double>(cfg.n_i()) * cfg.n_t);
  return (scale * real.mu_ui) * ui * ut.adjoint();
}

ComplexMat channel_G(const ScenarioConfig& cfg, const ChannelRealization& real) {
  const ComplexVec ua = steering_h(cfg.n_r, real.omega_a);
  const ComplexVec ur = planar_steering(cfg.n_h, cfg.n_v, real.omega_r, real.phi_r);
  const double scale = std::sqrt(static_cast<double>(cfg.n_r) * cfg.n_i());
  return (scale * real.mu_ia) * ua * ur.adjoint();
}

ComplexVec ap_combiner(const ScenarioConfig& cfg, const ChannelRealization& real) {
  return steering_h(cfg.n_r, real.omega_a);
}

double received_snr_full(const ScenarioConfig& cfg, const ChannelRealization& real,
                         const ComplexVec& xi, const ComplexVec& w_u, double gamma_tot) {
  if (xi.size() != cfg.n_i()) {
    throw std::invalid_argument("received_snr_full: xi has length " + std::to_string(xi.size()) +
                                ", expected N_I = " + std::to_string(cfg.n_i()));
  }
  if (w_u.size() != cfg.n_t) {
    throw std::invalid_argument("received_snr_full: w_u has length " +
                                std::to_string(w_u.size()) + ", expected N_t = " +
                                std::to_string(cfg.n_t));
  }
  const ComplexMat G = channel_G(cfg, real);
  const ComplexMat H = channel_H(cfg, real);
  const ComplexVec w_a = ap_combiner(cfg, real);
  const Eigen::RowVectorXcd left = w_a.adjoint() * G;
  const ComplexVec right = H * w_u;
  const Complex y = left.transpose().cwiseProduct(xi).cwiseProduct(right).sum();
  return gamma_tot * std::norm(y);
}

FactoredLink::FactoredLink(const ScenarioConfig& cfg, const ChannelRealization& real,
                           double gamma_tot)
    : scale_(std::sqrt(gamma_tot * cfg.n_r * cfg.n_t) * real.mu_ui * real.mu_ia),
      q_h_(std::sqrt(static_cast<double>(cfg.n_h)) * steering_h(cfg.n_h, real.omega_tilde())),
      q_v_(std::sqrt(static_cast<double>(cfg.n_v)) * steering_v(cfg.n_v, real.phi_tilde())),
      u_user_(steering_h(cfg.n_t, real.omega_u)) {}

Complex FactoredLink::amplitude(const ComplexVec& xi_h, const ComplexVec& xi_v,
                                const ComplexVec& w_u) const {
  if (xi_h.size() != q_h_.size() || xi_v.size() != q_v_.size() || w_u.size() != u_user_.size()) {
    throw std::invalid_argument("received_snr_factored: vector lengths must be (N_h, N_v, N_t)");
  }
  check_unit_modulus(xi_h, "xi_h");
  check_unit_modulus(xi_v, "xi_v");
  return scale_ * q_h_.dot(xi_h) * q_v_.dot(xi_v) * u_user_.dot(w_u);
}

double FactoredLink::measure(const ComplexVec& xi_h, const ComplexVec& xi_v, const ComplexVec& w_u,
                             Rng& rng, bool noise_enabled) const {
  const Complex a = amplitude(xi_h, xi_v, w_u);
  if (!noise_enabled) return std::norm(a);
  return std::norm(a + sample_cn(rng));
}

double received_snr_factored(const ScenarioConfig& cfg, const ChannelRealization& real,
                             const ComplexVec& xi_h, const ComplexVec& xi_v, const ComplexVec& w_u,
                             double gamma_tot) {
  return FactoredLink(cfg, real, gamma_tot).snr(xi_h, xi_v, w_u);
}

double measure_training_snr(const ScenarioConfig& cfg, const ChannelRealization& real,
                            const ComplexVec& xi_h, const ComplexVec& xi_v, const ComplexVec& w_u,
                            double gamma_tot, Rng& rng, bool noise_enabled) {
  return FactoredLink(cfg, real, gamma_tot).measure(xi_h, xi_v, w_u, rng, noise_enabled);
}

ComplexVec omni_user_beam(int n_t) {
  if (n_t < 1) throw std::invalid_argument("omni_user_beam: n_t must be >= 1");
  ComplexVec w = ComplexVec::Zero(n_t);
  w[0] = 1.0;
  return w;
}

}  // namespace ristrain
