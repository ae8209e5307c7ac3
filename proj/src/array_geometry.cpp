#include "ristrain/array_geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ristrain {

namespace {

ComplexVec ula(int n_elements, double freq, const char* who) {
  if (n_elements < 1) {
    throw std::invalid_argument(std::string(who) + ": element count must be >= 1, got " +
                                std::to_string(n_elements));
  }
  ComplexVec v(n_elements);
  const double amp = 1.0 / std::sqrt(static_cast<double>(n_elements));
  for (int n = 0; n < n_elements; ++n) {
    v[n] = std::polar(amp, std::numbers::pi * n * freq);
  }
  return v;
}

}  // namespace

ComplexVec steering_h(int n_elements, double omega) { return ula(n_elements, omega, "steering_h"); }

ComplexVec steering_v(int n_elements, double phi) { return ula(n_elements, phi, "steering_v"); }

ComplexVec kron(const ComplexVec& a, const ComplexVec& b) {
  ComplexVec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a[i] * b;
  }
  return out;
}

ComplexVec hadamard(const ComplexVec& a, const ComplexVec& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("hadamard: length mismatch (" + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()) + ")");
  }
  return a.cwiseProduct(b);
}

ComplexVec planar_steering(int nh, int nv, double omega, double phi) {
  return kron(steering_h(nh, omega), steering_v(nv, phi));
}

double wrap_mod2(double x) { return x - 2.0 * std::floor((x + 1.0) / 2.0); }

ComplexVec ris_response_q(int nh, int nv, double omega_r, double phi_r, double omega_i,
                          double phi_i) {
  const ComplexVec qh = std::sqrt(static_cast<double>(nh)) * steering_h(nh, wrap_mod2(omega_r - omega_i));
  const ComplexVec qv = std::sqrt(static_cast<double>(nv)) * steering_v(nv, wrap_mod2(phi_r - phi_i));
  return kron(qh, qv);
}

double azimuth_frequency(double theta, double vartheta) {
  return std::cos(theta) * std::sin(vartheta);
}

double elevation_frequency(double vartheta) { return std::cos(vartheta); }

bool all_finite(const ComplexVec& v) {
  for (const auto& z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

}  // namespace ristrain
