// Steering vectors and RIS response for half-wavelength ULAs and planar arrays.
//
// A spatial frequency is the normalized direction variable
// Omega = cos(theta) sin(vartheta) (azimuth) or Phi = cos(vartheta) (elevation).
// At half-wavelength spacing it lives in [-1, 1] and every steering vector is
// periodic in it with period 2.
#pragma once

#include <complex>

#include <Eigen/Dense>

namespace ristrain {

using Complex = std::complex<double>;
using ComplexVec = Eigen::VectorXcd;
using ComplexMat = Eigen::MatrixXcd;

/// Horizontal ULA steering vector: element n is exp(j*pi*n*omega)/sqrt(n_elements).
/// Throws std::invalid_argument if n_elements < 1.
ComplexVec steering_h(int n_elements, double omega);

/// Vertical ULA steering vector, same form as steering_h.
ComplexVec steering_v(int n_elements, double phi);

/// Kronecker product; element (i*b.size() + k) is a[i]*b[k].
ComplexVec kron(const ComplexVec& a, const ComplexVec& b);

/// Element-wise product. Throws std::invalid_argument on length mismatch.
ComplexVec hadamard(const ComplexVec& a, const ComplexVec& b);

/// kron(steering_h(nh, omega), steering_v(nv, phi)); row-major over (h, v).
ComplexVec planar_steering(int nh, int nv, double omega, double phi);

/// Reduces x modulo 2 into [-1, 1). +1 maps to -1.
double wrap_mod2(double x);

/// RIS effective response q, so that q^H xi is the cascaded reflection gain
/// for passive beamforming vector xi:
///   q = sqrt(nh) u_h(nh, wrap(omega_r - omega_i)) (x) sqrt(nv) u_v(nv, wrap(phi_r - phi_i)).
/// Every element has unit modulus.
ComplexVec ris_response_q(int nh, int nv, double omega_r, double phi_r, double omega_i,
                          double phi_i);

/// Azimuthal spatial frequency cos(theta) sin(vartheta).
double azimuth_frequency(double theta, double vartheta);

/// Elevation spatial frequency cos(vartheta).
double elevation_frequency(double vartheta);

/// true iff every element is finite.
bool all_finite(const ComplexVec& v);

}  // namespace ristrain
