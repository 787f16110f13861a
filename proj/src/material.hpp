#pragma once

#include <limits>
#include <vector>

#include "tensor.hpp"

namespace lcf {

/// Sentinel for "no crack initiation in any finite number of cycles".
/// IEEE infinity gives us 1/kInfiniteLife == 0 for free, which is exactly the
/// convention the hazard integral relies on.
constexpr double kInfiniteLife = std::numeric_limits<double>::infinity();

/// Isotropic elastic-plastic fatigue material description.
///
/// Elasticity is parametrized by the Lame pair (lambda, mu); cyclic plasticity
/// by the Ramberg-Osgood hardening pair (K, n_prime); crack initiation by the
/// Coffin-Manson-Basquin coefficients (sigma_f, eps_f, b, c); scatter of
/// initiation times by the Weibull shape m. amplitude_factor converts a von
/// Mises range into the strain-life amplitude convention (0.5 = half range).
struct MaterialParams {
  double lambda = 0;            // first Lame parameter [stress]
  double mu = 0;                // shear modulus [stress], > 0
  double K = 0;                 // cyclic hardening coefficient [stress], > 0
  double n_prime = 0;           // cyclic hardening exponent, in (0, 1)
  double sigma_f = 0;           // fatigue strength coefficient [stress], > 0
  double eps_f = 0;             // fatigue ductility coefficient, > 0
  double b = 0;                 // fatigue strength exponent, < 0
  double c = 0;                 // fatigue ductility exponent, < 0
  double m = 0;                 // Weibull shape, >= 1
  double amplitude_factor = 0.5;  // amplitude = amplitude_factor * von Mises

  /// Throws Error(kInvalidArgument) when any bound above is violated
  /// (lambda may be any real with lambda + mu > 0 so E > 0).
  void validate() const;
};

/// Young's modulus E = mu (3 lambda + 2 mu) / (lambda + mu).
double youngs_modulus(const MaterialParams& p);

/// Von Mises equivalent stress sqrt(3/2 tr(dev(sym(s))^2)); input is
/// symmetrized first so mildly asymmetric numerical stress states are safe.
double von_mises(const Mat3& stress);

/// Ramberg-Osgood strain amplitude: eps = s/E + (s/K)^(1/n'). s >= 0.
double ramberg_osgood(double stress_amplitude, const MaterialParams& p);

/// Neuber shakedown: the unique s >= 0 with
///   s^2/E + s (s/K)^(1/n') = sigma_v^2 / E.
/// Solved by safeguarded Newton on the bracket [0, sigma_v].
double neuber_shakedown(double sigma_v, const MaterialParams& p);

/// Coffin-Manson-Basquin strain amplitude at life n (cycles to initiation):
///   eps_a(n) = (sigma_f/E) (2n)^b + eps_f (2n)^c.
double cmb_strain(double n_cycles, const MaterialParams& p);

/// Inverse of cmb_strain: the life n with cmb_strain(n) == eps_a.
/// Strictly decreasing, so the root is unique; solved by safeguarded Newton
/// in log(2n) on an adaptively grown bracket. Returns kInfiniteLife when the
/// demanded strain is below what any representable life produces.
double cmb_inverse(double eps_a, const MaterialParams& p);

/// Deterministic life from a von Mises amplitude input:
///   phi = cmb_inverse . ramberg_osgood . neuber_shakedown,
/// with phi(0) = kInfiniteLife. Strictly decreasing in sigma_v.
double phi(double sigma_v, const MaterialParams& p);

/// Deterministic initiation life from a displacement gradient M = grad u:
///   sigma  = lambda tr(M) I + mu (M + M^T)
///   N_det  = phi(amplitude_factor * von_mises(sigma)).
/// Infinite exactly when the stress state vanishes.
double n_det(const Mat3& grad_u, const MaterialParams& p);

/// Linear elastic stress lambda tr(M) I + mu (M + M^T) of a gradient M.
Mat3 stress_from_gradient(const Mat3& grad_u, const MaterialParams& p);

struct EnPoint {
  double n;      // life in cycles
  double eps_a;  // strain amplitude
};

/// Strain-life curve table on a log-spaced life grid [n_lo, n_hi].
std::vector<EnPoint> en_curve(const MaterialParams& p, int n_points, double n_lo, double n_hi);

}  // namespace lcf
