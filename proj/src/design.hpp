#pragma once

#include <string>
#include <vector>

#include "tensor.hpp"

namespace lcf {

/// Basic design: an axis-aligned box [0,Lx] x [0,Ly] x [0,Lz] with a clamped
/// spherical cavity strictly inside its lower block. The component is the
/// part of the box below alpha_min, minus the cavity, plus the epigraph of a
/// height field alpha over the cross-section [0,Lx] x [0,Ly].
struct BasicDesign {
  Vec3 box = {1, 1, 1};          // extents Lx, Ly, Lz
  double alpha_min = 0;          // lower block height; cross-section plane
  double alpha_max = 0;          // cap for the height field
  Vec3 clamp_center = {0, 0, 0};  // cavity center z
  double clamp_radius = 0;       // cavity radius r
  double ext_radius = 0;         // every admissible shape stays in B(z, ext_radius)

  /// Throws Error(kInvalidArgument) unless:
  ///  - extents positive, 0 < alpha_min < Lz, alpha_min < alpha_max,
  ///  - B(z, r) inside the box with z3 + r < alpha_min (cavity below the
  ///    cross-section plane, not touching any wall),
  ///  - the box up to height alpha_max fits inside B(z, ext_radius).
  void validate() const;
};

/// Surrogate of the admissible-design constraint set, discretized on the
/// height-field grid. Derivatives are finite-difference derivatives; the
/// volume is the trapezoid-rule integral of alpha.
struct DesignConstraints {
  double volume = 0;     // required integral of alpha over the cross-section (L1)
  double ck_bound = 0;   // bound on the discrete C^k norm (L2)
  double lipschitz = 0;  // bound on the Lipschitz constant of k-th derivatives (L3)
  int k = 4;             // highest constrained derivative order
  /// Prescribed boundary derivative value per order 1..k (S_beta); applied to
  /// every multi-index of that order. Empty means all zero, i.e. the constant
  /// extension alpha = alpha_min.
  std::vector<double> boundary_derivatives;

  void validate() const;
};

/// Height field alpha sampled on a uniform n1 x n2 grid over the
/// cross-section; values row-major with index i*n2 + j for node
/// (x, y) = (i*dx, j*dy).
struct DesignField {
  int n1 = 0, n2 = 0;
  double dx = 0, dy = 0;
  std::vector<double> values;

  double& at(int i, int j) { return values[static_cast<size_t>(i) * n2 + j]; }
  double at(int i, int j) const { return values[static_cast<size_t>(i) * n2 + j]; }
  bool on_boundary(int i, int j) const {
    return i == 0 || j == 0 || i == n1 - 1 || j == n2 - 1;
  }
};

/// Uniform field alpha = value on an n1 x n2 grid fitted to the design box.
DesignField make_design_field(const BasicDesign& basic, int n1, int n2, double value);

/// Trapezoid-rule integral of alpha over the cross-section.
double trapezoid_volume(const DesignField& alpha);

/// Mixed finite-difference derivative d^(ox+oy) alpha / dx^ox dy^oy at every
/// node: centered stencils where the grid allows, one-sided at the boundary.
std::vector<double> fd_derivative(const DesignField& alpha, int ox, int oy);

/// Result of a single constraint evaluation: how much slack is left.
struct ConstraintMargin {
  std::string name;
  double value = 0;      // measured quantity
  double threshold = 0;  // allowed bound (after tolerance)
  bool passed = false;
};

struct AdmissibilityReport {
  bool admissible = false;
  std::vector<ConstraintMargin> margins;
  const ConstraintMargin* find(const std::string& name) const;
};

/// Evaluates the discrete admissibility surrogate:
///   alpha_min <= alpha <= alpha_max, alpha = alpha_min on the grid boundary,
///   |trapezoid volume - L1| <= tol * L1,
///   max finite-difference derivative magnitude over orders 0..k <= L2,
///   Lipschitz constant of k-th order differences <= L3,
///   boundary derivatives of order 1..k within tol of S_beta.
/// Per-constraint slacks are scaled so that a single tol is meaningful; see
/// the report margins for the thresholds actually used. Pass/fail is
/// monotone in tol. Throws when the grid cannot support order-k stencils.
AdmissibilityReport check_admissible(const DesignField& alpha, const DesignConstraints& c,
                                     const BasicDesign& basic, double tol);

/// Restores the volume constraint by shifting interior nodes by a constant
/// (boundary nodes untouched) and clipping to [alpha_min, alpha_max],
/// iterating until |volume - L1| <= 1e-10 L1. Throws Error(kConstraint) when
/// L1 is outside the reachable volume range.
DesignField project_volume(const DesignField& alpha, const DesignConstraints& c,
                           const BasicDesign& basic);

/// Discrete C^k distance: max over derivative orders 0..k of the max-norm of
/// finite-difference derivatives of (a1 - a2). Grids must match.
double ck_distance(const DesignField& a1, const DesignField& a2, int k);

}  // namespace lcf
