#pragma once

#include <functional>
#include <vector>

#include "design.hpp"
#include "elasticity.hpp"
#include "reliability.hpp"

namespace lcf {

/// Which functional the optimizer minimizes.
enum class CostKind {
  kPof,         // cumulative hazard H(t_star); argmin-equal to the failure
                // probability since x -> 1 - exp(-x) is strictly increasing
  kDetLife,     // -T_det (maximize the deterministic life)
  kCustomLocal  // voxel sum of f_vol + surface quadrature of f_sur
};

struct CostSpec {
  CostKind kind = CostKind::kPof;
  double t_star = 0;  // warranty horizon for kPof (cycles)
  /// Local integrands F(x, u, grad u). Only zeroth/first-order displacement
  /// data is available; higher derivatives are not trustworthy on trilinear
  /// elements and are not offered.
  std::function<double(const Vec3&, const Vec3&, const Mat3&)> f_vol;
  std::function<double(const Vec3&, const Vec3&, const Mat3&)> f_sur;

  void validate() const;
};

/// Fixed data of one optimization problem. Evaluations are pure; the
/// callables inside `load` (and the custom integrands) must be safe to call
/// concurrently.
struct EvalContext {
  BasicDesign basic;
  DesignConstraints constraints;
  MaterialParams material;
  LoadCase load;
  double h = 0;        // voxel size, fixed for the whole run
  double tol = 1e-6;   // admissibility tolerance
  double solver_rel_tol = 1e-8;
  int solver_max_iter = 20000;
  bool hazard_full_boundary = false;  // include clamped faces in the hazard

  std::vector<FaceTag> hazard_tags() const;
};

/// Everything produced by one design evaluation.
struct Evaluation {
  double j = 0;
  ReliabilityReport report;
  SurfaceField field;
  AdmissibilityReport admissibility;
  double voxel_volume = 0;  // volume of the meshed shape
  int dof = 0;              // free degrees of freedom of the solve
};

/// Full pipeline for one admissible height field: admissibility check,
/// mesh, solve, surface trace, cost. Throws Error(kConstraint) when alpha
/// fails the admissibility surrogate; solver errors propagate.
Evaluation evaluate_cost(const DesignField& alpha, const CostSpec& spec, const EvalContext& ctx);

/// Tensor-product basis of nb1 x nb2 compactly supported bumps
/// cos^6(pi s / 2) over the cross-section. The lattice is inset by a flat
/// collar of `margin` times each extent: along x, bump p is centered at
/// margin*Lx + (p+1)*w with halfwidth w = (1-2*margin)*Lx/(nb1+1), and
/// likewise along y. Each bump vanishes together with its first five
/// derivatives at its support edge, and the collar keeps the one-sided
/// boundary stencils of the admissibility surrogate entirely inside the
/// constant region, so boundary values and boundary derivatives are met
/// exactly for any coefficient vector.
struct BumpBasis {
  int nb1 = 4, nb2 = 4;
  double margin = 0.2;  // flat collar fraction per side, in [0, 0.4]

  int size() const { return nb1 * nb2; }

  /// alpha_min + sum_pq coeffs[p*nb2+q] * B_p(x) * B_q(y) on an n1 x n2 grid.
  DesignField synthesize(const BasicDesign& basic, int n1, int n2,
                         const std::vector<double>& coeffs) const;

  /// Trapezoid-rule integral of each basis function over the same grid;
  /// used to keep coefficient proposals volume-neutral.
  std::vector<double> grid_integrals(const BasicDesign& basic, int n1, int n2) const;
};

struct OptimizerOptions {
  int n1 = 33, n2 = 33;     // height-field grid resolution
  double step = 0.05;       // initial coefficient step
  double shrink = 0.5;      // step multiplier after a fully rejected sweep
  double step_min = 1e-3;   // stop once step drops below this
  int max_iterations = 20;  // total accepted moves + shrink events
  int threads = 1;          // parallel candidate evaluations per batch

  void validate() const;
};

/// One accepted iterate (index 0 is the initial design).
struct IterateRecord {
  int iter = 0;
  std::vector<double> coeffs;
  DesignField alpha;  // the evaluated (projected) field
  double j = 0;
  double pof = 0;
  double t_det = 0;
  double volume_violation = 0;  // |trapezoid volume - L1| / L1
  double step = 0;              // step size in force when recorded
  AdmissibilityReport admissibility;
};

struct OptimizerState {
  std::vector<IterateRecord> trajectory;
  std::vector<double> final_coeffs;
  DesignField final_alpha;
  Evaluation final_eval;
  int evaluations = 0;          // cost evaluations spent (including rejected)
  bool step_converged = false;  // stopped because step < step_min
};

/// Coordinate pattern search over basis coefficients.
///
/// Candidates are visited in the fixed documented order (coefficient 0
/// ascending, + before -). Each proposal perturbs one coefficient by
/// +-step and subtracts step * V_idx / sum(V) from every coefficient, which
/// keeps the surrogate volume unchanged up to rounding, so the subsequent
/// project_volume pass is a no-op-sized correction and never roughens the
/// field. A proposal failing check_admissible is rejected; the first
/// candidate that strictly decreases J is accepted and the sweep restarts.
/// A full sweep without an accept shrinks the step. Iterations count
/// accepted moves plus shrink events, so trajectories are independent of
/// `threads` (batching only affects how many candidates are evaluated
/// before the first improving one is found).
OptimizerState optimize(const std::vector<double>& initial_coeffs, const CostSpec& spec,
                        const EvalContext& ctx, const BumpBasis& basis,
                        const OptimizerOptions& options);

/// C^k distances between consecutive recorded iterates; needs >= 2.
std::vector<double> convergence_diagnostic(const OptimizerState& state, int k);

}  // namespace lcf
