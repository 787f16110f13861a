#include "shapeopt.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "errors.hpp"
#include "mesh.hpp"

namespace lcf {
namespace {

double bump1d(double s) {
  if (std::fabs(s) >= 1.0) return 0.0;
  const double c = std::cos(M_PI * s / 2.0);
  const double c2 = c * c;
  return c2 * c2 * c2;
}

// Per-axis bump samples B_p(x_i) for p = 0..nb-1 on an n-point grid.
std::vector<std::vector<double>> axis_table(int nb, int n, double extent, double margin) {
  if (!(margin >= 0 && margin <= 0.4))
    fail(ErrorCode::kInvalidArgument, "bump basis: margin must be in [0, 0.4]");
  std::vector<std::vector<double>> t(nb, std::vector<double>(n));
  const double w = (1 - 2 * margin) * extent / (nb + 1);
  const double dx = extent / (n - 1);
  for (int p = 0; p < nb; ++p) {
    const double center = margin * extent + (p + 1) * w;
    for (int i = 0; i < n; ++i) t[p][i] = bump1d((i * dx - center) / w);
  }
  return t;
}

// Trapezoid weights on one axis: 1/2 at the ends, 1 inside, times spacing.
double axis_integral(const std::vector<double>& samples, double dx) {
  double s = 0;
  const int n = static_cast<int>(samples.size());
  for (int i = 0; i < n; ++i) s += samples[i] * ((i == 0 || i == n - 1) ? 0.5 : 1.0);
  return s * dx;
}

double volume_violation_of(const DesignField& alpha, const DesignConstraints& c) {
  return std::fabs(trapezoid_volume(alpha) - c.volume) / c.volume;
}

}  // namespace

void CostSpec::validate() const {
  switch (kind) {
    case CostKind::kPof:
      if (!(t_star >= 0)) fail(ErrorCode::kInvalidArgument, "cost: t_star must be >= 0");
      break;
    case CostKind::kDetLife:
      break;
    case CostKind::kCustomLocal:
      if (!f_vol && !f_sur)
        fail(ErrorCode::kInvalidArgument, "cost: custom kind needs f_vol or f_sur");
      break;
  }
}

std::vector<FaceTag> EvalContext::hazard_tags() const {
  if (hazard_full_boundary)
    return {FaceTag::kDirichlet, FaceTag::kNeumann, FaceTag::kDesigned};
  return {FaceTag::kNeumann, FaceTag::kDesigned};
}

Evaluation evaluate_cost(const DesignField& alpha, const CostSpec& spec, const EvalContext& ctx) {
  spec.validate();
  Evaluation ev;
  ev.admissibility = check_admissible(alpha, ctx.constraints, ctx.basic, ctx.tol);
  if (!ev.admissibility.admissible) {
    std::string which;
    for (const auto& mg : ev.admissibility.margins)
      if (!mg.passed) {
        which = mg.name;
        break;
      }
    fail(ErrorCode::kConstraint, "evaluate_cost: design is not admissible (" + which + ")");
  }

  const Mesh mesh = build_mesh(ctx.basic, alpha, ctx.h);
  const LinearSystem sys = assemble(mesh, ctx.material, ctx.load);
  const DisplacementField u = solve(mesh, sys, ctx.solver_rel_tol, ctx.solver_max_iter);
  const std::vector<SurfacePoint> quad = surface_quadrature(mesh, ctx.hazard_tags());
  ev.field = surface_field(mesh, u, quad, ctx.material);
  ev.report = assess_reliability(ev.field, ctx.material.m, spec.t_star);
  ev.voxel_volume = mesh.volume();
  ev.dof = sys.matrix.n;

  switch (spec.kind) {
    case CostKind::kPof:
      ev.j = ev.report.h;
      break;
    case CostKind::kDetLife:
      ev.j = -ev.report.t_det;
      break;
    case CostKind::kCustomLocal: {
      double j = 0;
      if (spec.f_vol) {
        const double cell = ctx.h * ctx.h * ctx.h;
        for (int e = 0; e < mesh.element_count(); ++e) {
          const Vec3 c = mesh.element_center(e);
          j += spec.f_vol(c, interp_at(mesh, u, e, {0, 0, 0}), grad_at(mesh, u, e, {0, 0, 0})) *
               cell;
        }
      }
      if (spec.f_sur) {
        for (size_t q = 0; q < ev.field.points.size(); ++q) {
          const SurfacePoint& sp = ev.field.points[q];
          const int e = mesh.faces[sp.face].element;
          j += spec.f_sur(sp.x, interp_at(mesh, u, e, sp.normal), ev.field.grad_u[q]) * sp.weight;
        }
      }
      ev.j = j;
      break;
    }
  }
  return ev;
}

DesignField BumpBasis::synthesize(const BasicDesign& basic, int n1, int n2,
                                  const std::vector<double>& coeffs) const {
  if (static_cast<int>(coeffs.size()) != size())
    fail(ErrorCode::kInvalidArgument, "synthesize: coefficient count mismatch");
  DesignField f = make_design_field(basic, n1, n2, basic.alpha_min);
  const auto bx = axis_table(nb1, n1, basic.box[0], margin);
  const auto by = axis_table(nb2, n2, basic.box[1], margin);
  for (int p = 0; p < nb1; ++p)
    for (int q = 0; q < nb2; ++q) {
      const double c = coeffs[static_cast<size_t>(p) * nb2 + q];
      if (c == 0) continue;
      for (int i = 0; i < n1; ++i) {
        if (bx[p][i] == 0) continue;
        const double cb = c * bx[p][i];
        for (int j = 0; j < n2; ++j) f.at(i, j) += cb * by[q][j];
      }
    }
  return f;
}

std::vector<double> BumpBasis::grid_integrals(const BasicDesign& basic, int n1, int n2) const {
  const auto bx = axis_table(nb1, n1, basic.box[0], margin);
  const auto by = axis_table(nb2, n2, basic.box[1], margin);
  const double dx = basic.box[0] / (n1 - 1);
  const double dy = basic.box[1] / (n2 - 1);
  std::vector<double> v(static_cast<size_t>(size()));
  for (int p = 0; p < nb1; ++p)
    for (int q = 0; q < nb2; ++q)
      v[static_cast<size_t>(p) * nb2 + q] = axis_integral(bx[p], dx) * axis_integral(by[q], dy);
  return v;
}

void OptimizerOptions::validate() const {
  if (n1 < 3 || n2 < 3) fail(ErrorCode::kInvalidArgument, "optimizer: grid must be >= 3x3");
  if (!(step > 0)) fail(ErrorCode::kInvalidArgument, "optimizer: step must be positive");
  if (!(shrink > 0 && shrink < 1))
    fail(ErrorCode::kInvalidArgument, "optimizer: shrink must be in (0,1)");
  if (!(step_min >= 0)) fail(ErrorCode::kInvalidArgument, "optimizer: step_min must be >= 0");
  if (max_iterations < 0)
    fail(ErrorCode::kInvalidArgument, "optimizer: max_iterations must be >= 0");
  if (threads < 1) fail(ErrorCode::kInvalidArgument, "optimizer: threads must be >= 1");
}

namespace {

struct Candidate {
  std::vector<double> coeffs;
  DesignField alpha;          // synthesized + volume-projected
  bool admissible = false;
  Evaluation eval;            // valid only when admissible
};

// Builds and evaluates one candidate; inadmissible proposals are rejected
// via the flag, all other failures rethrow on the caller's thread.
Candidate evaluate_candidate(std::vector<double> coeffs, const CostSpec& spec,
                             const EvalContext& ctx, const BumpBasis& basis,
                             const OptimizerOptions& opt) {
  Candidate c;
  c.coeffs = std::move(coeffs);
  c.alpha = project_volume(basis.synthesize(ctx.basic, opt.n1, opt.n2, c.coeffs),
                           ctx.constraints, ctx.basic);
  try {
    c.eval = evaluate_cost(c.alpha, spec, ctx);
    c.admissible = true;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kConstraint) throw;  // only constraint rejections are soft
    c.admissible = false;
  }
  return c;
}

}  // namespace

OptimizerState optimize(const std::vector<double>& initial_coeffs, const CostSpec& spec,
                        const EvalContext& ctx, const BumpBasis& basis,
                        const OptimizerOptions& options) {
  options.validate();
  spec.validate();
  if (static_cast<int>(initial_coeffs.size()) != basis.size())
    fail(ErrorCode::kInvalidArgument, "optimize: coefficient count mismatch");

  const std::vector<double> integrals = basis.grid_integrals(ctx.basic, options.n1, options.n2);
  double integral_sum = 0;
  for (double v : integrals) integral_sum += v;
  if (!(integral_sum > 0)) fail(ErrorCode::kInternal, "optimize: degenerate basis integrals");

  OptimizerState state;

  // Initial design: projected and evaluated before any search; an
  // infeasible start raises before any further solve.
  Candidate current = evaluate_candidate(initial_coeffs, spec, ctx, basis, options);
  state.evaluations = 1;
  if (!current.admissible)
    fail(ErrorCode::kConstraint, "optimize: initial design is not admissible");

  double step = options.step;
  const auto record = [&](const Candidate& c, int iter) {
    IterateRecord r;
    r.iter = iter;
    r.coeffs = c.coeffs;
    r.alpha = c.alpha;
    r.j = c.eval.j;
    r.pof = c.eval.report.pof;
    r.t_det = c.eval.report.t_det;
    r.volume_violation = volume_violation_of(c.alpha, ctx.constraints);
    r.step = step;
    r.admissibility = c.eval.admissibility;
    state.trajectory.push_back(std::move(r));
  };
  record(current, 0);

  const int n_coeff = basis.size();
  int iter = 0;
  while (iter < options.max_iterations && step >= options.step_min) {
    // One sweep: candidates in fixed order, first strict improvement wins.
    bool accepted = false;
    int cand = 0;  // candidate index: coefficient (cand/2), sign (+ first)
    while (cand < 2 * n_coeff && !accepted) {
      const int batch = std::min(options.threads, 2 * n_coeff - cand);
      std::vector<Candidate> results(static_cast<size_t>(batch));
      std::vector<std::exception_ptr> errors(static_cast<size_t>(batch));
      std::vector<std::thread> workers;
      for (int b = 0; b < batch; ++b) {
        const int idx = (cand + b) / 2;
        const double delta = ((cand + b) % 2 == 0 ? step : -step);
        std::vector<double> proposal = current.coeffs;
        proposal[static_cast<size_t>(idx)] += delta;
        // Volume-neutral compensation spread over all coefficients.
        const double comp = delta * integrals[static_cast<size_t>(idx)] / integral_sum;
        for (double& c : proposal) c -= comp;
        workers.emplace_back([&, b, proposal = std::move(proposal)]() mutable {
          try {
            results[static_cast<size_t>(b)] =
                evaluate_candidate(std::move(proposal), spec, ctx, basis, options);
          } catch (...) {
            errors[static_cast<size_t>(b)] = std::current_exception();
          }
        });
      }
      for (auto& w : workers) w.join();
      state.evaluations += batch;
      for (int b = 0; b < batch; ++b)
        if (errors[static_cast<size_t>(b)]) std::rethrow_exception(errors[static_cast<size_t>(b)]);
      for (int b = 0; b < batch && !accepted; ++b) {
        Candidate& c = results[static_cast<size_t>(b)];
        if (c.admissible && c.eval.j < current.eval.j) {
          current = std::move(c);
          accepted = true;
        }
      }
      cand += batch;
    }
    ++iter;
    if (accepted) {
      record(current, iter);
    } else {
      step *= options.shrink;
      if (step < options.step_min) state.step_converged = true;
    }
  }

  state.final_coeffs = current.coeffs;
  state.final_alpha = current.alpha;
  state.final_eval = std::move(current.eval);
  return state;
}

std::vector<double> convergence_diagnostic(const OptimizerState& state, int k) {
  if (state.trajectory.size() < 2)
    fail(ErrorCode::kInvalidArgument, "convergence_diagnostic: need at least two iterates");
  std::vector<double> d;
  for (size_t i = 1; i < state.trajectory.size(); ++i)
    d.push_back(ck_distance(state.trajectory[i - 1].alpha, state.trajectory[i].alpha, k));
  return d;
}

}  // namespace lcf
