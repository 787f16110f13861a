#include "pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <utility>

#include "errors.hpp"
#include "io.hpp"
#include "rng.hpp"

namespace lcf {

namespace {

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::vector<FaceTag> hazard_tags(const RunConfig& cfg) {
  if (cfg.hazard_domain == HazardDomain::kFull)
    return {FaceTag::kDirichlet, FaceTag::kNeumann, FaceTag::kDesigned};
  return {FaceTag::kNeumann, FaceTag::kDesigned};
}

/// Subset of a surface field: the entries whose face carries one of `tags`.
SurfaceField restrict_field(const SurfaceField& sf, const Mesh& mesh,
                            const std::vector<FaceTag>& tags) {
  SurfaceField out;
  for (size_t i = 0; i < sf.points.size(); ++i) {
    const FaceTag t = mesh.faces[sf.points[i].face].tag;
    bool keep = false;
    for (FaceTag want : tags) keep = keep || (t == want);
    if (!keep) continue;
    out.points.push_back(sf.points[i]);
    out.grad_u.push_back(sf.grad_u[i]);
    out.sigma_v.push_back(sf.sigma_v[i]);
    out.n_det.push_back(sf.n_det[i]);
  }
  return out;
}

void scatter_face_data(const SurfaceField& sf, size_t n_faces, std::vector<double>& sigma_v,
                       std::vector<double>& n_det) {
  sigma_v.assign(n_faces, 0.0);
  n_det.assign(n_faces, kInfiniteLife);
  for (size_t i = 0; i < sf.points.size(); ++i) {
    sigma_v[static_cast<size_t>(sf.points[i].face)] = sf.sigma_v[i];
    n_det[static_cast<size_t>(sf.points[i].face)] = sf.n_det[i];
  }
}

void write_common_outputs(const RunConfig& cfg, const AssessArtifacts& art) {
  write_design_csv(join(cfg.output_dir, "design.csv"), art.alpha);
  write_mesh_vtk(join(cfg.output_dir, "mesh.vtk"), art.mesh, &art.u);
  std::vector<double> sv, nd;
  scatter_face_data(art.all_faces, art.mesh.faces.size(), sv, nd);
  write_surface_vtk(join(cfg.output_dir, "surface.vtk"), art.mesh, sv, nd);
}

nlohmann::ordered_json assess_report(const RunConfig& cfg, const AssessArtifacts& art) {
  nlohmann::ordered_json r;
  r["h"] = json_number(art.report.h);
  r["eta"] = json_number(art.report.eta);
  r["pof"] = json_number(art.report.pof);
  r["survival"] = json_number(art.report.survival);
  r["t_det"] = json_number(art.report.t_det);
  r["m"] = json_number(art.report.m);
  r["t_star"] = json_number(art.report.t_star);
  r["hazard_domain"] = cfg.hazard_domain == HazardDomain::kFull ? "full" : "free";
  r["nodes"] = art.mesh.node_count();
  r["elements"] = art.mesh.element_count();
  r["faces"] = static_cast<int>(art.mesh.faces.size());
  r["dof"] = art.dof;
  r["cg_iterations"] = art.u.solve_info.iterations;
  r["cg_residual"] = json_number(art.u.solve_info.relative_residual);
  r["mesh_volume"] = json_number(art.mesh.volume());
  r["alpha_volume"] = json_number(trapezoid_volume(art.alpha));
  return r;
}

void echo_config(const RunConfig& cfg) {
  write_json(join(cfg.output_dir, "resolved_config.json"), resolved_config(cfg));
}

}  // namespace

DesignField build_alpha(const RunConfig& cfg) {
  if (!cfg.alpha_csv.empty()) return read_design_csv(cfg.alpha_csv);
  if (cfg.has_optimizer)
    return cfg.basis.synthesize(cfg.design, cfg.n1, cfg.n2, cfg.initial_coeffs);
  return make_design_field(cfg.design, cfg.n1, cfg.n2, cfg.design.alpha_min);
}

AssessArtifacts assess_pipeline(const RunConfig& cfg) {
  return assess_with_alpha(cfg, build_alpha(cfg));
}

AssessArtifacts assess_with_alpha(const RunConfig& cfg, DesignField alpha) {
  AssessArtifacts art;
  art.alpha = std::move(alpha);
  art.mesh = build_mesh(cfg.design, art.alpha, cfg.h);
  const LoadCase load = LoadCase::constant(cfg.body_force, cfg.traction, cfg.traction_tags);
  const LinearSystem sys = assemble(art.mesh, cfg.material, load);
  art.dof = sys.matrix.n;
  art.u = solve(art.mesh, sys, cfg.solver_rel_tol, cfg.solver_max_iter);
  const auto all_tags =
      std::vector<FaceTag>{FaceTag::kDirichlet, FaceTag::kNeumann, FaceTag::kDesigned};
  art.all_faces =
      surface_field(art.mesh, art.u, surface_quadrature(art.mesh, all_tags), cfg.material);
  if (cfg.hazard_domain == HazardDomain::kFull)
    art.hazard_field = art.all_faces;
  else
    art.hazard_field = restrict_field(art.all_faces, art.mesh, hazard_tags(cfg));
  art.report = assess_reliability(art.hazard_field, cfg.m, cfg.t_star);
  return art;
}

void run_life(const RunConfig& cfg) {
  require_blocks(cfg, "life");
  const auto curve = en_curve(cfg.material, cfg.life.n_points, cfg.life.n_lo, cfg.life.n_hi);
  write_en_curve_csv(join(cfg.output_dir, "en_curve.csv"), curve);
  nlohmann::ordered_json r;
  r["E"] = json_number(youngs_modulus(cfg.material));
  r["n_points"] = cfg.life.n_points;
  r["n_lo"] = json_number(cfg.life.n_lo);
  r["n_hi"] = json_number(cfg.life.n_hi);
  if (cfg.life.has_probe) {
    const double sigma_a = cfg.material.amplitude_factor * cfg.life.probe_sigma_v;
    const double sd = neuber_shakedown(sigma_a, cfg.material);
    const double eps = ramberg_osgood(sd, cfg.material);
    r["probe_sigma_v"] = json_number(cfg.life.probe_sigma_v);
    r["sigma_a"] = json_number(sigma_a);
    r["shakedown_stress"] = json_number(sd);
    r["strain_amplitude"] = json_number(eps);
    r["n_det"] = json_number(phi(sigma_a, cfg.material));
  }
  write_json(join(cfg.output_dir, "report.json"), r);
  echo_config(cfg);
}

ReliabilityReport run_assess(const RunConfig& cfg) {
  require_blocks(cfg, "assess");
  const AssessArtifacts art = assess_pipeline(cfg);
  write_common_outputs(cfg, art);
  write_json(join(cfg.output_dir, "report.json"), assess_report(cfg, art));
  echo_config(cfg);
  return art.report;
}

SampleSummary run_sample(const RunConfig& cfg) {
  require_blocks(cfg, "sample");
  const AssessArtifacts art = assess_pipeline(cfg);
  write_common_outputs(cfg, art);

  SampleSummary s;
  s.n_histories = cfg.n_histories;
  std::vector<CrackHistory> histories;
  histories.reserve(static_cast<size_t>(cfg.n_histories));
  std::vector<double> first_failures;
  first_failures.reserve(histories.capacity());
  std::vector<double> finite_failures;
  for (int k = 0; k < cfg.n_histories; ++k) {
    histories.push_back(
        sample_history(art.hazard_field, cfg.m, cfg.t_max, split_seed(cfg.seed, k)));
    const double tf = first_failure(histories.back());
    first_failures.push_back(tf);
    if (std::isfinite(tf))
      finite_failures.push_back(tf);
    else
      ++s.n_censored;
    s.total_events += static_cast<int>(histories.back().events.size());
  }
  if (cfg.n_histories > 0) {
    s.mean_count = static_cast<double>(s.total_events) / cfg.n_histories;
    s.expected_count = hazard(art.hazard_field, cfg.m, cfg.t_max);
  }
  if (!finite_failures.empty()) {
    const double m = cfg.m, eta = art.report.eta;
    s.ks = ks_test(finite_failures, [m, eta](double t) { return weibull_cdf(t, m, eta); });
    s.ks_valid = true;
  }

  write_histories_csv(join(cfg.output_dir, "histories.csv"), histories);
  write_first_failures_csv(join(cfg.output_dir, "first_failures.csv"), first_failures);

  nlohmann::ordered_json r = assess_report(cfg, art);
  r["n_histories"] = s.n_histories;
  r["t_max"] = json_number(cfg.t_max);
  if (cfg.n_histories > 0) {
    r["total_events"] = s.total_events;
    r["mean_count"] = json_number(s.mean_count);
    r["expected_count"] = json_number(s.expected_count);
    r["n_censored"] = s.n_censored;
  }
  if (s.ks_valid) {
    r["ks_d"] = json_number(s.ks.d);
    r["ks_p"] = json_number(s.ks.p_value);
    r["ks_n"] = s.ks.n;
  }
  write_json(join(cfg.output_dir, "report.json"), r);
  echo_config(cfg);
  return s;
}

OptimizerState run_optimize(const RunConfig& cfg) {
  require_blocks(cfg, "optimize");

  // Feasibility gate: when the initial design already violates the
  // admissibility surrogate, persist the per-constraint report so the caller
  // can see which bound failed, then raise.
  const DesignField a0 = cfg.basis.synthesize(cfg.design, cfg.n1, cfg.n2, cfg.initial_coeffs);
  const AdmissibilityReport rep0 = check_admissible(a0, cfg.constraints, cfg.design, cfg.admis_tol);
  if (!rep0.admissible) {
    nlohmann::ordered_json doc;
    doc["admissible"] = false;
    auto margins = nlohmann::ordered_json::array();
    std::string first_failed;
    for (const ConstraintMargin& m : rep0.margins) {
      nlohmann::ordered_json e;
      e["name"] = m.name;
      e["value"] = json_number(m.value);
      e["threshold"] = json_number(m.threshold);
      e["passed"] = m.passed;
      margins.push_back(e);
      if (!m.passed && first_failed.empty()) first_failed = m.name;
    }
    doc["margins"] = margins;
    write_json(join(cfg.output_dir, "constraint_report.json"), doc);
    echo_config(cfg);
    fail(ErrorCode::kConstraint,
         "optimize: initial design is not admissible (" + first_failed + ")");
  }

  EvalContext ctx;
  ctx.basic = cfg.design;
  ctx.constraints = cfg.constraints;
  ctx.material = cfg.material;
  ctx.load = LoadCase::constant(cfg.body_force, cfg.traction, cfg.traction_tags);
  ctx.h = cfg.h;
  ctx.tol = cfg.admis_tol;
  ctx.solver_rel_tol = cfg.solver_rel_tol;
  ctx.solver_max_iter = cfg.solver_max_iter;
  ctx.hazard_full_boundary = cfg.hazard_domain == HazardDomain::kFull;

  CostSpec spec;
  spec.kind = cfg.cost;
  spec.t_star = cfg.t_star;

  OptimizerOptions opts;
  opts.n1 = cfg.n1;
  opts.n2 = cfg.n2;
  opts.step = cfg.step;
  opts.shrink = cfg.shrink;
  opts.step_min = cfg.step_min;
  opts.max_iterations = cfg.max_iterations;
  opts.threads = cfg.threads;

  const OptimizerState st = optimize(cfg.initial_coeffs, spec, ctx, cfg.basis, opts);

  write_trajectory_csv(join(cfg.output_dir, "trajectory.csv"), st.trajectory);
  write_design_csv(join(cfg.output_dir, "design_initial.csv"), st.trajectory.front().alpha);
  write_design_csv(join(cfg.output_dir, "design_final.csv"), st.final_alpha);

  // Export the final shape: one more solve on the final (projected) field
  // gives the mesh-wide displacement and per-face fields for visualization.
  const AssessArtifacts art = assess_with_alpha(cfg, st.final_alpha);
  write_mesh_vtk(join(cfg.output_dir, "mesh.vtk"), art.mesh, &art.u);
  std::vector<double> sv, nd;
  scatter_face_data(art.all_faces, art.mesh.faces.size(), sv, nd);
  write_surface_vtk(join(cfg.output_dir, "surface.vtk"), art.mesh, sv, nd);

  const IterateRecord& first = st.trajectory.front();
  const IterateRecord& last = st.trajectory.back();
  nlohmann::ordered_json r;
  r["cost"] = cfg.cost == CostKind::kPof ? "pof" : "det_life";
  r["iterations"] = last.iter;
  r["accepted"] = static_cast<int>(st.trajectory.size()) - 1;
  r["evaluations"] = st.evaluations;
  r["step_converged"] = st.step_converged;
  r["initial_j"] = json_number(first.j);
  r["initial_pof"] = json_number(first.pof);
  r["initial_t_det"] = json_number(first.t_det);
  r["final_j"] = json_number(last.j);
  r["final_pof"] = json_number(st.final_eval.report.pof);
  r["final_t_det"] = json_number(st.final_eval.report.t_det);
  r["final_eta"] = json_number(st.final_eval.report.eta);
  r["final_h"] = json_number(st.final_eval.report.h);
  r["final_volume_violation"] = json_number(last.volume_violation);
  r["t_star"] = json_number(cfg.t_star);
  r["m"] = json_number(cfg.m);
  r["dof"] = art.dof;
  write_json(join(cfg.output_dir, "report.json"), r);
  echo_config(cfg);
  return st;
}

}  // namespace lcf
