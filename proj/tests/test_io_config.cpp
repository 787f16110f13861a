#include "config.hpp"
#include "io.hpp"
#include "pipeline.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "material.hpp"
#include "rng.hpp"

using namespace lcf;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string tdir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "lcf_io_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

/// Matches the fixture of the shape-optimization tests: a small box with a
/// clamped cavity, pulled upward on the designed surface.
json base_config(const std::string& out_dir) {
  json doc = json::parse(R"({
    "seed": 2024,
    "threads": 1,
    "material": {
      "lambda": 121153.8461538461,
      "mu": 80769.23076923077,
      "K": 1100.0,
      "n_prime": 0.1,
      "sigma_f": 900.0,
      "eps_f": 0.45,
      "b": -0.09,
      "c": -0.56
    },
    "design": {
      "box": [0.6, 0.6, 0.3],
      "alpha_min": 0.24,
      "alpha_max": 0.3,
      "clamp_center": [0.3, 0.3, 0.12],
      "clamp_radius": 0.11,
      "ext_radius": 0.7
    },
    "load": {
      "traction": [0.0, 0.0, 450.0],
      "traction_surfaces": ["designed"],
      "t_star": 3000.0
    },
    "discretization": {
      "n1": 25, "n2": 25, "h": 0.05,
      "solver_rel_tol": 1e-9, "solver_max_iter": 20000
    },
    "reliability": {"m": 2.5, "hazard_domain": "free"},
    "optimizer": {
      "basis": {"nb1": 2, "nb2": 2, "margin": 0.2},
      "initial_coefficients": 0.04,
      "step": 0.015, "shrink": 0.5, "step_min": 0.003,
      "max_iterations": 2
    }
  })");
  doc["output_dir"] = out_dir;
  return doc;
}

/// Adds a constraints block calibrated against the synthesized initial
/// field: exact volume, 3x headroom on the norm bounds.
void add_constraints(json& doc) {
  const RunConfig cfg = parse_config(doc);
  const DesignField alpha = cfg.basis.synthesize(cfg.design, cfg.n1, cfg.n2, cfg.initial_coeffs);
  DesignConstraints c;
  c.volume = trapezoid_volume(alpha);
  c.k = 4;
  c.ck_bound = 1e30;
  c.lipschitz = 1e30;
  const AdmissibilityReport probe = check_admissible(alpha, c, cfg.design, 1e-6);
  doc["constraints"] = {
      {"volume", c.volume},
      {"ck_bound", 3 * probe.find("ck_norm")->value},
      {"lipschitz", 3 * probe.find("lipschitz")->value},
      {"k", 4},
      {"tolerance", 1e-6},
  };
}

}  // namespace

TEST_CASE("format_double round-trips doubles and names non-finite values") {
  for (double v :
       {3.141592653589793, 1.0 / 3.0, 1e300, 2.2250738585072014e-308, 0.0, -12345.678901234567}) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_double(kInfiniteLife) == "inf");
  CHECK(format_double(-kInfiniteLife) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("design CSV round-trip is bitwise") {
  const std::string dir = tdir("design_csv");
  DesignField f;
  f.n1 = 7;
  f.n2 = 5;
  f.dx = 0.6 / 6;
  f.dy = 0.6 / 4;
  Rng rng(99, 0);
  for (int i = 0; i < f.n1 * f.n2; ++i) f.values.push_back(0.24 + 0.06 * rng.uniform());
  const std::string path = dir + "/alpha.csv";
  write_design_csv(path, f);

  const auto lines = lines_of(read_text_file(path));
  REQUIRE(static_cast<int>(lines.size()) == 2 + f.n1);
  CHECK(lines[0] == "n1,n2,dx,dy");

  const DesignField g = read_design_csv(path);
  CHECK(g.n1 == f.n1);
  CHECK(g.n2 == f.n2);
  CHECK(g.dx == f.dx);
  CHECK(g.dy == f.dy);
  REQUIRE(g.values.size() == f.values.size());
  for (size_t i = 0; i < f.values.size(); ++i) CHECK(g.values[i] == f.values[i]);
}

TEST_CASE("design CSV rejects malformed inputs") {
  const std::string dir = tdir("design_csv_bad");
  auto expect_parse_error = [&](const std::string& name, const std::string& text) {
    const std::string path = dir + "/" + name;
    write_text_file(path, text);
    CHECK_THROWS_AS(read_design_csv(path), Error);
  };
  expect_parse_error("header.csv", "a,b,c,d\n2,2,0.1,0.1\n1,2\n3,4\n");
  expect_parse_error("short.csv", "n1,n2,dx,dy\n3,2,0.1,0.1\n1,2\n3,4\n");
  expect_parse_error("ragged.csv", "n1,n2,dx,dy\n2,2,0.1,0.1\n1,2,3\n4,5\n");
  expect_parse_error("nonnum.csv", "n1,n2,dx,dy\n2,2,0.1,0.1\n1,x\n3,4\n");
  expect_parse_error("dims.csv", "n1,n2,dx,dy\n1,2,0.1,0.1\n1,2\n");
  CHECK_THROWS_AS(read_design_csv(dir + "/missing.csv"), Error);
}

TEST_CASE("curve, trajectory, and failure-time CSV layouts") {
  const std::string dir = tdir("tables");

  MaterialParams p;
  p.lambda = 121153.8461538461;
  p.mu = 80769.23076923077;
  p.K = 1100;
  p.n_prime = 0.1;
  p.sigma_f = 900;
  p.eps_f = 0.45;
  p.b = -0.09;
  p.c = -0.56;
  p.m = 2.5;
  const auto curve = en_curve(p, 11, 1e2, 1e6);
  write_en_curve_csv(dir + "/en.csv", curve);
  auto lines = lines_of(read_text_file(dir + "/en.csv"));
  REQUIRE(lines.size() == 12);
  CHECK(lines[0] == "N,eps_a");

  std::vector<IterateRecord> traj(2);
  traj[1].iter = 1;
  traj[1].j = 0.5;
  traj[1].step = 0.25;
  write_trajectory_csv(dir + "/traj.csv", traj);
  lines = lines_of(read_text_file(dir + "/traj.csv"));
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "iter,J,pof,t_det,volume_violation,step");
  CHECK(lines[2] == "1,0.5,0,0,0,0.25");

  write_first_failures_csv(dir + "/ff.csv", {12.5, kInfiniteLife});
  lines = lines_of(read_text_file(dir + "/ff.csv"));
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "history,t_first");
  CHECK(lines[1] == "0,12.5");
  CHECK(lines[2] == "1,inf");
}

TEST_CASE("histories CSV: single history uses the bare header") {
  const std::string dir = tdir("histories");
  CrackHistory h;
  h.t_max = 10;
  h.events.push_back({1.5, {0.125, 0.25, 0.375}, 7});
  h.events.push_back({2.5, {0.5, 0.75, 0.625}, 9});

  write_histories_csv(dir + "/one.csv", {h});
  auto lines = lines_of(read_text_file(dir + "/one.csv"));
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "t,x1,x2,x3,face");
  CHECK(lines[1] == "1.5,0.125,0.25,0.375,7");

  write_histories_csv(dir + "/two.csv", {h, h});
  lines = lines_of(read_text_file(dir + "/two.csv"));
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "history,t,x1,x2,x3,face");
  CHECK(lines[1] == "0,1.5,0.125,0.25,0.375,7");
  CHECK(lines[4] == "1,2.5,0.5,0.75,0.625,9");

  write_histories_csv(dir + "/none.csv", {});
  lines = lines_of(read_text_file(dir + "/none.csv"));
  REQUIRE(lines.size() == 1);
  CHECK(lines[0] == "history,t,x1,x2,x3,face");
}

TEST_CASE("VTK export: mesh and surface files carry the advertised sections") {
  const std::string dir = tdir("vtk");
  BasicDesign basic;
  basic.box = {0.6, 0.6, 0.3};
  basic.alpha_min = 0.24;
  basic.alpha_max = 0.3;
  basic.clamp_center = {0.3, 0.3, 0.12};
  basic.clamp_radius = 0.11;
  basic.ext_radius = 0.7;
  const DesignField alpha = make_design_field(basic, 13, 13, basic.alpha_min);
  const Mesh mesh = build_mesh(basic, alpha, 0.05);

  DisplacementField u;
  u.u.assign(mesh.nodes.size(), Vec3{0.0, 0.0, 1e-4});
  write_mesh_vtk(dir + "/mesh.vtk", mesh, &u);
  const std::string mtxt = read_text_file(dir + "/mesh.vtk");
  CHECK(contains(mtxt, "# vtk DataFile Version 3.0"));
  CHECK(contains(mtxt, "ASCII"));
  CHECK(contains(mtxt, "DATASET UNSTRUCTURED_GRID"));
  CHECK(contains(mtxt, "POINTS " + std::to_string(mesh.node_count()) + " double"));
  CHECK(contains(mtxt, "CELLS " + std::to_string(mesh.element_count()) + " " +
                           std::to_string(9 * mesh.element_count())));
  CHECK(contains(mtxt, "CELL_TYPES"));
  CHECK(contains(mtxt, "POINT_DATA " + std::to_string(mesh.node_count())));
  CHECK(contains(mtxt, "VECTORS u double"));

  std::vector<double> sv(mesh.faces.size(), 123.25);
  std::vector<double> nd(mesh.faces.size(), kInfiniteLife);
  nd[0] = 5000.0;
  write_surface_vtk(dir + "/surface.vtk", mesh, sv, nd);
  const std::string stxt = read_text_file(dir + "/surface.vtk");
  CHECK(contains(stxt, "CELL_DATA " + std::to_string(mesh.faces.size())));
  CHECK(contains(stxt, "SCALARS tag int 1"));
  CHECK(contains(stxt, "SCALARS sigma_v double 1"));
  CHECK(contains(stxt, "SCALARS n_det double 1"));
  CHECK(contains(stxt, "1e+300"));   // capped infinite lives
  CHECK(!contains(stxt, "inf"));     // never the raw token
  CHECK(contains(stxt, "5000"));

  std::vector<double> wrong(mesh.faces.size() - 1, 0.0);
  CHECK_THROWS_AS(write_surface_vtk(dir + "/bad.vtk", mesh, wrong, nd), Error);
}

TEST_CASE("json_number turns non-finite values into strings") {
  CHECK(json_number(2.5).is_number());
  CHECK(json_number(kInfiniteLife) == "inf");
  CHECK(json_number(-kInfiniteLife) == "-inf");
  CHECK(json_number(std::nan("")) == "nan");

  const std::string dir = tdir("json");
  nlohmann::ordered_json doc;
  doc["a"] = json_number(1.5);
  doc["b"] = json_number(kInfiniteLife);
  write_json(dir + "/r.json", doc);
  const std::string text = read_text_file(dir + "/r.json");
  CHECK(text.back() == '\n');
  const json back = json::parse(text);
  CHECK(back["a"] == 1.5);
  CHECK(back["b"] == "inf");
}

TEST_CASE("config: full document parses into every block") {
  json doc = base_config("out");
  add_constraints(doc);
  doc["reliability"]["n_histories"] = 3;
  doc["reliability"]["t_max"] = 500.0;
  doc["life"] = {{"n_points", 21}, {"n_lo", 100.0}, {"n_hi", 1e6}, {"probe_sigma_v", 300.0}};

  const RunConfig cfg = parse_config(doc);
  CHECK(cfg.seed == 2024);
  CHECK(cfg.threads == 1);
  CHECK(cfg.output_dir == "out");
  CHECK(cfg.has_material);
  CHECK(cfg.material.mu == 80769.23076923077);
  CHECK(cfg.material.m == 2.5);  // mirrored from the reliability block
  CHECK(cfg.material.amplitude_factor == 0.5);
  CHECK(cfg.life.n_points == 21);
  CHECK(cfg.life.has_probe);
  CHECK(cfg.has_design);
  CHECK(cfg.design.box[2] == 0.3);
  CHECK(cfg.alpha_csv.empty());
  CHECK(cfg.has_constraints);
  CHECK(cfg.constraints.k == 4);
  CHECK(cfg.has_load);
  CHECK(cfg.traction[2] == 450.0);
  REQUIRE(cfg.traction_tags.size() == 1);
  CHECK(cfg.traction_tags[0] == FaceTag::kDesigned);
  CHECK(cfg.t_star == 3000.0);
  CHECK(cfg.has_discretization);
  CHECK(cfg.n1 == 25);
  CHECK(cfg.h == 0.05);
  CHECK(cfg.has_reliability);
  CHECK(cfg.hazard_domain == HazardDomain::kFree);
  CHECK(cfg.n_histories == 3);
  CHECK(cfg.t_max == 500.0);
  CHECK(cfg.has_optimizer);
  CHECK(cfg.basis.nb1 == 2);
  CHECK(cfg.initial_coeffs == std::vector<double>(4, 0.04));
  CHECK(cfg.cost == CostKind::kPof);
  CHECK(cfg.step == 0.015);
  CHECK(cfg.max_iterations == 2);
}

TEST_CASE("config: defaults fill in for a minimal document") {
  const json doc = json::parse(R"({
    "material": {"lambda": 1.0, "mu": 1.0, "K": 1.0, "n_prime": 0.5,
                  "sigma_f": 1.0, "eps_f": 1.0, "b": -0.1, "c": -0.5}
  })");
  const RunConfig cfg = parse_config(doc);
  CHECK(cfg.seed == 0);
  CHECK(cfg.threads == 1);
  CHECK(cfg.output_dir.empty());
  CHECK(cfg.material.amplitude_factor == 0.5);
  CHECK(cfg.material.m == 1.0);  // no reliability block
  CHECK(cfg.life.n_points == 200);
  CHECK(!cfg.life.has_probe);
  CHECK(!cfg.has_design);
  CHECK(!cfg.has_optimizer);
  CHECK(cfg.hazard_domain == HazardDomain::kFull);
}

TEST_CASE("config: errors carry field paths") {
  auto expect_error = [](json doc, const std::string& fragment) {
    try {
      parse_config(doc);
      FAIL_CHECK("expected a parse error mentioning '" << fragment << "'");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kParse);
      CHECK_MESSAGE(contains(e.what(), fragment), e.what());
    }
  };

  json doc = base_config("out");
  doc["material"].erase("mu");
  expect_error(doc, "material.mu");

  doc = base_config("out");
  doc["material"]["typo"] = 1.0;
  expect_error(doc, "material.typo");

  doc = base_config("out");
  doc["unknown_block"] = 1;
  expect_error(doc, "unknown_block");

  doc = base_config("out");
  doc["reliability"]["m"] = 0.5;
  expect_error(doc, "reliability.m");

  doc = base_config("out");
  doc["reliability"]["hazard_domain"] = "everything";
  expect_error(doc, "reliability.hazard_domain");

  doc = base_config("out");
  doc["optimizer"]["initial_coefficients"] = {0.1, 0.2};
  expect_error(doc, "optimizer.initial_coefficients");

  doc = base_config("out");
  doc["design"]["clamp_center"] = {0.3, 0.3, 0.05};  // cavity pokes out the bottom
  expect_error(doc, "design");

  doc = base_config("out");
  doc["load"]["traction_surfaces"] = json::array();
  expect_error(doc, "load.traction_surfaces");

  doc = base_config("out");
  doc["discretization"]["h"] = -0.05;
  expect_error(doc, "discretization.h");

  doc = base_config("out");
  doc["seed"] = -4;
  expect_error(doc, "seed");

  doc = base_config("out");
  doc["reliability"]["n_histories"] = 5;  // t_max missing
  expect_error(doc, "reliability.t_max");
}

TEST_CASE("config: resolved form is a fixed point of parsing") {
  json doc = base_config("runs/x");
  add_constraints(doc);
  doc["reliability"]["n_histories"] = 2;
  doc["reliability"]["t_max"] = 100.0;
  const RunConfig cfg = parse_config(doc);
  const nlohmann::ordered_json r1 = resolved_config(cfg);
  // Defaults materialized:
  CHECK(r1["material"]["amplitude_factor"] == 0.5);
  CHECK(r1["life"]["n_points"] == 200);
  CHECK(r1["optimizer"]["cost"] == "pof");
  const RunConfig cfg2 = parse_config(r1);
  const nlohmann::ordered_json r2 = resolved_config(cfg2);
  CHECK(r1 == r2);
}

TEST_CASE("config: require_blocks names the missing block") {
  json doc = base_config("out");
  const RunConfig cfg = parse_config(doc);
  CHECK_NOTHROW(require_blocks(cfg, "life"));
  CHECK_NOTHROW(require_blocks(cfg, "assess"));
  CHECK_NOTHROW(require_blocks(cfg, "sample"));
  try {
    require_blocks(cfg, "optimize");  // no constraints block
    FAIL_CHECK("expected an error");
  } catch (const Error& e) {
    CHECK(contains(e.what(), "constraints"));
  }

  json bare = base_config("out");
  bare.erase("design");
  const RunConfig cfg2 = parse_config(bare);
  try {
    require_blocks(cfg2, "assess");
    FAIL_CHECK("expected an error");
  } catch (const Error& e) {
    CHECK(contains(e.what(), "design"));
  }
}

TEST_CASE("run_life writes the curve and the probe chain") {
  const std::string dir = tdir("life");
  json doc = base_config(dir);
  doc["life"] = {{"n_points", 37}, {"n_lo", 100.0}, {"n_hi", 1e6}, {"probe_sigma_v", 320.0}};
  const RunConfig cfg = parse_config(doc);
  run_life(cfg);

  const auto lines = lines_of(read_text_file(dir + "/en_curve.csv"));
  REQUIRE(lines.size() == 38);
  CHECK(lines[0] == "N,eps_a");

  const json r = json::parse(read_text_file(dir + "/report.json"));
  CHECK(r["E"].get<double>() == youngs_modulus(cfg.material));
  CHECK(r["n_points"] == 37);
  const double sigma_a = 0.5 * 320.0;
  CHECK(r["sigma_a"].get<double>() == sigma_a);
  CHECK(r["shakedown_stress"].get<double>() == neuber_shakedown(sigma_a, cfg.material));
  CHECK(r["n_det"].get<double>() == phi(sigma_a, cfg.material));

  // Echoed config parses back to the same resolved form.
  const json echo = json::parse(read_text_file(dir + "/resolved_config.json"));
  CHECK(nlohmann::ordered_json(resolved_config(parse_config(echo))) ==
        nlohmann::ordered_json(resolved_config(cfg)));

  // A zero probe has infinite life.
  const std::string dir0 = tdir("life0");
  doc["life"]["probe_sigma_v"] = 0.0;
  doc["output_dir"] = dir0;
  run_life(parse_config(doc));
  const json r0 = json::parse(read_text_file(dir0 + "/report.json"));
  CHECK(r0["n_det"] == "inf");
}

TEST_CASE("run_assess writes a consistent report and matching artifacts") {
  const std::string dir = tdir("assess");
  json doc = base_config(dir);
  const RunConfig cfg = parse_config(doc);
  const ReliabilityReport rep = run_assess(cfg);

  const json r = json::parse(read_text_file(dir + "/report.json"));
  const double h = r["h"].get<double>();
  const double pof = r["pof"].get<double>();
  const double eta = r["eta"].get<double>();
  const double t_det = r["t_det"].get<double>();
  CHECK(h == rep.h);  // JSON round-trip is exact
  CHECK(pof == -std::expm1(-h));
  CHECK(r["survival"].get<double>() == 1.0 - pof);
  // h == (t_star/eta)^m up to the logsumexp evaluation order.
  const double h_from_eta = std::exp(cfg.m * (std::log(cfg.t_star) - std::log(eta)));
  CHECK(h == doctest::Approx(h_from_eta).epsilon(1e-12));
  CHECK(t_det > 0);
  CHECK(std::isfinite(t_det));
  CHECK(r["hazard_domain"] == "free");
  CHECK(r["dof"].get<int>() > 0);

  // The persisted design is the synthesized initial field, bitwise.
  const DesignField persisted = read_design_csv(dir + "/design.csv");
  const DesignField expected = cfg.basis.synthesize(cfg.design, cfg.n1, cfg.n2, cfg.initial_coeffs);
  CHECK(persisted.values == expected.values);

  // Surface file has one quad per reported face.
  const std::string stxt = read_text_file(dir + "/surface.vtk");
  CHECK(contains(stxt, "CELL_DATA " + std::to_string(r["faces"].get<int>())));
  CHECK(fs::exists(dir + "/mesh.vtk"));
}

TEST_CASE("run_assess with zero loads reports no failures") {
  const std::string dir = tdir("assess_zero");
  json doc = base_config(dir);
  doc["load"]["traction"] = {0.0, 0.0, 0.0};
  run_assess(parse_config(doc));
  const json r = json::parse(read_text_file(dir + "/report.json"));
  CHECK(r["pof"].get<double>() == 0.0);
  CHECK(r["eta"] == "inf");
  CHECK(r["t_det"] == "inf");
  CHECK(r["survival"].get<double>() == 1.0);
}

TEST_CASE("run_sample is deterministic in the seed and writes both tables") {
  // Calibrate t_max to the field's scale so histories carry events.
  json probe_doc = base_config(tdir("sample_probe"));
  const RunConfig probe_cfg = parse_config(probe_doc);
  const AssessArtifacts art = assess_pipeline(probe_cfg);
  REQUIRE(std::isfinite(art.report.eta));
  const double t_max = 2.5 * art.report.eta;

  auto run_into = [&](const std::string& dir, uint64_t seed) {
    json doc = base_config(dir);
    doc["seed"] = seed;
    doc["reliability"]["n_histories"] = 6;
    doc["reliability"]["t_max"] = t_max;
    return run_sample(parse_config(doc));
  };

  const std::string da = tdir("sample_a");
  const std::string db = tdir("sample_b");
  const std::string dc = tdir("sample_c");
  const SampleSummary sa = run_into(da, 11);
  const SampleSummary sb = run_into(db, 11);
  run_into(dc, 12);

  CHECK(read_text_file(da + "/histories.csv") == read_text_file(db + "/histories.csv"));
  CHECK(read_text_file(da + "/first_failures.csv") == read_text_file(db + "/first_failures.csv"));
  CHECK(read_text_file(da + "/report.json") == read_text_file(db + "/report.json"));
  CHECK(read_text_file(da + "/histories.csv") != read_text_file(dc + "/histories.csv"));

  CHECK(sa.n_histories == 6);
  CHECK(sa.total_events == sb.total_events);
  CHECK(sa.expected_count == doctest::Approx(2.5 * 2.5 * std::sqrt(2.5)).epsilon(0.3));
  // H(t_max) = (t_max/eta)^m with t_max = 2.5 eta and m = 2.5.

  const json r = json::parse(read_text_file(da + "/report.json"));
  CHECK(r["n_histories"] == 6);
  CHECK(r["t_max"].get<double>() == t_max);
  if (sa.ks_valid) {
    CHECK(r["ks_n"].get<int>() == 6 - sa.n_censored);
    CHECK(r["ks_p"].get<double>() >= 0.0);
  }

  // Zero histories: header-only tables, no sampling stats.
  const std::string d0 = tdir("sample_zero");
  json doc0 = base_config(d0);
  doc0["reliability"]["n_histories"] = 0;
  const SampleSummary s0 = run_sample(parse_config(doc0));
  CHECK(s0.total_events == 0);
  CHECK(lines_of(read_text_file(d0 + "/histories.csv")).size() == 1);
  CHECK(lines_of(read_text_file(d0 + "/first_failures.csv")).size() == 1);
}

TEST_CASE("run_optimize persists trajectory, designs, and final fields") {
  const std::string dir = tdir("optimize");
  json doc = base_config(dir);
  add_constraints(doc);

  // Anchor the warranty time near the initial deterministic life.
  const RunConfig probe_cfg = parse_config(doc);
  const AssessArtifacts art0 = assess_pipeline(probe_cfg);
  REQUIRE(std::isfinite(art0.report.t_det));
  doc["load"]["t_star"] = art0.report.t_det;

  const RunConfig cfg = parse_config(doc);
  const OptimizerState st = run_optimize(cfg);

  const auto lines = lines_of(read_text_file(dir + "/trajectory.csv"));
  REQUIRE(lines.size() == st.trajectory.size() + 1);
  CHECK(lines[0] == "iter,J,pof,t_det,volume_violation,step");

  const json r = json::parse(read_text_file(dir + "/report.json"));
  CHECK(r["final_j"].get<double>() <= r["initial_j"].get<double>());
  CHECK(r["evaluations"].get<int>() == st.evaluations);
  CHECK(r["accepted"].get<int>() == static_cast<int>(st.trajectory.size()) - 1);

  const DesignField initial = read_design_csv(dir + "/design_initial.csv");
  const DesignField expected =
      cfg.basis.synthesize(cfg.design, cfg.n1, cfg.n2, cfg.initial_coeffs);
  CHECK(initial.values == expected.values);
  const DesignField final_field = read_design_csv(dir + "/design_final.csv");
  CHECK(final_field.values == st.final_alpha.values);

  CHECK(fs::exists(dir + "/mesh.vtk"));
  CHECK(fs::exists(dir + "/surface.vtk"));
  CHECK(fs::exists(dir + "/resolved_config.json"));
}

TEST_CASE("run_optimize rejects an infeasible initial design with a report") {
  const std::string dir = tdir("optimize_bad");
  json doc = base_config(dir);
  add_constraints(doc);
  doc["constraints"]["volume"] = 1.5 * doc["constraints"]["volume"].get<double>();
  const RunConfig cfg = parse_config(doc);
  try {
    run_optimize(cfg);
    FAIL_CHECK("expected a constraint error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConstraint);
    CHECK(contains(e.what(), "volume"));
  }
  const json cr = json::parse(read_text_file(dir + "/constraint_report.json"));
  CHECK(cr["admissible"] == false);
  bool volume_failed = false;
  for (const auto& m : cr["margins"])
    if (m["name"] == "volume" && m["passed"] == false) volume_failed = true;
  CHECK(volume_failed);
}

TEST_CASE("build_alpha precedence: CSV, then basis, then constant") {
  const std::string dir = tdir("build_alpha");
  json doc = base_config(dir);
  RunConfig cfg = parse_config(doc);

  // With the optimizer block: the synthesized initial field.
  const DesignField from_basis = build_alpha(cfg);
  const DesignField expected =
      cfg.basis.synthesize(cfg.design, cfg.n1, cfg.n2, cfg.initial_coeffs);
  CHECK(from_basis.values == expected.values);

  // A CSV takes precedence over the basis.
  DesignField stored = expected;
  stored.at(12, 12) += 0.001;
  const std::string csv = dir + "/alpha.csv";
  write_design_csv(csv, stored);
  cfg.alpha_csv = csv;
  const DesignField from_csv = build_alpha(cfg);
  CHECK(from_csv.values == stored.values);

  // Neither: the constant background.
  cfg.alpha_csv.clear();
  cfg.has_optimizer = false;
  const DesignField constant = build_alpha(cfg);
  CHECK(constant.values == make_design_field(cfg.design, cfg.n1, cfg.n2, cfg.design.alpha_min).values);
}
