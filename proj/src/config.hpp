#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "design.hpp"
#include "elasticity.hpp"
#include "material.hpp"
#include "shapeopt.hpp"
#include "json.hpp"

namespace lcf {

/// Hazard integration domain: the full boundary (default; the clamped cavity
/// contributes too) or only the free surface (Neumann + designed faces).
enum class HazardDomain { kFull, kFree };

/// Strain-life curve / probe-point settings of the `life` subcommand.
struct LifeConfig {
  int n_points = 200;
  double n_lo = 10.0;
  double n_hi = 1e7;
  bool has_probe = false;
  double probe_sigma_v = 0;  // comparison stress fed through the N_det chain
};

/// One run's configuration: the parsed, defaults-resolved form of the JSON
/// document. Blocks that were absent keep has_* == false; each subcommand
/// checks the blocks it needs via require_blocks.
struct RunConfig {
  uint64_t seed = 0;
  int threads = 1;
  std::string output_dir;  // may still be empty here; the CLI --out overrides

  bool has_material = false;
  MaterialParams material;  // .m mirrored from the reliability block

  LifeConfig life;

  bool has_design = false;
  BasicDesign design;
  std::string alpha_csv;  // optional height-field CSV; empty = synthesized/constant

  bool has_constraints = false;
  DesignConstraints constraints;
  double admis_tol = 1e-6;

  bool has_load = false;
  Vec3 body_force = {0, 0, 0};
  Vec3 traction = {0, 0, 0};
  std::vector<FaceTag> traction_tags = {FaceTag::kNeumann, FaceTag::kDesigned};
  double t_star = 0;

  bool has_discretization = false;
  int n1 = 33, n2 = 33;
  double h = 0;
  double solver_rel_tol = 1e-8;
  int solver_max_iter = 20000;

  bool has_reliability = false;
  double m = 1;
  HazardDomain hazard_domain = HazardDomain::kFull;
  int n_histories = 0;
  double t_max = 0;

  bool has_optimizer = false;
  BumpBasis basis;
  std::vector<double> initial_coeffs;  // resolved to basis.size() entries
  CostKind cost = CostKind::kPof;
  double step = 0.05;
  double shrink = 0.5;
  double step_min = 1e-3;
  int max_iterations = 20;
};

/// Parses and validates a configuration document. Errors are
/// Error(kParse) with a field path ("material.mu: ..."), including
/// invariant violations of the downstream parameter types and unknown keys.
RunConfig parse_config(const nlohmann::json& doc);

/// Reads, parses, and validates a JSON config file.
RunConfig load_config(const std::string& path);

/// The effective configuration with all defaults materialized: parsing the
/// result reproduces `cfg` exactly. Only blocks present in the run appear.
nlohmann::ordered_json resolved_config(const RunConfig& cfg);

/// Throws Error(kParse) naming the missing block when `cfg` lacks a block the
/// given subcommand ("life", "assess", "sample", "optimize") relies on.
void require_blocks(const RunConfig& cfg, const std::string& subcommand);

}  // namespace lcf
