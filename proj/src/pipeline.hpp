#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "reliability.hpp"
#include "shapeopt.hpp"
#include "stats.hpp"

namespace lcf {

/// Everything one full assess pipeline produces (shared by the assess,
/// sample, and export paths).
struct AssessArtifacts {
  DesignField alpha;
  Mesh mesh;
  DisplacementField u;
  SurfaceField all_faces;     // trace on every boundary face
  SurfaceField hazard_field;  // restriction to the configured hazard domain
  ReliabilityReport report;
  int dof = 0;
};

/// Height field of the run: the alpha_csv file when given, else the
/// optimizer basis synthesized at the initial coefficients, else the
/// constant background alpha_min.
DesignField build_alpha(const RunConfig& cfg);

/// Mesh + solve + surface trace + Weibull report for the configured design.
AssessArtifacts assess_pipeline(const RunConfig& cfg);

/// Same pipeline on an explicitly given height field.
AssessArtifacts assess_with_alpha(const RunConfig& cfg, DesignField alpha);

/// Subcommand drivers. Each writes its fixed-name artifacts (report.json,
/// resolved_config.json, and the subcommand's CSV/VTK files) into
/// cfg.output_dir and returns the headline result.
void run_life(const RunConfig& cfg);
ReliabilityReport run_assess(const RunConfig& cfg);

struct SampleSummary {
  int n_histories = 0;
  double mean_count = 0;      // empirical mean event count per history
  double expected_count = 0;  // H(t_max)
  int total_events = 0;
  int n_censored = 0;  // histories with no event before t_max
  bool ks_valid = false;
  KsResult ks;  // first-failure times vs Weibull(m, eta)
};
SampleSummary run_sample(const RunConfig& cfg);

OptimizerState run_optimize(const RunConfig& cfg);

}  // namespace lcf
