#pragma once

#include <string>
#include <vector>

#include "design.hpp"
#include "elasticity.hpp"
#include "material.hpp"
#include "reliability.hpp"
#include "shapeopt.hpp"
#include "json.hpp"

namespace lcf {

/// %.17g rendering used by every CSV writer: doubles round-trip exactly and
/// non-finite values print as inf/-inf/nan.
std::string format_double(double v);

/// Writes `content` to `path`, throwing Error(kIo) on failure. Parent
/// directories are created as needed.
void write_text_file(const std::string& path, const std::string& content);

/// Reads a whole file; throws Error(kIo) when it cannot be opened.
std::string read_text_file(const std::string& path);

/// Strain-life curve, header "N,eps_a".
void write_en_curve_csv(const std::string& path, const std::vector<EnPoint>& curve);

/// Height-field grid, header "n1,n2,dx,dy": one metadata row with those four
/// values, then n1 rows of n2 comma-separated samples (row-major grid).
void write_design_csv(const std::string& path, const DesignField& f);
DesignField read_design_csv(const std::string& path);

/// Optimizer trajectory, header "iter,J,pof,t_det,volume_violation,step".
void write_trajectory_csv(const std::string& path, const std::vector<IterateRecord>& traj);

/// Crack histories. A single history uses the header "t,x1,x2,x3,face";
/// several histories get a leading "history" index column.
void write_histories_csv(const std::string& path, const std::vector<CrackHistory>& hs);

/// First-failure time per history, header "history,t_first" (inf = censored:
/// no event before t_max).
void write_first_failures_csv(const std::string& path, const std::vector<double>& t_first);

/// VTK legacy ASCII unstructured grid of the hexahedral mesh, with the
/// displacement field as point data when `u` is non-null.
void write_mesh_vtk(const std::string& path, const Mesh& mesh, const DisplacementField* u);

/// Companion surface file: the boundary quads with per-face cell data
/// (boundary tag, von Mises stress, deterministic life). `sigma_v` and
/// `n_det` must have one entry per mesh face. Infinite lives are written as
/// 1e300 because common VTK readers reject "inf" tokens.
void write_surface_vtk(const std::string& path, const Mesh& mesh,
                       const std::vector<double>& sigma_v, const std::vector<double>& n_det);

/// A JSON value for a double: the number itself, or the strings
/// "inf"/"-inf"/"nan" for non-finite values (JSON has no such literals).
nlohmann::ordered_json json_number(double v);

/// Pretty-printed JSON document with a trailing newline.
void write_json(const std::string& path, const nlohmann::ordered_json& doc);

}  // namespace lcf
