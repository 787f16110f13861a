#pragma once

#include <array>
#include <functional>
#include <vector>

#include "material.hpp"
#include "mesh.hpp"
#include "sparse.hpp"
#include "tensor.hpp"

namespace lcf {

/// Loads of the linear elasticity problem: body force density f on the
/// volume, traction g on the free surface. g receives the outward normal so
/// stress-driven tractions (g = sigma . n) are expressible.
struct LoadCase {
  std::function<Vec3(const Vec3&)> body_force;
  std::function<Vec3(const Vec3&, const Vec3&)> traction;
  std::vector<FaceTag> traction_tags = {FaceTag::kNeumann, FaceTag::kDesigned};

  static LoadCase constant(const Vec3& f, const Vec3& g,
                           std::vector<FaceTag> tags = {FaceTag::kNeumann, FaceTag::kDesigned});
};

/// Reduced linear system: Dirichlet dofs (nodes of clamped faces) eliminated
/// symmetrically. free_slot maps node id -> compact index, -1 when clamped;
/// dof (node, comp) lives at 3 * free_slot[node] + comp.
struct LinearSystem {
  CsrMatrix matrix;
  std::vector<double> rhs;
  std::vector<int> free_slot;
  int free_node_count = 0;
};

/// 24x24 element stiffness of a voxel of edge h (all mesh elements are
/// congruent, so one matrix serves the whole mesh). 2x2x2 Gauss quadrature,
/// exact for the trilinear-gradient integrands. Local dof = 3 * node + comp.
std::array<std::array<double, 24>, 24> element_stiffness(double h, const MaterialParams& mat);

/// Assembles stiffness and load vector on the free dofs. Volume terms use
/// 2x2x2 Gauss points, tractions a face-center rule (exact for the bilinear
/// face restrictions of trilinear test functions).
LinearSystem assemble(const Mesh& mesh, const MaterialParams& mat, const LoadCase& load);

struct DisplacementField {
  std::vector<Vec3> u;  // one vector per mesh node; exactly zero when clamped
  CgResult solve_info;
};

/// Jacobi-CG solve of the assembled system. Throws Error(kSolver) when the
/// iteration budget is exhausted.
DisplacementField solve(const Mesh& mesh, const LinearSystem& sys, double rel_tol, int max_iter);

/// Convenience: assemble + solve.
DisplacementField solve_elasticity(const Mesh& mesh, const MaterialParams& mat,
                                   const LoadCase& load, double rel_tol, int max_iter);

/// Displacement gradient (grad u)_ij = du_i/dx_j inside element e at local
/// coordinates xi in [-1,1]^3.
Mat3 grad_at(const Mesh& mesh, const DisplacementField& u, int element, const Vec3& xi);

/// Trilinear interpolation of u inside element e at local coordinates xi.
Vec3 interp_at(const Mesh& mesh, const DisplacementField& u, int element, const Vec3& xi);

/// Surface trace of the solved field on a quadrature rule: one-sided
/// displacement gradient from the owning element, evaluated at each face
/// center, with the elastic von Mises stress and deterministic initiation
/// life derived from it.
struct SurfaceField {
  std::vector<SurfacePoint> points;
  std::vector<Mat3> grad_u;
  std::vector<double> sigma_v;  // von Mises of the full elastic stress
  std::vector<double> n_det;    // phi(amplitude_factor * sigma_v)
};

SurfaceField surface_field(const Mesh& mesh, const DisplacementField& u,
                           const std::vector<SurfacePoint>& quad, const MaterialParams& mat);

}  // namespace lcf
