#include "elasticity.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace lcf {

namespace {

// Corner signs of the reference cube in VTK hexahedron order.
constexpr int kSign[8][3] = {{-1, -1, -1}, {1, -1, -1}, {1, 1, -1}, {-1, 1, -1},
                             {-1, -1, 1},  {1, -1, 1},  {1, 1, 1},  {-1, 1, 1}};

double shape(int a, const Vec3& xi) {
  return 0.125 * (1 + kSign[a][0] * xi[0]) * (1 + kSign[a][1] * xi[1]) *
         (1 + kSign[a][2] * xi[2]);
}

// Physical gradient of shape function a at xi for a voxel of edge h.
Vec3 shape_grad(int a, const Vec3& xi, double h) {
  const double j = 2.0 / h;  // d xi / d x
  return {0.125 * kSign[a][0] * (1 + kSign[a][1] * xi[1]) * (1 + kSign[a][2] * xi[2]) * j,
          0.125 * kSign[a][1] * (1 + kSign[a][0] * xi[0]) * (1 + kSign[a][2] * xi[2]) * j,
          0.125 * kSign[a][2] * (1 + kSign[a][0] * xi[0]) * (1 + kSign[a][1] * xi[1]) * j};
}

std::array<Vec3, 8> gauss_points() {
  const double g = 1.0 / std::sqrt(3.0);
  std::array<Vec3, 8> pts;
  int n = 0;
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i) pts[n++] = {(2 * i - 1) * g, (2 * j - 1) * g, (2 * k - 1) * g};
  return pts;
}

std::vector<uint8_t> dirichlet_nodes(const Mesh& mesh) {
  std::vector<uint8_t> fixed(mesh.node_count(), 0);
  bool any = false;
  for (const auto& f : mesh.faces)
    if (f.tag == FaceTag::kDirichlet) {
      for (int n : f.nodes) fixed[n] = 1;
      any = true;
    }
  if (!any) fail(ErrorCode::kMesh, "assemble: mesh has no clamped faces");
  return fixed;
}

}  // namespace

LoadCase LoadCase::constant(const Vec3& f, const Vec3& g, std::vector<FaceTag> tags) {
  LoadCase lc;
  lc.body_force = [f](const Vec3&) { return f; };
  lc.traction = [g](const Vec3&, const Vec3&) { return g; };
  lc.traction_tags = std::move(tags);
  return lc;
}

std::array<std::array<double, 24>, 24> element_stiffness(double h, const MaterialParams& mat) {
  std::array<std::array<double, 24>, 24> ke{};
  const double det_j = h * h * h / 8.0;  // Gauss weights are 1
  for (const Vec3& xi : gauss_points()) {
    std::array<Vec3, 8> g;
    for (int a = 0; a < 8; ++a) g[a] = shape_grad(a, xi, h);
    // Accumulate the upper triangle only; the mirror below keeps the matrix
    // bitwise symmetric (the product grouping would otherwise round
    // differently for (r,c) and (c,r)).
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b) {
        const double gg = dot(g[a], g[b]);
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) {
            if (3 * a + i > 3 * b + j) continue;
            double v = mat.lambda * g[a][i] * g[b][j] + mat.mu * g[a][j] * g[b][i];
            if (i == j) v += mat.mu * gg;
            ke[3 * a + i][3 * b + j] += v * det_j;
          }
      }
  }
  for (int r = 0; r < 24; ++r)
    for (int c = r + 1; c < 24; ++c) ke[c][r] = ke[r][c];
  return ke;
}

LinearSystem assemble(const Mesh& mesh, const MaterialParams& mat, const LoadCase& load) {
  mat.validate();
  if (mesh.element_count() == 0) fail(ErrorCode::kMesh, "assemble: empty mesh");

  const std::vector<uint8_t> fixed = dirichlet_nodes(mesh);
  LinearSystem sys;
  sys.free_slot.assign(mesh.node_count(), -1);
  for (int n = 0; n < mesh.node_count(); ++n)
    if (!fixed[n]) sys.free_slot[n] = sys.free_node_count++;

  const int n_dof = 3 * sys.free_node_count;
  sys.rhs.assign(n_dof, 0.0);

  // Sparsity pattern from node adjacency (nodes sharing an element).
  std::vector<std::vector<int>> neighbors(sys.free_node_count);
  for (const auto& el : mesh.elements)
    for (int a = 0; a < 8; ++a) {
      const int ra = sys.free_slot[el[a]];
      if (ra < 0) continue;
      for (int b = 0; b < 8; ++b) {
        const int rb = sys.free_slot[el[b]];
        if (rb >= 0) neighbors[ra].push_back(rb);
      }
    }
  CsrMatrix& m = sys.matrix;
  m.n = n_dof;
  m.row_ptr.assign(n_dof + 1, 0);
  for (int fn = 0; fn < sys.free_node_count; ++fn) {
    auto& nb = neighbors[fn];
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    for (int c = 0; c < 3; ++c) m.row_ptr[3 * fn + c + 1] = static_cast<int>(nb.size()) * 3;
  }
  for (int r = 0; r < n_dof; ++r) m.row_ptr[r + 1] += m.row_ptr[r];
  m.cols.resize(m.row_ptr.back());
  m.vals.assign(m.row_ptr.back(), 0.0);
  for (int fn = 0; fn < sys.free_node_count; ++fn)
    for (int c = 0; c < 3; ++c) {
      int s = m.row_ptr[3 * fn + c];
      for (int nb : neighbors[fn])
        for (int cc = 0; cc < 3; ++cc) m.cols[s++] = 3 * nb + cc;
    }

  // Stiffness: one congruent element matrix scattered per element.
  const auto ke = element_stiffness(mesh.h, mat);
  for (const auto& el : mesh.elements)
    for (int a = 0; a < 8; ++a) {
      const int ra = sys.free_slot[el[a]];
      if (ra < 0) continue;
      for (int b = 0; b < 8; ++b) {
        const int rb = sys.free_slot[el[b]];
        if (rb < 0) continue;  // homogeneous Dirichlet: columns drop out
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) m.add(3 * ra + i, 3 * rb + j, ke[3 * a + i][3 * b + j]);
      }
    }

  // Body force, 2x2x2 Gauss.
  if (load.body_force) {
    const double det_j = mesh.h * mesh.h * mesh.h / 8.0;
    const auto pts = gauss_points();
    for (int e = 0; e < mesh.element_count(); ++e) {
      const auto& el = mesh.elements[e];
      const Vec3 center = mesh.element_center(e);
      for (const Vec3& xi : pts) {
        const Vec3 x = vadd(center, vscale(xi, 0.5 * mesh.h));
        const Vec3 f = load.body_force(x);
        for (int a = 0; a < 8; ++a) {
          const int ra = sys.free_slot[el[a]];
          if (ra < 0) continue;
          const double w = shape(a, xi) * det_j;
          for (int i = 0; i < 3; ++i) sys.rhs[3 * ra + i] += w * f[i];
        }
      }
    }
  }

  // Traction, face-center rule: each face node receives g h^2 / 4.
  if (load.traction) {
    const double w_face = mesh.h * mesh.h * 0.25;
    for (const auto& face : mesh.faces) {
      if (std::find(load.traction_tags.begin(), load.traction_tags.end(), face.tag) ==
          load.traction_tags.end())
        continue;
      const Vec3 g = load.traction(face.center, face.normal);
      for (int n : face.nodes) {
        const int rn = sys.free_slot[n];
        if (rn < 0) continue;
        for (int i = 0; i < 3; ++i) sys.rhs[3 * rn + i] += w_face * g[i];
      }
    }
  }
  return sys;
}

DisplacementField solve(const Mesh& mesh, const LinearSystem& sys, double rel_tol, int max_iter) {
  DisplacementField field;
  field.u.assign(mesh.node_count(), Vec3{0, 0, 0});
  if (sys.free_node_count == 0) {
    field.solve_info.converged = true;  // fully clamped: the zero field
    return field;
  }
  std::vector<double> x(sys.rhs.size(), 0.0);
  field.solve_info = conjugate_gradient(sys.matrix, sys.rhs, x, rel_tol, max_iter);
  for (int n = 0; n < mesh.node_count(); ++n) {
    const int fn = sys.free_slot[n];
    if (fn >= 0) field.u[n] = {x[3 * fn], x[3 * fn + 1], x[3 * fn + 2]};
  }
  return field;
}

DisplacementField solve_elasticity(const Mesh& mesh, const MaterialParams& mat,
                                   const LoadCase& load, double rel_tol, int max_iter) {
  return solve(mesh, assemble(mesh, mat, load), rel_tol, max_iter);
}

Mat3 grad_at(const Mesh& mesh, const DisplacementField& u, int element, const Vec3& xi) {
  const auto& el = mesh.elements[element];
  Mat3 g{};
  for (int a = 0; a < 8; ++a) {
    const Vec3 gn = shape_grad(a, xi, mesh.h);
    const Vec3& ua = u.u[el[a]];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) g[3 * i + j] += ua[i] * gn[j];
  }
  return g;
}

Vec3 interp_at(const Mesh& mesh, const DisplacementField& u, int element, const Vec3& xi) {
  const auto& el = mesh.elements[element];
  Vec3 v = {0, 0, 0};
  for (int a = 0; a < 8; ++a) v = vadd(v, vscale(u.u[el[a]], shape(a, xi)));
  return v;
}

SurfaceField surface_field(const Mesh& mesh, const DisplacementField& u,
                           const std::vector<SurfacePoint>& quad, const MaterialParams& mat) {
  SurfaceField sf;
  sf.points = quad;
  sf.grad_u.reserve(quad.size());
  sf.sigma_v.reserve(quad.size());
  sf.n_det.reserve(quad.size());
  for (const auto& p : quad) {
    const BoundaryFace& face = mesh.faces[p.face];
    // The face center in the owning element's local frame is the unit normal
    // itself (axis-aligned voxel faces).
    const Mat3 g = grad_at(mesh, u, face.element, face.normal);
    const double sv = von_mises(stress_from_gradient(g, mat));
    sf.grad_u.push_back(g);
    sf.sigma_v.push_back(sv);
    sf.n_det.push_back(phi(mat.amplitude_factor * sv, mat));
  }
  return sf;
}

}  // namespace lcf
