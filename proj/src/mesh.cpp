#include "mesh.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "errors.hpp"

namespace lcf {

namespace {

// Bilinear interpolation of the design grid at (x, y), clamped to the grid.
double interp_alpha(const DesignField& a, double x, double y) {
  const double gx = std::clamp(x / a.dx, 0.0, static_cast<double>(a.n1 - 1));
  const double gy = std::clamp(y / a.dy, 0.0, static_cast<double>(a.n2 - 1));
  const int i0 = std::min(static_cast<int>(gx), a.n1 - 2);
  const int j0 = std::min(static_cast<int>(gy), a.n2 - 2);
  const double tx = gx - i0, ty = gy - j0;
  return (1 - tx) * (1 - ty) * a.at(i0, j0) + tx * (1 - ty) * a.at(i0 + 1, j0) +
         (1 - tx) * ty * a.at(i0, j0 + 1) + tx * ty * a.at(i0 + 1, j0 + 1);
}

int round_extent(double length, double h, const char* axis) {
  const int n = static_cast<int>(std::llround(length / h));
  if (n < 1 || std::fabs(n * h - length) > 1e-9 * std::max(1.0, length))
    fail(ErrorCode::kInvalidArgument,
         std::string("build_mesh: h does not divide the box extent along ") + axis);
  return n;
}

}  // namespace

Vec3 Mesh::element_center(int e) const {
  const auto& el = elements[e];
  return vscale(vadd(nodes[el[0]], nodes[el[6]]), 0.5);
}

Mesh build_mesh(const BasicDesign& basic, const DesignField& alpha, double h) {
  basic.validate();
  if (!(h > 0)) fail(ErrorCode::kInvalidArgument, "build_mesh: h must be > 0");
  if (!(h < basic.clamp_radius / 2))
    fail(ErrorCode::kInvalidArgument, "build_mesh: h must be below clamp_radius/2");
  if (alpha.n1 < 2 || alpha.n2 < 2 ||
      alpha.values.size() != static_cast<size_t>(alpha.n1) * alpha.n2)
    fail(ErrorCode::kInvalidArgument, "build_mesh: malformed design grid");

  const int nx = round_extent(basic.box[0], h, "x");
  const int ny = round_extent(basic.box[1], h, "y");
  const int nz = static_cast<int>(std::ceil(basic.alpha_max / h + 0.5));

  const auto vox = [&](int i, int j, int k) { return (static_cast<size_t>(k) * ny + j) * nx + i; };
  std::vector<uint8_t> included(static_cast<size_t>(nx) * ny * nz, 0);
  std::vector<uint8_t> cavity(included.size(), 0);

  const Vec3& zc = basic.clamp_center;
  const double r2 = basic.clamp_radius * basic.clamp_radius;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const double cx = (i + 0.5) * h, cy = (j + 0.5) * h, cz = (k + 0.5) * h;
        const size_t v = vox(i, j, k);
        if (cz <= basic.alpha_min) {
          const double dx = cx - zc[0], dy = cy - zc[1], dz = cz - zc[2];
          if (dx * dx + dy * dy + dz * dz <= r2)
            cavity[v] = 1;  // removed closed ball
          else
            included[v] = 1;
        } else {
          included[v] = cz < interp_alpha(alpha, cx, cy) ? 1 : 0;
        }
      }

  size_t n_included = 0;
  size_t first = included.size();
  for (size_t v = 0; v < included.size(); ++v)
    if (included[v]) {
      ++n_included;
      first = std::min(first, v);
    }
  if (n_included == 0) fail(ErrorCode::kMesh, "build_mesh: empty mesh");

  // Face-connectivity flood fill.
  {
    std::vector<uint8_t> seen(included.size(), 0);
    std::queue<size_t> q;
    q.push(first);
    seen[first] = 1;
    size_t visited = 0;
    const int di[6] = {-1, 1, 0, 0, 0, 0};
    const int dj[6] = {0, 0, -1, 1, 0, 0};
    const int dk[6] = {0, 0, 0, 0, -1, 1};
    while (!q.empty()) {
      const size_t v = q.front();
      q.pop();
      ++visited;
      const int i = static_cast<int>(v % nx);
      const int j = static_cast<int>((v / nx) % ny);
      const int k = static_cast<int>(v / (static_cast<size_t>(nx) * ny));
      for (int d = 0; d < 6; ++d) {
        const int ii = i + di[d], jj = j + dj[d], kk = k + dk[d];
        if (ii < 0 || jj < 0 || kk < 0 || ii >= nx || jj >= ny || kk >= nz) continue;
        const size_t w = vox(ii, jj, kk);
        if (included[w] && !seen[w]) {
          seen[w] = 1;
          q.push(w);
        }
      }
    }
    if (visited != n_included) fail(ErrorCode::kMesh, "build_mesh: voxel set is disconnected");
  }

  Mesh mesh;
  mesh.h = h;
  mesh.grid_dims = {nx, ny, nz};

  // Compress node ids: grid points touched by an included voxel, numbered in
  // lexicographic (k, j, i) order.
  const int px = nx + 1, py = ny + 1;
  const auto pid = [&](int i, int j, int k) { return (static_cast<size_t>(k) * py + j) * px + i; };
  std::vector<int> node_id(static_cast<size_t>(px) * py * (nz + 1), -1);
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        if (included[vox(i, j, k)])
          for (int dk = 0; dk < 2; ++dk)
            for (int dj = 0; dj < 2; ++dj)
              for (int di = 0; di < 2; ++di) node_id[pid(i + di, j + dj, k + dk)] = 0;
  int next_id = 0;
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i) {
        auto& id = node_id[pid(i, j, k)];
        if (id == 0) {
          id = next_id++;
          mesh.nodes.push_back({i * h, j * h, k * h});
        }
      }

  std::vector<int> element_of(included.size(), -1);
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        if (!included[vox(i, j, k)]) continue;
        element_of[vox(i, j, k)] = mesh.element_count();
        mesh.elements.push_back({node_id[pid(i, j, k)], node_id[pid(i + 1, j, k)],
                                 node_id[pid(i + 1, j + 1, k)], node_id[pid(i, j + 1, k)],
                                 node_id[pid(i, j, k + 1)], node_id[pid(i + 1, j, k + 1)],
                                 node_id[pid(i + 1, j + 1, k + 1)], node_id[pid(i, j + 1, k + 1)]});
      }

  // Boundary faces with outward-oriented corner loops.
  size_t n_dirichlet = 0;
  const int di6[6] = {-1, 1, 0, 0, 0, 0};
  const int dj6[6] = {0, 0, -1, 1, 0, 0};
  const int dk6[6] = {0, 0, 0, 0, -1, 1};
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        if (!included[vox(i, j, k)]) continue;
        for (int d = 0; d < 6; ++d) {
          const int ii = i + di6[d], jj = j + dj6[d], kk = k + dk6[d];
          const bool outside =
              ii < 0 || jj < 0 || kk < 0 || ii >= nx || jj >= ny || kk >= nz;
          if (!outside && included[vox(ii, jj, kk)]) continue;

          BoundaryFace f;
          f.element = element_of[vox(i, j, k)];
          f.normal = {static_cast<double>(di6[d]), static_cast<double>(dj6[d]),
                      static_cast<double>(dk6[d])};
          const bool against_cavity = !outside && cavity[vox(ii, jj, kk)];
          if (against_cavity)
            f.tag = FaceTag::kDirichlet;
          else if (d == 5)
            f.tag = FaceTag::kDesigned;  // top of its column: the alpha graph
          else
            f.tag = FaceTag::kNeumann;
          if (f.tag == FaceTag::kDirichlet) ++n_dirichlet;

          switch (d) {
            case 0:  // -x
              f.nodes = {node_id[pid(i, j, k)], node_id[pid(i, j, k + 1)],
                         node_id[pid(i, j + 1, k + 1)], node_id[pid(i, j + 1, k)]};
              break;
            case 1:  // +x
              f.nodes = {node_id[pid(i + 1, j, k)], node_id[pid(i + 1, j + 1, k)],
                         node_id[pid(i + 1, j + 1, k + 1)], node_id[pid(i + 1, j, k + 1)]};
              break;
            case 2:  // -y
              f.nodes = {node_id[pid(i, j, k)], node_id[pid(i + 1, j, k)],
                         node_id[pid(i + 1, j, k + 1)], node_id[pid(i, j, k + 1)]};
              break;
            case 3:  // +y
              f.nodes = {node_id[pid(i, j + 1, k)], node_id[pid(i, j + 1, k + 1)],
                         node_id[pid(i + 1, j + 1, k + 1)], node_id[pid(i + 1, j + 1, k)]};
              break;
            case 4:  // -z
              f.nodes = {node_id[pid(i, j, k)], node_id[pid(i, j + 1, k)],
                         node_id[pid(i + 1, j + 1, k)], node_id[pid(i + 1, j, k)]};
              break;
            default:  // +z
              f.nodes = {node_id[pid(i, j, k + 1)], node_id[pid(i + 1, j, k + 1)],
                         node_id[pid(i + 1, j + 1, k + 1)], node_id[pid(i, j + 1, k + 1)]};
              break;
          }
          Vec3 c = {0, 0, 0};
          for (int a = 0; a < 4; ++a) c = vadd(c, mesh.nodes[f.nodes[a]]);
          f.center = vscale(c, 0.25);
          mesh.faces.push_back(f);
        }
      }

  if (n_dirichlet == 0) fail(ErrorCode::kMesh, "build_mesh: clamped cavity surface not resolved");
  return mesh;
}

std::vector<SurfacePoint> surface_quadrature(const Mesh& mesh, const std::vector<FaceTag>& tags) {
  std::vector<SurfacePoint> pts;
  const double w = mesh.h * mesh.h;
  for (size_t fi = 0; fi < mesh.faces.size(); ++fi) {
    const BoundaryFace& f = mesh.faces[fi];
    if (std::find(tags.begin(), tags.end(), f.tag) == tags.end()) continue;
    pts.push_back({static_cast<int>(fi), f.center, f.normal, w});
  }
  if (pts.empty()) fail(ErrorCode::kMesh, "surface_quadrature: no faces carry the requested tags");
  return pts;
}

}  // namespace lcf
