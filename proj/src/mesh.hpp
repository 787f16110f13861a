#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "design.hpp"
#include "tensor.hpp"

namespace lcf {

enum class FaceTag : int {
  kDirichlet = 0,  // clamped cavity surface
  kNeumann = 1,    // free / loaded outer surface
  kDesigned = 2,   // upper surface generated by the height field
};

/// One boundary quad of the voxel mesh.
struct BoundaryFace {
  std::array<int, 4> nodes;  // corner node ids, outward counter-clockwise
  int element = -1;          // owning hexahedron
  FaceTag tag = FaceTag::kNeumann;
  Vec3 center = {0, 0, 0};
  Vec3 normal = {0, 0, 0};  // unit outward, axis-aligned
};

/// Uniform voxel hexahedral mesh of a component shape. Node and element
/// numbering is deterministic (lexicographic in the underlying grid), so a
/// given (design, h) pair always produces the identical mesh.
struct Mesh {
  double h = 0;                                // voxel edge length
  std::vector<Vec3> nodes;                     // node coordinates
  std::vector<std::array<int, 8>> elements;    // hex connectivity, VTK order
  std::vector<BoundaryFace> faces;             // all boundary quads
  std::vector<int> grid_dims = {0, 0, 0};      // voxel grid extents used

  int node_count() const { return static_cast<int>(nodes.size()); }
  int element_count() const { return static_cast<int>(elements.size()); }
  Vec3 element_center(int e) const;
  double volume() const { return element_count() * h * h * h; }
};

/// Voxelizes the component shape determined by (basic, alpha):
///   lower block {x in box : x3 <= alpha_min} minus the cavity ball,
///   plus the epigraph {alpha_min < x3 < alpha(x1, x2)}.
/// A voxel is included iff its center lies in the shape; alpha is evaluated
/// by bilinear interpolation on the design grid. Cavity-adjacent boundary
/// faces are tagged Dirichlet, top faces of columns Designed, everything
/// else Neumann. Throws Error(kMesh) when the mesh is empty, the clamped
/// face set is empty, or the voxel set is face-disconnected; kInvalidArgument
/// when h does not divide the box extents or h >= clamp_radius / 2.
Mesh build_mesh(const BasicDesign& basic, const DesignField& alpha, double h);

/// One quadrature point per boundary face: face center, outward normal,
/// weight h^2.
struct SurfacePoint {
  int face = -1;  // index into Mesh::faces
  Vec3 x = {0, 0, 0};
  Vec3 normal = {0, 0, 0};
  double weight = 0;
};

/// Midpoint surface quadrature over the faces carrying one of `tags`.
std::vector<SurfacePoint> surface_quadrature(const Mesh& mesh, const std::vector<FaceTag>& tags);

}  // namespace lcf
