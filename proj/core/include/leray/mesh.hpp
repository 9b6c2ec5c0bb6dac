#pragma once

#include <array>
#include <memory>
#include <vector>

#include "leray/geometry.hpp"

namespace leray {

enum class BoundaryTag { kWallLower, kWallUpper, kEndLeft, kEndRight };

struct BoundaryEdge {
  int a = 0;  // vertex indices, oriented with increasing x1 (walls) or x2 (ends)
  int b = 0;
  BoundaryTag tag = BoundaryTag::kWallLower;
};

// Boundary-fitted triangulation of the truncated strip S_zeta.  The mesh is
// a mapped structured grid: nx uniform columns over [-zeta, zeta], ny rows
// interpolating between the walls, quads split along checkerboard diagonals
// (nx even, so a column of vertices sits exactly on x1 = 0 and the pattern
// is mirror-symmetric).
struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<BoundaryEdge> boundary_edges;
  double h = 0.0;
  double zeta = 0.0;
  int nx = 0;  // column intervals
  int ny = 0;  // row intervals
  std::vector<double> columns;           // x1 of each column, size nx+1
  std::vector<double> s_lower_columns;   // lower-wall arc length per column
  std::vector<double> s_upper_columns;   // upper-wall arc length per column
  std::shared_ptr<const StripGeometry> geometry;

  int vertex_index(int i, int j) const { return i * (ny + 1) + j; }
  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t triangle_count() const { return triangles.size(); }
  double triangle_area(std::size_t k) const;
};

// Build the triangulation.  Preconditions: zeta > s0 + 1 and
// h < min(c0, 1)/4 (ParameterError otherwise).  Column spacing is reduced
// below h where wall curvature requires it so that the wall-chord sagitta
// stays below 1e-3 h (MeshError if the check fails after construction).
Mesh build_mesh(std::shared_ptr<const StripGeometry> geometry, double zeta,
                double h);

}  // namespace leray
