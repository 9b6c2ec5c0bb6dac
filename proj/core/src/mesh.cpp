#include "leray/mesh.hpp"

#include <algorithm>
#include <cmath>

#include "leray/errors.hpp"
#include "leray/log.hpp"

namespace leray {

double Mesh::triangle_area(std::size_t k) const {
  const auto& t = triangles[k];
  const Vec2& a = vertices[t[0]];
  const Vec2& b = vertices[t[1]];
  const Vec2& c = vertices[t[2]];
  return 0.5 * (b - a).cross(c - a);
}

Mesh build_mesh(std::shared_ptr<const StripGeometry> geometry, double zeta,
                double h) {
  if (!geometry) throw ParameterError("build_mesh: null geometry");
  const StripGeometry& g = *geometry;
  if (!(zeta > g.s0 + 1.0))
    throw ParameterError("build_mesh: zeta must exceed s0 + 1");
  if (!(h > 0.0) || h > std::min(g.c0, 1.0) / 4.0 * (1.0 + 1e-12))
    throw ParameterError("build_mesh: h must lie in (0, min(c0,1)/4]");

  // Column spacing: resolve wall curvature so the vertical chord sagitta
  // hx^2 |f''| / 8 stays below 1e-3 h (0.9 safety factor).
  double hx_limit = h;
  if (g.d2_max > 0.0)
    hx_limit = std::min(h, 0.9 * std::sqrt(8.0e-3 * h / g.d2_max));
  int nx = static_cast<int>(std::ceil(2.0 * zeta / hx_limit));
  if (nx % 2 != 0) ++nx;  // keep a vertex column exactly on x1 = 0

  double max_width = 0.0;
  for (int i = 0; i <= nx; ++i) {
    const double x = -zeta + 2.0 * zeta * i / nx;
    max_width = std::max(max_width, g.width(x));
  }
  const int ny = std::max(2, static_cast<int>(std::ceil(max_width / h)));

  Mesh mesh;
  mesh.geometry = geometry;
  mesh.h = h;
  mesh.zeta = zeta;
  mesh.nx = nx;
  mesh.ny = ny;

  mesh.columns.resize(nx + 1);
  for (int i = 0; i <= nx; ++i)
    mesh.columns[i] = -zeta + 2.0 * zeta * i / nx;
  mesh.columns[nx / 2] = 0.0;

  mesh.vertices.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int i = 0; i <= nx; ++i) {
    const double x = mesh.columns[i];
    const double fl = g.f_low(x);
    const double w = g.width(x);
    for (int j = 0; j <= ny; ++j)
      mesh.vertices.push_back({x, fl + w * j / ny});
  }

  mesh.triangles.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const int v00 = mesh.vertex_index(i, j);
      const int v10 = mesh.vertex_index(i + 1, j);
      const int v11 = mesh.vertex_index(i + 1, j + 1);
      const int v01 = mesh.vertex_index(i, j + 1);
      if ((i + j) % 2 == 0) {
        mesh.triangles.push_back({v00, v10, v11});
        mesh.triangles.push_back({v00, v11, v01});
      } else {
        mesh.triangles.push_back({v00, v10, v01});
        mesh.triangles.push_back({v10, v11, v01});
      }
    }
  }

  for (int i = 0; i < nx; ++i) {
    mesh.boundary_edges.push_back({mesh.vertex_index(i, 0),
                                   mesh.vertex_index(i + 1, 0),
                                   BoundaryTag::kWallLower});
    mesh.boundary_edges.push_back({mesh.vertex_index(i, ny),
                                   mesh.vertex_index(i + 1, ny),
                                   BoundaryTag::kWallUpper});
  }
  for (int j = 0; j < ny; ++j) {
    mesh.boundary_edges.push_back({mesh.vertex_index(0, j),
                                   mesh.vertex_index(0, j + 1),
                                   BoundaryTag::kEndLeft});
    mesh.boundary_edges.push_back({mesh.vertex_index(nx, j),
                                   mesh.vertex_index(nx, j + 1),
                                   BoundaryTag::kEndRight});
  }

  // Wall arc length per column (anchored at the x1 = 0 column).
  mesh.s_lower_columns.assign(nx + 1, 0.0);
  mesh.s_upper_columns.assign(nx + 1, 0.0);
  auto accumulate = [&](const WallProfile& wall, std::vector<double>& s_cols) {
    auto speed = [&wall](double x) {
      const double d = wall.df(x);
      return std::sqrt(1.0 + d * d);
    };
    for (int i = 1; i <= nx; ++i)
      s_cols[i] = s_cols[i - 1] +
                  gauss_integrate(speed, mesh.columns[i - 1], mesh.columns[i], 8);
    const double anchor = s_cols[nx / 2];
    for (double& s : s_cols) s -= anchor;
  };
  accumulate(*g.lower_profile, mesh.s_lower_columns);
  accumulate(*g.upper_profile, mesh.s_upper_columns);

  for (std::size_t k = 0; k < mesh.triangles.size(); ++k)
    if (!(mesh.triangle_area(k) > 0.0))
      throw MeshError("build_mesh: non-positive triangle area");

  // Wall-resolution check: chord sagitta against the analytic wall.
  const double sagitta_tol = 1.0e-3 * h;
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    if (e.tag != BoundaryTag::kWallLower && e.tag != BoundaryTag::kWallUpper)
      continue;
    const WallProfile& wall = e.tag == BoundaryTag::kWallLower
                                  ? *g.lower_profile
                                  : *g.upper_profile;
    const Vec2 mid = 0.5 * (mesh.vertices[e.a] + mesh.vertices[e.b]);
    if (std::abs(wall.f(mid.x) - mid.y) > sagitta_tol)
      throw MeshError("build_mesh: wall chord error exceeds 1e-3 h");
  }

  log_debug("build_mesh: nx=", nx, " ny=", ny, " vertices=",
            mesh.vertices.size(), " triangles=", mesh.triangles.size());
  return mesh;
}

}  // namespace leray
