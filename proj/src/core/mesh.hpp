#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <string>
#include <vector>

namespace stcmc {

using Vec3 = Eigen::Vector3d;

/// Triangulated topological sphere embedded in a chart. Faces are
/// counterclockwise as seen from outside.
struct SurfaceMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
  int level = 0;
  /// Unit directions on the round sphere, one per vertex; empty when the mesh
  /// did not come from a sphere parametrization (e.g. OFF import).
  std::vector<Vec3> param;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int face_count() const { return static_cast<int>(faces.size()); }
};

/// Icosahedron subdivided `level` times and projected to the round sphere of
/// the given radius and center. V = 10*4^level + 2, F = 20*4^level.
SurfaceMesh build_icosphere(int level, double radius, const Vec3& center = Vec3::Zero());

/// Moves the vertex with parametrization direction u to center + rho(u) * u.
SurfaceMesh embed_radial_graph(const SurfaceMesh& mesh, const std::function<double(const Vec3&)>& rho,
                               const Vec3& center = Vec3::Zero());

/// Checks closed orientable 2-manifold structure (every edge shared by
/// exactly two faces, consistently oriented) and returns V - E + F.
int euler_characteristic(const SurfaceMesh& mesh);

SurfaceMesh read_off(const std::string& path);
void write_off(const SurfaceMesh& mesh, const std::string& path);

}  // namespace stcmc
