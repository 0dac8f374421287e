#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ambient.hpp"
#include "mesh.hpp"

namespace stcmc {

using Eigen::Matrix2d;
using Eigen::Vector2d;
using Eigen::VectorXd;

enum class VertexAreaType { mixed, barycentric };

struct GeometryOptions {
  VertexAreaType area_type = VertexAreaType::mixed;
  /// Degree of the local Monge fit behind nu and B (>= 2) and the breadth of
  /// its vertex stencil in rings.
  int fit_degree = 4;
  int fit_rings = 3;
};

/// g-orthonormal frame at a vertex: outward normal and a tangent basis.
struct VertexFrame {
  Vec3 nu;
  Vec3 t1, t2;
};

/// Per-face cache used for quadrature and piecewise-linear gradients.
struct FaceData {
  Eigen::Matrix<double, 3, 2> edges;  // columns e1 = b - a, e2 = c - a (chart)
  Matrix2d gram;                      // induced metric in the edge basis
  Matrix2d gram_inv;
  double area;       // curvature-corrected quadrature area
  double area_flat;  // chordal triangle area behind the cotangent weights
  std::array<double, 3> angle;  // corner angles at a, b, c
};

/// First- and second-fundamental-form data of a surface in an ambient slice.
/// All tensor components are expressed in the per-vertex orthonormal tangent
/// basis, so traces and norms are plain Euclidean ones.
struct InducedGeometry {
  SurfaceMesh mesh;
  std::vector<FaceData> face;
  std::vector<std::vector<int>> vertex_faces;      // ascending face ids
  std::vector<std::vector<int>> vertex_neighbors;  // ascending vertex ids

  VectorXd area;  // vertex area weights, sum = total_area
  double total_area = 0;
  std::vector<VertexFrame> frame;
  std::vector<Mat3> metric;  // ambient metric at each vertex

  std::vector<Matrix2d> B;     // second fundamental form of the surface in the slice
  std::vector<Matrix2d> Ktan;  // ambient K restricted to the tangent plane
  std::vector<Vector2d> s_ell; // normal connection one-form, K(., nu)

  VectorXd H;        // tr B
  VectorXd P;        // tr Ktan
  VectorXd theta_l;  // H + P
  VectorXd theta_k;  // -H + P
  VectorXd B0_norm2;      // |tracefree B|^2
  VectorXd B_norm2;       // |B|^2
  VectorXd chi_l_norm2, chi_k_norm2;
  VectorXd chi_l0_norm2, chi_k0_norm2;
  VectorXd scal;    // Sc^Sigma from the angle defect
  VectorXd defect;  // 2*pi - sum of incident angles

  int vertex_count() const { return mesh.vertex_count(); }
  double integrate(const VectorXd& field) const { return field.dot(area); }
  double area_mean(const VectorXd& field) const { return integrate(field) / total_area; }
  double area_radius() const;
};

InducedGeometry induced_geometry(const SurfaceMesh& mesh, const AmbientModel& model,
                                 const GeometryOptions& opts = {});

/// Piecewise-linear gradient of a vertex field, averaged to vertices with
/// face-area weights and projected to the tangent plane; components in the
/// vertex tangent basis.
std::vector<Vector2d> vertex_gradient(const InducedGeometry& geom, const VectorXd& field);

}  // namespace stcmc
