#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "errors.hpp"

namespace stcmc {

namespace {

double clamp_cos(double c) { return std::clamp(c, -1.0, 1.0); }

// Corner angles of a triangle from its edge Gram matrix.
std::array<double, 3> corner_angles(const Matrix2d& h) {
  const double l1 = std::sqrt(h(0, 0));          // |b - a|
  const double l2 = std::sqrt(h(1, 1));          // |c - a|
  const double a0 = std::acos(clamp_cos(h(0, 1) / (l1 * l2)));
  // Edge from b to c is e2 - e1.
  const double l3 = std::sqrt(h(0, 0) + h(1, 1) - 2 * h(0, 1));
  const double cosb = (h(0, 0) - h(0, 1)) / (l1 * l3);   // <e1, e1 - e2> / ...
  const double a1 = std::acos(clamp_cos(cosb));
  const double a2 = M_PI - a0 - a1;
  return {a0, a1, a2};
}

Vec3 g_normalize(const Mat3& g, const Vec3& v) { return v / std::sqrt(v.dot(g * v)); }

// g-orthonormal right-handed tangent pair against the unit normal.
void make_tangent_basis(const Mat3& g, const Vec3& nu, Vec3& t1, Vec3& t2) {
  int seed = 0;
  const Vec3 gnu = g * nu;
  for (int a = 1; a < 3; ++a)
    if (std::abs(gnu(a)) < std::abs(gnu(seed))) seed = a;
  t1 = Vec3::Unit(seed);
  t1 = g_normalize(g, t1 - nu * nu.dot(g * t1));
  t2 = nu.cross(t1);
  t2 = t2 - nu * nu.dot(g * t2) - t1 * t1.dot(g * t2);
  t2 = g_normalize(g, t2);
  Mat3 orient;
  orient.col(0) = t1;
  orient.col(1) = t2;
  orient.col(2) = nu;
  if (orient.determinant() < 0) t2 = -t2;
}

}  // namespace

double InducedGeometry::area_radius() const { return std::sqrt(total_area / (4.0 * M_PI)); }

InducedGeometry induced_geometry(const SurfaceMesh& mesh, const AmbientModel& model,
                                 const GeometryOptions& opts) {
  const int chi = euler_characteristic(mesh);
  if (chi != 2)
    throw GeometryError("surface is not a topological sphere: Euler characteristic " +
                        std::to_string(chi));

  InducedGeometry geom;
  geom.mesh = mesh;
  const int nv = mesh.vertex_count();
  const int nf = mesh.face_count();

  // Ambient jets at vertices.
  std::vector<DataJet> jet(nv);
  std::vector<std::array<Mat3, 3>> gamma(nv);
  geom.metric.resize(nv);
  for (int i = 0; i < nv; ++i) {
    jet[i] = sample_initial_data(model, mesh.vertices[i]);
    gamma[i] = christoffel(jet[i]);
    geom.metric[i] = jet[i].g;
  }

  // Face caches with the metric at the barycenter.
  geom.face.resize(nf);
  geom.vertex_faces.assign(nv, {});
  for (int f = 0; f < nf; ++f) {
    const auto& tri = mesh.faces[f];
    const Vec3& xa = mesh.vertices[tri[0]];
    const Vec3& xb = mesh.vertices[tri[1]];
    const Vec3& xc = mesh.vertices[tri[2]];
    const Vec3 bary = (xa + xb + xc) / 3.0;
    const Mat3 gf = sample_initial_data(model, bary).g;

    FaceData& fd = geom.face[f];
    fd.edges.col(0) = xb - xa;
    fd.edges.col(1) = xc - xa;
    fd.gram = fd.edges.transpose() * gf * fd.edges;
    const double det = fd.gram.determinant();
    if (!(det > 0) || !(fd.gram(0, 0) > 0))
      throw GeometryError("degenerate face " + std::to_string(f) + " after embedding");
    fd.gram_inv = fd.gram.inverse();
    fd.area_flat = 0.5 * std::sqrt(det);
    fd.area = fd.area_flat;  // corrected after the surface fits below
    fd.angle = corner_angles(fd.gram);
    for (int c = 0; c < 3; ++c) geom.vertex_faces[tri[c]].push_back(f);
  }

  // Vertex 1-rings, ascending for deterministic reductions.
  geom.vertex_neighbors.assign(nv, {});
  {
    std::vector<std::set<int>> nb(nv);
    for (const auto& tri : mesh.faces)
      for (int c = 0; c < 3; ++c) {
        nb[tri[c]].insert(tri[(c + 1) % 3]);
        nb[tri[c]].insert(tri[(c + 2) % 3]);
      }
    for (int i = 0; i < nv; ++i) geom.vertex_neighbors[i].assign(nb[i].begin(), nb[i].end());
  }

  // Angle-weighted face-normal averages anchor the outward orientation; the
  // refined normal comes from the osculating-jet fit below.
  std::vector<Vec3> nu_seed(nv);
  {
    std::vector<Vec3> face_normal(nf);
    for (int f = 0; f < nf; ++f) {
      const auto& tri = mesh.faces[f];
      const Vec3 bary =
          (mesh.vertices[tri[0]] + mesh.vertices[tri[1]] + mesh.vertices[tri[2]]) / 3.0;
      const Mat3 gf = sample_initial_data(model, bary).g;
      const Vec3 w = geom.face[f].edges.col(0).cross(geom.face[f].edges.col(1));
      face_normal[f] = g_normalize(gf, gf.inverse() * w);
    }
    for (int i = 0; i < nv; ++i) {
      Vec3 acc = Vec3::Zero();
      for (int f : geom.vertex_faces[i]) {
        const auto& tri = mesh.faces[f];
        const int corner = tri[0] == i ? 0 : (tri[1] == i ? 1 : 2);
        acc += geom.face[f].angle[corner] * face_normal[f];
      }
      nu_seed[i] = g_normalize(jet[i].g, acc);
    }
  }

  // Ring stencils for the local surface fits, deduplicated and ascending.
  const int rings = std::max(1, opts.fit_rings);
  std::vector<std::vector<int>> stencil(nv);
  {
    std::vector<std::set<int>> acc(nv);
    for (int i = 0; i < nv; ++i) {
      acc[i].insert(geom.vertex_neighbors[i].begin(), geom.vertex_neighbors[i].end());
      std::vector<int> frontier(acc[i].begin(), acc[i].end());
      for (int ring = 1; ring < rings; ++ring) {
        std::vector<int> next;
        for (int j : frontier)
          for (int k : geom.vertex_neighbors[j])
            if (k != i && acc[i].insert(k).second) next.push_back(k);
        frontier = std::move(next);
      }
      stencil[i].assign(acc[i].begin(), acc[i].end());
    }
  }

  geom.frame.resize(nv);
  geom.B.resize(nv);
  geom.H.resize(nv);
  for (int i = 0; i < nv; ++i) {
    const Mat3& g = jet[i].g;
    const Vec3& xi = mesh.vertices[i];

    // Second-order normal coordinates of the stencil around vertex i.
    std::vector<Vec3> rel(stencil[i].size());
    for (size_t s = 0; s < stencil[i].size(); ++s) {
      const Vec3 dx = mesh.vertices[stencil[i][s]] - xi;
      Vec3 corr;
      for (int a = 0; a < 3; ++a) corr(a) = 0.5 * dx.dot(gamma[i][a] * dx);
      rel[s] = dx + corr;
    }

    // Monge fit z = c.u + B(u,u)/2 + higher monomials, iterating the normal
    // direction. Cubic-and-up blocks absorb the higher-order shape and chart
    // terms that would otherwise alias into B.
    int degree = std::max(2, opts.fit_degree);
    auto unknowns = [](int deg) { return (deg + 1) * (deg + 2) / 2 - 1; };
    while (degree > 2 && unknowns(degree) > static_cast<int>(rel.size()) - 2) --degree;
    if (unknowns(degree) > static_cast<int>(rel.size()))
      throw GeometryError("stencil too small for the surface fit at vertex " + std::to_string(i));
    const int nun = unknowns(degree);

    Vec3 nu = nu_seed[i];
    Matrix2d B = Matrix2d::Zero();
    Vec3 t1, t2;
    for (int iter = 0; iter < 3; ++iter) {
      make_tangent_basis(g, nu, t1, t2);
      double scale2 = 0;
      for (const Vec3& e : rel) scale2 += (g * e).dot(e);
      const double scale = std::sqrt(scale2 / rel.size());

      Eigen::MatrixXd A(rel.size(), nun);
      Eigen::VectorXd rhs(rel.size());
      for (size_t s = 0; s < rel.size(); ++s) {
        const Vec3 ge = g * rel[s];
        const double u = ge.dot(t1) / scale;
        const double v = ge.dot(t2) / scale;
        int col = 0;
        for (int total = 1; total <= degree; ++total) {
          for (int a = total; a >= 0; --a) {
            const int b = total - a;
            double m = 1;
            for (int p = 0; p < a; ++p) m *= u;
            for (int p = 0; p < b; ++p) m *= v;
            if (total == 2 && a != 1) m *= 0.5;  // z = ... + B(u,u)/2 ...
            A(s, col++) = m;
          }
        }
        rhs(s) = ge.dot(nu) / scale;
      }
      const Eigen::VectorXd sol = A.colPivHouseholderQr().solve(rhs);
      if (!sol.allFinite())
        throw GeometryError("surface fit failed at vertex " + std::to_string(i));
      B << sol(2), sol(3), sol(3), sol(4);
      B /= -scale;  // graph curvature to B = g(grad nu, .) sign convention
      nu = g_normalize(g, nu - sol(0) * t1 - sol(1) * t2);
    }
    if (nu.dot(g * nu_seed[i]) < 0) nu = -nu;  // keep outward orientation
    make_tangent_basis(g, nu, t1, t2);
    geom.frame[i] = {nu, t1, t2};
    geom.B[i] = B;
    geom.H(i) = B.trace();
  }

  // Quadrature areas: midpoint-sampled metric plus the sagitta bulge of the
  // curved surface over each chordal triangle, sized by the fitted B.
  double total = 0;
  for (int f = 0; f < nf; ++f) {
    const auto& tri = mesh.faces[f];
    FaceData& fd = geom.face[f];
    const Vec3& xa = mesh.vertices[tri[0]];
    const Vec3& xb = mesh.vertices[tri[1]];
    const Vec3& xc = mesh.vertices[tri[2]];
    const Vec3 mids[3] = {0.5 * (xa + xb), 0.5 * (xb + xc), 0.5 * (xc + xa)};
    double a_metric = 0;
    for (const Vec3& mid : mids) {
      const Mat3 gm = sample_initial_data(model, mid).g;
      const Matrix2d gram = fd.edges.transpose() * gm * fd.edges;
      a_metric += 0.5 * std::sqrt(std::max(gram.determinant(), 0.0));
    }
    a_metric /= 3.0;

    // Edge sags s_ab = B(e_ab, e_ab) averaged over the two endpoints.
    auto sag = [&](int va, int vb) {
      const Vec3 e = mesh.vertices[vb] - mesh.vertices[va];
      auto endpoint = [&](int v) {
        const auto& fr = geom.frame[v];
        const Vec3 ge = geom.metric[v] * e;
        const Vector2d u(ge.dot(fr.t1), ge.dot(fr.t2));
        return u.dot(geom.B[v] * u);
      };
      return 0.5 * (endpoint(va) + endpoint(vb));
    };
    const double s12 = sag(tri[0], tri[1]);
    const double s23 = sag(tri[1], tri[2]);
    const double s13 = sag(tri[0], tri[2]);

    // Bulge w(lambda) = -(l1 l2 s12 + l2 l3 s23 + l1 l3 s13)/2 over the flat
    // triangle; 1/2 int |grad w|^2 with the three-midpoint rule (exact here).
    const Vec3 d1 = xa - xc, d2 = xb - xc;
    const Vec3 bary = (xa + xb + xc) / 3.0;
    const Mat3 gb = sample_initial_data(model, bary).g;
    Matrix2d gram3;
    gram3(0, 0) = d1.dot(gb * d1);
    gram3(0, 1) = gram3(1, 0) = d1.dot(gb * d2);
    gram3(1, 1) = d2.dot(gb * d2);
    const Matrix2d gram3_inv = gram3.inverse();
    const double lam_mid[3][2] = {{0.5, 0.5}, {0.0, 0.5}, {0.5, 0.0}};
    double bulge = 0;
    for (const auto& lm : lam_mid) {
      const double l1 = lm[0], l2 = lm[1], l3 = 1.0 - l1 - l2;
      const Vector2d dw(-0.5 * (l2 * s12 - l2 * s23 + (l3 - l1) * s13),
                        -0.5 * (l1 * s12 + (l3 - l2) * s23 - l1 * s13));
      bulge += dw.dot(gram3_inv * dw);
    }
    bulge *= fd.area_flat / 3.0;
    fd.area = a_metric + 0.5 * bulge;
    total += fd.area;
  }
  geom.total_area = total;

  // Ambient K restricted to the surface, and the twist one-form.
  geom.Ktan.resize(nv);
  geom.s_ell.resize(nv);
  geom.P.resize(nv);
  for (int i = 0; i < nv; ++i) {
    const auto& fr = geom.frame[i];
    const Mat3& K = jet[i].K;
    Matrix2d kt;
    kt(0, 0) = fr.t1.dot(K * fr.t1);
    kt(0, 1) = kt(1, 0) = fr.t1.dot(K * fr.t2);
    kt(1, 1) = fr.t2.dot(K * fr.t2);
    geom.Ktan[i] = kt;
    geom.P(i) = kt.trace();
    geom.s_ell[i] = Vector2d(fr.t1.dot(K * fr.nu), fr.t2.dot(K * fr.nu));
  }

  // Angle defect curvature and vertex areas.
  geom.defect.resize(nv);
  geom.area.resize(nv);
  geom.scal.resize(nv);
  for (int i = 0; i < nv; ++i) {
    double angles = 0;
    double a_bar = 0;
    double a_mix = 0;
    for (int f : geom.vertex_faces[i]) {
      const auto& tri = mesh.faces[f];
      const FaceData& fd = geom.face[f];
      const int corner = tri[0] == i ? 0 : (tri[1] == i ? 1 : 2);
      angles += fd.angle[corner];
      a_bar += fd.area / 3.0;

      const bool obtuse = *std::max_element(fd.angle.begin(), fd.angle.end()) > M_PI / 2.0;
      if (obtuse) {
        a_mix += fd.angle[corner] > M_PI / 2.0 ? fd.area / 2.0 : fd.area / 4.0;
      } else {
        // Voronoi corner area: (|e_left|^2 cot(angle_right) + |e_right|^2 cot(angle_left)) / 8,
        // rescaled so the corner pieces tile the corrected face area.
        const double l01 = fd.gram(0, 0);                             // |ab|^2
        const double l02 = fd.gram(1, 1);                             // |ac|^2
        const double l12 = fd.gram(0, 0) + fd.gram(1, 1) - 2 * fd.gram(0, 1);  // |bc|^2
        auto cot = [](double ang) { return std::cos(ang) / std::sin(ang); };
        double va = 0;
        if (corner == 0) va = l01 * cot(fd.angle[2]) + l02 * cot(fd.angle[1]);
        if (corner == 1) va = l01 * cot(fd.angle[2]) + l12 * cot(fd.angle[0]);
        if (corner == 2) va = l02 * cot(fd.angle[1]) + l12 * cot(fd.angle[0]);
        a_mix += va / 8.0 * (fd.area / fd.area_flat);
      }
    }
    geom.defect(i) = 2.0 * M_PI - angles;
    geom.area(i) = opts.area_type == VertexAreaType::mixed ? a_mix : a_bar;
    if (!(geom.area(i) > 0))
      throw GeometryError("nonpositive vertex area at vertex " + std::to_string(i));
  }
  for (int i = 0; i < nv; ++i) geom.scal(i) = 2.0 * geom.defect(i) / geom.area(i);

  // Null expansions and trace-free parts.
  geom.theta_l = geom.H + geom.P;
  geom.theta_k = -geom.H + geom.P;
  geom.B_norm2.resize(nv);
  geom.B0_norm2.resize(nv);
  geom.chi_l_norm2.resize(nv);
  geom.chi_k_norm2.resize(nv);
  geom.chi_l0_norm2.resize(nv);
  geom.chi_k0_norm2.resize(nv);
  for (int i = 0; i < nv; ++i) {
    auto norm2 = [](const Matrix2d& m) { return m.squaredNorm(); };
    auto tracefree = [](const Matrix2d& m) {
      return Matrix2d(m - 0.5 * m.trace() * Matrix2d::Identity());
    };
    const Matrix2d chi_l = geom.Ktan[i] + geom.B[i];
    const Matrix2d chi_k = geom.Ktan[i] - geom.B[i];
    geom.B_norm2(i) = norm2(geom.B[i]);
    geom.B0_norm2(i) = norm2(tracefree(geom.B[i]));
    geom.chi_l_norm2(i) = norm2(chi_l);
    geom.chi_k_norm2(i) = norm2(chi_k);
    geom.chi_l0_norm2(i) = norm2(tracefree(chi_l));
    geom.chi_k0_norm2(i) = norm2(tracefree(chi_k));
  }
  return geom;
}

std::vector<Vector2d> vertex_gradient(const InducedGeometry& geom, const VectorXd& field) {
  const int nv = geom.vertex_count();
  const int nf = geom.mesh.face_count();
  std::vector<Vec3> face_grad(nf);
  for (int f = 0; f < nf; ++f) {
    const auto& tri = geom.mesh.faces[f];
    const Vector2d dfield(field(tri[1]) - field(tri[0]), field(tri[2]) - field(tri[0]));
    face_grad[f] = geom.face[f].edges * (geom.face[f].gram_inv * dfield);
  }
  std::vector<Vector2d> out(nv);
  for (int i = 0; i < nv; ++i) {
    Vec3 acc = Vec3::Zero();
    double wsum = 0;
    for (int f : geom.vertex_faces[i]) {
      acc += geom.face[f].area * face_grad[f];
      wsum += geom.face[f].area;
    }
    acc /= wsum;
    // Tangential components u_a = g(t_a, acc) in the orthonormal basis.
    const auto& fr = geom.frame[i];
    const Vec3 gacc = geom.metric[i] * acc;
    out[i] = Vector2d(fr.t1.dot(gacc), fr.t2.dot(gacc));
  }
  return out;
}

}  // namespace stcmc
