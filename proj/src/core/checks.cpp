#include "checks.hpp"

#include <cmath>

#include "errors.hpp"

namespace stcmc {

namespace {

InequalityVerdict make_verdict(std::string name, double lhs, double rhs, double scale, double tol) {
  InequalityVerdict v;
  v.name = std::move(name);
  v.lhs = lhs;
  v.rhs = rhs;
  v.slack = rhs - lhs;
  v.holds = v.slack >= -tol * scale;
  v.equality = std::abs(v.slack) <= tol * scale;
  return v;
}

}  // namespace

std::vector<InequalityVerdict> inequality_report(const InducedGeometry& geom,
                                                 const AmbientModel& model, double lambda,
                                                 double tol) {
  (void)model;
  const double cy_scale = 16.0 * M_PI / geom.total_area;
  const double h2 = geom.area_mean(geom.H.array().square().matrix());
  const double hvec2 =
      geom.area_mean((geom.H.array().square() - geom.P.array().square()).matrix());

  std::vector<InequalityVerdict> out;
  out.push_back(make_verdict("christodoulou-yau", h2, cy_scale, cy_scale, tol));
  out.push_back(make_verdict("lambda-christodoulou-yau", h2, cy_scale - 4.0 / 3.0 * lambda,
                             std::max(cy_scale, std::abs(cy_scale - 4.0 / 3.0 * lambda)), tol));
  out.push_back(make_verdict("stcmc-sharp", hvec2, cy_scale, cy_scale, tol));
  return out;
}

namespace {

// Conformal dilation of the unit sphere toward c in the open ball.
Vec3 mobius_dilate(const Vec3& c, const Vec3& x) {
  const Vec3 xc = x + c;
  return c + (1.0 - c.squaredNorm()) / xc.squaredNorm() * xc;
}

}  // namespace

HerschResult hersch_balance(const InducedGeometry& geom, double tol, int max_iter) {
  if (geom.mesh.param.size() != geom.mesh.vertices.size())
    throw GeometryError("hersch balancing needs a sphere parametrization");
  const int nv = geom.vertex_count();

  auto center_of = [&](const Vec3& c) {
    Vec3 m = Vec3::Zero();
    for (int i = 0; i < nv; ++i) m += geom.area(i) * mobius_dilate(c, geom.mesh.param[i]);
    return Vec3(m / geom.total_area);
  };

  Vec3 c = Vec3::Zero();
  Vec3 mean = center_of(c);
  double step = 1.0;
  int it = 0;
  while (mean.norm() > tol && it < max_iter) {
    Vec3 trial = c - step * mean;
    if (trial.norm() > 0.99) trial *= 0.99 / trial.norm();
    const Vec3 trial_mean = center_of(trial);
    if (trial_mean.norm() < mean.norm()) {
      c = trial;
      mean = trial_mean;
      step = std::min(1.0, 1.5 * step);
    } else {
      step *= 0.5;
      if (step < 1e-14)
        throw NumericalError("hersch balancing stalled; center norm " +
                             std::to_string(mean.norm()));
    }
    ++it;
  }
  if (mean.norm() > tol)
    throw NumericalError("hersch balancing did not converge in " + std::to_string(max_iter) +
                         " iterations; center norm " + std::to_string(mean.norm()));

  HerschResult res;
  res.mobius_center = c;
  res.mean = mean;
  res.iterations = it;
  res.fields.resize(nv);
  for (int i = 0; i < nv; ++i) res.fields[i] = mobius_dilate(c, geom.mesh.param[i]);

  const OperatorForms forms = assemble_laplacian(geom);
  double energy = 0;
  for (int comp = 0; comp < 3; ++comp) {
    VectorXd phi(nv);
    for (int i = 0; i < nv; ++i) phi(i) = res.fields[i](comp);
    energy += phi.dot(forms.stiffness * phi);
  }
  res.conformal_energy = energy;
  return res;
}

InequalityVerdict el_soufi_ilias_check(const InducedGeometry& geom, const VectorXd& q,
                                       const EigOptions& eig, double tol) {
  OperatorForms forms = assemble_laplacian(geom);
  forms.potential = q;
  const double lambda2 = mean_zero_minimum(forms, 1.0, eig);
  const double lhs = lambda2 * geom.total_area;
  const double rhs = 8.0 * M_PI + geom.integrate(q);
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 8.0 * M_PI});
  return make_verdict("el-soufi-ilias", lhs, rhs, scale, tol);
}

GaussResiduals gauss_residual(const InducedGeometry& geom, const AmbientModel& model) {
  const int nv = geom.vertex_count();
  GaussResiduals res;
  res.riemannian.resize(nv);
  res.spacetime.resize(nv);
  for (int i = 0; i < nv; ++i) {
    const Vec3& x = geom.mesh.vertices[i];
    const DataJet jet = sample_initial_data(model, x);
    const Mat3 ric = ricci3(jet);
    const double sc3 = (jet.g.inverse() * ric).trace();
    const Vec3& nu = geom.frame[i].nu;
    const double ric_nn = nu.dot(ric * nu);

    res.riemannian(i) = geom.scal(i) - (sc3 - 2.0 * ric_nn + 0.5 * geom.H(i) * geom.H(i) -
                                        geom.B0_norm2(i));

    const FrameData frame{nu, geom.H(i), geom.P(i)};
    const SpacetimeCurvature st = spacetime_curvature(model, x, frame);
    const double lhs = st.scalar4 + 2.0 * st.ricci_lk - 0.5 * st.rm_klkl;
    const double rhs = geom.scal(i) + 0.5 * geom.theta_l(i) * geom.theta_k(i) +
                       geom.chi_l0_norm2(i) + geom.chi_k0_norm2(i);
    res.spacetime(i) = lhs - rhs;
  }
  res.l1_riemannian = geom.integrate(res.riemannian.cwiseAbs());
  res.l1_spacetime = geom.integrate(res.spacetime.cwiseAbs());
  res.total_curvature = geom.integrate(geom.scal);
  return res;
}

}  // namespace stcmc
