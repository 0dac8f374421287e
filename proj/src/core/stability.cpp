#include "stability.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace stcmc {

RegimeInfo stcmc_regime(const InducedGeometry& geom, const StabilityOptions& opts) {
  const int nv = geom.vertex_count();
  const double guard = opts.near_null_factor * 16.0 * M_PI / geom.total_area;

  std::vector<int> offending;
  for (int i = 0; i < nv; ++i) {
    const double p = geom.theta_l(i) * geom.theta_k(i);
    if (!(p < -guard)) offending.push_back(i);
  }
  if (!offending.empty()) {
    std::ostringstream os;
    os << "null or non-spacelike mean curvature regime at " << offending.size()
       << " vertices (theta_l*theta_k >= -" << guard << "):";
    for (size_t k = 0; k < offending.size() && k < 8; ++k)
      os << " " << offending[k] << " (" << geom.theta_l(offending[k]) * geom.theta_k(offending[k])
         << ")";
    if (offending.size() > 8) os << " ...";
    throw RegimeError(os.str());
  }

  const VectorXd prod = geom.theta_l.array() * geom.theta_k.array();
  RegimeInfo info;
  info.theta_product_mean = geom.area_mean(prod);
  const VectorXd dev = prod.array() - info.theta_product_mean;
  const double var = geom.area_mean(dev.array().square().matrix());
  info.theta_product_cov = std::sqrt(var) / std::abs(info.theta_product_mean);
  info.stcmc_within_tol = info.theta_product_cov <= opts.stcmc_cov_tol;
  return info;
}

PotentialField stcmc_potential(const InducedGeometry& geom, const AmbientModel& model,
                               const StabilityOptions& opts) {
  stcmc_regime(geom, opts);  // enforces the spacelike regime
  const int nv = geom.vertex_count();

  VectorXd log_theta_l(nv);
  for (int i = 0; i < nv; ++i) log_theta_l(i) = std::log(std::abs(geom.theta_l(i)));
  const auto grad = vertex_gradient(geom, log_theta_l);

  PotentialField pot;
  pot.V.resize(nv);
  pot.twist2.resize(nv);
  pot.shear.resize(nv);
  pot.ein_uu.resize(nv);
  for (int i = 0; i < nv; ++i) {
    const double tl = geom.theta_l(i), tk = geom.theta_k(i);
    pot.twist2(i) = (grad[i] - geom.s_ell[i]).squaredNorm();
    pot.shear(i) =
        -tk / (2.0 * tl) * geom.chi_l0_norm2(i) - tl / (2.0 * tk) * geom.chi_k0_norm2(i);
    FrameData frame{geom.frame[i].nu, geom.H(i), geom.P(i)};
    pot.ein_uu(i) =
        einstein_components(model, geom.mesh.vertices[i], FrameVector::U, FrameVector::U, frame);
    pot.V(i) = 2.0 * pot.twist2(i) - geom.scal(i) + 2.0 * pot.ein_uu(i) - 0.5 * tl * tk +
               pot.shear(i);
  }
  return pot;
}

double constant_mode_stcmc(const InducedGeometry& geom, const PotentialField& pot,
                           const StabilityOptions& opts) {
  const RegimeInfo info = stcmc_regime(geom, opts);
  return info.theta_product_mean * geom.integrate(pot.V);
}

StabilityAssessment variational_margin_stcmc(const InducedGeometry& geom,
                                             const PotentialField& pot,
                                             const StabilityOptions& opts) {
  const RegimeInfo info = stcmc_regime(geom, opts);
  const double c = -info.theta_product_mean;

  OperatorForms forms = assemble_laplacian(geom);
  forms.potential = -pot.V;
  const double min0 = mean_zero_minimum(forms, 2.0, opts.eig);

  StabilityAssessment a;
  a.kind = StabilityAssessment::Kind::stcmc;
  a.constant_mode_value = info.theta_product_mean * geom.integrate(pot.V);
  a.variational_minimum = c * min0;
  a.threshold = 16.0 * M_PI / geom.total_area * c;
  a.margin = a.variational_minimum - a.threshold;
  a.verdict_constant_mode = a.constant_mode_value >= 0;
  a.verdict_variational = a.margin >= 0;
  a.h2_mean = c;
  a.theta_product_cov = info.theta_product_cov;
  a.stcmc_within_tol = info.stcmc_within_tol;
  return a;
}

StabilityAssessment cmc_jacobi_margin(const InducedGeometry& geom, const AmbientModel& model,
                                      double lambda, const StabilityOptions& opts) {
  const int nv = geom.vertex_count();
  VectorXd ric_nn(nv);
  for (int i = 0; i < nv; ++i) {
    const DataJet jet = sample_initial_data(model, geom.mesh.vertices[i]);
    const Vec3& nu = geom.frame[i].nu;
    ric_nn(i) = nu.dot(ricci3(jet) * nu);
  }

  const VectorXd jacobi_q = geom.B_norm2 + ric_nn;  // |B|^2 + Ric(nu,nu)
  StabilityAssessment a;
  a.kind = StabilityAssessment::Kind::cmc;
  a.constant_mode_value = -geom.integrate(jacobi_q);
  a.h2_mean = geom.area_mean(geom.H.array().square().matrix());
  a.threshold = -(0.5 * a.h2_mean + 2.0 / 3.0 * lambda) * geom.total_area;
  a.hersch_integral = geom.integrate(jacobi_q);

  OperatorForms forms = assemble_laplacian(geom);
  forms.potential = -jacobi_q;
  a.variational_minimum = mean_zero_minimum(forms, 1.0, opts.eig);

  a.margin = a.constant_mode_value - a.threshold;
  a.verdict_constant_mode = a.margin >= 0;
  a.verdict_variational = a.variational_minimum >= 0;
  return a;
}

InducedGeometry boost_transform(const InducedGeometry& geom, const VectorXd& f) {
  const int nv = geom.vertex_count();
  if (f.size() != nv) throw InvalidArgument("boost field size mismatch");
  for (int i = 0; i < nv; ++i)
    if (!(f(i) > 0))
      throw InvalidArgument("boost function must be positive; f(" + std::to_string(i) +
                            ") = " + std::to_string(f(i)));

  VectorXd logf(nv);
  for (int i = 0; i < nv; ++i) logf(i) = std::log(f(i));
  const auto grad_logf = vertex_gradient(geom, logf);

  InducedGeometry out = geom;
  for (int i = 0; i < nv; ++i) {
    out.theta_l(i) = f(i) * geom.theta_l(i);
    out.theta_k(i) = geom.theta_k(i) / f(i);
    out.s_ell[i] = geom.s_ell[i] + grad_logf[i];
    const double f2 = f(i) * f(i);
    out.chi_l_norm2(i) = f2 * geom.chi_l_norm2(i);
    out.chi_k_norm2(i) = geom.chi_k_norm2(i) / f2;
    out.chi_l0_norm2(i) = f2 * geom.chi_l0_norm2(i);
    out.chi_k0_norm2(i) = geom.chi_k0_norm2(i) / f2;
  }
  return out;
}

ObserverFrame observer_frame(const InducedGeometry& geom, const AmbientModel& model,
                             const StabilityOptions& opts) {
  stcmc_regime(geom, opts);
  const int nv = geom.vertex_count();
  ObserverFrame obs;
  obs.u_n.resize(nv);
  obs.u_nu.resize(nv);
  obs.ein_uu.resize(nv);
  obs.identity_residual.resize(nv);
  for (int i = 0; i < nv; ++i) {
    const double H = geom.H(i), P = geom.P(i);
    const double q = std::sqrt(H * H - P * P);
    obs.u_n(i) = H / q;
    obs.u_nu(i) = -P / q;
    FrameData frame{geom.frame[i].nu, H, P};
    const Vec3& x = geom.mesh.vertices[i];
    obs.ein_uu(i) = einstein_components(model, x, FrameVector::U, FrameVector::U, frame);
    const double e_lk = einstein_components(model, x, FrameVector::ell, FrameVector::k, frame);
    const double e_ll = einstein_components(model, x, FrameVector::ell, FrameVector::ell, frame);
    const double e_kk = einstein_components(model, x, FrameVector::k, FrameVector::k, frame);
    const double tl = geom.theta_l(i), tk = geom.theta_k(i);
    const double rhs = e_lk - tk / (2.0 * tl) * e_ll - tl / (2.0 * tk) * e_kk;
    obs.identity_residual(i) = std::abs(2.0 * obs.ein_uu(i) - rhs);
  }
  return obs;
}

}  // namespace stcmc
