#include "energies.hpp"

#include <cmath>

#include "errors.hpp"

namespace stcmc {

double hawking_energy(const InducedGeometry& geom) {
  const VectorXd prod = geom.theta_l.array() * geom.theta_k.array();
  const double integral = geom.integrate(prod);
  return std::sqrt(geom.total_area / (16.0 * M_PI)) * (1.0 + integral / (16.0 * M_PI));
}

double intrinsic_roundness_cov(const InducedGeometry& geom) {
  // One ring of mass-weighted averaging removes the valence imprint of the
  // angle-defect field before measuring its spread.
  const int nv = geom.vertex_count();
  VectorXd smooth(nv);
  for (int i = 0; i < nv; ++i) {
    double acc = geom.scal(i) * geom.area(i);
    double w = geom.area(i);
    for (int j : geom.vertex_neighbors[i]) {
      acc += geom.scal(j) * geom.area(j);
      w += geom.area(j);
    }
    smooth(i) = acc / w;
  }
  const double mean = geom.area_mean(smooth);
  const VectorXd dev = smooth.array() - mean;
  const double var = geom.area_mean(dev.array().square().matrix());
  return std::sqrt(var) / std::abs(mean);
}

double kly_energy_round(const InducedGeometry& geom, double roundness_cov_tol) {
  const double cov = intrinsic_roundness_cov(geom);
  if (cov > roundness_cov_tol)
    throw GeometryError(
        "surface is not intrinsically round (curvature spread " + std::to_string(cov) +
        " exceeds " + std::to_string(roundness_cov_tol) +
        "); general isometric-embedding reference energies are not supported");
  const int nv = geom.vertex_count();
  const double h0 = 2.0 / geom.area_radius();
  VectorXd integrand(nv);
  for (int i = 0; i < nv; ++i) {
    const double p = geom.theta_l(i) * geom.theta_k(i);
    if (!(p < 0))
      throw RegimeError("kly energy needs a spacelike mean curvature vector; theta_l*theta_k = " +
                        std::to_string(p) + " at vertex " + std::to_string(i));
    integrand(i) = h0 - std::sqrt(-p);
  }
  return geom.integrate(integrand) / (8.0 * M_PI);
}

DeficitTerms deficit_decomposition(const InducedGeometry& geom, const PotentialField& pot,
                                   const RegimeInfo& regime) {
  const double area = geom.total_area;
  DeficitTerms t;
  t.deficit = 16.0 * M_PI / area + regime.theta_product_mean;
  t.energy_density_term = 4.0 / area * geom.integrate(pot.ein_uu);
  t.shear_term = 2.0 / area * geom.integrate(pot.shear);
  t.twist_term = 4.0 / area * geom.integrate(pot.twist2);
  t.constant_mode_slack = -2.0 / area * geom.integrate(pot.V);
  t.identity_residual = t.deficit - (t.energy_density_term + t.shear_term + t.twist_term +
                                     t.constant_mode_slack);
  return t;
}

}  // namespace stcmc
