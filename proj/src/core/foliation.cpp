#include "foliation.hpp"

#include <cmath>

#include "energies.hpp"
#include "errors.hpp"

namespace stcmc {

double radial_h2_minus_p2(const AmbientModel& model, double R) {
  switch (model.kind()) {
    case ModelKind::minkowski:
      return 4.0 / (R * R);
    case ModelKind::schwarzschild:
      return 4.0 / (R * R) * (1.0 - 2.0 * model.mass() / R);
    case ModelKind::hyperbolic:
    case ModelKind::spherical:
      return 4.0 / (R * R) - 4.0 * model.curvature();
    case ModelKind::cosmological:
      return 4.0 / (R * R) - 4.0 * model.lambda() / 3.0;
    case ModelKind::conformal:
      break;
  }
  throw UnavailableError("radial profile unavailable: model is not spherically symmetric");
}

double round_sphere_hawking(const AmbientModel& model, double R) {
  return 0.5 * R * (1.0 - 0.25 * R * R * radial_h2_minus_p2(model, R));
}

double solve_stcmc_radius(const AmbientModel& model, double sigma) {
  if (!(sigma > 0)) throw InvalidArgument("sigma must be positive");
  const double target = 4.0 / (sigma * sigma);
  auto f = [&](double R) { return radial_h2_minus_p2(model, R) - target; };

  // Scan the outer (decreasing) branch for a sign change.
  double lo = 1e-8 * sigma;
  if (model.kind() == ModelKind::schwarzschild) lo = 3.0 * model.mass() * (1.0 + 1e-12);
  if (model.kind() == ModelKind::spherical ||
      (model.kind() == ModelKind::cosmological && model.lambda() > 0)) {
    const double kappa =
        model.kind() == ModelKind::spherical ? model.curvature() : model.lambda() / 3.0;
    // Areal radius is capped by the equatorial sphere.
    const double rmax = 1.0 / std::sqrt(kappa);
    double hi = rmax * (1.0 - 1e-13);
    if (f(lo) < 0 || f(hi) > 0)
      throw NumericalError("no STCMC sphere with sigma = " + std::to_string(sigma) +
                           "; scanned [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (f(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  double hi = lo;
  const double fl = f(lo);
  if (!(fl > 0))
    throw NumericalError("no STCMC sphere with sigma = " + std::to_string(sigma) +
                         ": profile already below 4/sigma^2 at the inner end r = " +
                         std::to_string(lo));
  bool bracketed = false;
  for (int k = 0; k < 200; ++k) {
    const double next = std::max(hi * 1.7, 1e-6 * sigma);
    if (f(next) < 0) {
      lo = hi;
      hi = next;
      bracketed = true;
      break;
    }
    hi = next;
    if (hi > 1e12 * sigma) break;
  }
  if (!bracketed)
    throw NumericalError("no STCMC sphere with sigma = " + std::to_string(sigma) +
                         "; scanned [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

RelationCheck area_radius_relation_check(const AmbientModel& model,
                                         const std::vector<double>& sigmas) {
  RelationCheck out;
  std::vector<double> logs, logr;
  for (double sigma : sigmas) {
    FoliationLeafRecord rec{};
    rec.sigma = sigma;
    rec.areal_radius = solve_stcmc_radius(model, sigma);
    rec.hawking = round_sphere_hawking(model, rec.areal_radius);
    const double r = rec.areal_radius;
    rec.relation_residual =
        std::abs(1.0 / (r * r) - 1.0 / (sigma * sigma) - 2.0 * rec.hawking / (sigma * sigma * sigma));
    rec.constant_mode_value = 0;
    rec.variational_margin = 0;
    rec.closed_form_constant_mode = 0;
    out.leaves.push_back(rec);
    if (rec.relation_residual > 1e-14 / (sigma * sigma)) {
      logs.push_back(std::log(sigma));
      logr.push_back(std::log(rec.relation_residual));
    }
  }
  out.residual_zero = logs.empty();
  if (logs.size() >= 2) {
    // Least-squares slope of log(residual) against log(sigma).
    const size_t n = logs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
      sx += logs[i];
      sy += logr[i];
      sxx += logs[i] * logs[i];
      sxy += logs[i] * logr[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.fitted_exponent = -slope;
  } else {
    out.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

std::vector<FoliationLeafRecord> schwarzschild_margin_table(double m,
                                                            const std::vector<double>& r_list,
                                                            int level,
                                                            const StabilityOptions& opts) {
  if (m < 0) throw InvalidArgument("mass must be nonnegative");
  const AmbientModel model = m > 0 ? AmbientModel::schwarzschild(m) : AmbientModel::minkowski();
  std::vector<FoliationLeafRecord> out;
  for (double r : r_list) {
    if (m > 0 && r <= 2 * m)
      throw DomainError("leaf radius " + std::to_string(r) + " inside the excluded region r <= 2m");
    const SurfaceMesh mesh = build_icosphere(level, r);
    const InducedGeometry geom = induced_geometry(mesh, model);
    const PotentialField pot = stcmc_potential(geom, model, opts);
    const StabilityAssessment a = variational_margin_stcmc(geom, pot, opts);

    FoliationLeafRecord rec{};
    const double prof = radial_h2_minus_p2(model, r);
    rec.sigma = 2.0 / std::sqrt(prof);
    rec.areal_radius = r;
    rec.hawking = hawking_energy(geom);
    rec.constant_mode_value = a.constant_mode_value;
    rec.variational_margin = a.margin;
    rec.relation_residual = std::abs(1.0 / (r * r) - prof / 4.0 -
                                     2.0 * round_sphere_hawking(model, r) /
                                         (rec.sigma * rec.sigma * rec.sigma));
    rec.closed_form_constant_mode = 16.0 * M_PI * m * prof / r;
    out.push_back(rec);
  }
  return out;
}

NullLeafMargin null_leaf_margin(double sigma, double m) {
  if (!(sigma > 0)) throw InvalidArgument("sigma must be positive");
  if (m < 0) throw InvalidArgument("mass must be nonnegative");
  NullLeafMargin out;
  const double s2 = sigma * sigma, s3 = s2 * sigma;
  out.h2 = 4.0 / s2 - 8.0 * m / s3;
  out.scal = 2.0 / s2;
  out.area = 4.0 * M_PI * s2;
  out.lhs = 0.5 * out.h2 + out.scal + 6.0 * m / s3;
  out.threshold = 4.0 / s2;  // 16 pi / (4 pi sigma^2), simplified analytically
  out.margin = out.lhs - out.threshold;
  return out;
}

}  // namespace stcmc
