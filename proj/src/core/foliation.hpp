#pragma once

#include <vector>

#include "ambient.hpp"
#include "stability.hpp"

namespace stcmc {

/// Closed-form radial profile H^2 - P^2 of centered round spheres of areal
/// radius R in a spherically symmetric model.
double radial_h2_minus_p2(const AmbientModel& model, double R);

/// Hawking energy of the centered round sphere of areal radius R (closed form).
double round_sphere_hawking(const AmbientModel& model, double R);

/// Solves H^2 - P^2 = 4/sigma^2 for the areal radius on the outer branch of
/// the radial profile, to relative tolerance 1e-12. Throws when no bracket
/// with a sign change exists (reporting the scanned interval).
double solve_stcmc_radius(const AmbientModel& model, double sigma);

struct FoliationLeafRecord {
  double sigma;
  double areal_radius;
  double hawking;
  double constant_mode_value;
  double variational_margin;
  double relation_residual;
  double closed_form_constant_mode;  // 16 pi m H^2 / r reference in Schwarzschild
};

struct RelationCheck {
  std::vector<FoliationLeafRecord> leaves;
  double fitted_exponent;  // decay order of the area-radius relation residual
  bool residual_zero;      // all residuals at rounding level (flat data)
};

/// Residual of 1/r^2 = 1/sigma^2 + 2 E /sigma^3 across the sigma list, with
/// the decay exponent fitted by least squares on log-log data.
RelationCheck area_radius_relation_check(const AmbientModel& model,
                                         const std::vector<double>& sigmas);

/// Meshes centered spheres of the given areal radii in the mass-m
/// Schwarzschild slice (Minkowski for m = 0) and evaluates both stability
/// quantities per leaf.
std::vector<FoliationLeafRecord> schwarzschild_margin_table(double m,
                                                            const std::vector<double>& r_list,
                                                            int level,
                                                            const StabilityOptions& opts = {});

struct NullLeafMargin {
  double lhs;        // 4/sigma^2 + 2m/sigma^3
  double threshold;  // 16 pi / |Sigma| = 4/sigma^2
  double margin;     // 2m/sigma^3
  double h2;         // truncated |H|^2 = 4/sigma^2 - 8m/sigma^3
  double scal;       // truncated Sc = 2/sigma^2
  double area;       // 4 pi sigma^2
};

/// Arithmetic of the published null-foliation expansions with the
/// O(sigma^-4) remainders dropped.
NullLeafMargin null_leaf_margin(double sigma, double m);

}  // namespace stcmc
