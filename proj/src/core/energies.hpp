#pragma once

#include <optional>

#include "geometry.hpp"
#include "stability.hpp"

namespace stcmc {

/// Hawking energy sqrt(|Sigma|/16pi) (1 + 1/(16pi) int theta_l theta_k).
double hawking_energy(const InducedGeometry& geom);

/// Kijowski-Liu-Yau energy restricted to intrinsically round surfaces, where
/// the reference embedding has H0 = 2/area_radius. Throws when the smoothed
/// scalar-curvature spread exceeds `roundness_cov_tol` (general isometric
/// embeddings are out of scope) or in the null regime.
double kly_energy_round(const InducedGeometry& geom, double roundness_cov_tol = 0.05);

/// Area-weighted coefficient of variation of the (one-ring smoothed)
/// intrinsic curvature; the roundness statistic behind kly_energy_round.
double intrinsic_roundness_cov(const InducedGeometry& geom);

/// Deficit 16pi/|Sigma| - |H|^2 split into the energy-density, shear and
/// twist contributions plus the constant-mode slack, an identity that holds
/// to quadrature precision by construction on genus-0 meshes.
struct DeficitTerms {
  double deficit;
  double energy_density_term;  // (4/|Sigma|) int Ein(U,U)
  double shear_term;           // (2/|Sigma|) int shear density
  double twist_term;           // (4/|Sigma|) int twist^2
  double constant_mode_slack;  // -(2/|Sigma|) int V
  double identity_residual;    // deficit - sum of the four terms
};

DeficitTerms deficit_decomposition(const InducedGeometry& geom, const PotentialField& pot,
                                   const RegimeInfo& regime);

struct EnergyReport {
  double hawking;
  std::optional<double> kly;
  double area_radius;
  DeficitTerms deficit_terms;
};

}  // namespace stcmc
