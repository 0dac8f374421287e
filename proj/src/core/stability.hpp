#pragma once

#include <Eigen/Dense>

#include "ambient.hpp"
#include "geometry.hpp"
#include "operators.hpp"

namespace stcmc {

struct StabilityOptions {
  /// A surface counts as STCMC when the coefficient of variation of
  /// theta_l*theta_k over vertices stays below this.
  double stcmc_cov_tol = 1e-3;
  /// Near-null guard: |theta_l*theta_k| below this multiple of 16*pi/|Sigma|
  /// is treated as the null regime.
  double near_null_factor = 1e-10;
  EigOptions eig;
};

/// Spacelike-regime summary of theta_l * theta_k over the surface.
struct RegimeInfo {
  double theta_product_mean;  // area-weighted mean, negative in the spacelike regime
  double theta_product_cov;   // area-weighted coefficient of variation
  bool stcmc_within_tol;
};

/// Checks theta_l*theta_k < 0 away from the null guard everywhere and
/// summarizes its spread. Throws RegimeError listing offending vertices.
RegimeInfo stcmc_regime(const InducedGeometry& geom, const StabilityOptions& opts = {});

/// Per-vertex pieces of the stability potential; V combines them as
/// V = 2*twist2 - Sc + 2*ein_uu - theta_l*theta_k/2 + shear.
struct PotentialField {
  VectorXd V;
  VectorXd twist2;  // |grad log|theta_l| - s_ell|^2
  VectorXd shear;   // -(theta_k/2theta_l)|tracefree chi_l|^2 - (theta_l/2theta_k)|tracefree chi_k|^2
  VectorXd ein_uu;  // Ein(U, U)
};

PotentialField stcmc_potential(const InducedGeometry& geom, const AmbientModel& model,
                               const StabilityOptions& opts = {});

/// theta_l*theta_k * integral of V, the second variation of area in the mean
/// curvature direction (area-weighted mean of the product on near-STCMC data).
double constant_mode_stcmc(const InducedGeometry& geom, const PotentialField& pot,
                           const StabilityOptions& opts = {});

struct StabilityAssessment {
  enum class Kind { cmc, stcmc };
  Kind kind;
  double constant_mode_value;
  double variational_minimum;
  double threshold;
  double margin;  // variational_minimum - threshold
  bool verdict_constant_mode;
  bool verdict_variational;
  double h2_mean;             // area mean of |H|^2 (stcmc) resp. H^2 (cmc)
  double theta_product_cov = 0.0;
  bool stcmc_within_tol = true;
  double hersch_integral = 0.0;  // cmc only: integral of |B|^2 + Ric(nu,nu)
};

StabilityAssessment variational_margin_stcmc(const InducedGeometry& geom,
                                             const PotentialField& pot,
                                             const StabilityOptions& opts = {});

/// Jacobi-form assessment for CMC surfaces in a Riemannian slice (K ignored):
/// constant-mode value against the -(H^2/2 + 2*Lambda/3)|Sigma| threshold and
/// the mean-zero minimum of the Jacobi form against zero.
StabilityAssessment cmc_jacobi_margin(const InducedGeometry& geom, const AmbientModel& model,
                                      double lambda, const StabilityOptions& opts = {});

/// Null frame boost ell -> f ell, k -> f^-1 k applied to the stored frame
/// fields. The surface data (B, K, H, P, areas) is frame independent and kept;
/// the returned geometry carries a non-canonical frame with theta_l != H + P.
InducedGeometry boost_transform(const InducedGeometry& geom, const VectorXd& f);

struct ObserverFrame {
  VectorXd u_n, u_nu;  // components of U in the (n, nu) basis
  VectorXd ein_uu;
  /// |2 Ein(U,U) - (Ein(l,k) - theta_k/(2theta_l) Ein(l,l)
  ///   - theta_l/(2theta_k) Ein(k,k))| per vertex
  VectorXd identity_residual;
};

ObserverFrame observer_frame(const InducedGeometry& geom, const AmbientModel& model,
                             const StabilityOptions& opts = {});

}  // namespace stcmc
