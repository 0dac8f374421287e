#pragma once

#include <string>
#include <vector>

#include "ambient.hpp"
#include "geometry.hpp"
#include "operators.hpp"

namespace stcmc {

struct InequalityVerdict {
  std::string name;
  double lhs;
  double rhs;
  double slack;  // rhs - lhs
  bool holds;
  bool equality;
};

/// Verdicts for the curvature bounds: H^2 <= 16pi/|Sigma| (and its Lambda
/// variant) and |H|^2 <= 16pi/|Sigma|, with area-weighted means for
/// non-constant fields. The equality flag fires within `tol` of the
/// curvature scale 16pi/|Sigma|.
std::vector<InequalityVerdict> inequality_report(const InducedGeometry& geom,
                                                 const AmbientModel& model, double lambda,
                                                 double tol = 0.01);

struct HerschResult {
  std::vector<Vec3> fields;   // balanced sphere coordinates per vertex
  Vec3 mobius_center;         // parameter of the final conformal dilation
  Vec3 mean;                  // area-weighted mean after balancing
  int iterations;
  double conformal_energy;    // sum_i int |grad phi_i|^2
};

/// Balances the sphere parametrization by a conformal automorphism so the
/// area-weighted mean of the coordinate fields drops below tol (relative to
/// the area). Damped fixed-point iteration with step halving.
HerschResult hersch_balance(const InducedGeometry& geom, double tol = 1e-8, int max_iter = 500);

/// lambda_2(-Laplace + q)|Sigma| <= 8pi + int q, with lambda_2 the mean-zero
/// constrained minimum.
InequalityVerdict el_soufi_ilias_check(const InducedGeometry& geom, const VectorXd& q,
                                       const EigOptions& eig = {}, double tol = 0.01);

struct GaussResiduals {
  VectorXd riemannian;  // slice Gauss equation residual per vertex
  VectorXd spacetime;   // spacetime Gauss equation residual per vertex
  double l1_riemannian;
  double l1_spacetime;
  double total_curvature;  // int Sc dmu, exactly 8 pi by the angle defect
};

GaussResiduals gauss_residual(const InducedGeometry& geom, const AmbientModel& model);

}  // namespace stcmc
