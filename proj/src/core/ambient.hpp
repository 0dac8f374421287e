#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>

#include "expr.hpp"

namespace stcmc {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

enum class ModelKind {
  minkowski,      // flat slice of Minkowski, Cartesian chart
  schwarzschild,  // time-symmetric Schwarzschild slice, areal-radius chart (r = |x|)
  hyperbolic,     // hyperbolic space form, conformal ball chart
  spherical,      // spherical space form, conformal (stereographic) chart
  cosmological,   // Lambda-vacuum slice: space form with kappa = Lambda/3
  conformal,      // user conformal factor, g = phi^4 delta, optional K field
};

/// Policy declaring Ein(nu,nu) for conformal models. The remaining Einstein
/// contractions involving the slice normal n follow from the constraint
/// equations; Ein(nu,nu) does not, so it has to be declared.
enum class EinsteinPolicy { unavailable, assume_vacuum, constant_lambda, explicit_field };

/// Pointwise first/second jet of the initial data (g, K) in the chart.
struct DataJet {
  Mat3 g;                                  // metric components g_ij
  std::array<Mat3, 3> dg;                  // dg[k](i,j) = d_k g_ij
  std::array<std::array<Mat3, 3>, 3> ddg;  // ddg[k][l](i,j) = d_k d_l g_ij
  Mat3 K;                                  // extrinsic curvature K_ij
  std::array<Mat3, 3> dK;                  // dK[k](i,j) = d_k K_ij
};

/// Analytic ambient model, immutable after construction. All operations on a
/// model are pure and safe to call concurrently.
class AmbientModel {
 public:
  static AmbientModel minkowski();
  static AmbientModel schwarzschild(double mass);
  static AmbientModel hyperbolic(double kappa);  // sectional curvature, kappa < 0
  static AmbientModel spherical(double kappa);   // sectional curvature, kappa > 0
  static AmbientModel cosmological(double lambda);
  static AmbientModel conformal(FieldExpr phi, std::array<FieldExpr, 6> k_field,
                                EinsteinPolicy policy, double lambda = 0.0,
                                FieldExpr einstein_nn = {});

  ModelKind kind() const { return kind_; }
  double mass() const { return mass_; }
  double curvature() const { return kappa_; }
  /// Cosmological constant of the spacetime extension (0 for vacuum kinds).
  double lambda() const { return lambda_; }
  EinsteinPolicy policy() const { return policy_; }
  std::string kind_name() const;

  bool vacuum() const { return kind_ == ModelKind::minkowski || kind_ == ModelKind::schwarzschild; }
  /// True when the 4D curvature contractions used by the spacetime Gauss
  /// identity are available in closed form.
  bool has_spacetime_curvature() const { return kind_ != ModelKind::conformal; }

  /// Throws DomainError if x is outside the chart domain.
  void check_point(const Vec3& x) const;

 private:
  AmbientModel() = default;
  ModelKind kind_ = ModelKind::minkowski;
  double mass_ = 0.0;
  double kappa_ = 0.0;
  double lambda_ = 0.0;
  EinsteinPolicy policy_ = EinsteinPolicy::unavailable;
  FieldExpr phi_;
  std::array<FieldExpr, 6> k_field_{};  // xx, xy, xz, yy, yz, zz
  FieldExpr einstein_nn_;
  double fd_step_ = 1e-5;

  friend DataJet sample_initial_data(const AmbientModel&, const Vec3&);
  friend class EinsteinEval;
};

DataJet sample_initial_data(const AmbientModel& model, const Vec3& x);

/// Christoffel symbols of the slice metric: result[a](b,c) = Gamma^a_{bc}.
std::array<Mat3, 3> christoffel(const DataJet& jet);

/// Ricci tensor of the slice metric, from the analytic second jet.
Mat3 ricci3(const DataJet& jet);
double scalar3(const DataJet& jet);

struct ConstraintDensities {
  double mu;  // energy density, Ein(n, n)
  Vec3 J;     // momentum density one-form components J_i
};
ConstraintDensities constraint_densities(const AmbientModel& model, const Vec3& x);

enum class FrameVector { n, nu, ell, k, U };

/// Spatial frame data resolving nu- and U-dependent contractions.
/// `nu` is the outward unit normal in chart components (g-normalized);
/// H and P are only consulted for the U tag.
struct FrameData {
  Vec3 nu = Vec3::Zero();
  double H = 0.0;
  double P = 0.0;
};

/// Analytic Einstein tensor contraction Ein(a, b) of the spacetime extension.
double einstein_components(const AmbientModel& model, const Vec3& x, FrameVector a, FrameVector b,
                           const FrameData& frame);

struct SpacetimeCurvature {
  double scalar4;   // 4D scalar curvature
  double ricci_lk;  // Ric(ell, k)
  double rm_klkl;   // Rm(k, ell, ell, k)
};
/// Curvature contractions entering the spacetime Gauss identity, with the
/// null frame ell = n + nu, k = n - nu.
SpacetimeCurvature spacetime_curvature(const AmbientModel& model, const Vec3& x,
                                       const FrameData& frame);

}  // namespace stcmc
