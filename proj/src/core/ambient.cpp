#include "ambient.hpp"

#include <cmath>

#include "errors.hpp"

namespace stcmc {

namespace {

// Radial metric family g_ij = a(r) delta_ij + b(r) n_i n_j with n = x/r.
// Each closed-form kind supplies (a, a', a'', b, b', b'').
struct RadialProfile {
  double a, da, dda;
  double b, db, ddb;
};

RadialProfile radial_profile(const AmbientModel& m, double r) {
  switch (m.kind()) {
    case ModelKind::minkowski:
      return {1, 0, 0, 0, 0, 0};
    case ModelKind::schwarzschild: {
      const double mass = m.mass();
      const double f = 1.0 - 2.0 * mass / r;
      const double df = 2.0 * mass / (r * r);
      const double ddf = -4.0 * mass / (r * r * r);
      const double b = 1.0 / f - 1.0;
      const double db = -df / (f * f);
      const double ddb = (2.0 * df * df - ddf * f) / (f * f * f);
      return {1, 0, 0, b, db, ddb};
    }
    case ModelKind::hyperbolic:
    case ModelKind::spherical:
    case ModelKind::cosmological: {
      const double kappa =
          m.kind() == ModelKind::cosmological ? m.lambda() / 3.0 : m.curvature();
      const double w = 1.0 + kappa * r * r / 4.0;
      const double dw = kappa * r / 2.0;
      const double ddw = kappa / 2.0;
      const double a = 1.0 / (w * w);
      const double da = -2.0 * dw / (w * w * w);
      const double dda = -2.0 * ddw / (w * w * w) + 6.0 * dw * dw / (w * w * w * w);
      return {a, da, dda, 0, 0, 0};
    }
    case ModelKind::conformal:
      break;
  }
  throw InvalidArgument("radial_profile: not a radial kind");
}

DataJet radial_jet(const AmbientModel& model, const Vec3& x) {
  DataJet jet;
  jet.K.setZero();
  for (auto& d : jet.dK) d.setZero();

  // Near the chart center b vanishes identically for every radial kind here,
  // so clamping r keeps all b/r and da/r ratios at their analytic limits.
  const double r = std::max(x.norm(), 1e-12);
  const RadialProfile p = radial_profile(model, r);
  const Vec3 n = x / r;
  const Mat3 nn = n * n.transpose();
  const Mat3 Q = Mat3::Identity() - nn;  // dn_i/dx_k = Q_ik / r

  jet.g = p.a * Mat3::Identity() + p.b * nn;

  for (int k = 0; k < 3; ++k) {
    Mat3 d = p.da * n(k) * Mat3::Identity() + p.db * n(k) * nn;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) d(i, j) += (p.b / r) * (Q(i, k) * n(j) + n(i) * Q(j, k));
    jet.dg[k] = d;
  }

  const double br1 = p.db / r - p.b / (r * r);
  for (int k = 0; k < 3; ++k) {
    for (int l = 0; l < 3; ++l) {
      Mat3 d;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          double v = p.dda * n(l) * n(k) * (i == j ? 1.0 : 0.0) + p.da * Q(k, l) / r * (i == j ? 1.0 : 0.0);
          v += p.ddb * n(l) * n(k) * n(i) * n(j) +
               p.db * (Q(k, l) * n(i) * n(j) + n(k) * Q(i, l) * n(j) + n(k) * n(i) * Q(j, l)) / r;
          v += br1 * n(l) * (Q(i, k) * n(j) + n(i) * Q(j, k));
          v += (p.b / (r * r)) *
               (-(Q(i, l) * n(k) + n(i) * Q(k, l)) * n(j) + Q(i, k) * Q(j, l) + Q(i, l) * Q(j, k) -
                n(i) * (Q(j, l) * n(k) + n(j) * Q(k, l)));
          d(i, j) = v;
        }
      }
      jet.ddg[k][l] = d;
    }
  }
  return jet;
}

// Central finite differences for user-supplied fields of the conformal kind.
double fd1(const FieldExpr& f, const Vec3& x, int k, double h) {
  Vec3 xp = x, xm = x;
  xp(k) += h;
  xm(k) -= h;
  return (f.eval(xp(0), xp(1), xp(2)) - f.eval(xm(0), xm(1), xm(2))) / (2 * h);
}

double fd2(const FieldExpr& f, const Vec3& x, int k, int l, double h) {
  if (k == l) {
    Vec3 xp = x, xm = x;
    xp(k) += h;
    xm(k) -= h;
    return (f.eval(xp(0), xp(1), xp(2)) - 2 * f.eval(x(0), x(1), x(2)) +
            f.eval(xm(0), xm(1), xm(2))) /
           (h * h);
  }
  Vec3 xpp = x, xpm = x, xmp = x, xmm = x;
  xpp(k) += h; xpp(l) += h;
  xpm(k) += h; xpm(l) -= h;
  xmp(k) -= h; xmp(l) += h;
  xmm(k) -= h; xmm(l) -= h;
  return (f.eval(xpp(0), xpp(1), xpp(2)) - f.eval(xpm(0), xpm(1), xpm(2)) -
          f.eval(xmp(0), xmp(1), xmp(2)) + f.eval(xmm(0), xmm(1), xmm(2))) /
         (4 * h * h);
}

}  // namespace

AmbientModel AmbientModel::minkowski() {
  AmbientModel m;
  m.kind_ = ModelKind::minkowski;
  return m;
}

AmbientModel AmbientModel::schwarzschild(double mass) {
  if (!(mass > 0)) throw InvalidArgument("schwarzschild: mass must be positive");
  AmbientModel m;
  m.kind_ = ModelKind::schwarzschild;
  m.mass_ = mass;
  return m;
}

AmbientModel AmbientModel::hyperbolic(double kappa) {
  if (!(kappa < 0)) throw InvalidArgument("hyperbolic: curvature must be negative");
  AmbientModel m;
  m.kind_ = ModelKind::hyperbolic;
  m.kappa_ = kappa;
  m.lambda_ = 3.0 * kappa;
  return m;
}

AmbientModel AmbientModel::spherical(double kappa) {
  if (!(kappa > 0)) throw InvalidArgument("spherical: curvature must be positive");
  AmbientModel m;
  m.kind_ = ModelKind::spherical;
  m.kappa_ = kappa;
  m.lambda_ = 3.0 * kappa;
  return m;
}

AmbientModel AmbientModel::cosmological(double lambda) {
  AmbientModel m;
  m.kind_ = ModelKind::cosmological;
  m.lambda_ = lambda;
  m.kappa_ = lambda / 3.0;
  return m;
}

AmbientModel AmbientModel::conformal(FieldExpr phi, std::array<FieldExpr, 6> k_field,
                                     EinsteinPolicy policy, double lambda, FieldExpr einstein_nn) {
  if (phi.empty()) throw InvalidArgument("conformal: phi expression required");
  if (policy == EinsteinPolicy::explicit_field && einstein_nn.empty())
    throw InvalidArgument("conformal: explicit_field policy requires an Ein(nu,nu) expression");
  AmbientModel m;
  m.kind_ = ModelKind::conformal;
  m.phi_ = std::move(phi);
  m.k_field_ = std::move(k_field);
  m.policy_ = policy;
  m.lambda_ = lambda;
  m.einstein_nn_ = std::move(einstein_nn);
  return m;
}

std::string AmbientModel::kind_name() const {
  switch (kind_) {
    case ModelKind::minkowski: return "minkowski";
    case ModelKind::schwarzschild: return "schwarzschild";
    case ModelKind::hyperbolic: return "hyperbolic";
    case ModelKind::spherical: return "spherical";
    case ModelKind::cosmological: return "cosmological";
    case ModelKind::conformal: return "conformal";
  }
  return "?";
}

void AmbientModel::check_point(const Vec3& x) const {
  switch (kind_) {
    case ModelKind::minkowski:
    case ModelKind::spherical:
      return;
    case ModelKind::schwarzschild: {
      const double r = x.norm();
      if (r <= 2.0 * mass_)
        throw DomainError("schwarzschild chart excludes r <= 2m: r = " + std::to_string(r) +
                          ", m = " + std::to_string(mass_));
      return;
    }
    case ModelKind::hyperbolic:
    case ModelKind::cosmological: {
      const double kappa = kind_ == ModelKind::cosmological ? lambda_ / 3.0 : kappa_;
      if (kappa < 0) {
        const double rmax = 2.0 / std::sqrt(-kappa);
        if (x.norm() >= rmax)
          throw DomainError("conformal ball chart excludes |x| >= " + std::to_string(rmax) +
                            ": |x| = " + std::to_string(x.norm()));
      }
      return;
    }
    case ModelKind::conformal: {
      const double phi = phi_.eval(x(0), x(1), x(2));
      if (!(phi > 0))
        throw DomainError("conformal factor nonpositive at (" + std::to_string(x(0)) + ", " +
                          std::to_string(x(1)) + ", " + std::to_string(x(2)) +
                          "): phi = " + std::to_string(phi));
      return;
    }
  }
}

DataJet sample_initial_data(const AmbientModel& model, const Vec3& x) {
  model.check_point(x);
  if (model.kind() != ModelKind::conformal) return radial_jet(model, x);

  // g = phi^4 delta with numerically differentiated user fields.
  DataJet jet;
  const double h = model.fd_step_ * std::max(1.0, x.norm());
  const double phi = model.phi_.eval(x(0), x(1), x(2));
  Vec3 dphi;
  Mat3 ddphi;
  for (int k = 0; k < 3; ++k) dphi(k) = fd1(model.phi_, x, k, h);
  for (int k = 0; k < 3; ++k)
    for (int l = k; l < 3; ++l) ddphi(k, l) = ddphi(l, k) = fd2(model.phi_, x, k, l, h);

  const double p3 = phi * phi * phi;
  jet.g = std::pow(phi, 4) * Mat3::Identity();
  for (int k = 0; k < 3; ++k) jet.dg[k] = 4.0 * p3 * dphi(k) * Mat3::Identity();
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l)
      jet.ddg[k][l] =
          (12.0 * phi * phi * dphi(k) * dphi(l) + 4.0 * p3 * ddphi(k, l)) * Mat3::Identity();

  jet.K.setZero();
  for (auto& d : jet.dK) d.setZero();
  static const int comp[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};
  for (int c = 0; c < 6; ++c) {
    const FieldExpr& f = model.k_field_[c];
    if (f.empty()) continue;
    const int i = comp[c][0], j = comp[c][1];
    const double v = f.eval(x(0), x(1), x(2));
    jet.K(i, j) = jet.K(j, i) = v;
    for (int k = 0; k < 3; ++k) {
      const double dv = fd1(f, x, k, h);
      jet.dK[k](i, j) = dv;
      jet.dK[k](j, i) = dv;
    }
  }
  return jet;
}

std::array<Mat3, 3> christoffel(const DataJet& jet) {
  const Mat3 ginv = jet.g.inverse();
  std::array<Mat3, 3> gamma;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (int c = 0; c < 3; ++c) {
        double s = 0;
        for (int d = 0; d < 3; ++d)
          s += ginv(a, d) * (jet.dg[b](d, c) + jet.dg[c](d, b) - jet.dg[d](b, c));
        gamma[a](b, c) = 0.5 * s;
      }
    }
  }
  return gamma;
}

Mat3 ricci3(const DataJet& jet) {
  const Mat3 ginv = jet.g.inverse();
  const auto gamma = christoffel(jet);

  // dGamma[e][a](b,c) = d_e Gamma^a_{bc}
  std::array<std::array<Mat3, 3>, 3> dgamma;
  for (int e = 0; e < 3; ++e) {
    // d_e g^{ad} = -g^{ai} (d_e g_{ij}) g^{jd}
    const Mat3 dginv = -ginv * jet.dg[e] * ginv;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        for (int c = 0; c < 3; ++c) {
          double s = 0;
          for (int d = 0; d < 3; ++d) {
            s += dginv(a, d) * (jet.dg[b](d, c) + jet.dg[c](d, b) - jet.dg[d](b, c));
            s += ginv(a, d) * (jet.ddg[e][b](d, c) + jet.ddg[e][c](d, b) - jet.ddg[e][d](b, c));
          }
          dgamma[e][a](b, c) = 0.5 * s;
        }
      }
    }
  }

  Mat3 ric;
  for (int b = 0; b < 3; ++b) {
    for (int c = 0; c < 3; ++c) {
      double s = 0;
      for (int a = 0; a < 3; ++a) {
        s += dgamma[a][a](b, c) - dgamma[c][a](a, b);
        for (int e = 0; e < 3; ++e)
          s += gamma[a](a, e) * gamma[e](b, c) - gamma[a](c, e) * gamma[e](a, b);
      }
      ric(b, c) = s;
    }
  }
  return 0.5 * (ric + ric.transpose());  // symmetrize away roundoff
}

double scalar3(const DataJet& jet) { return (jet.g.inverse() * ricci3(jet)).trace(); }

ConstraintDensities constraint_densities(const AmbientModel& model, const Vec3& x) {
  const DataJet jet = sample_initial_data(model, x);
  const Mat3 ginv = jet.g.inverse();
  const double sc = (ginv * ricci3(jet)).trace();
  const double trK = (ginv * jet.K).trace();
  const Mat3 Kup = ginv * jet.K * ginv;  // K^{ab}
  const double K2 = (Kup.array() * jet.K.array()).sum();

  ConstraintDensities out;
  out.mu = 0.5 * (sc - K2 + trK * trK);

  const auto gamma = christoffel(jet);
  Vec3 J = Vec3::Zero();
  for (int i = 0; i < 3; ++i) {
    // g^{ab} nabla_a K_{bi}
    double divK = 0;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        double cov = jet.dK[a](b, i);
        for (int c = 0; c < 3; ++c)
          cov -= gamma[c](a, b) * jet.K(c, i) + gamma[c](a, i) * jet.K(b, c);
        divK += ginv(a, b) * cov;
      }
    }
    // d_i tr K
    double dtr = 0;
    const Mat3 dginv = -ginv * jet.dg[i] * ginv;
    dtr += (dginv * jet.K).trace();
    dtr += (ginv * jet.dK[i]).trace();
    J(i) = divK - dtr;
  }
  out.J = J;
  return out;
}

// Evaluates Einstein contractions in the (n, nu) frame. A frame vector is
// represented by its n-coefficient and its nu-coefficient.
class EinsteinEval {
 public:
  EinsteinEval(const AmbientModel& model, const Vec3& x, const FrameData& frame)
      : model_(model), x_(x), frame_(frame) {}

  double pair(FrameVector a, FrameVector b) const {
    if (model_.vacuum()) return 0.0;
    const auto [an, au] = coeffs(a);
    const auto [bn, bu] = coeffs(b);
    if (model_.kind() != ModelKind::conformal) {
      // Ein = -Lambda g: g4(a,b) = -an*bn + au*bu for vectors in span{n, nu}.
      return -model_.lambda() * (-an * bn + au * bu);
    }
    // Conformal kind: Ein(n,n) and Ein(n,.) come from the constraints,
    // Ein(nu,nu) from the declared policy.
    const ConstraintDensities cd = constraint_densities(model_, x_);
    const double jnu = cd.J.dot(frame_.nu);
    double v = an * bn * cd.mu;
    v += (an * bu + au * bn) * (-jnu);  // Ein(n, nu) = -J(nu)
    if (au * bu != 0.0) v += au * bu * einstein_nunu();
    return v;
  }

 private:
  const AmbientModel& model_;
  const Vec3& x_;
  const FrameData& frame_;

  std::pair<double, double> coeffs(FrameVector v) const {
    switch (v) {
      case FrameVector::n: return {1.0, 0.0};
      case FrameVector::nu: return {0.0, 1.0};
      case FrameVector::ell: return {1.0, 1.0};
      case FrameVector::k: return {1.0, -1.0};
      case FrameVector::U: {
        const double q2 = frame_.H * frame_.H - frame_.P * frame_.P;
        if (!(q2 > 0))
          throw RegimeError("observer U undefined: H^2 - P^2 = " + std::to_string(q2));
        const double q = std::sqrt(q2);
        return {frame_.H / q, -frame_.P / q};
      }
    }
    throw InvalidArgument("bad frame vector tag");
  }

  double einstein_nunu() const {
    switch (model_.policy()) {
      case EinsteinPolicy::assume_vacuum: return 0.0;
      case EinsteinPolicy::constant_lambda: return -model_.lambda();
      case EinsteinPolicy::explicit_field:
        return model_.einstein_nn_.eval(x_(0), x_(1), x_(2));
      case EinsteinPolicy::unavailable:
        break;
    }
    throw UnavailableError(
        "Einstein data unavailable: conformal model has no declared Ein(nu,nu) policy");
  }
};

double einstein_components(const AmbientModel& model, const Vec3& x, FrameVector a, FrameVector b,
                           const FrameData& frame) {
  model.check_point(x);
  return EinsteinEval(model, x, frame).pair(a, b);
}

SpacetimeCurvature spacetime_curvature(const AmbientModel& model, const Vec3& x,
                                       const FrameData& frame) {
  (void)frame;
  model.check_point(x);
  switch (model.kind()) {
    case ModelKind::minkowski:
      return {0, 0, 0};
    case ModelKind::schwarzschild: {
      // Rm(k,l,l,k) = 4 Rm(n,nu,nu,n) = -8m/r^3 with the sign convention fixed
      // by the spacetime Gauss identity.
      const double r = x.norm();
      return {0, 0, -8.0 * model.mass() / (r * r * r)};
    }
    case ModelKind::hyperbolic:
    case ModelKind::spherical:
    case ModelKind::cosmological: {
      const double lam = model.lambda();
      return {4.0 * lam, -2.0 * lam, -4.0 * lam / 3.0};
    }
    case ModelKind::conformal:
      break;
  }
  throw UnavailableError(
      "spacetime curvature contractions unavailable for conformal models");
}

}  // namespace stcmc
