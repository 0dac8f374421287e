#include "operators.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace stcmc {

double OperatorForms::form(const VectorXd& a, const VectorXd& b, double weight) const {
  double v = weight * a.dot(stiffness * b);
  v += (a.array() * mass.array() * potential.array() * b.array()).sum();
  return v;
}

OperatorForms assemble_laplacian(const InducedGeometry& geom) {
  const int nv = geom.vertex_count();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(geom.mesh.face_count() * 12);

  for (int f = 0; f < geom.mesh.face_count(); ++f) {
    const auto& tri = geom.mesh.faces[f];
    const FaceData& fd = geom.face[f];
    if (!(fd.area > 0)) throw GeometryError("degenerate face " + std::to_string(f) + " in assembly");
    // Half-cotangent weight on the edge opposite each corner.
    auto cot = [](double ang) { return std::cos(ang) / std::sin(ang); };
    const double w[3] = {0.5 * cot(fd.angle[0]), 0.5 * cot(fd.angle[1]), 0.5 * cot(fd.angle[2])};
    for (int c = 0; c < 3; ++c) {
      const int i = tri[(c + 1) % 3];
      const int j = tri[(c + 2) % 3];
      trips.emplace_back(i, j, -w[c]);
      trips.emplace_back(j, i, -w[c]);
      trips.emplace_back(i, i, w[c]);
      trips.emplace_back(j, j, w[c]);
    }
  }

  OperatorForms forms;
  forms.stiffness.resize(nv, nv);
  forms.stiffness.setFromTriplets(trips.begin(), trips.end());
  forms.mass = geom.area;
  forms.potential = VectorXd::Zero(nv);
  return forms;
}

namespace {

struct Xorshift {
  std::uint64_t s;
  explicit Xorshift(std::uint64_t seed) : s(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  double next() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return static_cast<double>(s >> 11) / static_cast<double>(1ull << 53) - 0.5;
  }
};

// Shift-inverted pencil (A - sigma M)^{-1} M with optional exact deflation of
// the constant mode through a KKT correction.
class ShiftInvertOp {
 public:
  ShiftInvertOp(const SparseMat& A, const VectorXd& M, bool constrained)
      : M_(M), constrained_(constrained) {
    const int n = static_cast<int>(M.size());
    // Generalized Gershgorin lower bound on the pencil spectrum.
    VectorXd diag = VectorXd::Zero(n), offsum = VectorXd::Zero(n);
    for (int k = 0; k < A.outerSize(); ++k) {
      for (SparseMat::InnerIterator it(A, k); it; ++it) {
        if (it.row() == it.col()) diag(it.row()) += it.value();
        else offsum(it.row()) += std::abs(it.value());
      }
    }
    const double bound = ((diag - offsum).array() / M.array()).minCoeff();
    sigma_ = bound - 0.01 * std::max(1.0, std::abs(bound));

    SparseMat shifted = A;
    for (int i = 0; i < n; ++i) shifted.coeffRef(i, i) -= sigma_ * M(i);
    shifted.makeCompressed();
    ldlt_.compute(shifted);
    if (ldlt_.info() != Eigen::Success)
      throw NumericalError("sparse factorization of the shifted operator failed");

    if (constrained_) {
      ones_ = VectorXd::Ones(n);
      m1_ = M_.asDiagonal() * ones_;
      z0_ = ldlt_.solve(m1_);
      z0_m1_ = z0_.dot(m1_);
    }
  }

  double sigma() const { return sigma_; }

  VectorXd project(const VectorXd& v) const {
    if (!constrained_) return v;
    return v - ones_ * (m1_.dot(v) / m1_.sum());
  }

  VectorXd apply(const VectorXd& q) const {
    VectorXd z = ldlt_.solve(M_.asDiagonal() * q);
    if (constrained_) z -= z0_ * (m1_.dot(z) / z0_m1_);
    return z;
  }

 private:
  VectorXd M_;
  bool constrained_;
  double sigma_ = 0;
  Eigen::SimplicialLDLT<SparseMat> ldlt_;
  VectorXd ones_, m1_, z0_;
  double z0_m1_ = 0;
};

double pencil_residual(const SparseMat& A, const VectorXd& M, double lambda, const VectorXd& v) {
  const VectorXd r = A * v - lambda * (M.asDiagonal() * v);
  const double scale = (std::abs(lambda) + 1.0) * std::sqrt(v.dot(M.asDiagonal() * v));
  return r.norm() / scale;
}

// Extracts the `count` smallest eigenpairs one at a time, deflating converged
// vectors so eigenvalue multiplicities are recovered copy by copy.
std::vector<EigPair> eig_driver(const SparseMat& A, const VectorXd& M, int count, bool constrained,
                                const EigOptions& opts) {
  const int n = static_cast<int>(M.size());
  const int n_free = constrained ? n - 1 : n;
  if (count < 1) throw InvalidArgument("eigenpair count must be positive");
  if (count > n_free) throw InvalidArgument("requested more eigenpairs than degrees of freedom");

  ShiftInvertOp op(A, M, constrained);
  Xorshift rng(opts.seed);
  auto mdot = [&](const VectorXd& a, const VectorXd& b) { return a.dot(M.asDiagonal() * b); };

  std::vector<EigPair> converged;
  int total_ops = 0;
  const int basis_max = std::min(n_free, 120);

  auto deflate = [&](VectorXd& w) {
    for (const auto& p : converged) w -= p.vector * mdot(p.vector, w);
  };

  while (static_cast<int>(converged.size()) < count) {
    if (total_ops >= opts.max_iterations) {
      double worst = -1;
      for (const auto& p : converged)
        worst = std::max(worst, pencil_residual(A, M, p.value, p.vector));
      throw NumericalError("eigensolver hit the iteration cap with " +
                           std::to_string(converged.size()) + " of " + std::to_string(count) +
                           " pairs; worst residual " + std::to_string(worst));
    }

    VectorXd q(n);
    for (int i = 0; i < n; ++i) q(i) = rng.next();
    q = op.project(q);
    deflate(q);
    const double nq = std::sqrt(std::abs(mdot(q, q)));
    if (nq < 1e-200) throw NumericalError("eigensolver start vector degenerated");
    q /= nq;

    std::vector<VectorXd> basis{q};
    std::vector<double> alpha, beta;
    bool accepted = false;

    while (static_cast<int>(basis.size()) <= basis_max && total_ops < opts.max_iterations) {
      VectorXd w = op.apply(basis.back());
      ++total_ops;
      const double a = mdot(w, basis.back());
      alpha.push_back(a);
      w -= a * basis.back();
      if (basis.size() > 1) w -= beta.back() * basis[basis.size() - 2];
      deflate(w);
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) w -= b * mdot(b, w);
      const double nb = std::sqrt(std::abs(mdot(w, w)));
      const bool breakdown = nb < 1e-13;

      const int m = static_cast<int>(alpha.size());
      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) T(i, i) = alpha[i];
      for (int i = 0; i + 1 < m; ++i) T(i, i + 1) = T(i + 1, i) = beta[i];
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);

      int top = 0;
      for (int i = 1; i < m; ++i)
        if (es.eigenvalues()(i) > es.eigenvalues()(top)) top = i;
      const double theta = es.eigenvalues()(top);
      const double tail = breakdown ? 0.0 : std::abs(nb * es.eigenvectors()(m - 1, top));

      if (theta > 0 && (tail <= opts.tol * std::max(1.0, theta) || breakdown)) {
        const double lambda = op.sigma() + 1.0 / theta;
        VectorXd v = VectorXd::Zero(n);
        for (int i = 0; i < m; ++i) v += es.eigenvectors()(i, top) * basis[i];
        deflate(v);
        v = op.project(v);
        const double nv = std::sqrt(std::abs(mdot(v, v)));
        if (nv > 1e-12) {
          v /= nv;
          if (pencil_residual(A, M, lambda, v) <= std::max(100 * opts.tol, 1e-7)) {
            converged.push_back({lambda, v});
            accepted = true;
            break;
          }
        }
      }
      if (breakdown) break;
      beta.push_back(nb);
      basis.push_back(w / nb);
    }

    if (!accepted && total_ops < opts.max_iterations)
      throw NumericalError("eigensolver failed to converge a pair within the basis limit (" +
                           std::to_string(basis_max) + " vectors)");
  }

  std::sort(converged.begin(), converged.end(),
            [](const EigPair& a, const EigPair& b) { return a.value < b.value; });
  for (auto& p : converged) {
    int imax = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(p.vector(i)) > std::abs(p.vector(imax))) imax = i;
    if (p.vector(imax) < 0) p.vector = -p.vector;
  }
  return converged;
}

SparseMat full_matrix(const OperatorForms& forms, double weight) {
  SparseMat A = weight * forms.stiffness;
  const VectorXd shift = forms.mass.array() * forms.potential.array();
  for (int i = 0; i < forms.size(); ++i) A.coeffRef(i, i) += shift(i);
  A.makeCompressed();
  return A;
}

}  // namespace

std::vector<EigPair> generalized_eigs(const OperatorForms& forms, int count, double weight,
                                      const EigOptions& opts) {
  return eig_driver(full_matrix(forms, weight), forms.mass, count, false, opts);
}

double mean_zero_minimum(const OperatorForms& forms, double weight, const EigOptions& opts,
                         VectorXd* minimizer) {
  auto pairs = eig_driver(full_matrix(forms, weight), forms.mass, 1, true, opts);
  if (minimizer) *minimizer = pairs[0].vector;
  return pairs[0].value;
}

}  // namespace stcmc
