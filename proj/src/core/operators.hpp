#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <vector>

#include "geometry.hpp"

namespace stcmc {

using SparseMat = Eigen::SparseMatrix<double>;

/// Quadratic-form data on a mesh: stiffness assembles the Dirichlet energy of
/// the induced metric, mass is the lumped vertex-area matrix, potential is a
/// per-vertex field entering through the mass weighting.
struct OperatorForms {
  SparseMat stiffness;
  VectorXd mass;
  VectorXd potential;

  int size() const { return static_cast<int>(mass.size()); }
  /// Form value alpha^T (weight S + diag(mass*potential)) beta.
  double form(const VectorXd& a, const VectorXd& b, double weight) const;
};

/// Cotangent stiffness on the induced metric with lumped mass; potential zero.
OperatorForms assemble_laplacian(const InducedGeometry& geom);

struct EigOptions {
  double tol = 1e-9;
  int max_iterations = 5000;
  std::uint64_t seed = 12345;
};

struct EigPair {
  double value;
  VectorXd vector;
};

/// Smallest `count` eigenpairs of (weight*S + diag(m q)) v = lambda M v,
/// ascending, eigenvectors M-orthonormal. Shift-invert Lanczos with a
/// deterministic seeded start.
std::vector<EigPair> generalized_eigs(const OperatorForms& forms, int count, double weight,
                                      const EigOptions& opts = {});

/// Minimum Rayleigh quotient of the form over the mass-weighted mean-zero
/// subspace (the constant mode deflated exactly).
double mean_zero_minimum(const OperatorForms& forms, double weight, const EigOptions& opts = {},
                         VectorXd* minimizer = nullptr);

}  // namespace stcmc
