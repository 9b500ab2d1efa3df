#pragma once

#include "maplabel/errors.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

namespace maplabel {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Matrix-free symmetric linear operator.
using LinOp = std::function<Vector(const Vector&)>;

/// Solve M x = rhs by LU with partial pivoting. Throws NumericalError when a
/// pivot ratio indicates singularity to working precision.
Vector lu_solve(const Matrix& M, const Vector& rhs);

/// Upper-triangular factor U with U^T U = M for symmetric positive definite
/// M (only the lower triangle of M is read). Throws NumericalError on a
/// non-positive pivot; regularization is the caller's responsibility.
Matrix cholesky(const Matrix& M);

/// Solve (U^T U) x = rhs given the factor returned by cholesky().
Vector chol_solve(const Matrix& U, const Vector& rhs);

struct EigPair {
    double value = 0.0;
    Vector vector;
};

/// Largest n_eigs eigenpairs of a symmetric operator by Lanczos iteration
/// with full reorthogonalization. Pairs are sorted by descending eigenvalue
/// and satisfy ||op(v) - value*v|| <= tol*|value|. The start vector is drawn
/// from a fixed-seed generator, so results are deterministic. max_iter == 0
/// selects min(dim, 10*n_eigs + 100). Throws NumericalError when the
/// residual tolerance is not reached within the iteration budget.
std::vector<EigPair> lanczos_largest(const LinOp& op, Eigen::Index dim, int n_eigs,
                                     double tol = 1e-10, int max_iter = 0,
                                     std::uint64_t seed = 20240501u,
                                     int* iterations = nullptr);

struct GeneralizedEig {
    Vector values;  // ascending
    Matrix vectors; // column j pairs with values[j], normalized so v^T B v = 1
};

/// All eigenpairs of A v = lambda B v with A symmetric and B symmetric
/// positive definite, by reduction through the Cholesky factor of B. Meant
/// for oracle-scale problems (dimension up to a few hundred).
GeneralizedEig dense_sym_generalized_eig(const Matrix& A, const Matrix& B);

} // namespace maplabel
