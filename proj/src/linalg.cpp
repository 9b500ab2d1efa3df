#include "maplabel/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace maplabel {

Vector lu_solve(const Matrix& M, const Vector& rhs) {
    if (M.rows() != M.cols())
        throw ConfigError("lu_solve requires a square matrix");
    if (M.rows() != rhs.size())
        throw ConfigError("lu_solve dimension mismatch");

    Eigen::PartialPivLU<Matrix> lu(M);
    const Matrix& packed = lu.matrixLU();
    double dmax = 0.0;
    double dmin = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < packed.rows(); ++i) {
        const double d = std::abs(packed(i, i));
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
    }
    if (dmin == 0.0 || dmin < dmax * 1e-15)
        throw NumericalError("lu_solve: matrix is singular to working precision");
    return lu.solve(rhs);
}

Matrix cholesky(const Matrix& M) {
    if (M.rows() != M.cols())
        throw ConfigError("cholesky requires a square matrix");
    Eigen::LLT<Matrix> llt(M);
    if (llt.info() != Eigen::Success)
        throw NumericalError("cholesky: matrix is not positive definite");
    return llt.matrixU();
}

Vector chol_solve(const Matrix& U, const Vector& rhs) {
    const Vector y = U.transpose().triangularView<Eigen::Lower>().solve(rhs);
    return U.triangularView<Eigen::Upper>().solve(y);
}

namespace {

// Deterministic start vector with entries in [-0.5, 0.5). The raw generator
// output sequence is pinned by the standard, unlike distribution adaptors.
Vector seeded_start(Eigen::Index dim, std::uint64_t seed) {
    std::mt19937 gen(static_cast<std::uint32_t>(seed));
    Vector v(dim);
    const double scale = 1.0 / 4294967296.0;
    for (Eigen::Index i = 0; i < dim; ++i)
        v[i] = static_cast<double>(gen()) * scale - 0.5;
    const double n = v.norm();
    if (n == 0.0) v[0] = 1.0; else v /= n;
    return v;
}

// Remove the components of w along the first j+1 columns of V, twice.
void reorthogonalize(Vector& w, const Matrix& V, Eigen::Index cols) {
    const auto Vj = V.leftCols(cols);
    w.noalias() -= Vj * (Vj.transpose() * w);
    w.noalias() -= Vj * (Vj.transpose() * w);
}

} // namespace

std::vector<EigPair> lanczos_largest(const LinOp& op, Eigen::Index dim, int n_eigs,
                                     double tol, int max_iter, std::uint64_t seed,
                                     int* iterations) {
    if (dim < 1) throw ConfigError("lanczos_largest: dimension must be positive");
    if (n_eigs < 1 || static_cast<Eigen::Index>(n_eigs) > dim)
        throw ConfigError("lanczos_largest: n_eigs must lie in [1, dim]");
    if (max_iter <= 0)
        max_iter = static_cast<int>(std::min<Eigen::Index>(dim, 10 * n_eigs + 100));
    const Eigen::Index jmax = std::min<Eigen::Index>(dim, max_iter);

    Matrix V(dim, jmax);
    std::vector<double> alpha;
    std::vector<double> beta; // beta[j] couples columns j and j+1
    alpha.reserve(static_cast<std::size_t>(jmax));
    beta.reserve(static_cast<std::size_t>(jmax));

    Vector q = seeded_start(dim, seed);
    double scale = 0.0; // running estimate of ||T||

    for (Eigen::Index j = 0; j < jmax; ++j) {
        if (iterations) *iterations = static_cast<int>(j) + 1;
        V.col(j) = q;
        Vector w = op(q);
        if (w.size() != dim)
            throw ConfigError("lanczos_largest: operator changed the dimension");
        const double a = q.dot(w);
        alpha.push_back(a);
        w -= a * q;
        if (j > 0) w -= beta[static_cast<std::size_t>(j - 1)] * V.col(j - 1);
        reorthogonalize(w, V, j + 1);
        const double b = w.norm();
        beta.push_back(b);
        scale = std::max({scale, std::abs(a), b});

        const Eigen::Index k = j + 1; // current subspace size
        const bool check = k >= n_eigs && (k <= 50 || k % 5 == 0 || k == jmax || b <= scale * 1e-13);
        if (check) {
            Matrix T = Matrix::Zero(k, k);
            for (Eigen::Index i = 0; i < k; ++i) {
                T(i, i) = alpha[static_cast<std::size_t>(i)];
                if (i + 1 < k) {
                    T(i, i + 1) = beta[static_cast<std::size_t>(i)];
                    T(i + 1, i) = beta[static_cast<std::size_t>(i)];
                }
            }
            Eigen::SelfAdjointEigenSolver<Matrix> es(T);
            const Vector& theta = es.eigenvalues(); // ascending
            const Matrix& S = es.eigenvectors();
            const double tmax = std::max(std::abs(theta[0]), std::abs(theta[k - 1]));

            bool all_ok = true;
            for (int i = 0; i < n_eigs; ++i) {
                const Eigen::Index col = k - 1 - i;
                const double resid = b * std::abs(S(k - 1, col));
                const double denom = std::max(std::abs(theta[col]),
                                              tmax * std::numeric_limits<double>::epsilon());
                if (resid > tol * denom) { all_ok = false; break; }
            }
            if (all_ok) {
                std::vector<EigPair> out(static_cast<std::size_t>(n_eigs));
                for (int i = 0; i < n_eigs; ++i) {
                    const Eigen::Index col = k - 1 - i;
                    EigPair& p = out[static_cast<std::size_t>(i)];
                    p.value = theta[col];
                    p.vector = V.leftCols(k) * S.col(col);
                    p.vector.normalize();
                    Eigen::Index imax = 0;
                    p.vector.cwiseAbs().maxCoeff(&imax);
                    if (p.vector[imax] < 0.0) p.vector = -p.vector;
                }
                return out;
            }
        }

        if (b <= scale * 1e-13) {
            // Invariant subspace found before convergence: continue in a
            // fresh random direction orthogonal to everything so far.
            if (k == dim) break;
            q = seeded_start(dim, seed + static_cast<std::uint64_t>(j) + 1);
            reorthogonalize(q, V, k);
            const double n = q.norm();
            if (n < 1e-8) break;
            q /= n;
            beta.back() = 0.0;
        } else {
            q = w / b;
        }
    }
    throw NumericalError("lanczos_largest: no convergence within the iteration budget");
}

GeneralizedEig dense_sym_generalized_eig(const Matrix& A, const Matrix& B) {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
        throw ConfigError("dense_sym_generalized_eig dimension mismatch");

    Eigen::LLT<Matrix> llt(B);
    if (llt.info() != Eigen::Success)
        throw NumericalError("dense_sym_generalized_eig: right-hand matrix is not positive definite");
    const Matrix L = llt.matrixL();

    // C = L^{-1} A L^{-T} has the pencil's eigenvalues; v = L^{-T} u.
    Matrix C = L.triangularView<Eigen::Lower>().solve(A);
    C = L.triangularView<Eigen::Lower>().solve(C.transpose().eval());
    C = 0.5 * (C + C.transpose().eval());

    Eigen::SelfAdjointEigenSolver<Matrix> es(C);
    if (es.info() != Eigen::Success)
        throw NumericalError("dense_sym_generalized_eig: eigensolver failed");

    GeneralizedEig out;
    out.values = es.eigenvalues();
    out.vectors = L.transpose().triangularView<Eigen::Upper>().solve(es.eigenvectors());
    for (Eigen::Index c = 0; c < out.vectors.cols(); ++c) {
        Eigen::Index imax = 0;
        out.vectors.col(c).cwiseAbs().maxCoeff(&imax);
        if (out.vectors(imax, c) < 0.0) out.vectors.col(c) *= -1.0;
    }
    return out;
}

} // namespace maplabel
