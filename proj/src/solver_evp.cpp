#include "maplabel/solver_evp.hpp"

#include "maplabel/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace maplabel {

namespace {

// The shift-invert eigenvalue mu carries the double-precision error of the
// operator application, which at mu ~ 1e8 leaves 1/mu - delta accurate only
// to ~1e-16 absolute. The quotient evaluated at the recovered eigenvector is
// quadratically accurate in the eigenvector error, so the pair is reported
// with lambda polished through rayleigh_quotient; the raw value keeps its
// role of driving the solve and the clamp rules apply to the polished value.
double polish_lambda(const Vector& c, const Matrix& K, const Vector& w_bd,
                     double epsilon) {
    double lambda = rayleigh_quotient(c, K, w_bd, epsilon);
    if (lambda < 0.0) {
        if (lambda <= -1e-12) {
            throw NumericalError("eigenvalue " + std::to_string(lambda) +
                                 " is negative beyond roundoff; the factorization "
                                 "is unreliable");
        }
        lambda = 0.0;
    }
    return lambda;
}

void check_evp_args(double epsilon, double delta, int n_eigs, Eigen::Index dim,
                    double kernel_jitter) {
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (!(delta > 0.0)) throw ConfigError("delta must be positive");
    if (!(kernel_jitter >= 0.0)) throw ConfigError("kernel jitter must be nonnegative");
    if (n_eigs < 1 || n_eigs >= dim) {
        throw ConfigError("n_eigs must be in [1, 2N); got " + std::to_string(n_eigs) +
                          " for 2N = " + std::to_string(dim));
    }
}

// The eigensolver normalizes h but leaves its sign free up to the
// largest-entry convention; c is derived from h afterwards so the pair
// stays consistent under the flip.
void fix_sign(Vector& h, Vector& c) {
    Eigen::Index imax = 0;
    h.cwiseAbs().maxCoeff(&imax);
    if (h[imax] < 0.0) {
        h = -h;
        c = -c;
    }
}

} // namespace

EvalOperator::EvalOperator(const Matrix& K, const Vector& w_bd, double epsilon,
                           double delta) {
    if (K.rows() != K.cols()) throw ConfigError("kernel matrix must be square");
    if (K.rows() == 0 || K.rows() % 2 != 0) {
        throw ConfigError("kernel matrix must have even, positive dimension");
    }
    if (w_bd.size() != K.rows()) {
        throw ConfigError("boundary weight length does not match kernel matrix");
    }
    if ((w_bd.array() < 0.0).any()) {
        throw ConfigError("boundary weights must be nonnegative");
    }
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (!(delta > 0.0)) throw ConfigError("delta must be positive");

    n_ = K.rows() / 2;
    a_diag_ = (1.0 + delta) + w_bd.head(n_).array();
    b_diag_ = (1.0 + delta) + w_bd.tail(n_).array();
    det_ = a_diag_.array() * b_diag_.array() - 1.0; // >= (1+delta)^2 - 1 > 0

    Matrix S = K / epsilon;
    for (Eigen::Index i = 0; i < n_; ++i) {
        // A^{-1} block for pair i is [[b, 1], [1, a]] / det.
        S(i, i) += b_diag_[i] / det_[i];
        S(n_ + i, n_ + i) += a_diag_[i] / det_[i];
        S(i, n_ + i) += 1.0 / det_[i];
        S(n_ + i, i) += 1.0 / det_[i];
    }
    s_ = cholesky_with_jitter(S);
}

Vector EvalOperator::apply_a_inv(const Vector& v) const {
    if (v.size() != dim()) throw ConfigError("vector length does not match operator");
    Vector out(v.size());
    for (Eigen::Index i = 0; i < n_; ++i) {
        out[i] = (b_diag_[i] * v[i] + v[n_ + i]) / det_[i];
        out[n_ + i] = (v[i] + a_diag_[i] * v[n_ + i]) / det_[i];
    }
    return out;
}

Vector EvalOperator::solve_s(const Vector& v) const {
    if (v.size() != dim()) throw ConfigError("vector length does not match operator");
    return chol_solve(s_.U, v);
}

Vector EvalOperator::apply(const Vector& v) const {
    Vector w = apply_a_inv(v);
    return w - apply_a_inv(solve_s(w));
}

EigenResult solve_evp(const SampleSet& samples, const KernelSpec& kernel,
                      const BoundarySpec& boundary, double epsilon, double delta,
                      int n_eigs, double kernel_jitter) {
    kernel.validate();
    boundary.validate();
    if (samples.N == 0) throw ConfigError("sample set is empty");
    require_kernel_topology(kernel, samples.domain.topology);
    const Eigen::Index dim = static_cast<Eigen::Index>(2 * samples.N);
    check_evp_args(epsilon, delta, n_eigs, dim, kernel_jitter);

    Matrix K = kernel_matrix(kernel, samples.z, samples.domain.topology);
    K.diagonal().array() += kernel_jitter;
    const BoundaryVectors bv = sample_boundary(boundary, samples);

    EvalOperator op(K, bv.w_bd, epsilon, delta);
    int iterations = 0;
    // 1e-12 rather than the generic 1e-10: the reported lambda must satisfy
    // |lambda - RQ(c)| <= 1e-8 * max(lambda, 1e-12), and the quotient's
    // curvature turns Ritz-vector error e into ~300 |e|^2 of identity error,
    // so the vectors need ~1e-11 accuracy at lambda ~ 4e-10.
    std::vector<EigPair> ritz =
        lanczos_largest([&op](const Vector& v) { return op.apply(v); }, dim, n_eigs,
                        1e-12, 0, 20240501u, &iterations);

    EigenResult out;
    out.shift_delta = delta;
    out.epsilon = epsilon;
    out.iterations = iterations;
    out.s_jitter = op.jitter();
    out.pairs.reserve(ritz.size());
    // Largest mu first = smallest lambda first, so this loop emits ascending
    // lambda already; the sort below is a guard against clamp-induced ties.
    for (const EigPair& pair : ritz) {
        const double mu = pair.value;
        if (!(mu > 0.0)) {
            throw NumericalError(
                "shift-inverted operator produced a nonpositive eigenvalue; "
                "the factorization is unreliable (kernel too wide or epsilon too small)");
        }
        const double raw_lambda = 1.0 / mu - delta;
        if (raw_lambda <= -1e-12) {
            throw NumericalError("eigenvalue " + std::to_string(raw_lambda) +
                                 " is negative beyond roundoff; "
                                 "the factorization is unreliable");
        }
        EvpPair solved;
        solved.h = pair.vector;
        // Stationarity of the quotient gives c = K^{-1} h, reachable without
        // inverting K: c = (lambda + delta) / epsilon * S^{-1} A^{-1} h.
        solved.c = ((std::max(raw_lambda, 0.0) + delta) / epsilon) *
                   op.solve_s(op.apply_a_inv(solved.h));
        solved.lambda = polish_lambda(solved.c, K, bv.w_bd, epsilon);
        fix_sign(solved.h, solved.c);
        out.pairs.push_back(std::move(solved));
    }
    std::stable_sort(out.pairs.begin(), out.pairs.end(),
                     [](const EvpPair& a, const EvpPair& b) { return a.lambda < b.lambda; });
    return out;
}

double rayleigh_quotient(const Vector& c, const Matrix& K, const Vector& w_bd,
                         double epsilon) {
    if (c.size() == 0) throw ConfigError("coefficient vector is empty");
    if (K.rows() != K.cols() || K.rows() != c.size()) {
        throw ConfigError("kernel matrix does not match coefficient length");
    }
    if (w_bd.size() != c.size()) {
        throw ConfigError("boundary weight length does not match coefficient length");
    }
    if (c.size() % 2 != 0) throw ConfigError("coefficient length must be even");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");

    const Eigen::Index dim = c.size();
    const Eigen::Index n = dim / 2;

    // h = K c in extended precision: c may be large with heavy cancellation.
    std::vector<long double> h(static_cast<std::size_t>(dim), 0.0L);
    for (Eigen::Index i = 0; i < dim; ++i) {
        long double acc = 0.0L;
        for (Eigen::Index j = 0; j < dim; ++j) {
            acc += static_cast<long double>(K(i, j)) * static_cast<long double>(c[j]);
        }
        h[static_cast<std::size_t>(i)] = acc;
    }

    long double num = 0.0L;
    long double den = 0.0L;
    for (Eigen::Index i = 0; i < n; ++i) {
        const long double d = h[static_cast<std::size_t>(i)] -
                              h[static_cast<std::size_t>(n + i)];
        num += d * d;
    }
    long double ek = 0.0L;
    for (Eigen::Index i = 0; i < dim; ++i) {
        const long double hi = h[static_cast<std::size_t>(i)];
        num += static_cast<long double>(w_bd[i]) * hi * hi;
        ek += static_cast<long double>(c[i]) * hi;
        den += hi * hi;
    }
    num += static_cast<long double>(epsilon) * ek;
    if (den == 0.0L) {
        throw NumericalError("K c vanishes; the Rayleigh quotient is undefined");
    }
    return static_cast<double>(num / den);
}

EigenResult solve_evp_dense_reference(const SampleSet& samples,
                                      const KernelSpec& kernel,
                                      const BoundarySpec& boundary, double epsilon,
                                      double delta, int n_eigs,
                                      double kernel_jitter) {
    kernel.validate();
    boundary.validate();
    if (samples.N == 0) throw ConfigError("sample set is empty");
    require_kernel_topology(kernel, samples.domain.topology);
    const Eigen::Index dim = static_cast<Eigen::Index>(2 * samples.N);
    const Eigen::Index n = dim / 2;
    check_evp_args(epsilon, delta, n_eigs, dim, kernel_jitter);

    Matrix K = kernel_matrix(kernel, samples.z, samples.domain.topology);
    K.diagonal().array() += kernel_jitter;
    const BoundaryVectors bv = sample_boundary(boundary, samples);

    // A = G^T G + W + delta I assembled densely.
    Matrix A = Matrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < n; ++i) {
        A(i, i) = 1.0 + delta + bv.w_bd[i];
        A(n + i, n + i) = 1.0 + delta + bv.w_bd[n + i];
        A(i, n + i) = -1.0;
        A(n + i, i) = -1.0;
    }

    Matrix lhs = K * A * K + epsilon * K;
    lhs = 0.5 * (lhs + lhs.transpose()).eval();
    Matrix rhs = K * K;
    rhs = 0.5 * (rhs + rhs.transpose()).eval();

    GeneralizedEig eig = dense_sym_generalized_eig(lhs, rhs);

    EigenResult out;
    out.shift_delta = delta;
    out.epsilon = epsilon;
    out.iterations = 0;
    out.s_jitter = 0.0;
    out.pairs.reserve(static_cast<std::size_t>(n_eigs));
    for (int m = 0; m < n_eigs; ++m) {
        const double shifted = eig.values[static_cast<std::size_t>(m)];
        if (shifted - delta <= -1e-12) {
            throw NumericalError("dense reference produced eigenvalue " +
                                 std::to_string(shifted - delta) + " below -1e-12");
        }
        EvpPair solved;
        solved.c = eig.vectors.col(m);
        solved.h = K * solved.c;
        const double norm = solved.h.norm();
        if (!(norm > 0.0)) throw NumericalError("dense reference mode has K c = 0");
        solved.h /= norm;
        solved.c /= norm;
        solved.lambda = polish_lambda(solved.c, K, bv.w_bd, epsilon);
        fix_sign(solved.h, solved.c);
        out.pairs.push_back(std::move(solved));
    }
    std::stable_sort(out.pairs.begin(), out.pairs.end(),
                     [](const EvpPair& a, const EvpPair& b) { return a.lambda < b.lambda; });
    return out;
}

} // namespace maplabel
