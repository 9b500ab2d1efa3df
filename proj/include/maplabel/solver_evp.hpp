#pragma once

#include "maplabel/boundary.hpp"
#include "maplabel/kernels.hpp"
#include "maplabel/linalg.hpp"
#include "maplabel/sampling.hpp"
#include "maplabel/solver_bvp.hpp"

#include <vector>

namespace maplabel {

/// Matrix-free application of Op = A^{-1} - A^{-1} S^{-1} A^{-1} where
/// A = G^T G + W + delta I and S = epsilon^{-1} K + A^{-1}. A is 2x2-block
/// diagonal (pair n couples entries n and N+n), so A^{-1} v costs O(N);
/// S is factored once by Cholesky, with jitter escalation if needed.
/// Op is symmetric positive definite: it equals (A + epsilon K^{-1})^{-1},
/// so its largest eigenvalue is 1/(lambda + delta) for the smallest
/// Rayleigh-quotient value lambda.
class EvalOperator {
public:
    /// K must be 2N x 2N and w_bd length 2N with nonnegative entries.
    EvalOperator(const Matrix& K, const Vector& w_bd, double epsilon, double delta);

    Eigen::Index dim() const { return 2 * n_; }
    double jitter() const { return s_.jitter; }

    /// Op v = A^{-1} v - A^{-1} S^{-1} A^{-1} v.
    Vector apply(const Vector& v) const;

    /// A^{-1} v via the closed-form 2x2 block inverses.
    Vector apply_a_inv(const Vector& v) const;

    /// S^{-1} v via the stored Cholesky factor.
    Vector solve_s(const Vector& v) const;

private:
    Eigen::Index n_ = 0;
    Vector a_diag_;        // 1 + delta + w_bd[n],   n < N
    Vector b_diag_;        // 1 + delta + w_bd[N+n], n < N
    Vector det_;           // a_n * b_n - 1 > 0
    JitteredFactor s_;
};

/// One solved mode: eigenvalue, unit-norm values h at the samples, and the
/// kernel coefficients c with K c = h.
struct EvpPair {
    double lambda = 0.0;
    Vector h;
    Vector c;
};

struct EigenResult {
    std::vector<EvpPair> pairs; // ascending lambda
    double shift_delta = 0.0;
    double epsilon = 0.0;
    int iterations = 0;  // Lanczos steps used
    double s_jitter = 0.0; // jitter needed to factor S (0 if none)
};

/// Smallest Rayleigh-quotient label functions: minimizes
/// (|G K c|^2 + |K c|^2_W + epsilon c^T K c) / |K c|^2 over the samples.
/// Only the weights of `boundary` are used (the target value is zero).
/// Solved as the largest eigenvalues mu = 1/(lambda + delta) of EvalOperator
/// by Lanczos iteration; the reported lambda is the quotient evaluated at the
/// recovered pair (quadratically more accurate than 1/mu - delta), clamped to
/// 0 within -1e-12 and an error below that.
/// `kernel_jitter` is added to the diagonal of K before solving so that
/// small-instance runs can be compared against the dense reference under
/// identical regularization; production runs leave it at 0.
EigenResult solve_evp(const SampleSet& samples, const KernelSpec& kernel,
                      const BoundarySpec& boundary, double epsilon,
                      double delta = 1e-8, int n_eigs = 1,
                      double kernel_jitter = 0.0);

/// (|G K c|^2 + |K c|^2_W + epsilon c^T K c) / |K c|^2, accumulated in
/// extended precision: at converged modes the numerator cancels to ~1e-10
/// of its term magnitudes, beyond what double accumulation resolves.
double rayleigh_quotient(const Vector& c, const Matrix& K, const Vector& w_bd,
                         double epsilon);

/// Brute-force oracle: assembles the shifted pencil
/// (K A K + epsilon K) v = (lambda + delta) K^2 v densely and solves it with
/// the dense generalized eigensolver. Ill-conditioned beyond toy sizes; kept
/// only to cross-check solve_evp on small instances (same delta and
/// kernel_jitter semantics).
EigenResult solve_evp_dense_reference(const SampleSet& samples,
                                      const KernelSpec& kernel,
                                      const BoundarySpec& boundary,
                                      double epsilon, double delta = 1e-8,
                                      int n_eigs = 1, double kernel_jitter = 0.0);

} // namespace maplabel
