#pragma once

#include "maplabel/geometry.hpp"
#include "maplabel/linalg.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace maplabel {

/// Kernel family and width. Families:
///   squared_exponential  exp(-|d|^2 / (2 sigma^2))
///   inverse_multiquadric 1 / sqrt(1 + |d|^2 / sigma^2)
///   periodic_product     exp(-sin^2(pi dx) / (2 pi sigma^2) - dy^2 / (2 sigma^2))
/// Only periodic_product is periodic in x; the other families read coordinates
/// as stored, so pair them with plane domains. Note the periodic factor damps
/// by 2*pi*sigma^2 while the y factor damps by 2*sigma^2: the effective widths
/// of the two directions differ by sqrt(pi) by construction.
struct KernelSpec {
    std::string family = "squared_exponential";
    double sigma = 1.0;

    void validate() const;
};

/// Pointwise kernel value in (0, 1]; exactly 1 at zero separation.
double eval_kernel(const KernelSpec& spec, const State& p, const State& q, Topology topology);

/// Gram matrix K(i,j) = K(points[i], points[j]); exactly symmetric with unit
/// diagonal by construction.
Matrix kernel_matrix(const KernelSpec& spec, const std::vector<State>& points,
                     Topology topology);

/// Width scaling with sample density: sigma0 / sqrt(N).
double sigma_from_density(double sigma0, std::size_t N);

/// Cholesky factor of M, retried with eta*I added when the plain
/// factorization fails. eta starts at 1e-12 * trace(M)/dim and escalates by
/// factors of 100 at most four times; `jitter` reports the amount used.
struct JitteredFactor {
    Matrix U;
    double jitter = 0.0;
};
JitteredFactor cholesky_with_jitter(const Matrix& M);

} // namespace maplabel
