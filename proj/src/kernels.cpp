#include "maplabel/kernels.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace maplabel {

void KernelSpec::validate() const {
    if (family != "squared_exponential" && family != "inverse_multiquadric" &&
        family != "periodic_product")
        throw ConfigError("unknown kernel family: " + family);
    if (!(sigma > 0.0)) throw ConfigError("kernel sigma must be positive");
}

double eval_kernel(const KernelSpec& spec, const State& p, const State& q,
                   Topology topology) {
    const Separation d = separation(p, q, topology);
    const double s2 = spec.sigma * spec.sigma;
    if (spec.family == "squared_exponential") {
        const double r2 = d.dx * d.dx + d.dy * d.dy;
        return std::exp(-r2 / (2.0 * s2));
    }
    if (spec.family == "inverse_multiquadric") {
        const double r2 = d.dx * d.dx + d.dy * d.dy;
        return 1.0 / std::sqrt(1.0 + r2 / s2);
    }
    if (spec.family == "periodic_product") {
        const double sx = std::sin(std::numbers::pi * d.dx);
        return std::exp(-sx * sx / (2.0 * std::numbers::pi * s2) -
                        d.dy * d.dy / (2.0 * s2));
    }
    throw ConfigError("unknown kernel family: " + spec.family);
}

Matrix kernel_matrix(const KernelSpec& spec, const std::vector<State>& points,
                     Topology topology) {
    spec.validate();
    if (points.empty()) throw ConfigError("kernel_matrix requires at least one point");
    const Eigen::Index n = static_cast<Eigen::Index>(points.size());
    Matrix K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        K(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = eval_kernel(spec, points[static_cast<std::size_t>(i)],
                                         points[static_cast<std::size_t>(j)], topology);
            K(i, j) = v;
            K(j, i) = v;
        }
    }
    return K;
}

double sigma_from_density(double sigma0, std::size_t N) {
    if (!(sigma0 > 0.0)) throw ConfigError("sigma0 must be positive");
    if (N < 1) throw ConfigError("sample count must be at least 1");
    return sigma0 / std::sqrt(static_cast<double>(N));
}

JitteredFactor cholesky_with_jitter(const Matrix& M) {
    try {
        return {cholesky(M), 0.0};
    } catch (const NumericalError&) {
    }
    double eta = 1e-12 * M.trace() / static_cast<double>(M.rows());
    for (int attempt = 0; attempt < 4; ++attempt, eta *= 100.0) {
        Matrix Mj = M;
        Mj.diagonal().array() += eta;
        try {
            return {cholesky(Mj), eta};
        } catch (const NumericalError&) {
        }
    }
    throw NumericalError("cholesky_with_jitter: matrix stayed indefinite after jitter");
}

} // namespace maplabel
