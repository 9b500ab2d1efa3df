#include "maplabel/solver_bvp.hpp"

#include <algorithm>
#include <cmath>

namespace maplabel {

void require_kernel_topology(const KernelSpec& kernel, Topology topology) {
    kernel.validate();
    const bool periodic = kernel.family == "periodic_product";
    if (periodic && topology != Topology::cylinder)
        throw ConfigError("the periodic kernel requires a cylinder domain");
    if (!periodic && topology == Topology::cylinder)
        throw ConfigError("cylinder domains require the periodic kernel");
}

namespace {

double clamp_energy(double e) {
    if (e < 0.0) {
        if (e < -1e-14) throw NumericalError("energy component below rounding tolerance");
        return 0.0;
    }
    return e;
}

ResidualReport report_from(const Vector& h, const Vector& c, const BoundaryVectors& bv,
                           double epsilon) {
    ResidualReport rep;
    rep.epsilon = epsilon;
    rep.E_inv = clamp_energy(invariance_energy(h));
    rep.E_bd = clamp_energy(boundary_energy(h, bv.h_bd, bv.w_bd));
    rep.E_K = clamp_energy(c.dot(h));
    rep.R = rep.E_bd + rep.E_inv + epsilon * rep.E_K;
    return rep;
}

} // namespace

std::pair<LabelModel, ResidualReport> solve_bvp(const SampleSet& samples,
                                                const KernelSpec& kernel,
                                                const BoundarySpec& boundary,
                                                double epsilon) {
    if (!(epsilon > 0.0)) throw ConfigError("solve_bvp requires epsilon > 0");
    if (samples.z.size() != 2 * samples.N || samples.N == 0)
        throw ConfigError("sample set is inconsistent: |z| != 2N");
    require_kernel_topology(kernel, samples.domain.topology);
    boundary.validate();

    const Eigen::Index N = static_cast<Eigen::Index>(samples.N);
    const Matrix K = kernel_matrix(kernel, samples.z, samples.domain.topology);
    const BoundaryVectors bv = sample_boundary(boundary, samples);

    Matrix M = bv.w_bd.asDiagonal() * K;
    M.topRows(N) += K.topRows(N) - K.bottomRows(N);
    M.bottomRows(N) += K.bottomRows(N) - K.topRows(N);
    M.diagonal().array() += epsilon;

    const Vector rhs = bv.w_bd.cwiseProduct(bv.h_bd);
    const Vector c = lu_solve(M, rhs);
    const Vector h = K * c;

    LabelModel model;
    model.kernel = kernel;
    model.topology = samples.domain.topology;
    model.centers = samples.z;
    model.coefficients = c;
    model.normalization = 1.0;

    return {std::move(model), report_from(h, c, bv, epsilon)};
}

ResidualReport residual_components(const LabelModel& model, const SampleSet& samples,
                                   const BoundarySpec& boundary, double epsilon) {
    if (model.centers.size() != samples.z.size())
        throw ConfigError("model centers do not match the sample set");
    for (std::size_t i = 0; i < samples.z.size(); ++i)
        if (model.centers[i].x != samples.z[i].x || model.centers[i].y != samples.z[i].y)
            throw ConfigError("model centers do not match the sample set");
    if (model.coefficients.size() != static_cast<Eigen::Index>(model.centers.size()))
        throw ConfigError("model coefficients do not match its centers");

    const Matrix K = kernel_matrix(model.kernel, samples.z, samples.domain.topology);
    const BoundaryVectors bv = sample_boundary(boundary, samples);
    const Vector h = K * model.coefficients;
    return report_from(h, model.coefficients, bv, epsilon);
}

} // namespace maplabel
