#pragma once

#include "maplabel/boundary.hpp"
#include "maplabel/kernels.hpp"
#include "maplabel/sampling.hpp"

#include <utility>
#include <vector>

namespace maplabel {

/// Energy decomposition of a solved label function:
/// R = E_bd + E_inv + epsilon * E_K. Components are clamped at zero when
/// rounding leaves them within -1e-14.
struct ResidualReport {
    double R = 0.0;
    double E_inv = 0.0;
    double E_bd = 0.0;
    double E_K = 0.0;
    double epsilon = 0.0;
};

/// Kernel expansion h(x) = normalization * sum_j c_j K(x, z_j).
struct LabelModel {
    KernelSpec kernel;
    Topology topology = Topology::plane;
    std::vector<State> centers;
    Vector coefficients;
    double normalization = 1.0;
};

/// Reject kernel/domain pairings that silently break smoothness assumptions:
/// the periodic kernel pairs with cylinder domains, the others with the plane.
void require_kernel_topology(const KernelSpec& kernel, Topology topology);

/// Least-squares label function with boundary data: solves
/// ((W_bd + G^T G) K + epsilon I) c = W_bd h_bd by dense LU and reports the
/// energy decomposition of h = K c. The system matrix is nonsymmetric.
std::pair<LabelModel, ResidualReport> solve_bvp(const SampleSet& samples,
                                                const KernelSpec& kernel,
                                                const BoundarySpec& boundary,
                                                double epsilon);

/// Energy decomposition of an existing model over the samples it was built
/// from (centers must equal samples.z). Uses the stored coefficients; the
/// post-hoc normalization factor is not applied.
ResidualReport residual_components(const LabelModel& model, const SampleSet& samples,
                                   const BoundarySpec& boundary, double epsilon);

} // namespace maplabel
