#pragma once

#include "maplabel/boundary.hpp"
#include "maplabel/geometry.hpp"
#include "maplabel/linalg.hpp"
#include "maplabel/maps.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace maplabel {

/// N sampled states followed by their one-step images:
/// z = [x_1 .. x_N, F(x_1) .. F(x_N)]. The first half lies in `domain`;
/// images may leave it and are kept as computed.
struct SampleSet {
    std::vector<State> z;
    std::size_t N = 0;
    Domain domain{Topology::plane, 0.0, 1.0, 0.0, 1.0};
    std::uint64_t sobol_skip = 0;
    std::string map_type; // provenance only; "loaded" for file-backed sets
    double map_k = 0.0;   // provenance for the standard map

    const State& point(std::size_t n) const { return z[n]; }
    const State& image(std::size_t n) const { return z[N + n]; }
};

/// Sobol-sample N states from the domain (offset `skip` into the sequence),
/// apply the map once to each, and assemble the 2N sequence. Integration
/// failures carry the index of the offending sample.
SampleSet build_samples(const MapSpec& map, const Domain& domain, std::size_t N,
                        std::uint64_t skip = 1);

/// Sum of squared differences between the first and second half:
/// sum_n (h[n] - h[N+n])^2. Zero for any vector that is constant across
/// matched pairs, in particular for all constant vectors.
double invariance_energy(const Vector& h);

/// Difference operator (I | -I): length 2N in, N out.
Vector apply_ginv(const Vector& v);

/// Transpose of the difference operator: length N in, 2N out.
Vector apply_ginv_t(const Vector& v);

/// The 2x2-block form [[I, -I], [-I, I]] applied matrix-free.
Vector apply_gtg(const Vector& v);

/// Boundary data evaluated at every entry of z (length 2N each).
struct BoundaryVectors {
    Vector h_bd;
    Vector w_bd;
};
BoundaryVectors sample_boundary(const BoundarySpec& spec, const SampleSet& samples);

/// CSV cache of a sample set (columns: index, x, y, image_x, image_y) so
/// expensive map evaluations can be reused across runs.
void save_samples_csv(const SampleSet& samples, const std::string& path);

/// Rebuild a sample set from a CSV cache. The domain is not stored in the
/// file; the caller supplies it, and the loaded points must lie inside.
SampleSet load_samples_csv(const std::string& path, const Domain& domain);

} // namespace maplabel
