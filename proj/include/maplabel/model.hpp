#pragma once

#include "maplabel/geometry.hpp"
#include "maplabel/solver_bvp.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace maplabel {

/// normalization * sum_j c_j K(p, center_j). Defined everywhere, including
/// outside the training domain.
double eval_label(const LabelModel& model, const State& p);

/// Copy of the model with normalization set so that max |h| over an
/// nx-by-ny cell-center probe grid on `domain` equals 1. Throws when the
/// model is identically zero on the grid.
LabelModel normalize_maxabs(const LabelModel& model, const Domain& domain,
                            std::size_t nx = 200, std::size_t ny = 200);

/// Label values at cell centers: node (i, j) sits at
/// (x_lo + (i+1/2) dx, y_lo + (j+1/2) dy), stored row-major with y outer:
/// values[j*nx + i]. Cell centers rather than edges keep cylinder grids from
/// sampling x = 0 and x = 1 as duplicate columns.
struct LabelGrid {
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::vector<double> x; // nx cell-center abscissae
    std::vector<double> y; // ny cell-center ordinates
    std::vector<double> values;
};

LabelGrid eval_grid(const LabelModel& model, const Domain& domain, std::size_t nx,
                    std::size_t ny);

/// CSV with header x,y,h, one row per node, same row-major y-outer order.
void save_grid_csv(const LabelGrid& grid, const std::string& path);

/// Where the model came from, echoed into the file so a scan can be rerun
/// from any of its outputs.
struct ModelProvenance {
    std::string map;  // map type, plus the parameter for the standard map
    Domain domain{Topology::plane, 0.0, 1.0, 0.0, 1.0};
    std::size_t N = 0;
    double epsilon = 0.0;
    std::uint64_t sobol_skip = 0;
};

/// Versioned JSON document (schema "label-model/1") holding the kernel,
/// topology, centers, coefficients, normalization, and provenance. Doubles
/// survive the round trip bit-exactly.
void save_model(const LabelModel& model, const ModelProvenance& provenance,
                const std::string& path);

/// Loads a "label-model/1" file; rejects other schema versions and malformed
/// documents without returning a partial model.
LabelModel load_model(const std::string& path, ModelProvenance* provenance = nullptr);

} // namespace maplabel
