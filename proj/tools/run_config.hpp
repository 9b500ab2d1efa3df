#pragma once

#include "maplabel/boundary.hpp"
#include "maplabel/kernels.hpp"
#include "maplabel/maps.hpp"
#include "maplabel/model.hpp"

#include "json.hpp"

#include <cstddef>
#include <cstdint>
#include <string>

namespace maplabel::cli {

/// Effective settings of one run: defaults, overlaid by a JSON config file,
/// overlaid by command-line flags. Every command echoes the resolved values
/// into its output's provenance so runs can be reproduced from the artifacts
/// alone.
struct RunConfig {
    std::string map_type; // "standard" | "pendulum" | "perturbed_pendulum"
    double map_k = 0.0;

    Domain domain{Topology::plane, 0.0, 1.0, 0.0, 1.0};
    bool domain_given = false; // lets commands fall back to a model's domain

    std::string kernel_family = "squared_exponential";
    double sigma = 1.0;
    double sigma0 = 0.0; // when > 0, sigma resolves to sigma0 / sqrt(N)

    // smoothed_strips / indicator_strips parameters.
    std::string boundary_type = "smoothed_strips";
    double bd_a = 0.0, bd_b = 1.0;
    double bd_alpha = 0.01, bd_beta = 0.01;
    double bd_h_a = -1.0, bd_h_b = 1.0;
    // outside_band: clamp to zero where y < band_lo or y > band_hi.
    double band_lo = 0.05, band_hi = 0.95;
    // rect_complement: clamp to zero outside the box.
    double rect_x_lo = -0.75, rect_x_hi = 0.75, rect_y_lo = -0.75, rect_y_hi = 0.75;

    std::size_t N = 100;
    double epsilon = 1e-8;
    double delta = 1e-8;
    int n_eigs = 1;
    double kernel_jitter = 0.0;
    std::uint64_t sobol_skip = 1;

    std::size_t J = 1000;
    std::size_t T = 100;
    std::uint64_t validation_skip = 65537;

    std::size_t seeds = 20;
    std::size_t steps = 200;

    std::size_t nx = 200, ny = 200;
};

/// Overlay a JSON config document (strict: unknown keys are ConfigErrors).
void apply_config_json(RunConfig& cfg, const nlohmann::json& doc);

/// Load a config file; unreadable files are IoErrors, malformed JSON and
/// unknown keys are ConfigErrors.
void apply_config_file(RunConfig& cfg, const std::string& path);

MapSpec make_map(const RunConfig& cfg);
KernelSpec make_kernel(const RunConfig& cfg);
BoundarySpec make_boundary(const RunConfig& cfg);
ModelProvenance make_provenance(const RunConfig& cfg);

/// The resolved settings as a JSON object for provenance blocks.
nlohmann::json effective_config(const RunConfig& cfg);

/// Parse "plane" / "cylinder".
Topology topology_from_string(const std::string& name);

} // namespace maplabel::cli
