#pragma once

#include "maplabel/geometry.hpp"
#include "maplabel/maps.hpp"
#include "maplabel/solver_bvp.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace maplabel {

/// Trajectory average weighted by the bump g(s) = exp(-1/(s(1-s))): smooth
/// weights vanish to all orders at the ends, so the average converges
/// super-polynomially in T on quasiperiodic orbits (and only ~1/sqrt(T) on
/// chaotic ones), which is what makes it usable as an invariance check.
struct BirkhoffConfig {
    std::size_t T = 100;
    std::string weight_kind = "exponential_bump";

    void validate() const;
};

/// The T normalized weights w_t = g((t+1)/(T+1)) / sum. The argument never
/// hits 0 or 1, so g needs no endpoint guard. Weights sum to 1 and are
/// symmetric: w_t = w_{T-1-t}.
std::vector<double> birkhoff_weights(std::size_t T);

using Observable = std::function<double(const State&)>;

/// sum_{t=0}^{T-1} w_t f(F^t(x0)), applying the map exactly T-1 times.
double weighted_birkhoff(const MapSpec& map, const Observable& f, const State& x0,
                         const BirkhoffConfig& cfg);

struct ValidationReport {
    double S = 0.0;
    std::vector<std::pair<double, double>> pairs; // (h(x_j), WB[h](x_j))
    std::size_t J = 0;
    std::size_t T = 0;
};

/// S = sum_j (h_j - wb_j)^2 / sum_j (h_j - hbar)^2 from precomputed pairs.
/// Throws when the denominator vanishes (h constant over the points).
double score_from_pairs(const std::vector<std::pair<double, double>>& pairs);

/// Scores how invariant the model's label is under the map: compares h(x_j)
/// against the weighted Birkhoff average of h along each trajectory at J
/// Sobol points. `skip` offsets the validation stream; the default sits far
/// past any training offset so validation points never repeat training ones.
ValidationReport validation_score(const LabelModel& model, const MapSpec& map,
                                  const Domain& domain, std::size_t J,
                                  const BirkhoffConfig& cfg,
                                  std::uint64_t skip = 65537);

} // namespace maplabel
