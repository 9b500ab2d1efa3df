#pragma once

#include "maplabel/geometry.hpp"
#include "maplabel/linalg.hpp"

#include <optional>
#include <string>

namespace maplabel {

/// Boundary data h_bd (target values) and w_bd (weights), defined on all of
/// phase space so that points mapped outside the sampling domain still
/// contribute. Variants:
///   indicator_strips  h_bd = h_a on {y < a+beta} plus h_b on {y > b-beta};
///                     w_bd is the sum of the two indicators
///   smoothed_strips   h_bd = (h_a+h_b)/2 + ((h_b-h_a)/2) tanh((2y-a-b)/(2 alpha));
///                     w_bd = sig((y-b+beta)/alpha) + sig(-(y-a-beta)/alpha)
///   zero_region       h_bd = 0, w_bd = indicator of the region
struct BoundarySpec {
    std::string type; // "indicator_strips" | "smoothed_strips" | "zero_region"
    double a = 0.0;
    double b = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double h_a = -1.0;
    double h_b = 1.0;
    std::optional<Region> region;

    static BoundarySpec indicator_strips(double a, double b, double beta, double h_a = -1.0,
                                         double h_b = 1.0);
    static BoundarySpec smoothed_strips(double a, double b, double alpha, double beta,
                                        double h_a = -1.0, double h_b = 1.0);
    static BoundarySpec zero_region(Region g);

    void validate() const;
};

struct BoundaryValue {
    double h_bd = 0.0;
    double w_bd = 0.0;
};

/// Evaluate the boundary data at one state; w_bd >= 0 always.
BoundaryValue eval_boundary(const BoundarySpec& spec, const State& p);

/// Weighted misfit sum_n w_bd[n] * (h[n] - h_bd[n])^2.
double boundary_energy(const Vector& h, const Vector& h_bd, const Vector& w_bd);

} // namespace maplabel
