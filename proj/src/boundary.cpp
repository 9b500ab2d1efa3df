#include "maplabel/boundary.hpp"

#include <cmath>
#include <utility>

namespace maplabel {

namespace {

inline double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

} // namespace

BoundarySpec BoundarySpec::indicator_strips(double a, double b, double beta, double h_a,
                                            double h_b) {
    BoundarySpec s;
    s.type = "indicator_strips";
    s.a = a;
    s.b = b;
    s.beta = beta;
    s.h_a = h_a;
    s.h_b = h_b;
    s.validate();
    return s;
}

BoundarySpec BoundarySpec::smoothed_strips(double a, double b, double alpha, double beta,
                                           double h_a, double h_b) {
    BoundarySpec s;
    s.type = "smoothed_strips";
    s.a = a;
    s.b = b;
    s.alpha = alpha;
    s.beta = beta;
    s.h_a = h_a;
    s.h_b = h_b;
    s.validate();
    return s;
}

BoundarySpec BoundarySpec::zero_region(Region g) {
    BoundarySpec s;
    s.type = "zero_region";
    s.region = std::move(g);
    s.validate();
    return s;
}

void BoundarySpec::validate() const {
    if (type == "indicator_strips" || type == "smoothed_strips") {
        if (!(b > a)) throw ConfigError("boundary strips require b > a");
        if (beta < 0.0) throw ConfigError("boundary strip width beta must be nonnegative");
        if (type == "smoothed_strips" && !(alpha > 0.0))
            throw ConfigError("smoothed boundary requires alpha > 0");
        return;
    }
    if (type == "zero_region") {
        if (!region) throw ConfigError("zero_region boundary requires a region");
        return;
    }
    throw ConfigError("unknown boundary type: " + type);
}

BoundaryValue eval_boundary(const BoundarySpec& spec, const State& p) {
    if (spec.type == "indicator_strips") {
        const double in_a = p.y < spec.a + spec.beta ? 1.0 : 0.0;
        const double in_b = p.y > spec.b - spec.beta ? 1.0 : 0.0;
        return {spec.h_a * in_a + spec.h_b * in_b, in_a + in_b};
    }
    if (spec.type == "smoothed_strips") {
        const double mid = 0.5 * (spec.h_a + spec.h_b);
        const double half = 0.5 * (spec.h_b - spec.h_a);
        const double h = mid + half * std::tanh((2.0 * p.y - spec.a - spec.b) / (2.0 * spec.alpha));
        const double w = sigmoid((p.y - spec.b + spec.beta) / spec.alpha) +
                         sigmoid(-(p.y - spec.a - spec.beta) / spec.alpha);
        return {h, w};
    }
    if (spec.type == "zero_region") return {0.0, spec.region->indicator(p)};
    throw ConfigError("unknown boundary type: " + spec.type);
}

double boundary_energy(const Vector& h, const Vector& h_bd, const Vector& w_bd) {
    if (h.size() != h_bd.size() || h.size() != w_bd.size())
        throw ConfigError("boundary_energy requires equal-length vectors");
    double e = 0.0;
    for (Eigen::Index n = 0; n < h.size(); ++n) {
        const double d = h[n] - h_bd[n];
        e += w_bd[n] * d * d;
    }
    return e;
}

} // namespace maplabel
