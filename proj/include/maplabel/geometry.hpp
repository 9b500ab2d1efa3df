#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "maplabel/errors.hpp"

namespace maplabel {

/// Phase-space topology. Cylinder means the x coordinate is an angle with
/// period 1; the y coordinate is always unbounded.
enum class Topology { plane, cylinder };

/// A point of the plane or cylinder. On the cylinder the canonical
/// representative has x in [0,1); use wrap() to canonicalize.
struct State {
    double x = 0.0;
    double y = 0.0;
};

/// Reduce x to [0,1). wrap_unit(wrap_unit(x)) == wrap_unit(x).
double wrap_unit(double x);

/// Canonicalize a state for the given topology (no-op on the plane).
State wrap(const State& s, Topology topology);

/// Axis-aligned sampling domain: a rectangle on the plane or an annulus
/// (full period in x) on the cylinder.
struct Domain {
    Topology topology = Topology::plane;
    double x_lo = 0.0;
    double x_hi = 1.0;
    double y_lo = 0.0;
    double y_hi = 1.0;

    double x_span() const { return x_hi - x_lo; }
    double y_span() const { return y_hi - y_lo; }

    /// Throws ConfigError if the ranges are empty or inverted, or if a
    /// cylinder domain does not cover the full period [0,1).
    void validate() const;
};

/// Closed-interval membership after wrapping (cylinder x always belongs).
bool in_domain(const State& p, const Domain& d);

/// Componentwise difference p - q. On the cylinder dx is returned raw
/// (unreduced); periodic kernels consume it through sin^2(pi*dx), which is
/// insensitive to the representative.
struct Separation {
    double dx = 0.0;
    double dy = 0.0;
};
Separation separation(const State& p, const State& q, Topology topology);

/// A decidable subset of phase space used for boundary conditions. Membership
/// is defined on all of the plane/cylinder, including points outside any
/// sampling domain.
class Region {
public:
    /// Complement of the closed box [x_lo,x_hi] x [y_lo,y_hi].
    static Region rect_complement(double x_lo, double x_hi, double y_lo, double y_hi);
    /// Open lower half-strip { y < y_max }.
    static Region lower_strip(double y_max);
    /// Open upper half-strip { y > y_min }.
    static Region upper_strip(double y_min);
    /// Union of regions.
    static Region union_of(std::vector<Region> parts);

    bool contains(const State& p) const;

    /// 1 if contains(p), else 0.
    double indicator(const State& p) const { return contains(p) ? 1.0 : 0.0; }

    enum class Kind { rect_complement, lower_strip, upper_strip, union_of };
    Kind kind() const { return kind_; }
    const std::vector<double>& params() const { return params_; }
    const std::vector<Region>& parts() const { return parts_; }

private:
    Region() = default;
    Kind kind_ = Kind::lower_strip;
    std::vector<double> params_;
    std::vector<Region> parts_;
};

/// First n points of the 2D Sobol sequence (Joe-Kuo direction numbers,
/// Gray-code order), skipping the first `skip` entries and affinely scaled to
/// the domain. Deterministic; n == 0 yields an empty list. Index 0 is the
/// domain corner, so samplers skip it by default.
std::vector<State> sobol_sample(const Domain& d, std::size_t n, std::uint64_t skip);

} // namespace maplabel
