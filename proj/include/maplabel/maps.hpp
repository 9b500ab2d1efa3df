#pragma once

#include "maplabel/errors.hpp"
#include "maplabel/geometry.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace maplabel {

/// Adaptive Runge-Kutta control parameters.
struct IntegratorConfig {
    double rtol = 1e-10;
    double atol = 1e-12;
    std::size_t max_steps = 1000000;
    double initial_step = 0.0; // 0 selects the step automatically

    void validate() const;
};

/// Time-dependent planar vector field: returns (dx/dt, dy/dt) at (t, s).
using VectorField = std::function<State(double t, const State& s)>;

/// Integrate ds/dt = field(t, s) from t0 to t1 (t1 >= t0) with the
/// Dormand-Prince embedded 4(5) pair and proportional step control. Throws
/// IntegrationError when max_steps is exhausted before reaching t1.
State rk45_integrate(const VectorField& field, const State& s0, double t0, double t1,
                     const IntegratorConfig& cfg);

/// One application of the standard map on the cylinder:
/// b' = b - (k/2pi) sin(2pi a), a' = (a + b') mod 1. b is left unwrapped.
State standard_map(const State& s, double k);

/// Pendulum return map: integrate dx/dt = y, dy/dt = -sin(2pi x) over a time
/// interval of sqrt(2), then wrap x to [0,1).
State pendulum_map(const State& s, const IntegratorConfig& cfg);

/// Return map of a periodically driven pendulum over one drive period
/// t in [0, 2pi], on the plane (no wrapping):
///   dx/dt =  y - (x/20) (3 sin 2t + 0.7 sin 3t)
///   dy/dt = -(1/4) sin x + (y/20) (3 sin 2t + 0.7 sin 3t)
State perturbed_pendulum_map(const State& s, const IntegratorConfig& cfg);

/// A selectable discrete-time map of the plane or cylinder. Evaluation is
/// pure: apply(s) depends only on the selected map and s.
class MapSpec {
public:
    static MapSpec standard(double k);
    static MapSpec pendulum();
    static MapSpec perturbed_pendulum();
    static MapSpec ode_field(VectorField field, double t0, double t1, Topology topology);

    State apply(const State& s) const;

    Topology topology() const { return topology_; }
    const std::string& type() const { return type_; }
    /// Standard-map coupling strength; meaningful only for type() == "standard".
    double k() const { return k_; }

    IntegratorConfig& integrator() { return integrator_; }
    const IntegratorConfig& integrator() const { return integrator_; }

private:
    MapSpec() = default;

    std::string type_;
    Topology topology_ = Topology::plane;
    double k_ = 0.0;
    VectorField field_;
    double t0_ = 0.0;
    double t1_ = 0.0;
    IntegratorConfig integrator_;
};

/// Trajectory [s0, F(s0), ..., F^T(s0)], T+1 states. Integration failures are
/// rethrown with the index of the failing iterate attached.
std::vector<State> iterate(const MapSpec& map, const State& s0, std::size_t T);

} // namespace maplabel
