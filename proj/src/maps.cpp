#include "maplabel/maps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace maplabel {

void IntegratorConfig::validate() const {
    if (!(rtol > 0.0) || !(atol > 0.0))
        throw ConfigError("integrator tolerances must be positive");
    if (max_steps == 0)
        throw ConfigError("integrator max_steps must be positive");
    if (initial_step < 0.0)
        throw ConfigError("integrator initial_step must be nonnegative");
}

namespace {

inline double rms2(double a, double b) { return std::sqrt(0.5 * (a * a + b * b)); }

// Starting step size heuristic: match the magnitude of the first derivative,
// then refine with one Euler probe of the second derivative.
double initial_step_guess(const VectorField& field, const State& y0, const State& f0,
                          double t0, double span, const IntegratorConfig& cfg) {
    const double sx = cfg.atol + cfg.rtol * std::abs(y0.x);
    const double sy = cfg.atol + cfg.rtol * std::abs(y0.y);
    const double d0 = rms2(y0.x / sx, y0.y / sy);
    const double d1 = rms2(f0.x / sx, f0.y / sy);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span);

    const State y1{y0.x + h0 * f0.x, y0.y + h0 * f0.y};
    const State f1 = field(t0 + h0, y1);
    const double d2 = rms2((f1.x - f0.x) / sx, (f1.y - f0.y) / sy) / h0;

    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    return std::min({100.0 * h0, h1, span});
}

} // namespace

State rk45_integrate(const VectorField& field, const State& s0, double t0, double t1,
                     const IntegratorConfig& cfg) {
    cfg.validate();
    if (t1 < t0) throw ConfigError("rk45_integrate requires t1 >= t0");
    if (t1 == t0) return s0;

    // Dormand-Prince 4(5) tableau. The propagated solution is fifth order;
    // e[] holds the difference to the embedded fourth-order solution.
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                     b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    double t = t0;
    State y = s0;
    State k1 = field(t, y);

    double h = cfg.initial_step > 0.0 ? std::min(cfg.initial_step, t1 - t0)
                                      : initial_step_guess(field, y, k1, t0, t1 - t0, cfg);

    std::size_t attempts = 0;
    while (t < t1) {
        if (++attempts > cfg.max_steps)
            throw IntegrationError("rk45_integrate: step budget exhausted");
        bool last = false;
        if (h >= t1 - t) {
            h = t1 - t;
            last = true;
        }

        const State k2 = field(t + c2 * h, State{y.x + h * (a21 * k1.x),
                                                 y.y + h * (a21 * k1.y)});
        const State k3 = field(t + c3 * h, State{y.x + h * (a31 * k1.x + a32 * k2.x),
                                                 y.y + h * (a31 * k1.y + a32 * k2.y)});
        const State k4 = field(t + c4 * h,
                               State{y.x + h * (a41 * k1.x + a42 * k2.x + a43 * k3.x),
                                     y.y + h * (a41 * k1.y + a42 * k2.y + a43 * k3.y)});
        const State k5 = field(
            t + c5 * h,
            State{y.x + h * (a51 * k1.x + a52 * k2.x + a53 * k3.x + a54 * k4.x),
                  y.y + h * (a51 * k1.y + a52 * k2.y + a53 * k3.y + a54 * k4.y)});
        const State k6 = field(
            t + h,
            State{y.x + h * (a61 * k1.x + a62 * k2.x + a63 * k3.x + a64 * k4.x + a65 * k5.x),
                  y.y + h * (a61 * k1.y + a62 * k2.y + a63 * k3.y + a64 * k4.y + a65 * k5.y)});
        const State y1{y.x + h * (b1 * k1.x + b3 * k3.x + b4 * k4.x + b5 * k5.x + b6 * k6.x),
                       y.y + h * (b1 * k1.y + b3 * k3.y + b4 * k4.y + b5 * k5.y + b6 * k6.y)};
        const State k7 = field(t + h, y1);

        const double ex =
            h * (e1 * k1.x + e3 * k3.x + e4 * k4.x + e5 * k5.x + e6 * k6.x + e7 * k7.x);
        const double ey =
            h * (e1 * k1.y + e3 * k3.y + e4 * k4.y + e5 * k5.y + e6 * k6.y + e7 * k7.y);
        const double sx = cfg.atol + cfg.rtol * std::max(std::abs(y.x), std::abs(y1.x));
        const double sy = cfg.atol + cfg.rtol * std::max(std::abs(y.y), std::abs(y1.y));
        const double err = rms2(ex / sx, ey / sy);

        if (err <= 1.0) {
            t = last ? t1 : t + h;
            y = y1;
            k1 = k7; // first-same-as-last
            h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
        } else {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
        if (!(h > 0.0) || t + h == t)
            throw IntegrationError("rk45_integrate: step size underflow");
    }
    return y;
}

State standard_map(const State& s, double k) {
    const double b1 = s.y - k / (2.0 * std::numbers::pi) * std::sin(2.0 * std::numbers::pi * s.x);
    return State{wrap_unit(s.x + b1), b1};
}

State pendulum_map(const State& s, const IntegratorConfig& cfg) {
    static const VectorField field = [](double, const State& p) {
        return State{p.y, -std::sin(2.0 * std::numbers::pi * p.x)};
    };
    const State out = rk45_integrate(field, s, 0.0, std::numbers::sqrt2, cfg);
    return State{wrap_unit(out.x), out.y};
}

State perturbed_pendulum_map(const State& s, const IntegratorConfig& cfg) {
    static const VectorField field = [](double t, const State& p) {
        const double drive = (3.0 * std::sin(2.0 * t) + 0.7 * std::sin(3.0 * t)) / 20.0;
        return State{p.y - p.x * drive, -0.25 * std::sin(p.x) + p.y * drive};
    };
    return rk45_integrate(field, s, 0.0, 2.0 * std::numbers::pi, cfg);
}

MapSpec MapSpec::standard(double k) {
    MapSpec m;
    m.type_ = "standard";
    m.topology_ = Topology::cylinder;
    m.k_ = k;
    return m;
}

MapSpec MapSpec::pendulum() {
    MapSpec m;
    m.type_ = "pendulum";
    m.topology_ = Topology::cylinder;
    return m;
}

MapSpec MapSpec::perturbed_pendulum() {
    MapSpec m;
    m.type_ = "perturbed_pendulum";
    m.topology_ = Topology::plane;
    return m;
}

MapSpec MapSpec::ode_field(VectorField field, double t0, double t1, Topology topology) {
    if (!field) throw ConfigError("ode_field requires a vector field");
    if (!(t1 >= t0)) throw ConfigError("ode_field requires t1 >= t0");
    MapSpec m;
    m.type_ = "ode_field";
    m.topology_ = topology;
    m.field_ = std::move(field);
    m.t0_ = t0;
    m.t1_ = t1;
    return m;
}

State MapSpec::apply(const State& s) const {
    if (type_ == "standard") return standard_map(s, k_);
    if (type_ == "pendulum") return pendulum_map(s, integrator_);
    if (type_ == "perturbed_pendulum") return perturbed_pendulum_map(s, integrator_);
    return wrap(rk45_integrate(field_, s, t0_, t1_, integrator_), topology_);
}

std::vector<State> iterate(const MapSpec& map, const State& s0, std::size_t T) {
    std::vector<State> out;
    out.reserve(T + 1);
    out.push_back(s0);
    for (std::size_t t = 1; t <= T; ++t) {
        try {
            out.push_back(map.apply(out.back()));
        } catch (const IntegrationError& e) {
            throw IntegrationError(std::string(e.what()) + " at iterate " + std::to_string(t), t);
        }
    }
    return out;
}

} // namespace maplabel
