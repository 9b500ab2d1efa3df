#include "maplabel/validation.hpp"

#include "maplabel/errors.hpp"
#include "maplabel/model.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>
#include <thread>

namespace maplabel {

void BirkhoffConfig::validate() const {
    if (T < 1) throw ConfigError("Birkhoff average length T must be at least 1");
    if (weight_kind != "exponential_bump") {
        throw ConfigError("unknown Birkhoff weight kind: " + weight_kind);
    }
}

std::vector<double> birkhoff_weights(std::size_t T) {
    if (T < 1) throw ConfigError("Birkhoff average length T must be at least 1");
    // Normalize in long double before any rounding to double, so T = 1
    // yields exactly {1.0} and the sum-to-one property holds at 1e-15. The
    // tails underflow to zero for large T (the bump is ~1e-435 at t = 0 when
    // T = 1000), which only strengthens normalization.
    std::vector<long double> g(T);
    long double total = 0.0L;
    for (std::size_t t = 0; t < T; ++t) {
        const long double s = static_cast<long double>(t + 1) /
                              static_cast<long double>(T + 1);
        g[t] = std::exp(static_cast<long double>(-1.0L / (s * (1.0L - s))));
        total += g[t];
    }
    std::vector<double> w(T);
    for (std::size_t t = 0; t < T; ++t) {
        w[t] = static_cast<double>(g[t] / total);
    }
    // Exact symmetry: the raw bump is symmetric analytically but not always
    // bitwise (s and 1-s round differently), so mirror the lower half.
    for (std::size_t t = 0; t < T / 2; ++t) {
        w[T - 1 - t] = w[t];
    }
    return w;
}

double weighted_birkhoff(const MapSpec& map, const Observable& f, const State& x0,
                         const BirkhoffConfig& cfg) {
    cfg.validate();
    if (!f) throw ConfigError("observable is empty");
    const std::vector<double> w = birkhoff_weights(cfg.T);
    long double acc = static_cast<long double>(w[0]) * f(x0);
    State x = x0;
    for (std::size_t t = 1; t < cfg.T; ++t) {
        x = map.apply(x);
        acc += static_cast<long double>(w[t]) * f(x);
    }
    return static_cast<double>(acc);
}

double score_from_pairs(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 2) throw ConfigError("need at least 2 (h, WB) pairs");
    long double mean = 0.0L;
    for (const auto& [h, wb] : pairs) mean += h;
    mean /= static_cast<long double>(pairs.size());
    long double num = 0.0L;
    long double den = 0.0L;
    for (const auto& [h, wb] : pairs) {
        const long double r = static_cast<long double>(h) - wb;
        const long double d = static_cast<long double>(h) - mean;
        num += r * r;
        den += d * d;
    }
    if (den == 0.0L) {
        throw NumericalError(
            "validation score undefined: h is constant over the validation points");
    }
    return static_cast<double>(num / den);
}

ValidationReport validation_score(const LabelModel& model, const MapSpec& map,
                                  const Domain& domain, std::size_t J,
                                  const BirkhoffConfig& cfg, std::uint64_t skip) {
    cfg.validate();
    domain.validate();
    if (J < 2) throw ConfigError("validation needs J >= 2 points");
    if (model.centers.empty()) throw ConfigError("model has no centers");

    const std::vector<State> xs = sobol_sample(domain, J, skip);
    const Observable f = [&model](const State& p) { return eval_label(model, p); };

    ValidationReport report;
    report.J = J;
    report.T = cfg.T;
    report.pairs.assign(J, {0.0, 0.0});

    // The J averages are independent; each worker fills a disjoint index
    // range, so the pairs come out in sample order regardless of scheduling.
    const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    const std::size_t n_chunks = std::min(J, hw);
    auto run_chunk = [&](std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j) {
            const double h = eval_label(model, xs[j]);
            const double wb = weighted_birkhoff(map, f, xs[j], cfg);
            report.pairs[j] = {h, wb};
        }
    };
    if (n_chunks <= 1) {
        run_chunk(0, J);
    } else {
        std::vector<std::future<void>> workers;
        workers.reserve(n_chunks);
        for (std::size_t chunk = 0; chunk < n_chunks; ++chunk) {
            const std::size_t begin = J * chunk / n_chunks;
            const std::size_t end = J * (chunk + 1) / n_chunks;
            workers.push_back(std::async(std::launch::async, run_chunk, begin, end));
        }
        for (auto& worker : workers) worker.get();
    }

    report.S = score_from_pairs(report.pairs);
    return report;
}

} // namespace maplabel
