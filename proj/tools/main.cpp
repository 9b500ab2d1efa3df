#include "run_config.hpp"

#include "maplabel/detail/io.hpp"
#include "maplabel/errors.hpp"
#include "maplabel/sampling.hpp"
#include "maplabel/solver_bvp.hpp"
#include "maplabel/solver_evp.hpp"
#include "maplabel/validation.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <vector>

using namespace maplabel;
using cli::RunConfig;
using nlohmann::json;

namespace {

// Command-line values that, when present, override the config file.
struct Overrides {
    std::string config_path;
    std::optional<std::string> map_type;
    std::optional<double> map_k;
    std::optional<std::string> topology;
    std::vector<double> domain; // x_lo x_hi y_lo y_hi
    std::optional<std::string> family;
    std::optional<double> sigma;
    std::optional<double> sigma0;
    std::optional<std::string> boundary;
    std::optional<double> bd_a, bd_b, bd_alpha, bd_beta;
    std::vector<double> band; // y_lo y_hi
    std::vector<double> rect; // x_lo x_hi y_lo y_hi
    std::optional<std::size_t> N;
    std::optional<double> epsilon, delta, kernel_jitter;
    std::optional<int> n_eigs;
    std::optional<std::uint64_t> sobol_skip;
    std::optional<std::size_t> J, T;
    std::optional<std::uint64_t> validation_skip;
    std::optional<std::size_t> seeds, steps, nx, ny;
};

void add_common_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_path, "JSON config file; flags override its keys");
    cmd->add_option("--map", o.map_type, "standard, pendulum, or perturbed_pendulum");
    cmd->add_option("--k", o.map_k, "standard-map coupling strength");
    cmd->add_option("--topology", o.topology, "plane or cylinder");
    cmd->add_option("--domain", o.domain, "sampling box: x_lo x_hi y_lo y_hi")->expected(4);
    cmd->add_option("--family", o.family,
                    "kernel family: squared_exponential, inverse_multiquadric, or "
                    "periodic_product");
    cmd->add_option("--sigma", o.sigma, "kernel width");
    cmd->add_option("--sigma0", o.sigma0, "kernel width scale; sigma = sigma0 / sqrt(N)");
    cmd->add_option("--boundary", o.boundary,
                    "smoothed_strips, indicator_strips, outside_band, or rect_complement");
    cmd->add_option("--a", o.bd_a, "lower strip position");
    cmd->add_option("--b", o.bd_b, "upper strip position");
    cmd->add_option("--alpha", o.bd_alpha, "strip smoothing length");
    cmd->add_option("--beta", o.bd_beta, "strip depth");
    cmd->add_option("--band", o.band, "kept band for outside_band: y_lo y_hi")->expected(2);
    cmd->add_option("--rect", o.rect, "kept box for rect_complement: x_lo x_hi y_lo y_hi")
        ->expected(4);
    cmd->add_option("--N", o.N, "number of sampled states");
    cmd->add_option("--epsilon", o.epsilon, "regularization weight");
    cmd->add_option("--delta", o.delta, "eigenvalue shift");
    cmd->add_option("--n-eigs", o.n_eigs, "number of eigenpairs");
    cmd->add_option("--kernel-jitter", o.kernel_jitter, "diagonal added to the Gram matrix");
    cmd->add_option("--skip", o.sobol_skip, "Sobol offset for training samples");
    cmd->add_option("--J", o.J, "validation points");
    cmd->add_option("--T", o.T, "trajectory average length");
    cmd->add_option("--validation-skip", o.validation_skip,
                    "Sobol offset for validation points");
    cmd->add_option("--seeds", o.seeds, "trajectory count");
    cmd->add_option("--steps", o.steps, "iterations per trajectory");
    cmd->add_option("--nx", o.nx, "grid columns");
    cmd->add_option("--ny", o.ny, "grid rows");
}

RunConfig resolve(const Overrides& o) {
    RunConfig cfg;
    if (!o.config_path.empty()) cli::apply_config_file(cfg, o.config_path);
    if (o.map_type) cfg.map_type = *o.map_type;
    if (o.map_k) cfg.map_k = *o.map_k;
    if (o.topology) {
        cfg.domain.topology = cli::topology_from_string(*o.topology);
        cfg.domain_given = true;
    }
    if (!o.domain.empty()) {
        cfg.domain.x_lo = o.domain[0];
        cfg.domain.x_hi = o.domain[1];
        cfg.domain.y_lo = o.domain[2];
        cfg.domain.y_hi = o.domain[3];
        cfg.domain_given = true;
    }
    if (o.family) cfg.kernel_family = *o.family;
    if (o.sigma) {
        cfg.sigma = *o.sigma;
        cfg.sigma0 = 0.0; // an explicit width beats a configured scale
    }
    if (o.sigma0) cfg.sigma0 = *o.sigma0;
    if (o.boundary) cfg.boundary_type = *o.boundary;
    if (o.bd_a) cfg.bd_a = *o.bd_a;
    if (o.bd_b) cfg.bd_b = *o.bd_b;
    if (o.bd_alpha) cfg.bd_alpha = *o.bd_alpha;
    if (o.bd_beta) cfg.bd_beta = *o.bd_beta;
    if (!o.band.empty()) {
        cfg.band_lo = o.band[0];
        cfg.band_hi = o.band[1];
    }
    if (!o.rect.empty()) {
        cfg.rect_x_lo = o.rect[0];
        cfg.rect_x_hi = o.rect[1];
        cfg.rect_y_lo = o.rect[2];
        cfg.rect_y_hi = o.rect[3];
    }
    if (o.N) cfg.N = *o.N;
    if (o.epsilon) cfg.epsilon = *o.epsilon;
    if (o.delta) cfg.delta = *o.delta;
    if (o.n_eigs) cfg.n_eigs = *o.n_eigs;
    if (o.kernel_jitter) cfg.kernel_jitter = *o.kernel_jitter;
    if (o.sobol_skip) cfg.sobol_skip = *o.sobol_skip;
    if (o.J) cfg.J = *o.J;
    if (o.T) cfg.T = *o.T;
    if (o.validation_skip) cfg.validation_skip = *o.validation_skip;
    if (o.seeds) cfg.seeds = *o.seeds;
    if (o.steps) cfg.steps = *o.steps;
    if (o.nx) cfg.nx = *o.nx;
    if (o.ny) cfg.ny = *o.ny;
    return cfg;
}

void write_json_file(const std::string& path, const json& doc) {
    detail::write_file(path, doc.dump(2) + "\n");
}

void emit_report(const std::string& path, const json& doc) {
    if (path.empty()) {
        std::fputs((doc.dump(2) + "\n").c_str(), stdout);
    } else {
        write_json_file(path, doc);
    }
}

void write_provenance_sibling(const std::string& out, const char* command,
                              const RunConfig& cfg, json extra = json::object()) {
    json doc;
    doc["command"] = command;
    doc["config"] = cli::effective_config(cfg);
    for (auto& [key, value] : extra.items()) doc[key] = value;
    write_json_file(out + ".provenance.json", doc);
}

// Run fn(0..n-1) on a small worker pool; results keep index order.
template <typename Fn>
std::vector<std::string> pooled_rows(std::size_t n, const Fn& fn) {
    std::vector<std::string> rows(n);
    const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    const std::size_t n_chunks = std::min(n, hw);
    auto run_chunk = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) rows[i] = fn(i);
    };
    if (n_chunks <= 1) {
        run_chunk(0, n);
    } else {
        std::vector<std::future<void>> workers;
        workers.reserve(n_chunks);
        for (std::size_t chunk = 0; chunk < n_chunks; ++chunk) {
            workers.push_back(std::async(std::launch::async, run_chunk,
                                         n * chunk / n_chunks, n * (chunk + 1) / n_chunks));
        }
        for (auto& worker : workers) worker.get();
    }
    return rows;
}

LabelModel model_from_pair(const SampleSet& samples, const KernelSpec& kernel,
                           const EvpPair& pair) {
    LabelModel model;
    model.kernel = kernel;
    model.topology = samples.domain.topology;
    model.centers = samples.z;
    model.coefficients = pair.c;
    return model;
}

void do_poincare(const RunConfig& cfg, const std::string& out) {
    const MapSpec map = make_map(cfg);
    cfg.domain.validate();
    if (cfg.seeds == 0) throw ConfigError("poincare needs at least one seed");

    std::string text = "trajectory_id,step,x,y\n";
    const std::vector<State> seeds = sobol_sample(cfg.domain, cfg.seeds, cfg.sobol_skip);
    for (std::size_t p = 0; p < seeds.size(); ++p) {
        const std::vector<State> traj = iterate(map, seeds[p], cfg.steps);
        for (std::size_t step = 0; step < traj.size(); ++step) {
            text += std::to_string(p);
            text += ',';
            text += std::to_string(step);
            text += ',';
            text += detail::format_double(traj[step].x);
            text += ',';
            text += detail::format_double(traj[step].y);
            text += '\n';
        }
    }
    detail::write_file(out, text);
    write_provenance_sibling(out, "poincare", cfg);
}

void do_solve_bvp(const RunConfig& cfg, const std::string& model_out,
                  const std::string& report_out) {
    const MapSpec map = make_map(cfg);
    const KernelSpec kernel = make_kernel(cfg);
    const BoundarySpec boundary = make_boundary(cfg);
    const SampleSet samples = build_samples(map, cfg.domain, cfg.N, cfg.sobol_skip);
    const auto [model, rep] = solve_bvp(samples, kernel, boundary, cfg.epsilon);

    if (!model_out.empty()) save_model(model, make_provenance(cfg), model_out);

    json doc;
    doc["R"] = rep.R;
    doc["E_inv"] = rep.E_inv;
    doc["E_bd"] = rep.E_bd;
    doc["E_K"] = rep.E_K;
    doc["epsilon"] = rep.epsilon;
    if (!model_out.empty()) doc["model_file"] = model_out;
    doc["provenance"] = cli::effective_config(cfg);
    emit_report(report_out, doc);
}

void do_solve_evp(const RunConfig& cfg, const std::string& model_prefix,
                  const std::string& report_out) {
    const MapSpec map = make_map(cfg);
    const KernelSpec kernel = make_kernel(cfg);
    const BoundarySpec boundary = make_boundary(cfg);
    const SampleSet samples = build_samples(map, cfg.domain, cfg.N, cfg.sobol_skip);
    const EigenResult res = solve_evp(samples, kernel, boundary, cfg.epsilon, cfg.delta,
                                      cfg.n_eigs, cfg.kernel_jitter);

    json doc;
    doc["eigenvalues"] = json::array();
    doc["model_files"] = json::array();
    for (std::size_t m = 0; m < res.pairs.size(); ++m) {
        doc["eigenvalues"].push_back(res.pairs[m].lambda);
        if (!model_prefix.empty()) {
            const std::string path = model_prefix + std::to_string(m + 1) + ".json";
            save_model(model_from_pair(samples, kernel, res.pairs[m]),
                       make_provenance(cfg), path);
            doc["model_files"].push_back(path);
        }
    }
    doc["shift_delta"] = res.shift_delta;
    doc["epsilon"] = res.epsilon;
    doc["iterations"] = res.iterations;
    doc["s_jitter"] = res.s_jitter;
    doc["provenance"] = cli::effective_config(cfg);
    emit_report(report_out, doc);
}

void do_validate(const RunConfig& cfg, const std::string& model_path,
                 const std::string& report_out, const std::string& pairs_out) {
    ModelProvenance prov;
    const LabelModel model = load_model(model_path, &prov);
    const MapSpec map = make_map(cfg);
    const Domain domain = cfg.domain_given ? cfg.domain : prov.domain;
    const BirkhoffConfig birkhoff{.T = cfg.T};
    const ValidationReport rep =
        validation_score(model, map, domain, cfg.J, birkhoff, cfg.validation_skip);

    if (!pairs_out.empty()) {
        std::string text = "h,wb\n";
        for (const auto& [h, wb] : rep.pairs) {
            text += detail::format_double(h);
            text += ',';
            text += detail::format_double(wb);
            text += '\n';
        }
        detail::write_file(pairs_out, text);
    }

    json doc;
    doc["S"] = rep.S;
    doc["J"] = rep.J;
    doc["T"] = rep.T;
    doc["model_file"] = model_path;
    if (!pairs_out.empty()) doc["pairs_file"] = pairs_out;
    doc["provenance"] = cli::effective_config(cfg);
    emit_report(report_out, doc);
}

void do_scan(const RunConfig& cfg, const std::string& axis, std::vector<double> values,
             std::string solver, const std::string& out) {
    if (values.size() < 2) throw ConfigError("scan needs at least 2 axis values");
    if (axis != "k" && axis != "epsilon" && axis != "sigma" && axis != "N") {
        throw ConfigError("unknown scan axis \"" + axis +
                          "\" (use k, epsilon, sigma, or N)");
    }
    if (solver.empty()) solver = axis == "N" ? "evp" : "bvp";
    if (solver != "bvp" && solver != "evp") {
        throw ConfigError("unknown solver \"" + solver + "\" (use bvp or evp)");
    }
    std::sort(values.begin(), values.end());

    const BoundarySpec boundary = make_boundary(cfg);

    // Hyperparameter axes reuse one sample set; map/N axes re-sample per value.
    SampleSet shared;
    if (axis == "epsilon" || axis == "sigma") {
        shared = build_samples(make_map(cfg), cfg.domain, cfg.N, cfg.sobol_skip);
    }
    if (axis == "k" && !cfg.map_type.empty() && cfg.map_type != "standard") {
        throw ConfigError("a k scan varies the standard map; map.type is \"" +
                          cfg.map_type + "\"");
    }

    auto solve_row = [&](const SampleSet& samples, const KernelSpec& kernel,
                         double epsilon, double parameter) {
        std::string row = detail::format_double(parameter);
        if (solver == "bvp") {
            const ResidualReport rep = solve_bvp(samples, kernel, boundary, epsilon).second;
            for (double v : {rep.R, rep.E_inv, rep.E_bd, rep.E_K}) {
                row += ',';
                row += detail::format_double(v);
            }
        } else {
            const EigenResult res = solve_evp(samples, kernel, boundary, epsilon,
                                              cfg.delta, 1, cfg.kernel_jitter);
            row += ',';
            row += detail::format_double(res.pairs[0].lambda);
        }
        return row + '\n';
    };

    std::string header;
    std::function<std::string(std::size_t)> point;
    if (axis == "N") {
        if (!(cfg.sigma0 > 0.0)) {
            throw ConfigError("an N scan needs kernel.sigma0 so the width tracks density");
        }
        header = "N,sigma0,S";
        point = [&](std::size_t i) {
            const double raw = values[i];
            if (!(raw > 0.0) || raw != std::floor(raw)) {
                throw ConfigError("N axis values must be positive integers");
            }
            const std::size_t n = static_cast<std::size_t>(raw);
            const MapSpec map = make_map(cfg);
            const SampleSet samples = build_samples(map, cfg.domain, n, cfg.sobol_skip);
            const KernelSpec kernel{cfg.kernel_family, sigma_from_density(cfg.sigma0, n)};
            LabelModel model;
            if (solver == "bvp") {
                model = solve_bvp(samples, kernel, boundary, cfg.epsilon).first;
            } else {
                const EigenResult res = solve_evp(samples, kernel, boundary, cfg.epsilon,
                                                  cfg.delta, 1, cfg.kernel_jitter);
                model = model_from_pair(samples, kernel, res.pairs[0]);
            }
            const ValidationReport rep = validation_score(
                model, map, cfg.domain, cfg.J, BirkhoffConfig{.T = cfg.T},
                cfg.validation_skip);
            return std::to_string(n) + "," + detail::format_double(cfg.sigma0) + "," +
                   detail::format_double(rep.S) + "\n";
        };
    } else {
        header = solver == "bvp" ? "parameter,R,E_inv,E_bd,E_K" : "parameter,lambda";
        point = [&](std::size_t i) {
            const double value = values[i];
            if (axis == "k") {
                const SampleSet samples = build_samples(MapSpec::standard(value),
                                                        cfg.domain, cfg.N, cfg.sobol_skip);
                return solve_row(samples, make_kernel(cfg), cfg.epsilon, value);
            }
            if (axis == "sigma") {
                return solve_row(shared, KernelSpec{cfg.kernel_family, value}, cfg.epsilon,
                                 value);
            }
            return solve_row(shared, make_kernel(cfg), value, value);
        };
    }

    const std::vector<std::string> rows = pooled_rows(values.size(), point);
    std::string text = header + '\n';
    for (const std::string& row : rows) text += row;
    detail::write_file(out, text);

    json extra;
    extra["axis"] = axis;
    extra["values"] = values;
    extra["solver"] = solver;
    write_provenance_sibling(out, "scan", cfg, extra);
}

void do_eval_grid(const RunConfig& cfg, const std::string& model_path,
                  const std::string& out, bool normalize) {
    ModelProvenance prov;
    LabelModel model = load_model(model_path, &prov);
    const Domain domain = cfg.domain_given ? cfg.domain : prov.domain;
    if (normalize) model = normalize_maxabs(model, domain, cfg.nx, cfg.ny);
    save_grid_csv(eval_grid(model, domain, cfg.nx, cfg.ny), out);

    json extra;
    extra["model_file"] = model_path;
    extra["normalized"] = normalize;
    write_provenance_sibling(out, "eval-grid", cfg, extra);
}

int run_guarded(const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return 4;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Smooth labels of near-invariant structure in 2D symplectic maps"};
    app.require_subcommand(1);

    Overrides o;
    std::string out, model_out, report_out, pairs_out, model_path, model_prefix;
    std::string axis, solver;
    std::vector<double> values;
    bool normalize = false;

    CLI::App* poincare = app.add_subcommand("poincare", "Iterate seed trajectories to CSV");
    add_common_options(poincare, o);
    poincare->add_option("-o,--out", out, "trajectory CSV path")->required();

    CLI::App* bvp = app.add_subcommand(
        "solve-bvp", "Fit a label function to boundary data and report energies");
    add_common_options(bvp, o);
    bvp->add_option("--model-out", model_out, "write the fitted model JSON here");
    bvp->add_option("--report-out", report_out, "write the energy report here (default: stdout)");

    CLI::App* evp = app.add_subcommand(
        "solve-evp", "Solve the label eigenproblem for the smallest quotients");
    add_common_options(evp, o);
    evp->add_option("--model-out", model_prefix,
                    "prefix for per-mode model files (<prefix><i>.json)");
    evp->add_option("--report-out", report_out, "write the eigenvalue report here (default: stdout)");

    CLI::App* validate = app.add_subcommand(
        "validate", "Score a model against weighted trajectory averages");
    add_common_options(validate, o);
    validate->add_option("--model", model_path, "model JSON to score")->required();
    validate->add_option("--report-out", report_out, "write the score report here (default: stdout)");
    validate->add_option("--pairs-out", pairs_out, "write (h, wb) pairs CSV here");

    CLI::App* scan = app.add_subcommand("scan", "Sweep one parameter and emit a CSV");
    add_common_options(scan, o);
    scan->add_option("--axis", axis, "k, epsilon, sigma, or N")->required();
    scan->add_option("--values", values, "axis values (at least 2)")->required();
    scan->add_option("--solver", solver, "bvp or evp (default: bvp; N axis: evp)");
    scan->add_option("-o,--out", out, "scan CSV path")->required();

    CLI::App* grid = app.add_subcommand("eval-grid", "Evaluate a model on a uniform grid");
    add_common_options(grid, o);
    grid->add_option("--model", model_path, "model JSON to evaluate")->required();
    grid->add_option("-o,--out", out, "grid CSV path")->required();
    grid->add_flag("--normalize", normalize, "rescale so the grid's max |h| is 1");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    return run_guarded([&] {
        if (poincare->parsed()) return do_poincare(resolve(o), out);
        if (bvp->parsed()) return do_solve_bvp(resolve(o), model_out, report_out);
        if (evp->parsed()) return do_solve_evp(resolve(o), model_prefix, report_out);
        if (validate->parsed()) return do_validate(resolve(o), model_path, report_out, pairs_out);
        if (scan->parsed()) return do_scan(resolve(o), axis, values, solver, out);
        if (grid->parsed()) return do_eval_grid(resolve(o), model_path, out, normalize);
    });
}
