#include "maplabel/model.hpp"

#include "maplabel/detail/io.hpp"
#include "maplabel/errors.hpp"
#include "maplabel/kernels.hpp"

#include "json.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace maplabel {

namespace {

constexpr const char* kSchema = "label-model/1";

std::string topology_name(Topology t) {
    return t == Topology::cylinder ? "cylinder" : "plane";
}

Topology topology_from_name(const std::string& name) {
    if (name == "cylinder") return Topology::cylinder;
    if (name == "plane") return Topology::plane;
    throw IoError("unknown topology in model file: " + name);
}

std::vector<double> centers_for_grid(const Domain& domain, std::size_t n,
                                     bool horizontal) {
    const double lo = horizontal ? domain.x_lo : domain.y_lo;
    const double hi = horizontal ? domain.x_hi : domain.y_hi;
    const double step = (hi - lo) / static_cast<double>(n);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = lo + (static_cast<double>(i) + 0.5) * step;
    }
    return out;
}

} // namespace

double eval_label(const LabelModel& model, const State& p) {
    if (model.centers.size() != static_cast<std::size_t>(model.coefficients.size())) {
        throw ConfigError("model centers and coefficients differ in length");
    }
    long double acc = 0.0L;
    for (std::size_t j = 0; j < model.centers.size(); ++j) {
        acc += static_cast<long double>(model.coefficients[static_cast<Eigen::Index>(j)]) *
               eval_kernel(model.kernel, p, model.centers[j], model.topology);
    }
    return model.normalization * static_cast<double>(acc);
}

LabelGrid eval_grid(const LabelModel& model, const Domain& domain, std::size_t nx,
                    std::size_t ny) {
    domain.validate();
    if (nx < 2 || ny < 2) throw ConfigError("grid needs nx, ny >= 2");
    LabelGrid grid;
    grid.nx = nx;
    grid.ny = ny;
    grid.x = centers_for_grid(domain, nx, true);
    grid.y = centers_for_grid(domain, ny, false);
    grid.values.resize(nx * ny);
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            grid.values[j * nx + i] = eval_label(model, State{grid.x[i], grid.y[j]});
        }
    }
    return grid;
}

LabelModel normalize_maxabs(const LabelModel& model, const Domain& domain,
                            std::size_t nx, std::size_t ny) {
    // Probe with the raw kernel sum so renormalizing is idempotent.
    LabelModel raw = model;
    raw.normalization = 1.0;
    const LabelGrid grid = eval_grid(raw, domain, nx, ny);
    double maxabs = 0.0;
    for (double v : grid.values) maxabs = std::max(maxabs, std::abs(v));
    if (maxabs == 0.0) {
        throw NumericalError("model is identically zero on the probe grid");
    }
    LabelModel out = model;
    out.normalization = 1.0 / maxabs;
    return out;
}

void save_grid_csv(const LabelGrid& grid, const std::string& path) {
    std::string text = "x,y,h\n";
    for (std::size_t j = 0; j < grid.ny; ++j) {
        for (std::size_t i = 0; i < grid.nx; ++i) {
            text += detail::format_double(grid.x[i]);
            text += ',';
            text += detail::format_double(grid.y[j]);
            text += ',';
            text += detail::format_double(grid.values[j * grid.nx + i]);
            text += '\n';
        }
    }
    detail::write_file(path, text);
}

void save_model(const LabelModel& model, const ModelProvenance& provenance,
                const std::string& path) {
    if (model.centers.size() != static_cast<std::size_t>(model.coefficients.size())) {
        throw ConfigError("model centers and coefficients differ in length");
    }
    nlohmann::json doc;
    doc["schema"] = kSchema;
    doc["kernel"] = {{"family", model.kernel.family}, {"sigma", model.kernel.sigma}};
    doc["topology"] = topology_name(model.topology);
    nlohmann::json centers = nlohmann::json::array();
    for (const State& z : model.centers) {
        centers.push_back({z.x, z.y});
    }
    doc["centers"] = std::move(centers);
    nlohmann::json coeffs = nlohmann::json::array();
    for (Eigen::Index i = 0; i < model.coefficients.size(); ++i) {
        coeffs.push_back(model.coefficients[i]);
    }
    doc["coefficients"] = std::move(coeffs);
    doc["normalization"] = model.normalization;
    doc["provenance"] = {
        {"map", provenance.map},
        {"domain",
         {{"topology", topology_name(provenance.domain.topology)},
          {"x_lo", provenance.domain.x_lo},
          {"x_hi", provenance.domain.x_hi},
          {"y_lo", provenance.domain.y_lo},
          {"y_hi", provenance.domain.y_hi}}},
        {"N", provenance.N},
        {"epsilon", provenance.epsilon},
        {"sobol_skip", provenance.sobol_skip},
    };
    detail::write_file(path, doc.dump(2) + "\n");
}

LabelModel load_model(const std::string& path, ModelProvenance* provenance) {
    const std::string text = detail::read_file(path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw IoError("failed to parse model file " + path + ": " + e.what());
    }
    try {
        const std::string schema = doc.at("schema").get<std::string>();
        if (schema != kSchema) {
            throw IoError("model file " + path + " has schema \"" + schema +
                          "\"; this build reads \"" + kSchema + "\"");
        }
        LabelModel model;
        model.kernel.family = doc.at("kernel").at("family").get<std::string>();
        model.kernel.sigma = doc.at("kernel").at("sigma").get<double>();
        model.topology = topology_from_name(doc.at("topology").get<std::string>());
        for (const auto& entry : doc.at("centers")) {
            if (!entry.is_array() || entry.size() != 2) {
                throw IoError("model file " + path + " has a malformed center");
            }
            model.centers.push_back(State{entry[0].get<double>(), entry[1].get<double>()});
        }
        const auto& coeffs = doc.at("coefficients");
        if (coeffs.size() != model.centers.size()) {
            throw IoError("model file " + path +
                          " has mismatched centers and coefficients");
        }
        model.coefficients.resize(static_cast<Eigen::Index>(coeffs.size()));
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            model.coefficients[static_cast<Eigen::Index>(i)] = coeffs[i].get<double>();
        }
        model.normalization = doc.at("normalization").get<double>();
        model.kernel.validate();
        if (provenance != nullptr) {
            const auto& prov = doc.at("provenance");
            provenance->map = prov.at("map").get<std::string>();
            const auto& dom = prov.at("domain");
            provenance->domain =
                Domain{topology_from_name(dom.at("topology").get<std::string>()),
                       dom.at("x_lo").get<double>(), dom.at("x_hi").get<double>(),
                       dom.at("y_lo").get<double>(), dom.at("y_hi").get<double>()};
            provenance->N = prov.at("N").get<std::size_t>();
            provenance->epsilon = prov.at("epsilon").get<double>();
            provenance->sobol_skip = prov.at("sobol_skip").get<std::uint64_t>();
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("model file " + path + " is missing fields: " + e.what());
    }
}

} // namespace maplabel
