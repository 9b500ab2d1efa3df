#include "run_config.hpp"

#include "maplabel/detail/io.hpp"
#include "maplabel/errors.hpp"

#include <cmath>
#include <initializer_list>
#include <string>
#include <vector>

namespace maplabel::cli {

namespace {

void require_known_keys(const nlohmann::json& obj, const std::string& where,
                        std::initializer_list<const char*> known) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw ConfigError("unknown config key \"" + where + key + "\"");
    }
}

template <typename T>
void read_into(const nlohmann::json& obj, const char* key, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config key \"") + key + "\" has the wrong type: " +
                          e.what());
    }
}

} // namespace

Topology topology_from_string(const std::string& name) {
    if (name == "plane") return Topology::plane;
    if (name == "cylinder") return Topology::cylinder;
    throw ConfigError("unknown topology \"" + name + "\" (use plane or cylinder)");
}

void apply_config_json(RunConfig& cfg, const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config root must be a JSON object");
    require_known_keys(doc, "", {"map", "domain", "kernel", "boundary", "N", "epsilon",
                                 "delta", "n_eigs", "kernel_jitter", "sobol_skip",
                                 "validation", "poincare", "grid"});

    if (doc.contains("map")) {
        const auto& m = doc.at("map");
        require_known_keys(m, "map.", {"type", "k"});
        read_into(m, "type", cfg.map_type);
        read_into(m, "k", cfg.map_k);
    }
    if (doc.contains("domain")) {
        const auto& d = doc.at("domain");
        require_known_keys(d, "domain.", {"topology", "x_lo", "x_hi", "y_lo", "y_hi"});
        std::string topology = cfg.domain.topology == Topology::plane ? "plane" : "cylinder";
        read_into(d, "topology", topology);
        cfg.domain.topology = topology_from_string(topology);
        read_into(d, "x_lo", cfg.domain.x_lo);
        read_into(d, "x_hi", cfg.domain.x_hi);
        read_into(d, "y_lo", cfg.domain.y_lo);
        read_into(d, "y_hi", cfg.domain.y_hi);
        cfg.domain_given = true;
    }
    if (doc.contains("kernel")) {
        const auto& k = doc.at("kernel");
        require_known_keys(k, "kernel.", {"family", "sigma", "sigma0"});
        read_into(k, "family", cfg.kernel_family);
        read_into(k, "sigma", cfg.sigma);
        read_into(k, "sigma0", cfg.sigma0);
    }
    if (doc.contains("boundary")) {
        const auto& b = doc.at("boundary");
        require_known_keys(b, "boundary.",
                           {"type", "a", "b", "alpha", "beta", "h_a", "h_b", "band", "rect"});
        read_into(b, "type", cfg.boundary_type);
        read_into(b, "a", cfg.bd_a);
        read_into(b, "b", cfg.bd_b);
        read_into(b, "alpha", cfg.bd_alpha);
        read_into(b, "beta", cfg.bd_beta);
        read_into(b, "h_a", cfg.bd_h_a);
        read_into(b, "h_b", cfg.bd_h_b);
        if (b.contains("band")) {
            const auto& band = b.at("band");
            require_known_keys(band, "boundary.band.", {"y_lo", "y_hi"});
            read_into(band, "y_lo", cfg.band_lo);
            read_into(band, "y_hi", cfg.band_hi);
        }
        if (b.contains("rect")) {
            const auto& rect = b.at("rect");
            require_known_keys(rect, "boundary.rect.", {"x_lo", "x_hi", "y_lo", "y_hi"});
            read_into(rect, "x_lo", cfg.rect_x_lo);
            read_into(rect, "x_hi", cfg.rect_x_hi);
            read_into(rect, "y_lo", cfg.rect_y_lo);
            read_into(rect, "y_hi", cfg.rect_y_hi);
        }
    }
    read_into(doc, "N", cfg.N);
    read_into(doc, "epsilon", cfg.epsilon);
    read_into(doc, "delta", cfg.delta);
    read_into(doc, "n_eigs", cfg.n_eigs);
    read_into(doc, "kernel_jitter", cfg.kernel_jitter);
    read_into(doc, "sobol_skip", cfg.sobol_skip);
    if (doc.contains("validation")) {
        const auto& v = doc.at("validation");
        require_known_keys(v, "validation.", {"J", "T", "skip"});
        read_into(v, "J", cfg.J);
        read_into(v, "T", cfg.T);
        read_into(v, "skip", cfg.validation_skip);
    }
    if (doc.contains("poincare")) {
        const auto& p = doc.at("poincare");
        require_known_keys(p, "poincare.", {"seeds", "steps"});
        read_into(p, "seeds", cfg.seeds);
        read_into(p, "steps", cfg.steps);
    }
    if (doc.contains("grid")) {
        const auto& g = doc.at("grid");
        require_known_keys(g, "grid.", {"nx", "ny"});
        read_into(g, "nx", cfg.nx);
        read_into(g, "ny", cfg.ny);
    }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    const std::string text = detail::read_file(path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
    }
    apply_config_json(cfg, doc);
}

MapSpec make_map(const RunConfig& cfg) {
    if (cfg.map_type.empty()) {
        throw ConfigError("no map selected; set map.type in the config or pass --map");
    }
    if (cfg.map_type == "standard") return MapSpec::standard(cfg.map_k);
    if (cfg.map_type == "pendulum") return MapSpec::pendulum();
    if (cfg.map_type == "perturbed_pendulum") return MapSpec::perturbed_pendulum();
    throw ConfigError("unknown map type \"" + cfg.map_type +
                      "\" (use standard, pendulum, or perturbed_pendulum)");
}

KernelSpec make_kernel(const RunConfig& cfg) {
    KernelSpec kernel{cfg.kernel_family, cfg.sigma};
    if (cfg.sigma0 > 0.0) kernel.sigma = sigma_from_density(cfg.sigma0, cfg.N);
    kernel.validate();
    return kernel;
}

BoundarySpec make_boundary(const RunConfig& cfg) {
    if (cfg.boundary_type == "smoothed_strips") {
        return BoundarySpec::smoothed_strips(cfg.bd_a, cfg.bd_b, cfg.bd_alpha, cfg.bd_beta,
                                             cfg.bd_h_a, cfg.bd_h_b);
    }
    if (cfg.boundary_type == "indicator_strips") {
        return BoundarySpec::indicator_strips(cfg.bd_a, cfg.bd_b, cfg.bd_beta, cfg.bd_h_a,
                                              cfg.bd_h_b);
    }
    if (cfg.boundary_type == "outside_band") {
        if (!(cfg.band_lo < cfg.band_hi)) {
            throw ConfigError("boundary.band needs y_lo < y_hi");
        }
        return BoundarySpec::zero_region(Region::union_of(
            {Region::lower_strip(cfg.band_lo), Region::upper_strip(cfg.band_hi)}));
    }
    if (cfg.boundary_type == "rect_complement") {
        return BoundarySpec::zero_region(Region::rect_complement(
            cfg.rect_x_lo, cfg.rect_x_hi, cfg.rect_y_lo, cfg.rect_y_hi));
    }
    throw ConfigError("unknown boundary type \"" + cfg.boundary_type +
                      "\" (use smoothed_strips, indicator_strips, outside_band, or "
                      "rect_complement)");
}

ModelProvenance make_provenance(const RunConfig& cfg) {
    ModelProvenance prov;
    prov.map = cfg.map_type;
    if (cfg.map_type == "standard") {
        prov.map += " k=" + detail::format_double(cfg.map_k);
    }
    prov.domain = cfg.domain;
    prov.N = cfg.N;
    prov.epsilon = cfg.epsilon;
    prov.sobol_skip = cfg.sobol_skip;
    return prov;
}

nlohmann::json effective_config(const RunConfig& cfg) {
    nlohmann::json doc;
    doc["map"] = {{"type", cfg.map_type}};
    if (cfg.map_type == "standard") doc["map"]["k"] = cfg.map_k;
    doc["domain"] = {
        {"topology", cfg.domain.topology == Topology::plane ? "plane" : "cylinder"},
        {"x_lo", cfg.domain.x_lo},
        {"x_hi", cfg.domain.x_hi},
        {"y_lo", cfg.domain.y_lo},
        {"y_hi", cfg.domain.y_hi},
    };
    doc["kernel"] = {{"family", cfg.kernel_family},
                     {"sigma", cfg.sigma0 > 0.0 ? sigma_from_density(cfg.sigma0, cfg.N)
                                                : cfg.sigma}};
    if (cfg.sigma0 > 0.0) doc["kernel"]["sigma0"] = cfg.sigma0;
    doc["boundary"] = {{"type", cfg.boundary_type}};
    if (cfg.boundary_type == "smoothed_strips" || cfg.boundary_type == "indicator_strips") {
        doc["boundary"]["a"] = cfg.bd_a;
        doc["boundary"]["b"] = cfg.bd_b;
        if (cfg.boundary_type == "smoothed_strips") doc["boundary"]["alpha"] = cfg.bd_alpha;
        doc["boundary"]["beta"] = cfg.bd_beta;
        doc["boundary"]["h_a"] = cfg.bd_h_a;
        doc["boundary"]["h_b"] = cfg.bd_h_b;
    } else if (cfg.boundary_type == "outside_band") {
        doc["boundary"]["band"] = {{"y_lo", cfg.band_lo}, {"y_hi", cfg.band_hi}};
    } else if (cfg.boundary_type == "rect_complement") {
        doc["boundary"]["rect"] = {{"x_lo", cfg.rect_x_lo},
                                   {"x_hi", cfg.rect_x_hi},
                                   {"y_lo", cfg.rect_y_lo},
                                   {"y_hi", cfg.rect_y_hi}};
    }
    doc["N"] = cfg.N;
    doc["epsilon"] = cfg.epsilon;
    doc["delta"] = cfg.delta;
    doc["n_eigs"] = cfg.n_eigs;
    doc["kernel_jitter"] = cfg.kernel_jitter;
    doc["sobol_skip"] = cfg.sobol_skip;
    doc["validation"] = {{"J", cfg.J}, {"T", cfg.T}, {"skip", cfg.validation_skip}};
    doc["poincare"] = {{"seeds", cfg.seeds}, {"steps", cfg.steps}};
    doc["grid"] = {{"nx", cfg.nx}, {"ny", cfg.ny}};
    return doc;
}

} // namespace maplabel::cli
