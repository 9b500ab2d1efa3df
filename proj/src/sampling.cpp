#include "maplabel/sampling.hpp"

#include "maplabel/detail/io.hpp"

#include <string>

namespace maplabel {

SampleSet build_samples(const MapSpec& map, const Domain& domain, std::size_t N,
                        std::uint64_t skip) {
    if (N < 1) throw ConfigError("build_samples requires N >= 1");
    domain.validate();

    SampleSet out;
    out.N = N;
    out.domain = domain;
    out.sobol_skip = skip;
    out.map_type = map.type();
    out.map_k = map.k();
    out.z = sobol_sample(domain, N, skip);
    out.z.resize(2 * N);
    for (std::size_t n = 0; n < N; ++n) {
        try {
            out.z[N + n] = map.apply(out.z[n]);
        } catch (const IntegrationError& e) {
            throw IntegrationError(std::string(e.what()) + " at sample " + std::to_string(n),
                                   n);
        }
    }
    return out;
}

double invariance_energy(const Vector& h) {
    if (h.size() % 2 != 0)
        throw ConfigError("invariance_energy requires an even-length vector");
    const Eigen::Index N = h.size() / 2;
    double e = 0.0;
    for (Eigen::Index n = 0; n < N; ++n) {
        const double d = h[n] - h[N + n];
        e += d * d;
    }
    return e;
}

Vector apply_ginv(const Vector& v) {
    if (v.size() % 2 != 0)
        throw ConfigError("apply_ginv requires an even-length vector");
    const Eigen::Index N = v.size() / 2;
    return v.head(N) - v.tail(N);
}

Vector apply_ginv_t(const Vector& v) {
    const Eigen::Index N = v.size();
    Vector out(2 * N);
    out.head(N) = v;
    out.tail(N) = -v;
    return out;
}

Vector apply_gtg(const Vector& v) {
    if (v.size() % 2 != 0)
        throw ConfigError("apply_gtg requires an even-length vector");
    const Eigen::Index N = v.size() / 2;
    const Vector d = v.head(N) - v.tail(N);
    Vector out(2 * N);
    out.head(N) = d;
    out.tail(N) = -d;
    return out;
}

BoundaryVectors sample_boundary(const BoundarySpec& spec, const SampleSet& samples) {
    spec.validate();
    const Eigen::Index m = static_cast<Eigen::Index>(samples.z.size());
    BoundaryVectors out{Vector(m), Vector(m)};
    for (Eigen::Index i = 0; i < m; ++i) {
        const BoundaryValue v = eval_boundary(spec, samples.z[static_cast<std::size_t>(i)]);
        out.h_bd[i] = v.h_bd;
        out.w_bd[i] = v.w_bd;
    }
    return out;
}

void save_samples_csv(const SampleSet& samples, const std::string& path) {
    if (samples.z.size() != 2 * samples.N)
        throw ConfigError("sample set is inconsistent: |z| != 2N");
    std::string body = "index,x,y,image_x,image_y\n";
    for (std::size_t n = 0; n < samples.N; ++n) {
        body += std::to_string(n);
        body += ',';
        body += detail::format_double(samples.z[n].x);
        body += ',';
        body += detail::format_double(samples.z[n].y);
        body += ',';
        body += detail::format_double(samples.z[samples.N + n].x);
        body += ',';
        body += detail::format_double(samples.z[samples.N + n].y);
        body += '\n';
    }
    detail::write_file(path, body);
}

SampleSet load_samples_csv(const std::string& path, const Domain& domain) {
    domain.validate();
    const std::string content = detail::read_file(path);

    SampleSet out;
    out.domain = domain;
    out.map_type = "loaded";

    std::vector<State> points;
    std::vector<State> images;
    std::size_t lineno = 0;
    std::size_t start = 0;
    while (start < content.size()) {
        std::size_t end = content.find('\n', start);
        if (end == std::string::npos) end = content.size();
        const std::string_view line(content.data() + start, end - start);
        start = end + 1;
        if (line.empty()) continue;
        ++lineno;
        if (lineno == 1) {
            if (line != "index,x,y,image_x,image_y")
                throw IoError("unexpected sample CSV header in " + path);
            continue;
        }
        const auto fields = detail::split(line, ',');
        if (fields.size() != 5)
            throw IoError("sample CSV row with " + std::to_string(fields.size()) +
                          " fields in " + path);
        const auto idx = detail::parse_index(fields[0]);
        if (idx != points.size())
            throw IoError("sample CSV indices out of order in " + path);
        points.push_back(State{detail::parse_double(fields[1]), detail::parse_double(fields[2])});
        images.push_back(State{detail::parse_double(fields[3]), detail::parse_double(fields[4])});
    }
    if (points.empty()) throw IoError("sample CSV has no rows: " + path);

    for (const State& p : points)
        if (!in_domain(p, domain))
            throw IoError("sample CSV point outside the supplied domain: " + path);

    out.N = points.size();
    out.z = std::move(points);
    out.z.insert(out.z.end(), images.begin(), images.end());
    return out;
}

} // namespace maplabel
