#include "maplabel/geometry.hpp"

#include <array>
#include <cmath>
#include <utility>

namespace maplabel {

double wrap_unit(double x) {
    double w = x - std::floor(x);
    // floor(x) == x for x in [0,1) except rounding can yield w == 1.0 when x
    // is a tiny negative value; fold that case back.
    if (w >= 1.0) w -= 1.0;
    return w;
}

State wrap(const State& s, Topology topology) {
    if (topology == Topology::plane) return s;
    return State{wrap_unit(s.x), s.y};
}

void Domain::validate() const {
    if (!(x_lo < x_hi) || !(y_lo < y_hi))
        throw ConfigError("domain ranges must satisfy x_lo < x_hi and y_lo < y_hi");
    if (topology == Topology::cylinder && (x_lo != 0.0 || x_hi != 1.0))
        throw ConfigError("cylinder domains use the full period: x range must be [0,1]");
}

bool in_domain(const State& p, const Domain& d) {
    const State q = wrap(p, d.topology);
    const bool x_ok = d.topology == Topology::cylinder
                          ? true
                          : (q.x >= d.x_lo && q.x <= d.x_hi);
    return x_ok && q.y >= d.y_lo && q.y <= d.y_hi;
}

Separation separation(const State& p, const State& q, Topology) {
    return Separation{p.x - q.x, p.y - q.y};
}

Region Region::rect_complement(double x_lo, double x_hi, double y_lo, double y_hi) {
    Region r;
    r.kind_ = Kind::rect_complement;
    r.params_ = {x_lo, x_hi, y_lo, y_hi};
    return r;
}

Region Region::lower_strip(double y_max) {
    Region r;
    r.kind_ = Kind::lower_strip;
    r.params_ = {y_max};
    return r;
}

Region Region::upper_strip(double y_min) {
    Region r;
    r.kind_ = Kind::upper_strip;
    r.params_ = {y_min};
    return r;
}

Region Region::union_of(std::vector<Region> parts) {
    Region r;
    r.kind_ = Kind::union_of;
    r.parts_ = std::move(parts);
    return r;
}

bool Region::contains(const State& p) const {
    switch (kind_) {
    case Kind::rect_complement:
        return !(p.x >= params_[0] && p.x <= params_[1] &&
                 p.y >= params_[2] && p.y <= params_[3]);
    case Kind::lower_strip:
        return p.y < params_[0];
    case Kind::upper_strip:
        return p.y > params_[0];
    case Kind::union_of:
        for (const Region& part : parts_)
            if (part.contains(p)) return true;
        return false;
    }
    return false;
}

namespace {

// 2D Sobol sequence, Joe-Kuo direction numbers, Gray-code order. Dimension 1
// is the van der Corput sequence (m_k = 1); dimension 2 uses the primitive
// polynomial x + 1, giving m_k = (2 m_{k-1}) xor m_{k-1} with m_1 = 1.
constexpr int kSobolBits = 32;

struct SobolDirections {
    std::array<std::uint32_t, kSobolBits> dim0{};
    std::array<std::uint32_t, kSobolBits> dim1{};

    SobolDirections() {
        std::uint32_t m = 1;
        for (int k = 0; k < kSobolBits; ++k) {
            dim0[k] = 1u << (31 - k);
            dim1[k] = m << (31 - k);
            m = (m << 1) ^ m;
        }
    }
};

const SobolDirections kDirections;

// XOR-fold of direction numbers over the set bits of the Gray code of index i.
std::pair<std::uint32_t, std::uint32_t> sobol_point_bits(std::uint64_t i) {
    std::uint64_t gray = i ^ (i >> 1);
    std::uint32_t a = 0, b = 0;
    for (int k = 0; gray != 0 && k < kSobolBits; ++k, gray >>= 1) {
        if (gray & 1u) {
            a ^= kDirections.dim0[k];
            b ^= kDirections.dim1[k];
        }
    }
    return {a, b};
}

// Index of the lowest zero bit of i; selects the direction number that
// advances the Gray-code sequence from point i to point i+1.
int lowest_zero_bit(std::uint64_t i) {
    int c = 0;
    while (i & 1u) {
        i >>= 1;
        ++c;
    }
    return c;
}

} // namespace

std::vector<State> sobol_sample(const Domain& d, std::size_t n, std::uint64_t skip) {
    d.validate();
    std::vector<State> out;
    out.reserve(n);
    if (n == 0) return out;

    const double scale = 1.0 / 4294967296.0; // 2^-32
    auto [ax, ay] = sobol_point_bits(skip);
    for (std::size_t j = 0; j < n; ++j) {
        const double ux = ax * scale;
        const double uy = ay * scale;
        out.push_back(State{d.x_lo + ux * d.x_span(), d.y_lo + uy * d.y_span()});
        const int c = lowest_zero_bit(skip + j);
        if (c >= kSobolBits)
            throw NumericalError("sobol sequence exhausted (index too large)");
        ax ^= kDirections.dim0[c];
        ay ^= kDirections.dim1[c];
    }
    return out;
}

} // namespace maplabel
