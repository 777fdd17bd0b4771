#include "perc/config.hpp"

#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

namespace perc {

namespace {
constexpr uint32_t kMagic = 0x50455243; // "PERC"
constexpr uint32_t kFormatVersion = 1;

template <typename T>
void put(std::ostream& os, T v) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    os.write(reinterpret_cast<const char*>(buf), sizeof(T)); // little-endian hosts only
}
template <typename T>
T get(std::istream& is) {
    unsigned char buf[sizeof(T)];
    is.read(reinterpret_cast<char*>(buf), sizeof(T));
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}
} // namespace

Configuration::Configuration(const BoxGeometry& geom, double p, uint64_t seed)
    : geom_(geom), p_(p), seed_(seed), bits_((geom.edge_count() + 63) / 64, 0) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability must be in [0,1]");
    for (size_t i = 0; i < geom.edge_count(); ++i)
        if (edge_uniform(seed, geom.edge_at(i)) < p) set_bit(i, true);
}

Configuration sample_configuration(const BoxGeometry& geom, double p, uint64_t seed) {
    return Configuration(geom, p, seed);
}

size_t Configuration::open_count() const {
    size_t c = 0;
    for (size_t i = 0; i < edge_count(); ++i) c += bit(i);
    return c;
}

Configuration Configuration::with_flipped(const EdgeIndex& e) const {
    Configuration c = *this;
    size_t i = geom_.edge_index(e);
    c.set_bit(i, !c.bit(i));
    return c;
}

Configuration Configuration::all_open(const BoxGeometry& geom) { return Configuration(geom, 1.0, 0); }
Configuration Configuration::all_closed(const BoxGeometry& geom) { return Configuration(geom, 0.0, 0); }

void Configuration::force(const EdgeIndex& e, bool open_state) {
    set_bit(geom_.edge_index(e), open_state);
}

void Configuration::serialize(std::ostream& os) const {
    put(os, kMagic);
    put(os, kFormatVersion);
    put(os, static_cast<int32_t>(geom_.radius));
    put(os, static_cast<int32_t>(geom_.center.x));
    put(os, static_cast<int32_t>(geom_.center.y));
    put(os, p_);
    put(os, seed_);
    put(os, static_cast<uint64_t>(geom_.edge_count()));
    for (uint64_t w : bits_) put(os, w);
}

Configuration Configuration::deserialize(std::istream& is) {
    if (get<uint32_t>(is) != kMagic) throw std::runtime_error("bad configuration magic");
    if (get<uint32_t>(is) != kFormatVersion) throw std::runtime_error("bad configuration version");
    int32_t radius = get<int32_t>(is);
    int32_t cx = get<int32_t>(is);
    int32_t cy = get<int32_t>(is);
    double p = get<double>(is);
    uint64_t seed = get<uint64_t>(is);
    uint64_t nedges = get<uint64_t>(is);
    BoxGeometry geom({cx, cy}, radius);
    if (nedges != geom.edge_count()) throw std::runtime_error("configuration bit count mismatch");
    std::vector<uint64_t> bits((nedges + 63) / 64);
    for (auto& w : bits) w = get<uint64_t>(is);
    if (!is) throw std::runtime_error("truncated configuration");
    return Configuration(geom, p, seed, std::move(bits));
}

std::string Configuration::debug_grid() const {
    // Rows from top (y = +n) down; '-'/'|' for open edges, spaces for closed.
    std::ostringstream os;
    int n = geom_.radius;
    const Vertex c = geom_.center;
    for (int y = c.y + n; y >= c.y - n; --y) {
        for (int x = c.x - n; x <= c.x + n; ++x) {
            os << (Vertex{x, y} == c ? 'o' : '+');
            if (x < c.x + n) os << (open({{x, y}, Orientation::H}) ? '-' : ' ');
        }
        os << '\n';
        if (y > c.y - n) {
            for (int x = c.x - n; x <= c.x + n; ++x) {
                os << (open({{x, y - 1}, Orientation::V}) ? '|' : ' ');
                if (x < c.x + n) os << ' ';
            }
            os << '\n';
        }
    }
    return os.str();
}

} // namespace perc
