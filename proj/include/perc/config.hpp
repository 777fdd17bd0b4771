// Bernoulli edge configurations on a box, with derived dual states.
//
// Sampling is counter-based: each edge's bit is a pure function of
// (seed, global edge coordinates), so configurations are reproducible under
// any evaluation order or thread count, and configurations at different radii
// with the same seed agree on shared edges.
#pragma once

#include "perc/lattice.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace perc {

// splitmix64 finalizer; the basis of all derived randomness.
inline uint64_t mix64(uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Per-sample seed for sample index i under a master seed.
inline uint64_t sample_seed(uint64_t master, uint64_t index) {
    return mix64(master ^ mix64(index + 0x51AFD872ULL));
}

// Uniform in [0,1) keyed by (seed, global edge id).
inline double edge_uniform(uint64_t seed, const EdgeIndex& e) {
    uint64_t key = (static_cast<uint64_t>(static_cast<uint32_t>(e.a.x)) << 33) ^
                   (static_cast<uint64_t>(static_cast<uint32_t>(e.a.y)) << 1) ^
                   static_cast<uint64_t>(e.o);
    uint64_t h = mix64(seed ^ mix64(key));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

class Configuration {
public:
    Configuration(const BoxGeometry& geom, double p, uint64_t seed);

    const BoxGeometry& geometry() const { return geom_; }
    double p() const { return p_; }
    uint64_t seed() const { return seed_; }
    size_t edge_count() const { return geom_.edge_count(); }

    bool open(const EdgeIndex& e) const { return bit(geom_.edge_index(e)); }
    bool closed(const EdgeIndex& e) const { return !open(e); }
    // omega*(e*) = omega(e): a dual edge is closed exactly when its primal is.
    bool dual_edge_closed(const DualEdgeIndex& d) const { return closed(primal_of(d)); }

    size_t open_count() const;

    // Value copy with one edge flipped (configurations are otherwise immutable).
    Configuration with_flipped(const EdgeIndex& e) const;
    // Directly forced states, for hand-built test configurations.
    static Configuration all_open(const BoxGeometry& geom);
    static Configuration all_closed(const BoxGeometry& geom);
    void force(const EdgeIndex& e, bool open_state); // test/setup use

    // Compact binary layout (header + packed bits) and a textual grid.
    void serialize(std::ostream& os) const;
    static Configuration deserialize(std::istream& is);
    std::string debug_grid() const;

    friend bool operator==(const Configuration& a, const Configuration& b) {
        return a.geom_ == b.geom_ && a.p_ == b.p_ && a.seed_ == b.seed_ && a.bits_ == b.bits_;
    }

private:
    Configuration(const BoxGeometry& geom, double p, uint64_t seed, std::vector<uint64_t> bits)
        : geom_(geom), p_(p), seed_(seed), bits_(std::move(bits)) {}
    bool bit(size_t i) const { return (bits_[i >> 6] >> (i & 63)) & 1; }
    void set_bit(size_t i, bool v) {
        if (v) bits_[i >> 6] |= 1ULL << (i & 63);
        else bits_[i >> 6] &= ~(1ULL << (i & 63));
    }

    BoxGeometry geom_;
    double p_ = 0.5;
    uint64_t seed_ = 0;
    std::vector<uint64_t> bits_;
};

Configuration sample_configuration(const BoxGeometry& geom, double p, uint64_t seed);

} // namespace perc
