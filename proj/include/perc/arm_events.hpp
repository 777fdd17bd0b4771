// Detection and estimation of k-arm annulus events A_{k,sigma}.
//
// Supported color sequences: all-open, all-closed, and sequences with exactly
// one closed-dual arm.  A single closed dual arm imposes no cyclic-order
// constraint (it can never cross an open primal path), so detection reduces
// to a disjoint open-arm count plus a dual crossing.  General mixed sequences
// are rejected.
#pragma once

#include "perc/connectivity.hpp"
#include "perc/stats.hpp"

#include <functional>

namespace perc {

enum class ArmC : uint8_t { O, C };

struct ColorSequence {
    std::vector<ArmC> colors;

    ColorSequence() = default;
    ColorSequence(std::initializer_list<ArmC> cs) : colors(cs) {}
    static ColorSequence mono_open(int k) { return ColorSequence(std::vector<ArmC>(k, ArmC::O)); }
    static ColorSequence mono_closed(int k) { return ColorSequence(std::vector<ArmC>(k, ArmC::C)); }
    // 2i open arms plus one closed dual arm (pi_{2i+1} family).
    static ColorSequence opens_plus_one_closed(int opens);
    explicit ColorSequence(std::vector<ArmC> cs) : colors(std::move(cs)) {}

    size_t size() const { return colors.size(); }
    int count_closed() const;
    // Minimal rotation; sequences equal up to cyclic order compare equal.
    ColorSequence normalized() const;
    friend bool operator==(const ColorSequence& a, const ColorSequence& b) {
        return a.normalized().colors == b.normalized().colors;
    }
    std::string str() const;
};

struct UnsupportedColorSequence : std::invalid_argument {
    explicit UnsupportedColorSequence(const std::string& s)
        : std::invalid_argument("unsupported color sequence: " + s) {}
};

// Smallest inner radius at which k disjoint arms fit: |dB(n0)| >= k.
int n0_for_arms(int k);

struct ArmEventSpec {
    AnnulusSpec annulus;
    ColorSequence colors;
    std::optional<HalfPlane> half_plane;

    void validate() const;
};

bool detect_arm_event(const Configuration& cfg, const ArmEventSpec& spec);

// The named arm-probability families used throughout.
enum class PiFamily : uint8_t { Pi1, Pi2OC, Pi3OOC, MonoOpen };

ColorSequence family_colors(PiFamily f, int k = 0);
std::string family_name(PiFamily f, int k = 0);

// Monte Carlo frequency of the arm event over `samples` independent
// configurations at p = 1/2 (or given p), Wilson CI, deterministic under the
// seed and independent of thread count.
EstimateRecord estimate_pi(PiFamily family, int k, int n, int N, uint64_t samples, uint64_t seed,
                           double p = 0.5, int threads = 0);

// The origin-rooted three-arm probability: two disjoint open arms from the
// endpoints of the east edge at the origin plus a closed dual arm from its
// dual edge, out to distance n (statistic: pi3_origin).  This is the decay
// that the n^2 pi3(n) volume estimates are measured against.
EstimateRecord estimate_pi3_origin(int n, uint64_t samples, uint64_t seed, double p = 0.5,
                                   int threads = 0);

struct QuasiMultReport {
    double c_hat = 0.0;
    Interval ci;
    bool degenerate = false; // some factor estimated as zero
    EstimateRecord whole, inner, outer;
};

// Empirical c in P(A(n,N)) >= c P(A(n,n')) P(A(n',N)).
QuasiMultReport quasi_mult_check(PiFamily family, int k, int n, int nprime, int N, uint64_t samples,
                                 uint64_t seed, int threads = 0);

} // namespace perc
