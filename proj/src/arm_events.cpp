#include "perc/arm_events.hpp"

#include "perc/parallel.hpp"

#include <algorithm>
#include <atomic>

namespace perc {

ColorSequence ColorSequence::opens_plus_one_closed(int opens) {
    std::vector<ArmC> cs(opens, ArmC::O);
    cs.push_back(ArmC::C);
    return ColorSequence(std::move(cs));
}

int ColorSequence::count_closed() const {
    return static_cast<int>(std::count(colors.begin(), colors.end(), ArmC::C));
}

ColorSequence ColorSequence::normalized() const {
    if (colors.empty()) return *this;
    ColorSequence best = *this;
    std::vector<ArmC> rot = colors;
    for (size_t i = 1; i < colors.size(); ++i) {
        std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        if (rot < best.colors) best.colors = rot;
    }
    return best;
}

std::string ColorSequence::str() const {
    std::string s;
    for (ArmC c : colors) s += c == ArmC::O ? 'O' : 'C';
    return s;
}

int n0_for_arms(int k) {
    // |dB(m)| = 8m boundary edges for m >= 1.
    int m = 1;
    while (8 * m < k) ++m;
    return m;
}

void ArmEventSpec::validate() const {
    if (colors.size() == 0) throw UnsupportedColorSequence("(empty)");
    int k = static_cast<int>(colors.size());
    int c = colors.count_closed();
    if (c != 0 && c != 1 && c != k) throw UnsupportedColorSequence(colors.str());
    if (annulus.inner < n0_for_arms(k))
        throw std::invalid_argument("annulus inner radius below n0(k)");
}

bool detect_arm_event(const Configuration& cfg, const ArmEventSpec& spec) {
    spec.validate();
    int k = static_cast<int>(spec.colors.size());
    int c = spec.colors.count_closed();
    if (c == k) return disjoint_arm_count(cfg, spec.annulus, ArmColor::ClosedDual, spec.half_plane, k) >= k;
    if (c == 0) return disjoint_arm_count(cfg, spec.annulus, ArmColor::Open, spec.half_plane, k) >= k;
    // Exactly one closed dual arm: no cyclic-order constraint remains.
    if (!annulus_arm_exists(cfg, spec.annulus, ArmColor::ClosedDual, spec.half_plane)) return false;
    return disjoint_arm_count(cfg, spec.annulus, ArmColor::Open, spec.half_plane, k - 1) >= k - 1;
}

ColorSequence family_colors(PiFamily f, int k) {
    switch (f) {
        case PiFamily::Pi1: return ColorSequence{ArmC::O};
        case PiFamily::Pi2OC: return ColorSequence{ArmC::O, ArmC::C};
        case PiFamily::Pi3OOC: return ColorSequence{ArmC::O, ArmC::O, ArmC::C};
        default: return ColorSequence::mono_open(k);
    }
}

std::string family_name(PiFamily f, int k) {
    switch (f) {
        case PiFamily::Pi1: return "pi1";
        case PiFamily::Pi2OC: return "pi2_OC";
        case PiFamily::Pi3OOC: return "pi3_OOC";
        default: return "pi" + std::to_string(k) + "_mono";
    }
}

EstimateRecord estimate_pi(PiFamily family, int k, int n, int N, uint64_t samples, uint64_t seed,
                           double p, int threads) {
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    BoxGeometry geom({0, 0}, N);
    ArmEventSpec spec{AnnulusSpec({0, 0}, n, N), family_colors(family, k), std::nullopt};
    spec.validate();

    std::atomic<uint64_t> hits{0};
    parallel_for_index(samples, threads, [&](uint64_t i) {
        Configuration cfg = sample_configuration(geom, p, sample_seed(seed, i));
        if (detect_arm_event(cfg, spec)) hits.fetch_add(1, std::memory_order_relaxed);
    });

    EstimateRecord rec;
    rec.statistic = family_name(family, k);
    rec.n = n;
    rec.N = N;
    rec.samples = samples;
    rec.accepted = samples;
    rec.seed = seed;
    rec.estimate = static_cast<double>(hits.load()) / static_cast<double>(samples);
    rec.ci = wilson_interval(hits.load(), samples);
    return rec;
}

EstimateRecord estimate_pi3_origin(int n, uint64_t samples, uint64_t seed, double p, int threads) {
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    BoxGeometry geom({0, 0}, n);
    EdgeIndex e0{{0, 0}, Orientation::H};
    std::atomic<uint64_t> hits{0};
    parallel_for_index(samples, threads, [&](uint64_t i) {
        Configuration cfg = sample_configuration(geom, p, sample_seed(seed, i));
        if (edge_three_arm(cfg, e0, n)) hits.fetch_add(1, std::memory_order_relaxed);
    });
    EstimateRecord rec;
    rec.statistic = "pi3_origin";
    rec.n = n;
    rec.samples = samples;
    rec.accepted = samples;
    rec.seed = seed;
    rec.estimate = static_cast<double>(hits.load()) / static_cast<double>(samples);
    rec.ci = wilson_interval(hits.load(), samples);
    return rec;
}

QuasiMultReport quasi_mult_check(PiFamily family, int k, int n, int nprime, int N, uint64_t samples,
                                 uint64_t seed, int threads) {
    if (!(n < nprime && nprime < N)) throw std::invalid_argument("need n < n' < N");
    QuasiMultReport rep;
    rep.whole = estimate_pi(family, k, n, N, samples, seed, 0.5, threads);
    rep.inner = estimate_pi(family, k, n, nprime, samples, mix64(seed ^ 0x1111), 0.5, threads);
    rep.outer = estimate_pi(family, k, nprime, N, samples, mix64(seed ^ 0x2222), 0.5, threads);
    if (rep.inner.estimate <= 0 || rep.outer.estimate <= 0 || rep.whole.estimate <= 0) {
        rep.degenerate = true;
        return rep;
    }
    rep.c_hat = rep.whole.estimate / (rep.inner.estimate * rep.outer.estimate);
    // Conservative interval from the factor-wise Wilson bounds.
    double lo = rep.whole.ci.lo / (std::max(rep.inner.ci.hi, 1e-300) * std::max(rep.outer.ci.hi, 1e-300));
    double hi = rep.whole.ci.hi / (std::max(rep.inner.ci.lo, 1e-300) * std::max(rep.outer.ci.lo, 1e-300));
    rep.ci = {lo, hi};
    return rep;
}

} // namespace perc
