#include "perc/montecarlo.hpp"

#include "perc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace perc {

void ExperimentConfig::validate() const {
    for (int n : n_grid)
        if (n < 2) throw std::invalid_argument("grid radii must be >= 2");
    if (n_grid.empty()) throw std::invalid_argument("empty n grid");
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    if (!(p >= 0 && p <= 1)) throw std::invalid_argument("p must be in [0,1]");
    if (!(epsilon > 0 && epsilon < 1)) throw std::invalid_argument("epsilon must be in (0,1)");
    if (!(delta > 0 && delta < 1)) throw std::invalid_argument("delta must be in (0,1)");
}

ConditionedCounts sample_conditioned(int n, uint64_t samples, uint64_t seed, double p,
                                     const std::function<void(uint64_t, const Configuration&)>& consume) {
    BoxGeometry geom({0, 0}, n);
    ConditionedCounts counts;
    for (uint64_t i = 0; i < samples; ++i) {
        Configuration cfg = sample_configuration(geom, p, sample_seed(seed, i));
        ++counts.attempts;
        if (!radial_connection(cfg)) continue;
        ++counts.accepted;
        consume(i, cfg);
    }
    return counts;
}

namespace {

struct ChainSample {
    uint8_t accepted = 0;
    uint32_t s_len = 0;
    uint32_t gamma_len = 0;
    uint32_t splice_len = 0;
};

// Evaluate blocks of raw sample indices in parallel until either the raw
// budget or the accepted target is reached; results are consumed in index
// order so aggregation does not depend on the thread count.
template <typename Eval, typename Consume>
std::pair<uint64_t, uint64_t> run_blocks(uint64_t raw_budget, uint64_t accepted_target, int threads,
                                         Eval&& eval, Consume&& consume) {
    uint64_t attempts = 0, accepted = 0;
    const uint64_t block =
        accepted_target > 0 ? std::max<uint64_t>(256, accepted_target / 4) : raw_budget;
    std::vector<ChainSample> slots;
    for (uint64_t base = 0; base < raw_budget; base += block) {
        uint64_t count = std::min(block, raw_budget - base);
        slots.assign(count, {});
        parallel_for_index(count, threads, [&](uint64_t i) { slots[i] = eval(base + i); });
        for (uint64_t i = 0; i < count; ++i) {
            ++attempts;
            if (slots[i].accepted) {
                ++accepted;
                consume(slots[i]);
            }
            if (accepted_target > 0 && accepted >= accepted_target) return {attempts, accepted};
        }
    }
    return {attempts, accepted};
}

EstimateRecord mean_record(const std::string& name, int n, uint64_t sum, uint64_t sumsq,
                           uint64_t accepted, uint64_t attempts, uint64_t seed) {
    MeanCI ci = mean_ci_from_moments(static_cast<double>(sum), static_cast<double>(sumsq), accepted);
    EstimateRecord rec;
    rec.statistic = name;
    rec.n = n;
    rec.estimate = ci.mean;
    rec.ci = ci.ci;
    rec.samples = attempts;
    rec.accepted = accepted;
    rec.seed = seed;
    return rec;
}

} // namespace

std::vector<EstimateRecord> estimate_chemdist(const ExperimentConfig& config) {
    config.validate();
    std::vector<EstimateRecord> out;
    for (int n : config.n_grid) {
        BoxGeometry geom({0, 0}, n);
        uint64_t point_seed = mix64(config.seed ^ mix64(static_cast<uint64_t>(n)));

        auto eval = [&](uint64_t idx) {
            ChainSample s;
            Configuration cfg = sample_configuration(geom, config.p, sample_seed(point_seed, idx));
            if (!radial_connection(cfg)) return s;
            s.accepted = 1;
            s.s_len = static_cast<uint32_t>(chemical_distance(cfg).length);
            if (config.with_gamma) {
                GammaDecomposition gd = build_gamma(cfg);
                check_gamma_invariants(cfg, gd);
                s.gamma_len = static_cast<uint32_t>(gd.length());
                if (config.with_splice) {
                    SplicedPath sp = splice(cfg, gd, config.delta, config.epsilon, config.nu);
                    s.splice_len = static_cast<uint32_t>(sp.s.edge_count());
                } else {
                    s.splice_len = s.gamma_len;
                }
                if (!(s.s_len <= s.splice_len && s.splice_len <= s.gamma_len))
                    throw GammaInvariantError("per-sample chain S <= #s <= #gamma violated");
            }
            return s;
        };

        uint64_t sum_s = 0, sq_s = 0, sum_g = 0, sq_g = 0, sum_sp = 0, sq_sp = 0;
        auto consume = [&](const ChainSample& s) {
            sum_s += s.s_len;
            sq_s += static_cast<uint64_t>(s.s_len) * s.s_len;
            sum_g += s.gamma_len;
            sq_g += static_cast<uint64_t>(s.gamma_len) * s.gamma_len;
            sum_sp += s.splice_len;
            sq_sp += static_cast<uint64_t>(s.splice_len) * s.splice_len;
        };
        auto [attempts, accepted] =
            run_blocks(config.samples, config.min_accepted, config.threads, eval, consume);

        out.push_back(mean_record("chem_S", n, sum_s, sq_s, accepted, attempts, config.seed));
        if (config.with_gamma) {
            out.push_back(mean_record("gamma_len", n, sum_g, sq_g, accepted, attempts, config.seed));
            out.push_back(mean_record("splice_len", n, sum_sp, sq_sp, accepted, attempts, config.seed));
        }
    }
    return out;
}

std::vector<EstimateRecord> estimate_radial(const ExperimentConfig& config) {
    config.validate();
    std::vector<EstimateRecord> out;
    for (int n : config.n_grid) {
        BoxGeometry geom({0, 0}, n);
        uint64_t point_seed = mix64(config.seed ^ mix64(static_cast<uint64_t>(n)));
        auto eval = [&](uint64_t idx) {
            ChainSample s;
            Configuration cfg = sample_configuration(geom, config.p, sample_seed(point_seed, idx));
            s.accepted = radial_connection(cfg) ? 1 : 0;
            return s;
        };
        auto [attempts, accepted] =
            run_blocks(config.samples, 0, config.threads, eval, [](const ChainSample&) {});
        EstimateRecord rec;
        rec.statistic = "p_radial";
        rec.n = n;
        rec.estimate = static_cast<double>(accepted) / static_cast<double>(attempts);
        rec.ci = wilson_interval(accepted, attempts);
        rec.samples = attempts;
        rec.accepted = accepted;
        rec.seed = config.seed;
        out.push_back(rec);
    }
    return out;
}

PowerLawFit exponent_fit(const std::vector<EstimateRecord>& records) {
    std::vector<double> n, y;
    for (const auto& r : records) {
        n.push_back(r.n);
        y.push_back(r.estimate);
    }
    return fit_power_law(n, y);
}

TheoremTrendReport theorem_ratio_trend(const std::vector<EstimateRecord>& chem,
                                       const std::vector<EstimateRecord>& pi3) {
    TheoremTrendReport rep;
    for (const auto& c : chem) {
        if (c.statistic != "chem_S") continue;
        const EstimateRecord* q = nullptr;
        for (const auto& r : pi3)
            if (r.N == c.n || r.n == c.n) q = &r;
        if (!q || q->estimate <= 0) continue;
        double n2pi = static_cast<double>(c.n) * c.n * q->estimate;
        rep.n.push_back(c.n);
        rep.rho.push_back(c.estimate / n2pi);
        rep.rho_lo.push_back(c.ci.lo / (static_cast<double>(c.n) * c.n * std::max(q->ci.hi, 1e-300)));
        rep.rho_hi.push_back(c.ci.hi / (static_cast<double>(c.n) * c.n * std::max(q->ci.lo, 1e-300)));
    }
    if (rep.n.size() >= 3) {
        std::vector<double> nn(rep.n.begin(), rep.n.end());
        PowerLawFit fit = fit_power_law(nn, rep.rho);
        rep.delta_hat = -fit.slope;
        rep.delta_stderr = fit.stderr_slope;
    }
    rep.nonpositive_flag = rep.delta_hat <= 0;
    return rep;
}

std::vector<EdgeIndex> cross_event_edges(const EdgeIndex& e, int k) {
    std::vector<EdgeIndex> out;
    for (int i = -k; i < k; ++i) {
        out.push_back({{e.a.x + i, e.a.y}, Orientation::H});
        out.push_back({{e.a.x, e.a.y + i}, Orientation::V});
    }
    return out;
}

bool cross_event_holds(const Configuration& cfg, const EdgeIndex& e, int k) {
    for (const EdgeIndex& f : cross_event_edges(e, k))
        if (!cfg.open(f)) return false;
    return true;
}

ConditionalComparisonReport conditional_comparison(const ExperimentConfig& config, int n, int k) {
    config.validate();
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    ConditionalComparisonReport rep;
    rep.n = n;
    rep.k = k;

    // Edge positions along the +x axis with M(e) large enough that the cross
    // event's box B(e,k) sits well inside B(e,d).
    std::vector<EdgeIndex> positions;
    for (int r = 4; r <= n - 4; r += 4) {
        EdgeIndex e{{r, 0}, Orientation::H};
        int M = std::min(r, n - r);
        if (M / 2 > k) positions.push_back(e);
    }
    if (positions.empty()) throw std::invalid_argument("box too small for the position grid");
    if (positions.size() > 32) positions.resize(32); // bitmask capacity

    BoxGeometry geom({0, 0}, n);
    uint64_t seed_gamma = mix64(config.seed ^ 0xAAAAULL);

    // One pass of conditioned samples serves every position: count, per
    // position, samples with e in gamma and with E(e,k) additionally.
    std::vector<uint64_t> cond(positions.size(), 0), hit(positions.size(), 0);
    struct Slot {
        uint8_t ok = 0;
        uint32_t in_gamma = 0; // bitmask over positions
        uint32_t with_event = 0;
    };
    std::vector<Slot> slots(config.samples);
    parallel_for_index(config.samples, config.threads, [&](uint64_t i) {
        Configuration cfg = sample_configuration(geom, config.p, sample_seed(seed_gamma, i));
        if (!radial_connection(cfg)) return;
        Slot s;
        s.ok = 1;
        GammaDecomposition gd = build_gamma(cfg);
        std::unordered_set<size_t> gamma_edges;
        for (const EdgeIndex& f : gd.gamma.edges())
            gamma_edges.insert(std::hash<Vertex>()(f.a) * 2 + static_cast<size_t>(f.o));
        for (size_t pi = 0; pi < positions.size(); ++pi) {
            const EdgeIndex& e = positions[pi];
            if (!gamma_edges.count(std::hash<Vertex>()(e.a) * 2 + static_cast<size_t>(e.o))) continue;
            s.in_gamma |= 1u << pi;
            if (cross_event_holds(cfg, e, k)) s.with_event |= 1u << pi;
        }
        slots[i] = s;
    });
    for (const Slot& s : slots) {
        if (!s.ok) continue;
        for (size_t pi = 0; pi < positions.size(); ++pi) {
            if (s.in_gamma & (1u << pi)) ++cond[pi];
            if (s.with_event & (1u << pi)) ++hit[pi];
        }
    }

    for (size_t pi = 0; pi < positions.size(); ++pi) {
        const EdgeIndex& e = positions[pi];
        ConditionalComparisonRow row;
        row.e = e;
        row.M = displacement_M(e, geom);
        row.d = row.M / 2;
        row.cond_gamma = cond[pi];
        row.p_given_gamma = cond[pi] ? static_cast<double>(hit[pi]) / cond[pi] : 0.0;

        // P(E | A_3(e,d)) sampled on the small box B(e,d): the event depends
        // on those edges only.
        BoxGeometry local(e.a, row.d);
        uint64_t seed_arm = mix64(config.seed ^ mix64(0xBB00 + pi));
        std::vector<uint8_t> arm_ok(config.samples, 0), arm_hit(config.samples, 0);
        parallel_for_index(config.samples, config.threads, [&](uint64_t i) {
            Configuration cfg = sample_configuration(local, config.p, sample_seed(seed_arm, i));
            if (!edge_three_arm(cfg, e, row.d)) return;
            arm_ok[i] = 1;
            arm_hit[i] = cross_event_holds(cfg, e, k) ? 1 : 0;
        });
        uint64_t ca = 0, ha = 0;
        for (uint64_t i = 0; i < config.samples; ++i) {
            ca += arm_ok[i];
            ha += arm_hit[i];
        }
        row.cond_arm = ca;
        row.p_given_arm = ca ? static_cast<double>(ha) / ca : 0.0;
        if (row.cond_gamma == 0 || row.cond_arm == 0 || row.p_given_arm == 0) rep.insufficient = true;
        else row.ratio = row.p_given_gamma / row.p_given_arm;
        rep.rows.push_back(row);
    }
    bool first = true;
    for (const auto& r : rep.rows) {
        if (r.ratio <= 0) continue;
        if (first) {
            rep.max_ratio = rep.min_ratio = r.ratio;
            first = false;
        } else {
            rep.max_ratio = std::max(rep.max_ratio, r.ratio);
            rep.min_ratio = std::min(rep.min_ratio, r.ratio);
        }
    }
    return rep;
}

std::vector<EstimateRecord> rsw_check(int k, const std::vector<int>& n_grid, uint64_t samples,
                                      uint64_t seed, int threads) {
    if (k < 1 || k > 3) throw std::invalid_argument("k must be in {1,2,3}");
    std::vector<EstimateRecord> out;
    for (int n : n_grid) {
        int W = k == 1 ? n + 1 : k * n;
        int H = n;
        int R = std::max((W + 1) / 2, (H + 1) / 2);
        BoxGeometry geom({0, 0}, R);
        RectSpec rect{{-(W / 2), -(H / 2)}, {W - W / 2, H - H / 2}};
        uint64_t point_seed = mix64(seed ^ mix64(static_cast<uint64_t>(n) * 7 + k));
        std::vector<uint8_t> hits(samples, 0);
        parallel_for_index(samples, threads, [&](uint64_t i) {
            Configuration cfg = sample_configuration(geom, 0.5, sample_seed(point_seed, i));
            hits[i] = crossing_exists(cfg, rect, ArmColor::Open, CrossDir::Horizontal) ? 1 : 0;
        });
        uint64_t c = 0;
        for (uint64_t i = 0; i < samples; ++i) c += hits[i];
        EstimateRecord rec;
        rec.statistic = "rsw_h" + std::to_string(k);
        rec.n = n;
        rec.N = W;
        rec.estimate = static_cast<double>(c) / static_cast<double>(samples);
        rec.ci = wilson_interval(c, samples);
        rec.samples = samples;
        rec.accepted = samples;
        rec.seed = seed;
        out.push_back(rec);
    }
    return out;
}

} // namespace perc
