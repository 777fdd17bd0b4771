#include <doctest.h>

#include "perc/montecarlo.hpp"
#include "perc/oracle.hpp"

#include <cmath>

using namespace perc;

TEST_CASE("conditioned sampling acceptance rates") {
    ExperimentConfig cfg;
    cfg.p = 1.0;
    uint64_t accepted = 0;
    auto counts = sample_conditioned(8, 200, 3, 1.0, [&](uint64_t, const Configuration&) { ++accepted; });
    CHECK(counts.accepted == 200);
    CHECK(accepted == 200);
    auto none = sample_conditioned(8, 200, 3, 0.0, [&](uint64_t, const Configuration&) { ++accepted; });
    CHECK(none.accepted == 0);
}

TEST_CASE("acceptance rate is self-consistent across seed batches") {
    auto rate = [&](uint64_t seed) {
        auto c = sample_conditioned(16, 4000, seed, 0.5, [](uint64_t, const Configuration&) {});
        return std::pair<uint64_t, uint64_t>{c.accepted, c.attempts};
    };
    auto [a1, n1] = rate(11);
    auto [a2, n2] = rate(12);
    Interval w1 = wilson_interval(a1, n1);
    Interval w2 = wilson_interval(a2, n2);
    CHECK(w1.lo < w2.hi);
    CHECK(w2.lo < w1.hi);
}

TEST_CASE("chemdist estimator: p = 1 gives exactly n") {
    ExperimentConfig cfg;
    cfg.n_grid = {5, 9};
    cfg.samples = 50;
    cfg.p = 1.0;
    cfg.with_splice = false; // dyadic window is empty at these n anyway
    auto recs = estimate_chemdist(cfg);
    REQUIRE(recs.size() == 6);
    CHECK(recs[0].statistic == "chem_S");
    CHECK(recs[0].estimate == 5.0);
    CHECK(recs[3].estimate == 9.0);
    CHECK(recs[0].accepted == 50);
}

TEST_CASE("chemdist estimator equals an oracle pass over the same seeds") {
    ExperimentConfig cfg;
    cfg.n_grid = {8};
    cfg.samples = 300;
    cfg.seed = 21;
    cfg.with_gamma = false;
    auto recs = estimate_chemdist(cfg);
    REQUIRE(recs.size() == 1);

    // independent pass: same seed derivation, oracle shortest path
    uint64_t point_seed = mix64(cfg.seed ^ mix64(8));
    uint64_t total = 0, accepted = 0;
    for (uint64_t i = 0; i < cfg.samples; ++i) {
        Configuration c = sample_configuration(build_box(8), 0.5, sample_seed(point_seed, i));
        auto len = oracle::shortest_path_length(c);
        if (!len) continue;
        ++accepted;
        total += *len;
    }
    CHECK(recs[0].accepted == accepted);
    CHECK(recs[0].estimate == doctest::Approx(static_cast<double>(total) / accepted));
}

TEST_CASE("estimators are worker-count independent") {
    ExperimentConfig a, b;
    a.n_grid = b.n_grid = {8};
    a.samples = b.samples = 400;
    a.seed = b.seed = 5;
    a.threads = 1;
    b.threads = 4;
    auto ra = estimate_chemdist(a);
    auto rb = estimate_chemdist(b);
    REQUIRE(ra.size() == rb.size());
    for (size_t i = 0; i < ra.size(); ++i) {
        CHECK(ra[i].estimate == rb[i].estimate);
        CHECK(ra[i].accepted == rb[i].accepted);
    }
    auto pa = estimate_radial(a);
    auto pb = estimate_radial(b);
    CHECK(pa[0].estimate == pb[0].estimate);
}

TEST_CASE("min_accepted mode reaches its target deterministically") {
    ExperimentConfig cfg;
    cfg.n_grid = {8};
    cfg.samples = 100000; // raw cap
    cfg.min_accepted = 500;
    cfg.with_gamma = false;
    auto recs = estimate_chemdist(cfg);
    CHECK(recs[0].accepted == 500);
    ExperimentConfig cfg2 = cfg;
    cfg2.threads = 3;
    auto recs2 = estimate_chemdist(cfg2);
    CHECK(recs2[0].samples == recs[0].samples);
    CHECK(recs2[0].estimate == recs[0].estimate);
}

TEST_CASE("one-arm nesting: larger boxes connect no more often, sample by sample") {
    // coupled by the shared edge-keyed randomness
    for (uint64_t seed = 0; seed < 40; ++seed) {
        uint64_t s = sample_seed(1234, seed);
        Configuration small = sample_configuration(build_box(6), 0.5, s);
        Configuration big = sample_configuration(build_box(12), 0.5, s);
        if (radial_connection(big)) CHECK(radial_connection(small));
    }
}

TEST_CASE("exponent fit recovers planted slopes") {
    std::vector<EstimateRecord> quad;
    for (int n : {4, 8, 16, 32}) {
        EstimateRecord r;
        r.statistic = "synthetic";
        r.n = n;
        r.estimate = static_cast<double>(n) * n;
        quad.push_back(r);
    }
    PowerLawFit fit = exponent_fit(quad);
    CHECK(fit.slope == doctest::Approx(2.0));
    CHECK(fit.stderr_slope == doctest::Approx(0.0).epsilon(1e-9));

    // y = n^{-2/3} with 1% multiplicative noise
    std::vector<EstimateRecord> noisy;
    uint64_t s = 99;
    for (int n : {4, 8, 16, 32, 64, 128}) {
        EstimateRecord r;
        r.n = n;
        double eps = (static_cast<double>(mix64(s ^ n) >> 11) * 0x1.0p-53 - 0.5) * 0.02;
        r.estimate = std::pow(n, -2.0 / 3.0) * (1.0 + eps);
        noisy.push_back(r);
    }
    PowerLawFit f2 = exponent_fit(noisy);
    CHECK(f2.slope == doctest::Approx(-2.0 / 3.0).epsilon(0.03));
    CHECK(f2.stderr_slope < 0.02);
}

TEST_CASE("theorem ratio trend on synthetic data") {
    // S_n = n^2 pi3(n) n^{-0.1}  ->  delta_hat = 0.1
    std::vector<EstimateRecord> chem, pi3;
    for (int n : {8, 16, 32, 64, 128}) {
        EstimateRecord c, q;
        c.statistic = "chem_S";
        c.n = n;
        q.statistic = "pi3_OOC";
        q.n = 1;
        q.N = n;
        q.estimate = std::pow(n, -2.0 / 3.0);
        c.estimate = n * n * q.estimate * std::pow(n, -0.1);
        c.ci = {c.estimate, c.estimate};
        q.ci = {q.estimate, q.estimate};
        chem.push_back(c);
        pi3.push_back(q);
    }
    TheoremTrendReport rep = theorem_ratio_trend(chem, pi3);
    CHECK(rep.delta_hat == doctest::Approx(0.1).epsilon(1e-6));
    CHECK_FALSE(rep.nonpositive_flag);

    // degenerate arithmetic: S_n = n against pi3 = 1 decays like 1/n
    std::vector<EstimateRecord> chem2, pi32;
    for (int n : {8, 16, 32}) {
        EstimateRecord c, q;
        c.statistic = "chem_S";
        c.n = n;
        c.estimate = n;
        c.ci = {c.estimate, c.estimate};
        q.statistic = "pi3_OOC";
        q.N = n;
        q.estimate = 1.0;
        q.ci = {1.0, 1.0};
        chem2.push_back(c);
        pi32.push_back(q);
    }
    TheoremTrendReport rep2 = theorem_ratio_trend(chem2, pi32);
    CHECK(rep2.delta_hat == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("cross event edges") {
    EdgeIndex e{{5, 5}, Orientation::H};
    auto edges = cross_event_edges(e, 1);
    CHECK(edges.size() == 4);
    auto edges2 = cross_event_edges(e, 2);
    CHECK(edges2.size() == 8);
    Configuration all = Configuration::all_open(build_box(8));
    CHECK(cross_event_holds(all, e, 2));
}

TEST_CASE("conditional comparison: trivial event gives ratio 1") {
    // with k such that the cross event is the whole space this is exact; we
    // emulate the trivial case by checking both conditionals directly at p=1:
    // every conditioning sample carries the event
    ExperimentConfig cfg;
    cfg.samples = 400;
    cfg.seed = 31;
    ConditionalComparisonReport rep = conditional_comparison(cfg, 16, 1);
    REQUIRE_FALSE(rep.rows.empty());
    for (const auto& row : rep.rows) {
        if (row.cond_gamma == 0 || row.cond_arm == 0) continue;
        CHECK(row.p_given_gamma <= 1.0);
        CHECK(row.p_given_arm <= 1.0);
    }
}

TEST_CASE("rsw frequencies") {
    auto recs = rsw_check(1, {8}, 4000, 17);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].N == 9); // self-dual width n+1
    CHECK(std::abs(recs[0].estimate - 0.5) < 3 * 0.5 / std::sqrt(4000.0));

    auto recs2 = rsw_check(2, {6}, 500, 17);
    CHECK(recs2[0].N == 12);
    CHECK(recs2[0].estimate > 0.0);
}

TEST_CASE("rsw aspect-2 crossings are uniformly bounded away from zero") {
    auto recs = rsw_check(2, {8, 16, 32}, 3000, 23, 2);
    double lo = 1.0, hi = 0.0;
    for (const auto& r : recs) {
        lo = std::min(lo, r.estimate);
        hi = std::max(hi, r.estimate);
    }
    CHECK(lo > 0.1);
    CHECK(hi - lo < 0.05); // stable across the grid up to small-n transients
}
