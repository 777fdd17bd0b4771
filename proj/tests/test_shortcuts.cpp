#include <doctest.h>

#include "perc/shortcuts.hpp"

#include <set>

#include "perc/oracle.hpp"

using namespace perc;

namespace {

// gamma = straight spoke along +x; an open bypass over y = 3 between x = from
// and x = to.  Every bypass vertex keeps L-inf distance 3 from the spoke's
// midpoint edge, so all its edges lie in the annulus B(e_x, 2, 4) proper.
Configuration ladder_config(int n, int from, int to) {
    Configuration cfg = Configuration::all_closed(build_box(n));
    for (int x = 0; x < n; ++x) cfg.force({{x, 0}, Orientation::H}, true);
    for (int y = 0; y < 3; ++y) {
        cfg.force({{from, y}, Orientation::V}, true);
        cfg.force({{to, y}, Orientation::V}, true);
    }
    for (int x = from; x < to; ++x) cfg.force({{x, 3}, Orientation::H}, true);
    return cfg;
}

// spine with a hook dipping to y = -3 between x = from and x = to; the
// straight rungs along y = 0 stay open, so a genuine shortcut with saving
// (hook length - rung length) exists.  gamma hugs the clockwise wall and is
// forced through the hook.
Configuration hook_config(int n, int from, int to) {
    Configuration cfg = Configuration::all_closed(build_box(n));
    for (int x = 0; x < n; ++x) cfg.force({{x, 0}, Orientation::H}, true); // incl. the rungs
    for (int y = -3; y < 0; ++y) {
        cfg.force({{from, y}, Orientation::V}, true);
        cfg.force({{to, y}, Orientation::V}, true);
    }
    for (int x = from; x < to; ++x) cfg.force({{x, -3}, Orientation::H}, true);
    return cfg;
}

} // namespace

TEST_CASE("shortcut annulus geometry") {
    AnnulusSpec ann = shortcut_annulus({{0, 0}, Orientation::H}, 1, 0.25);
    CHECK(ann.inner == 2);
    CHECK(ann.outer == 8);
}

TEST_CASE("splice scale range follows the dyadic window") {
    auto [lo8, hi8] = splice_scale_range(8, 0.9);
    CHECK(lo8 > hi8); // window is empty at small n
    auto [lo32, hi32] = splice_scale_range(32, 0.8);
    CHECK(lo32 == 1);
    CHECK(hi32 == 1);
}

TEST_CASE("ladder detour is found with the expected ratio") {
    // spoke 0..8; bypass from (1,0) over y=3 to (7,0): tau = 6, r = 12
    Configuration cfg = ladder_config(8, 1, 7);
    GammaDecomposition gd = build_gamma(cfg);
    REQUIRE(gd.gamma.verts.front() == Vertex{0, 0});
    size_t idx = 4;
    REQUIRE(gd.gamma.edge(idx) == EdgeIndex{{4, 0}, Orientation::H});
    auto c = find_shortcut(cfg, gd, idx, 1, 0.5); // Ann_1 = B(e_x, 2, 4)
    REQUIRE(c.has_value());
    CHECK(c->tau_len() == 6);
    CHECK(c->r_len() == 12);
    CHECK(c->detour.verts.front() == Vertex{1, 0});
    CHECK(c->detour.verts.back() == Vertex{7, 0});

    // threshold behavior of E_j at the exact ratio 12/6 = 2
    CHECK(detect_Ej(cfg, gd, idx, 1, 0.5, 2.0));
    CHECK_FALSE(detect_Ej(cfg, gd, idx, 1, 0.5, 1.99));
    CHECK_FALSE(detect_Ej(cfg, gd, idx, 1, 0.5, 0.0)); // #r >= 1 always
    CHECK(detect_Ej(cfg, gd, idx, 1, 0.5, 1e9));
}

TEST_CASE("no open edges off gamma: no shortcut") {
    Configuration cfg = Configuration::all_closed(build_box(8));
    for (int x = 0; x < 8; ++x) cfg.force({{x, 0}, Orientation::H}, true);
    GammaDecomposition gd = build_gamma(cfg);
    CHECK_FALSE(find_shortcut(cfg, gd, 4, 1, 0.5).has_value());
    CHECK_THROWS_AS(find_shortcut(cfg, gd, 7, 2, 0.1), std::out_of_range); // annulus leaves the box
}

TEST_CASE("find_shortcut equals the exhaustive detour oracle") {
    int compared = 0;
    for (uint64_t seed = 0; seed < 400 && compared < 50; ++seed) {
        Configuration cfg = sample_configuration(build_box(4), 0.55, sample_seed(7100, seed));
        if (!radial_connection(cfg)) continue;
        GammaDecomposition gd = build_gamma(cfg);
        for (size_t idx = 0; idx < gd.gamma.edge_count(); ++idx) {
            EdgeIndex e = gd.gamma.edge(idx);
            if (linf(e.a - Vertex{0, 0}) + 2 > 4) continue; // Ann_0 with eps=0.5 must fit
            auto got = find_shortcut(cfg, gd, idx, 0, 0.5);
            auto want = oracle::min_ratio_detour(cfg, gd, idx, shortcut_annulus(e, 0, 0.5));
            CHECK(got.has_value() == want.has_value());
            if (got && want) {
                CHECK(got->tau_begin == want->tau_begin);
                CHECK(got->tau_end == want->tau_end);
                CHECK(got->detour.verts == want->detour.verts);
            }
            ++compared;
        }
    }
    CHECK(compared >= 30);
}

TEST_CASE("interval scheduling picks the larger overlapping tau") {
    // two overlapping candidates: savings 10 (tau 12, r 2) vs 6 (tau 8, r 2)
    ShortcutCandidate a, b;
    a.tau_begin = 0;
    a.tau_end = 12;
    a.detour.verts.assign(3, Vertex{0, 0});
    b.tau_begin = 6;
    b.tau_end = 14;
    b.detour.verts.assign(3, Vertex{0, 0});
    auto chosen = max_tau_interval_schedule({a, b});
    REQUIRE(chosen.size() == 1);
    CHECK(chosen[0] == 0);

    // disjoint intervals are both kept
    b.tau_begin = 12;
    b.tau_end = 20;
    auto both = max_tau_interval_schedule({a, b});
    CHECK(both.size() == 2);
}

TEST_CASE("splice is the identity when no shortcut qualifies") {
    Configuration cfg = ladder_config(8, 1, 7);
    GammaDecomposition gd = build_gamma(cfg);
    // the dyadic window is empty at n = 8, and the bypass would lengthen the
    // path anyway: s = gamma
    SplicedPath sp = splice(cfg, gd, 0.9, 0.5, 2.0);
    CHECK(sp.chosen.empty());
    CHECK(sp.s.verts == gd.gamma.verts);
    CHECK(sp.savings == 0);
}

TEST_CASE("splice with a genuine saving") {
    Configuration cfg = hook_config(32, 10, 14);
    GammaDecomposition gd = build_gamma(cfg);
    REQUIRE(gd.gamma.edge_count() == 38); // 32 + hook overhead 6
    SplicedPath sp = splice(cfg, gd, 0.8, 0.5, 0.9); // window {1}, Ann = B(.,2,4)
    REQUIRE(sp.chosen.size() == 1);
    CHECK(sp.chosen[0].tau_len() == 10);
    CHECK(sp.chosen[0].r_len() == 4);
    CHECK(sp.savings == 6);
    CHECK(sp.s.edge_count() + 6 == gd.gamma.edge_count());
    for (const EdgeIndex& e : sp.s.edges()) CHECK(cfg.open(e));
    CHECK(sp.s.verts.front() == Vertex{0, 0});
    CHECK(cfg.geometry().radius_of(sp.s.verts.back()) == 32);
    CHECK(chemical_distance(cfg).length <= sp.s.edge_count());
}

TEST_CASE("per-sample chain S <= #s <= #gamma") {
    for (int n : {8, 32}) {
        int accepted = 0;
        uint64_t budget = n == 8 ? 150 : 60;
        for (uint64_t seed = 0; seed < budget && accepted < 30; ++seed) {
            Configuration cfg = sample_configuration(build_box(n), 0.5, sample_seed(7200 + n, seed));
            if (!radial_connection(cfg)) continue;
            ++accepted;
            GammaDecomposition gd = build_gamma(cfg);
            SplicedPath sp = splice(cfg, gd, 0.8, 0.25, 0.9);
            size_t S = chemical_distance(cfg).length;
            CHECK(S <= sp.s.edge_count());
            CHECK(sp.s.edge_count() <= gd.gamma.edge_count());
            for (const EdgeIndex& e : sp.s.edges()) CHECK(cfg.open(e));
            // chosen detours: pairwise vertex-disjoint
            for (size_t i = 0; i < sp.chosen.size(); ++i) {
                std::set<Vertex> vi(sp.chosen[i].detour.verts.begin(), sp.chosen[i].detour.verts.end());
                for (size_t j = i + 1; j < sp.chosen.size(); ++j)
                    for (const Vertex& v : sp.chosen[j].detour.verts) CHECK_FALSE(vi.count(v));
            }
        }
        CHECK(accepted >= 15);
    }
}

TEST_CASE("shortcut failure probability falls as nu grows") {
    int accepted = 0;
    std::vector<double> nus = {0.5, 1.0, 2.0};
    std::vector<int> found(nus.size(), 0);
    for (uint64_t seed = 0; seed < 200 && accepted < 60; ++seed) {
        Configuration cfg = sample_configuration(build_box(6), 0.5, sample_seed(7300, seed));
        if (!radial_connection(cfg)) continue;
        ++accepted;
        GammaDecomposition gd = build_gamma(cfg);
        size_t mid = gd.gamma.edge_count() / 2;
        EdgeIndex e = gd.gamma.edge(mid);
        if (linf(e.a - Vertex{0, 0}) + 2 > 6) continue;
        for (size_t i = 0; i < nus.size(); ++i)
            if (detect_Ej(cfg, gd, mid, 0, 0.5, nus[i])) ++found[i];
    }
    CHECK(found[0] <= found[1]);
    CHECK(found[1] <= found[2]);
}
