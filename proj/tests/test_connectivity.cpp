#include <doctest.h>

#include "perc/connectivity.hpp"
#include "perc/oracle.hpp"

using namespace perc;

namespace {

Configuration spoke_config(int n) {
    // single open spoke east from the origin
    Configuration cfg = Configuration::all_closed(build_box(n));
    for (int x = 0; x < n; ++x) cfg.force({{x, 0}, Orientation::H}, true);
    return cfg;
}

} // namespace

TEST_CASE("radial connection basics") {
    CHECK(radial_connection(Configuration::all_open(build_box(4))));
    CHECK_FALSE(radial_connection(Configuration::all_closed(build_box(4))));
    CHECK(radial_connection(spoke_config(2)));
}

TEST_CASE("chemical distance on degenerate configs") {
    Configuration all = Configuration::all_open(build_box(6));
    GeodesicWitness w = chemical_distance(all);
    CHECK(w.length == 6);
    CHECK(is_self_avoiding(w.path));
    CHECK_THROWS_AS(chemical_distance(Configuration::all_closed(build_box(3))), NotConnectedError);
}

TEST_CASE("chemical distance: spiral with a unique path") {
    // hand-built: a single open spiral-ish corridor of known length
    Configuration cfg = Configuration::all_closed(build_box(3));
    std::vector<Vertex> corridor = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0},
                                    {-1, -1}, {0, -1}, {1, -1}, {2, -1}, {2, 0}, {2, 1},
                                    {2, 2}, {1, 2}, {0, 2}, {-1, 2}, {-2, 2}, {-3, 2}};
    LatticePath p{LatticeKind::Primal, corridor};
    for (const EdgeIndex& e : p.edges()) cfg.force(e, true);
    GeodesicWitness w = chemical_distance(cfg);
    CHECK(w.length == corridor.size() - 1);
    CHECK(w.path.verts == corridor);
}

TEST_CASE("chemical distance equals brute-force shortest path") {
    for (int n = 2; n <= 4; ++n) {
        for (uint64_t seed = 0; seed < 150; ++seed) {
            Configuration cfg = sample_configuration(build_box(n), 0.5, sample_seed(1000 + n, seed));
            auto expect = oracle::shortest_path_length(cfg);
            if (!expect) {
                CHECK_FALSE(radial_connection(cfg));
                continue;
            }
            GeodesicWitness w = chemical_distance(cfg);
            CHECK(w.length == *expect);
            CHECK(w.length >= static_cast<size_t>(n));
            CHECK(w.path.verts.front() == Vertex{0, 0});
            CHECK(cfg.geometry().radius_of(w.path.verts.back()) == n);
            for (const EdgeIndex& e : w.path.edges()) CHECK(cfg.open(e));
        }
    }
}

TEST_CASE("opening an edge never lengthens the geodesic") {
    for (uint64_t seed = 0; seed < 25; ++seed) {
        Configuration cfg = sample_configuration(build_box(3), 0.55, sample_seed(77, seed));
        if (!radial_connection(cfg)) continue;
        size_t base = chemical_distance(cfg).length;
        for (const EdgeIndex& e : cfg.geometry().edges()) {
            if (cfg.open(e)) continue;
            CHECK(chemical_distance(cfg.with_flipped(e)).length <= base);
        }
    }
}

TEST_CASE("crossings on degenerate configs") {
    Configuration all = Configuration::all_open(build_box(4));
    RectSpec rect{{-3, -2}, {3, 2}};
    CHECK(crossing_exists(all, rect, ArmColor::Open, CrossDir::Horizontal));
    CHECK_FALSE(crossing_exists(all, rect, ArmColor::ClosedDual, CrossDir::Vertical));
    Configuration none = Configuration::all_closed(build_box(4));
    CHECK_FALSE(crossing_exists(none, rect, ArmColor::Open, CrossDir::Horizontal));
    CHECK(crossing_exists(none, rect, ArmColor::ClosedDual, CrossDir::Vertical));
}

TEST_CASE("exact self-dual crossing probability on the 2x1 rectangle") {
    auto [crossings, total] = oracle::exact_2x1_crossing_count();
    CHECK(total == 128);
    CHECK(crossings == 64);

    // and the production crossing_exists agrees configuration by configuration
    BoxGeometry g = build_box(2);
    RectSpec rect{{-1, 0}, {1, 1}};
    std::vector<EdgeIndex> edges;
    for (const EdgeIndex& e : g.edges()) {
        Vertex b = e.other();
        if (e.a.x >= -1 && b.x <= 1 && e.a.y >= 0 && b.y <= 1) edges.push_back(e);
    }
    REQUIRE(edges.size() == 7);
    uint64_t count = 0;
    for (uint32_t mask = 0; mask < 128; ++mask) {
        Configuration cfg = Configuration::all_closed(g);
        for (size_t i = 0; i < edges.size(); ++i)
            if (mask & (1u << i)) cfg.force(edges[i], true);
        if (crossing_exists(cfg, rect, ArmColor::Open, CrossDir::Horizontal)) ++count;
    }
    CHECK(count == 64);
}

TEST_CASE("duality: exactly one of open crossing / dual blocking crossing") {
    // exhaustive on the 2x1 and on a 3x2 rectangle
    for (auto [w, h] : std::vector<std::pair<int, int>>{{2, 1}, {3, 2}}) {
        BoxGeometry g = build_box(std::max(w, h));
        RectSpec rect{{0, 0}, {w, h}};
        std::vector<EdgeIndex> edges;
        for (const EdgeIndex& e : g.edges()) {
            Vertex b = e.other();
            if (e.a.x >= 0 && b.x <= w && e.a.y >= 0 && b.y <= h) edges.push_back(e);
        }
        REQUIRE(edges.size() <= 20);
        for (uint32_t mask = 0; mask < (1u << edges.size()); ++mask) {
            Configuration cfg = Configuration::all_closed(g);
            for (size_t i = 0; i < edges.size(); ++i)
                if (mask & (1u << i)) cfg.force(edges[i], true);
            bool open_h = crossing_exists(cfg, rect, ArmColor::Open, CrossDir::Horizontal);
            bool dual_v = crossing_exists(cfg, rect, ArmColor::ClosedDual, CrossDir::Vertical);
            CHECK(open_h != dual_v);
        }
    }
}

TEST_CASE("disjoint arms on degenerate configs") {
    Configuration all = Configuration::all_open(build_box(3));
    AnnulusSpec ann({0, 0}, 1, 3);
    CHECK(disjoint_arm_count(all, ann, ArmColor::Open) >= 4);
    CHECK(disjoint_arm_count(all, ann, ArmColor::ClosedDual) == 0);
}

TEST_CASE("disjoint arm count equals brute force on the (1,3) annulus") {
    AnnulusSpec ann({0, 0}, 1, 3);
    for (uint64_t seed = 0; seed < 120; ++seed) {
        Configuration cfg = sample_configuration(build_box(3), 0.5, sample_seed(31337, seed));
        for (ArmColor color : {ArmColor::Open, ArmColor::ClosedDual}) {
            int flow = disjoint_arm_count(cfg, ann, color);
            int brute = oracle::max_disjoint_arms(cfg, ann, color);
            CHECK(flow == brute);
        }
    }
}

TEST_CASE("Menger: arm count equals the minimum vertex cut") {
    AnnulusSpec ann({0, 0}, 1, 2);
    for (uint64_t seed = 0; seed < 20; ++seed) {
        Configuration cfg = sample_configuration(build_box(2), 0.5, sample_seed(999, seed));
        int flow = disjoint_arm_count(cfg, ann, ArmColor::Open);
        int cut = oracle::min_vertex_cut(cfg, ann, ArmColor::Open, flow + 1);
        if (flow == 0) CHECK(cut == 0);
        else CHECK(cut == flow);
    }
}

TEST_CASE("edge-rooted three-arm events") {
    Configuration all = Configuration::all_open(build_box(6));
    EdgeIndex e{{3, 0}, Orientation::H};
    CHECK(edge_open_arm_pair(all, e, 3) == 2);
    CHECK_FALSE(edge_dual_arm(all, e, 3));
    CHECK_FALSE(edge_three_arm(all, e, 3));
    CHECK(edge_three_arm(all, e, 0)); // trivial radius

    Configuration none = Configuration::all_closed(build_box(6));
    CHECK(edge_dual_arm(none, e, 3));
    CHECK(edge_open_arm_pair(none, e, 3) == 0);
}

TEST_CASE("cluster labeling is stable and consistent") {
    Configuration cfg = sample_configuration(build_box(4), 0.5, 4242);
    ClusterLabeling lab1 = label_clusters(cfg);
    ClusterLabeling lab2 = label_clusters(cfg);
    CHECK(lab1.open_vertex_cluster == lab2.open_vertex_cluster);
    CHECK(lab1.closed_cell_cluster == lab2.closed_cell_cluster);

    const BoxGeometry& g = cfg.geometry();
    for (const EdgeIndex& e : g.edges()) {
        size_t a = g.vertex_id(e.a), b = g.vertex_id(e.other());
        if (cfg.open(e)) CHECK(lab1.open_vertex_cluster[a] == lab1.open_vertex_cluster[b]);
    }
}
