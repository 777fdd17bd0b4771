#include <doctest.h>

#include "perc/config.hpp"

#include <cmath>

#include <sstream>

using namespace perc;

TEST_CASE("degenerate densities") {
    BoxGeometry g = build_box(3);
    Configuration all1 = sample_configuration(g, 1.0, 7);
    CHECK(all1.open_count() == g.edge_count());
    Configuration all0 = sample_configuration(g, 0.0, 7);
    CHECK(all0.open_count() == 0);
    CHECK_THROWS_AS(sample_configuration(g, 1.5, 7), std::invalid_argument);
}

TEST_CASE("open fraction at p = 1/2 within binomial 3 sigma") {
    BoxGeometry g = build_box(8);
    const uint64_t samples = 100000;
    uint64_t bits = 0, open = 0;
    for (uint64_t i = 0; i < samples; ++i) {
        Configuration cfg = sample_configuration(g, 0.5, sample_seed(42, i));
        open += cfg.open_count();
        bits += cfg.edge_count();
    }
    double phat = static_cast<double>(open) / static_cast<double>(bits);
    double sigma = 0.5 / std::sqrt(static_cast<double>(bits));
    CHECK(std::abs(phat - 0.5) < 3 * sigma);
}

TEST_CASE("determinism and dual state") {
    BoxGeometry g = build_box(5);
    Configuration a = sample_configuration(g, 0.5, 123);
    Configuration b = sample_configuration(g, 0.5, 123);
    CHECK(a == b);
    Configuration c = sample_configuration(g, 0.5, 124);
    CHECK_FALSE(a == c);

    for (const EdgeIndex& e : g.edges()) {
        CHECK(a.dual_edge_closed(dual_of(e)) == a.closed(e));
    }

    // flipping one edge flips exactly that dual state
    EdgeIndex probe{{1, 2}, Orientation::V};
    Configuration f = a.with_flipped(probe);
    for (const EdgeIndex& e : g.edges()) {
        bool expect = e == probe ? !a.open(e) : a.open(e);
        CHECK(f.open(e) == expect);
    }
}

TEST_CASE("same seed couples configurations across radii") {
    Configuration small = sample_configuration(build_box(3), 0.5, 99);
    Configuration big = sample_configuration(build_box(6), 0.5, 99);
    for (const EdgeIndex& e : small.geometry().edges()) CHECK(small.open(e) == big.open(e));
}

TEST_CASE("binary round trip") {
    Configuration cfg = sample_configuration(build_box(4, {2, -1}), 0.37, 555);
    std::stringstream ss;
    cfg.serialize(ss);
    Configuration back = Configuration::deserialize(ss);
    CHECK(back == cfg);
}

TEST_CASE("debug grid shape") {
    Configuration cfg = Configuration::all_open(build_box(1));
    std::string grid = cfg.debug_grid();
    // 3 vertex rows + 2 edge rows, each 2*width-1 chars + newline
    CHECK(grid == "+-+-+\n| | |\n+-o-+\n| | |\n+-+-+\n");
}
