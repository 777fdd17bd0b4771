#include <doctest.h>

#include "perc/io.hpp"

#include <filesystem>
#include <fstream>

using namespace perc;

TEST_CASE("csv schema is stable") {
    CHECK(csv_header() == "statistic,n,N,estimate,ci_lo,ci_hi,samples,accepted,seed");
    EstimateRecord r;
    r.statistic = "pi3_OOC";
    r.n = 1;
    r.N = 32;
    r.estimate = 0.125;
    r.ci = {0.12, 0.13};
    r.samples = 1000;
    r.accepted = 1000;
    r.seed = 42;
    CHECK(csv_row(r) == "pi3_OOC,1,32,0.125,0.12,0.13,1000,1000,42");
}

TEST_CASE("run config parses with defaults and rejects unknown keys") {
    RunConfig def = parse_run_config("");
    CHECK(def.experiment.n_grid == std::vector<int>{8, 16, 32, 64});
    CHECK(def.experiment.p == 0.5);

    RunConfig rc = parse_run_config(
        "# comment\n"
        "[experiment]\n"
        "n_grid = 8 16\n"
        "samples = 123\n"
        "seed = 9\n"
        "[shortcuts]\n"
        "delta = 0.5\n");
    CHECK(rc.experiment.n_grid == std::vector<int>{8, 16});
    CHECK(rc.experiment.samples == 123);
    CHECK(rc.experiment.seed == 9);
    CHECK(rc.experiment.delta == 0.5);

    CHECK_THROWS_AS(parse_run_config("[experiment]\nbogus = 1\n"), std::invalid_argument);
}

TEST_CASE("manifest round trip") {
    Manifest m;
    m.command = "chemdist";
    m.config.experiment.n_grid = {8, 16};
    m.config.experiment.seed = 77;
    m.wall_clock_s = 1.5;
    Manifest back = Manifest::from_json(m.to_json());
    CHECK(back.command == "chemdist");
    CHECK(back.config.experiment.n_grid == std::vector<int>{8, 16});
    CHECK(back.config.experiment.seed == 77);
    CHECK(back.wall_clock_s == 1.5);
    CHECK(back.version == kVersion);
}

TEST_CASE("jsonl exports are single lines with the documented fields") {
    Configuration cfg = Configuration::all_open(build_box(3));
    GeodesicWitness w = chemical_distance(cfg);
    std::string line = geodesic_jsonl(w, 3, 7);
    CHECK(line.find("\"kind\":\"geodesic\"") != std::string::npos);
    CHECK(line.find('\n') == std::string::npos);

    GammaDecomposition gd = build_gamma(cfg);
    std::string gline = gamma_jsonl(gd, cfg.geometry(), 7);
    CHECK(gline.find("\"kind\":\"gamma\"") != std::string::npos);
    CHECK(gline.find("\"case\":\"C0\"") != std::string::npos);
    CHECK(gline.find('\n') == std::string::npos);
}

TEST_CASE("csv files round trip through the filesystem") {
    auto dir = std::filesystem::temp_directory_path() / "perc_io_test";
    std::filesystem::create_directories(dir);
    EstimateRecord r;
    r.statistic = "p_radial";
    r.n = 8;
    r.estimate = 0.625;
    r.samples = 16;
    r.accepted = 10;
    write_csv(dir / "results.csv", {r});
    std::ifstream is(dir / "results.csv");
    std::string header, row;
    std::getline(is, header);
    std::getline(is, row);
    CHECK(header == csv_header());
    CHECK(row == csv_row(r));
    std::filesystem::remove_all(dir);
}
