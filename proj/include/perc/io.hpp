// Persistence: results CSV, run manifests, the run configuration file, and
// JSON-lines path exports.
#pragma once

#include "perc/gamma.hpp"
#include "perc/montecarlo.hpp"

#include <filesystem>
#include <map>
#include <string>

namespace perc {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kCsvSchemaVersion = 1;

// results.csv schema (stable, versioned):
// statistic,n,N,estimate,ci_lo,ci_hi,samples,accepted,seed
std::string csv_header();
std::string csv_row(const EstimateRecord& rec);
void write_csv(const std::filesystem::path& file, const std::vector<EstimateRecord>& records);

// Key-value run configuration with [section] headers; unknown keys are
// errors, every parameter has a default (an empty file is a valid config).
struct RunConfig {
    ExperimentConfig experiment;
    // shortcut sweep parameters
    double nu_sweep_lo = 0.1, nu_sweep_hi = 1.0;
    // rsw
    int rsw_k = 1;
    // conditional comparison
    int compare_n = 32;
    int compare_k = 1;
    // arm estimation
    int arm_inner = 1;
    std::string arm_family = "pi3_OOC"; // pi1 | pi2_OC | pi3_OOC | pi<k>_mono
};

RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& file); // throws on missing file

// Manifest: everything needed to reproduce a run bit-identically, written
// before any results; finalize() rewrites it with the wall clock.
struct Manifest {
    std::string command;
    RunConfig config;
    std::string version = kVersion;
    int csv_schema = kCsvSchemaVersion;
    double wall_clock_s = -1.0; // -1 while the run is in flight

    std::string to_json() const;
    static Manifest from_json(const std::string& text);
};
void write_manifest(const std::filesystem::path& file, const Manifest& m);
Manifest read_manifest(const std::filesystem::path& file);

// JSON-lines exports: one object per line.
std::string geodesic_jsonl(const GeodesicWitness& w, int n, uint64_t sample_index);
std::string gamma_jsonl(const GammaDecomposition& gd, const BoxGeometry& geom, uint64_t sample_index);
std::string shortcut_stats_jsonl(int n, double delta, double epsilon, double nu, size_t gamma_len,
                                 size_t splice_len, size_t chem_len, size_t detours, size_t savings,
                                 uint64_t sample_index);

} // namespace perc
