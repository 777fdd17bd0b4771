// perclab: command-line laboratory for critical bond percolation experiments.
//
// Every run writes manifest.json to the output directory before any results;
// rerunning with the same manifest reproduces results.csv bit for bit,
// regardless of --threads.
//
// Exit codes: 0 success, 2 invalid configuration, 3 I/O failure,
// 4 internal invariant violation.

#include <CLI11.hpp>

#include "perc/io.hpp"
#include "perc/oracle.hpp"

#include <chrono>
#include <fstream>
#include <iostream>

using namespace perc;
namespace fs = std::filesystem;

namespace {

struct CliOptions {
    std::string config_file;
    std::string manifest_file;
    std::string out_dir = "perclab_out";
    int threads = 0;
    uint64_t seed_override = 0;
    bool has_seed_override = false;
};

struct RunContext {
    CliOptions opts;
    RunConfig config;
    fs::path out;
    Manifest manifest;
    std::chrono::steady_clock::time_point started;

    void begin(const std::string& command) {
        out = fs::path(opts.out_dir);
        std::error_code ec;
        fs::create_directories(out, ec);
        if (ec) throw std::runtime_error("cannot create output directory " + out.string());
        manifest.command = command;
        manifest.config = config;
        manifest.wall_clock_s = -1.0;
        write_manifest(out / "manifest.json", manifest);
        started = std::chrono::steady_clock::now();
    }
    void finish() {
        manifest.wall_clock_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        write_manifest(out / "manifest.json", manifest);
    }
    void results(const std::vector<EstimateRecord>& records) {
        write_csv(out / "results.csv", records);
    }
};

std::vector<EstimateRecord> read_results_csv(const fs::path& file) {
    std::ifstream is(file);
    if (!is) throw std::runtime_error("cannot read " + file.string());
    std::string line;
    if (!std::getline(is, line) || line != csv_header())
        throw std::invalid_argument("unexpected results.csv header in " + file.string());
    std::vector<EstimateRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        EstimateRecord r;
        std::istringstream row(line);
        std::string tok;
        std::getline(row, r.statistic, ',');
        std::getline(row, tok, ',');
        r.n = std::stoi(tok);
        std::getline(row, tok, ',');
        r.N = std::stoi(tok);
        std::getline(row, tok, ',');
        r.estimate = std::stod(tok);
        std::getline(row, tok, ',');
        r.ci.lo = std::stod(tok);
        std::getline(row, tok, ',');
        r.ci.hi = std::stod(tok);
        std::getline(row, tok, ',');
        r.samples = std::stoull(tok);
        std::getline(row, tok, ',');
        r.accepted = std::stoull(tok);
        std::getline(row, tok, ',');
        r.seed = std::stoull(tok);
        out.push_back(r);
    }
    return out;
}

PiFamily family_from_name(const std::string& name, int& k) {
    if (name == "pi1") return PiFamily::Pi1;
    if (name == "pi2_OC") return PiFamily::Pi2OC;
    if (name == "pi3_OOC") return PiFamily::Pi3OOC;
    if (name.rfind("pi", 0) == 0 && name.size() > 7 && name.substr(name.size() - 5) == "_mono") {
        k = std::stoi(name.substr(2, name.size() - 7));
        return PiFamily::MonoOpen;
    }
    if (name.rfind("pi", 0) == 0 && name.find("_mono") != std::string::npos) {
        k = std::stoi(name.substr(2, name.find("_mono") - 2));
        return PiFamily::MonoOpen;
    }
    throw std::invalid_argument("unknown arm family: " + name);
}

int cmd_sample(RunContext& ctx, int n, uint64_t count) {
    ctx.begin("sample");
    const ExperimentConfig& e = ctx.config.experiment;
    std::vector<EstimateRecord> recs;
    for (uint64_t i = 0; i < count; ++i) {
        Configuration cfg = sample_configuration(build_box(n), e.p, sample_seed(e.seed, i));
        std::ofstream os(ctx.out / ("config_" + std::to_string(i) + ".bin"), std::ios::binary);
        cfg.serialize(os);
        if (i == 0) {
            std::ofstream grid(ctx.out / "config_0.txt");
            grid << cfg.debug_grid();
        }
        EstimateRecord r;
        r.statistic = "open_fraction";
        r.n = n;
        r.estimate = static_cast<double>(cfg.open_count()) / cfg.edge_count();
        r.samples = cfg.edge_count();
        r.accepted = cfg.open_count();
        r.seed = sample_seed(e.seed, i);
        recs.push_back(r);
    }
    ctx.results(recs);
    ctx.finish();
    return 0;
}

int cmd_arm(RunContext& ctx) {
    ctx.begin("arm");
    const ExperimentConfig& e = ctx.config.experiment;
    int k = 0;
    PiFamily fam = family_from_name(ctx.config.arm_family, k);
    std::vector<EstimateRecord> recs;
    for (int n : e.n_grid)
        recs.push_back(estimate_pi(fam, k, ctx.config.arm_inner, n, e.samples, e.seed, e.p,
                                   ctx.opts.threads));
    ctx.results(recs);
    ctx.finish();
    return 0;
}

int cmd_chemdist(RunContext& ctx) {
    ctx.begin("chemdist");
    ExperimentConfig e = ctx.config.experiment;
    e.threads = ctx.opts.threads;
    std::vector<EstimateRecord> recs = estimate_chemdist(e);
    for (const EstimateRecord& r : estimate_radial(e)) recs.push_back(r);
    for (int n : e.n_grid)
        recs.push_back(estimate_pi(PiFamily::Pi3OOC, 0, 1, n, e.samples, mix64(e.seed ^ 0x9D), e.p,
                                   ctx.opts.threads));
    for (int n : e.n_grid)
        recs.push_back(estimate_pi3_origin(n, e.samples, mix64(e.seed ^ 0x3A), e.p, ctx.opts.threads));
    ctx.results(recs);
    ctx.finish();
    return 0;
}

int cmd_gamma(RunContext& ctx) {
    ctx.begin("gamma");
    ExperimentConfig e = ctx.config.experiment;
    std::ofstream jsonl(ctx.out / "gamma.jsonl");
    std::vector<EstimateRecord> recs;
    for (int n : e.n_grid) {
        uint64_t point_seed = mix64(e.seed ^ mix64(static_cast<uint64_t>(n)));
        uint64_t sum_len = 0, witness_fail = 0, accepted = 0;
        for (uint64_t i = 0; i < e.samples; ++i) {
            Configuration cfg = sample_configuration(build_box(n), e.p, sample_seed(point_seed, i));
            if (!radial_connection(cfg)) continue;
            ++accepted;
            GammaDecomposition gd = build_gamma(cfg);
            check_gamma_invariants(cfg, gd);
            for (size_t idx = 0; idx < gd.gamma.edge_count(); ++idx)
                if (!verify_three_arm(cfg, gd, idx).ok) ++witness_fail;
            sum_len += gd.length();
            jsonl << gamma_jsonl(gd, cfg.geometry(), i) << '\n';
        }
        EstimateRecord r;
        r.statistic = "gamma_len";
        r.n = n;
        r.estimate = accepted ? static_cast<double>(sum_len) / accepted : 0.0;
        r.samples = e.samples;
        r.accepted = accepted;
        r.seed = e.seed;
        recs.push_back(r);
        if (witness_fail > 0) throw GammaInvariantError("three-arm witness failure");
    }
    ctx.results(recs);
    ctx.finish();
    return 0;
}

int cmd_shortcut(RunContext& ctx) {
    ctx.begin("shortcut");
    ExperimentConfig e = ctx.config.experiment;
    std::ofstream jsonl(ctx.out / "shortcut.jsonl");
    std::vector<EstimateRecord> recs;
    for (int n : e.n_grid) {
        uint64_t point_seed = mix64(e.seed ^ mix64(static_cast<uint64_t>(n)));
        uint64_t accepted = 0, sum_s = 0, sum_gamma = 0, sum_save = 0;
        for (uint64_t i = 0; i < e.samples; ++i) {
            Configuration cfg = sample_configuration(build_box(n), e.p, sample_seed(point_seed, i));
            if (!radial_connection(cfg)) continue;
            ++accepted;
            GammaDecomposition gd = build_gamma(cfg);
            SplicedPath sp = splice(cfg, gd, e.delta, e.epsilon, e.nu);
            size_t S = chemical_distance(cfg).length;
            if (!(S <= sp.s.edge_count() && sp.s.edge_count() <= gd.length()))
                throw GammaInvariantError("per-sample chain S <= #s <= #gamma violated");
            sum_s += sp.s.edge_count();
            sum_gamma += gd.length();
            sum_save += sp.savings;
            jsonl << shortcut_stats_jsonl(n, e.delta, e.epsilon, e.nu, gd.length(),
                                          sp.s.edge_count(), S, sp.chosen.size(), sp.savings, i)
                  << '\n';
        }
        for (auto [name, total] :
             {std::pair<const char*, uint64_t>{"splice_len", sum_s},
              {"gamma_len", sum_gamma},
              {"splice_savings", sum_save}}) {
            EstimateRecord r;
            r.statistic = name;
            r.n = n;
            r.estimate = accepted ? static_cast<double>(total) / accepted : 0.0;
            r.samples = e.samples;
            r.accepted = accepted;
            r.seed = e.seed;
            recs.push_back(r);
        }
    }
    ctx.results(recs);
    ctx.finish();
    return 0;
}

int cmd_rsw(RunContext& ctx) {
    ctx.begin("rsw");
    const ExperimentConfig& e = ctx.config.experiment;
    auto recs = rsw_check(ctx.config.rsw_k, e.n_grid, e.samples, e.seed, ctx.opts.threads);
    double min_freq = 1.0;
    for (const auto& r : recs) min_freq = std::min(min_freq, r.estimate);
    EstimateRecord summary;
    summary.statistic = "rsw_delta" + std::to_string(ctx.config.rsw_k);
    summary.n = e.n_grid.front();
    summary.N = e.n_grid.back();
    summary.estimate = min_freq;
    summary.samples = e.samples * e.n_grid.size();
    summary.accepted = summary.samples;
    summary.seed = e.seed;
    recs.push_back(summary);
    ctx.results(recs);
    ctx.finish();
    return 0;
}

int cmd_compare(RunContext& ctx) {
    ctx.begin("compare");
    ExperimentConfig e = ctx.config.experiment;
    e.threads = ctx.opts.threads;
    ConditionalComparisonReport rep = conditional_comparison(e, ctx.config.compare_n, ctx.config.compare_k);
    std::vector<EstimateRecord> recs;
    for (const auto& row : rep.rows) {
        EstimateRecord a, b;
        a.statistic = "p_cross_given_gamma_x" + std::to_string(row.e.a.x);
        a.n = ctx.config.compare_n;
        a.estimate = row.p_given_gamma;
        a.samples = e.samples;
        a.accepted = row.cond_gamma;
        a.seed = e.seed;
        b = a;
        b.statistic = "p_cross_given_arm_x" + std::to_string(row.e.a.x);
        b.accepted = row.cond_arm;
        recs.push_back(a);
        recs.push_back(b);
    }
    EstimateRecord ratio;
    ratio.statistic = "compare_max_ratio";
    ratio.n = ctx.config.compare_n;
    ratio.estimate = rep.max_ratio;
    ratio.samples = e.samples;
    ratio.accepted = rep.insufficient ? 0 : 1;
    ratio.seed = e.seed;
    recs.push_back(ratio);
    ctx.results(recs);
    ctx.finish();
    return rep.insufficient ? 2 : 0;
}

int cmd_oracle(RunContext& ctx, double scale) {
    ctx.begin("oracle");
    oracle::SuiteReport rep = oracle::run_equivalence_suites(ctx.config.experiment.seed, scale,
                                                             ctx.opts.threads);
    std::cout << rep.summary();
    std::vector<EstimateRecord> recs;
    for (const auto& s : rep.suites) {
        EstimateRecord r;
        r.statistic = "oracle_" + s.name;
        r.estimate = s.mismatches;
        r.samples = s.cases;
        r.accepted = s.cases - s.mismatches;
        r.seed = ctx.config.experiment.seed;
        recs.push_back(r);
    }
    ctx.results(recs);
    ctx.finish();
    if (!rep.pass()) {
        std::cerr << "oracle equivalence suites FAILED\n";
        return 1;
    }
    std::cout << "all oracle equivalence suites passed\n";
    return 0;
}

int cmd_fit(RunContext& ctx, const std::string& input, const std::string& statistic) {
    ctx.begin("fit");
    auto all = read_results_csv(input);
    std::vector<EstimateRecord> family;
    for (const auto& r : all)
        if (r.statistic == statistic) family.push_back(r);
    if (family.size() < 3) throw std::invalid_argument("need >= 3 grid points for " + statistic);
    PowerLawFit fit = exponent_fit(family);

    std::vector<EstimateRecord> recs = family;
    EstimateRecord f;
    f.statistic = statistic + "_slope";
    f.n = family.front().n;
    f.N = family.back().n;
    f.estimate = fit.slope;
    f.ci = {fit.slope - 1.96 * fit.stderr_slope, fit.slope + 1.96 * fit.stderr_slope};
    f.samples = fit.points;
    f.accepted = fit.points;
    recs.push_back(f);

    if (statistic == "chem_S") {
        std::vector<EstimateRecord> pi3;
        for (const auto& r : all)
            if (r.statistic == "pi3_origin") pi3.push_back(r);
        if (pi3.size() < 3)
            for (const auto& r : all)
                if (r.statistic == "pi3_OOC") pi3.push_back(r);
        if (pi3.size() >= 3) {
            TheoremTrendReport rep = theorem_ratio_trend(family, pi3);
            for (size_t i = 0; i < rep.n.size(); ++i) {
                EstimateRecord r;
                r.statistic = "rho";
                r.n = rep.n[i];
                r.estimate = rep.rho[i];
                r.ci = {rep.rho_lo[i], rep.rho_hi[i]};
                recs.push_back(r);
            }
            EstimateRecord d;
            d.statistic = "delta_hat";
            d.estimate = rep.delta_hat;
            d.ci = {rep.delta_hat - 1.96 * rep.delta_stderr, rep.delta_hat + 1.96 * rep.delta_stderr};
            recs.push_back(d);
        }
    }
    ctx.results(recs);
    ctx.finish();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo laboratory for 2d critical bond percolation"};
    app.require_subcommand(1);

    CliOptions opts;
    app.add_option("--config", opts.config_file, "run configuration file (key = value with [sections])");
    app.add_option("--manifest", opts.manifest_file, "reproduce a previous run from its manifest.json");
    app.add_option("--out", opts.out_dir, "output directory");
    app.add_option("--threads", opts.threads, "worker count (0 = hardware)");
    auto* seed_opt = app.add_option("--seed", opts.seed_override, "master seed override");

    int sample_n = 8;
    uint64_t sample_count = 1;
    auto* c_sample = app.add_subcommand("sample", "draw configurations and persist them");
    c_sample->add_option("--n", sample_n, "box radius");
    c_sample->add_option("--count", sample_count, "number of configurations");
    auto* c_arm = app.add_subcommand("arm", "arm-event probability estimates");
    auto* c_chem = app.add_subcommand("chemdist", "chemical distance, gamma and splice lengths");
    auto* c_gamma = app.add_subcommand("gamma", "per-sample gamma decompositions (JSON lines)");
    auto* c_short = app.add_subcommand("shortcut", "per-sample shortcut statistics");
    auto* c_rsw = app.add_subcommand("rsw", "rectangle crossing frequencies");
    auto* c_cmp = app.add_subcommand("compare", "conditional comparison against the three-arm event");
    double oracle_scale = 1.0;
    auto* c_oracle = app.add_subcommand("oracle", "brute-force equivalence suites");
    c_oracle->add_option("--scale", oracle_scale, "batch-size multiplier");
    std::string fit_input, fit_statistic = "chem_S";
    auto* c_fit = app.add_subcommand("fit", "power-law fits over an existing results.csv");
    c_fit->add_option("--input", fit_input, "results.csv to fit")->required();
    c_fit->add_option("--statistic", fit_statistic, "statistic name to fit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    RunContext ctx;
    ctx.opts = opts;
    try {
        if (!opts.manifest_file.empty()) {
            ctx.config = read_manifest(opts.manifest_file).config;
        } else if (!opts.config_file.empty()) {
            ctx.config = load_run_config(opts.config_file);
        }
        if (seed_opt->count() > 0) ctx.config.experiment.seed = opts.seed_override;
        ctx.config.experiment.threads = opts.threads;
        ctx.config.experiment.validate();
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (c_sample->parsed()) return cmd_sample(ctx, sample_n, sample_count);
        if (c_arm->parsed()) return cmd_arm(ctx);
        if (c_chem->parsed()) return cmd_chemdist(ctx);
        if (c_gamma->parsed()) return cmd_gamma(ctx);
        if (c_short->parsed()) return cmd_shortcut(ctx);
        if (c_rsw->parsed()) return cmd_rsw(ctx);
        if (c_cmp->parsed()) return cmd_compare(ctx);
        if (c_oracle->parsed()) return cmd_oracle(ctx, oracle_scale);
        if (c_fit->parsed()) return cmd_fit(ctx, fit_input, fit_statistic);
    } catch (const GammaInvariantError& e) {
        std::cerr << "internal invariant violation: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
