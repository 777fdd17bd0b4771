#include "perc/io.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

using nlohmann::json;

namespace perc {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else cur += c;
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

} // namespace

std::string csv_header() { return "statistic,n,N,estimate,ci_lo,ci_hi,samples,accepted,seed"; }

std::string csv_row(const EstimateRecord& r) {
    std::ostringstream os;
    os << r.statistic << ',' << r.n << ',' << r.N << ',' << fmt_double(r.estimate) << ','
       << fmt_double(r.ci.lo) << ',' << fmt_double(r.ci.hi) << ',' << r.samples << ',' << r.accepted
       << ',' << r.seed;
    return os.str();
}

void write_csv(const std::filesystem::path& file, const std::vector<EstimateRecord>& records) {
    std::ofstream os(file);
    if (!os) throw std::runtime_error("cannot write " + file.string());
    os << csv_header() << '\n';
    for (const auto& r : records) os << csv_row(r) << '\n';
}

namespace {

struct ConfigSetter {
    RunConfig& rc;
    void set(const std::string& section, const std::string& key, const std::string& value) {
        auto as_u64 = [&] { return std::stoull(value); };
        auto as_int = [&] { return std::stoi(value); };
        auto as_dbl = [&] { return std::stod(value); };
        std::string full = section.empty() ? key : section + "." + key;
        if (full == "experiment.n_grid") {
            rc.experiment.n_grid.clear();
            for (const std::string& tok : split(value, ' '))
                if (!trim(tok).empty()) rc.experiment.n_grid.push_back(std::stoi(trim(tok)));
        } else if (full == "experiment.samples") rc.experiment.samples = as_u64();
        else if (full == "experiment.min_accepted") rc.experiment.min_accepted = as_u64();
        else if (full == "experiment.seed") rc.experiment.seed = as_u64();
        else if (full == "experiment.p") rc.experiment.p = as_dbl();
        else if (full == "experiment.threads") rc.experiment.threads = as_int();
        else if (full == "shortcuts.delta") rc.experiment.delta = as_dbl();
        else if (full == "shortcuts.epsilon") rc.experiment.epsilon = as_dbl();
        else if (full == "shortcuts.nu") rc.experiment.nu = as_dbl();
        else if (full == "shortcuts.nu_sweep_lo") rc.nu_sweep_lo = as_dbl();
        else if (full == "shortcuts.nu_sweep_hi") rc.nu_sweep_hi = as_dbl();
        else if (full == "rsw.k") rc.rsw_k = as_int();
        else if (full == "compare.n") rc.compare_n = as_int();
        else if (full == "compare.k") rc.compare_k = as_int();
        else if (full == "arm.inner") rc.arm_inner = as_int();
        else if (full == "arm.family") rc.arm_family = value;
        else throw std::invalid_argument("unknown configuration key: " + full);
    }
};

} // namespace

RunConfig parse_run_config(const std::string& text) {
    RunConfig rc;
    ConfigSetter setter{rc};
    std::istringstream is(text);
    std::string line, section;
    while (std::getline(is, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        size_t eq = t.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("bad config line: " + line);
        setter.set(section, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return rc;
}

RunConfig load_run_config(const std::filesystem::path& file) {
    std::ifstream is(file);
    if (!is) throw std::runtime_error("cannot read config file " + file.string());
    std::ostringstream os;
    os << is.rdbuf();
    return parse_run_config(os.str());
}

namespace {

json config_to_json(const RunConfig& rc) {
    const ExperimentConfig& e = rc.experiment;
    return json{{"experiment",
                 {{"n_grid", e.n_grid},
                  {"samples", e.samples},
                  {"min_accepted", e.min_accepted},
                  {"seed", e.seed},
                  {"p", e.p},
                  {"threads", e.threads}}},
                {"shortcuts",
                 {{"delta", e.delta},
                  {"epsilon", e.epsilon},
                  {"nu", e.nu},
                  {"nu_sweep_lo", rc.nu_sweep_lo},
                  {"nu_sweep_hi", rc.nu_sweep_hi}}},
                {"rsw", {{"k", rc.rsw_k}}},
                {"compare", {{"n", rc.compare_n}, {"k", rc.compare_k}}},
                {"arm", {{"inner", rc.arm_inner}, {"family", rc.arm_family}}}};
}

RunConfig config_from_json(const json& j) {
    RunConfig rc;
    ExperimentConfig& e = rc.experiment;
    const json& je = j.at("experiment");
    e.n_grid = je.at("n_grid").get<std::vector<int>>();
    e.samples = je.at("samples").get<uint64_t>();
    e.min_accepted = je.at("min_accepted").get<uint64_t>();
    e.seed = je.at("seed").get<uint64_t>();
    e.p = je.at("p").get<double>();
    e.threads = je.at("threads").get<int>();
    const json& js = j.at("shortcuts");
    e.delta = js.at("delta").get<double>();
    e.epsilon = js.at("epsilon").get<double>();
    e.nu = js.at("nu").get<double>();
    rc.nu_sweep_lo = js.at("nu_sweep_lo").get<double>();
    rc.nu_sweep_hi = js.at("nu_sweep_hi").get<double>();
    rc.rsw_k = j.at("rsw").at("k").get<int>();
    rc.compare_n = j.at("compare").at("n").get<int>();
    rc.compare_k = j.at("compare").at("k").get<int>();
    rc.arm_inner = j.at("arm").at("inner").get<int>();
    rc.arm_family = j.at("arm").at("family").get<std::string>();
    return rc;
}

} // namespace

std::string Manifest::to_json() const {
    json j{{"command", command},
           {"version", version},
           {"csv_schema", csv_schema},
           {"wall_clock_s", wall_clock_s},
           {"config", config_to_json(config)}};
    return j.dump(2) + "\n";
}

Manifest Manifest::from_json(const std::string& text) {
    json j = json::parse(text);
    Manifest m;
    m.command = j.at("command").get<std::string>();
    m.version = j.at("version").get<std::string>();
    m.csv_schema = j.at("csv_schema").get<int>();
    m.wall_clock_s = j.at("wall_clock_s").get<double>();
    m.config = config_from_json(j.at("config"));
    return m;
}

void write_manifest(const std::filesystem::path& file, const Manifest& m) {
    std::ofstream os(file);
    if (!os) throw std::runtime_error("cannot write " + file.string());
    os << m.to_json();
}

Manifest read_manifest(const std::filesystem::path& file) {
    std::ifstream is(file);
    if (!is) throw std::runtime_error("cannot read manifest " + file.string());
    std::ostringstream os;
    os << is.rdbuf();
    return Manifest::from_json(os.str());
}

namespace {

json path_to_json(const LatticePath& p) {
    json arr = json::array();
    for (const Vertex& v : p.verts) arr.push_back(json::array({v.x, v.y}));
    return arr;
}

} // namespace

std::string geodesic_jsonl(const GeodesicWitness& w, int n, uint64_t sample_index) {
    json j{{"kind", "geodesic"}, {"n", n}, {"sample", sample_index}, {"length", w.length},
           {"path", path_to_json(w.path)}};
    return j.dump();
}

std::string gamma_jsonl(const GammaDecomposition& gd, const BoxGeometry& geom, uint64_t sample_index) {
    json segs = json::array();
    auto part_name = [](GammaPart p) {
        switch (p) {
            case GammaPart::Sigma1: return "sigma1";
            case GammaPart::Arc: return "arc";
            case GammaPart::SigmaMid: return "sigma";
            case GammaPart::SigmaLast: return "sigma_last";
            default: return "c0c_arm";
        }
    };
    json m_vals = json::array();
    json labels = json::array();
    for (size_t i = 0; i < gd.gamma.edge_count(); ++i) {
        m_vals.push_back(displacement_M(gd.gamma.edge(i), geom));
        labels.push_back(json{{"part", part_name(gd.labels[i].part)}, {"m", gd.labels[i].m}});
    }
    for (size_t si = 0; si < gd.sigmas.size(); ++si)
        segs.push_back(json{{"label", "sigma"}, {"m", si + 1}, {"vertices", path_to_json(gd.sigmas[si])}});
    for (size_t ai = 0; ai < gd.arcs.size(); ++ai)
        segs.push_back(json{{"label", "arc"}, {"m", ai + 1}, {"vertices", path_to_json(gd.arcs[ai])}});
    json j{{"kind", "gamma"},
           {"sample", sample_index},
           {"case", gd.c0 ? "C0" : "C0c"},
           {"K", gd.stack.K},
           {"gamma", path_to_json(gd.gamma)},
           {"edge_M", m_vals},
           {"edge_labels", labels},
           {"segments", segs}};
    return j.dump();
}

std::string shortcut_stats_jsonl(int n, double delta, double epsilon, double nu, size_t gamma_len,
                                 size_t splice_len, size_t chem_len, size_t detours, size_t savings,
                                 uint64_t sample_index) {
    json j{{"kind", "shortcut_stats"}, {"sample", sample_index}, {"n", n},     {"delta", delta},
           {"epsilon", epsilon},       {"nu", nu},               {"gamma_len", gamma_len},
           {"splice_len", splice_len}, {"chem_len", chem_len},   {"detours", detours},
           {"savings", savings}};
    return j.dump();
}

} // namespace perc
