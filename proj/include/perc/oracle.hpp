// Brute-force reference implementations used to validate the production
// algorithms on tiny instances.  Everything here is deliberately simple and
// independent of the algorithmic paths it checks: plain Dijkstra, exhaustive
// path/circuit/detour enumeration, single-vertex-cut Menger tests and full
// configuration sweeps.
#pragma once

#include "perc/gamma.hpp"
#include "perc/shortcuts.hpp"

namespace perc {
namespace oracle {

// Shortest open origin-to-boundary path length (Dijkstra on the open subgraph).
std::optional<size_t> shortest_path_length(const Configuration& cfg);

// All open self-avoiding circuits with the origin strictly inside.
std::vector<LatticeCircuit> open_circuits_around_origin(const Configuration& cfg, size_t limit = 2000000);

// Area-minimal circuit around the origin; requires the minimum to be unique
// (it is, by the intersection property of open circuits).
std::optional<LatticeCircuit> innermost_circuit(const Configuration& cfg);

// Iterated innermost enumeration: every next circuit avoids the previous
// circuit and its interior.
std::vector<LatticeCircuit> circuit_stack(const Configuration& cfg);

// Canonical edge key set for comparing circuits irrespective of traversal.
std::vector<EdgeIndex> circuit_edge_list(const LatticeCircuit& c);
bool same_circuit(const LatticeCircuit& a, const LatticeCircuit& b);

// Self-avoiding color crossings of the annulus, trimmed to first/last ring
// touch; used by the disjoint-arm and arm-event oracles.
std::vector<std::vector<Vertex>> annulus_crossings(const Configuration& cfg, const AnnulusSpec& ann,
                                                   ArmColor color, size_t limit = 200000);

// Exhaustive maximum number of vertex-disjoint crossings (branch and bound
// over the enumerated crossing set).
int max_disjoint_arms(const Configuration& cfg, const AnnulusSpec& ann, ArmColor color);

// Exhaustive arm-event existence for the supported color sequences.
bool arm_event_exists(const Configuration& cfg, const AnnulusSpec& ann, const ColorSequence& colors);

// Minimum vertex cut between the annulus rings, by subset enumeration up to
// size `upto` (tiny instances only).  Returns upto+1 when no cut that small.
int min_vertex_cut(const Configuration& cfg, const AnnulusSpec& ann, ArmColor color, int upto);

// Area between an origin-to-boundary arm and the dual path `wall`, measured
// in cells on the counterclockwise side; shared by the ccw-arm oracle and
// the acceptance criteria.
long long ccw_area_between(const BoxGeometry& geom, const std::vector<Vertex>& arm,
                           const LatticePath& wall);

// All open self-avoiding origin-to-boundary arms (trimmed at the first
// boundary touch).
std::vector<std::vector<Vertex>> origin_arms(const Configuration& cfg, size_t limit = 500000);

// The ccw-closest arm by exhaustive enumeration: least (area, length, verts).
std::optional<LatticePath> ccw_closest_arm(const Configuration& cfg, const LatticePath& wall);

// Exhaustive minimal-ratio detour around gamma edge `edge_index` inside the
// given annulus (all simple open detours, not just shortest ones).
std::optional<ShortcutCandidate> min_ratio_detour(const Configuration& cfg,
                                                  const GammaDecomposition& gd, size_t edge_index,
                                                  const AnnulusSpec& ann, size_t limit = 2000000);

// Exact crossing count of the 2x1 rectangle over all 2^7 configurations:
// returns {crossing configurations, total configurations}.
std::pair<uint64_t, uint64_t> exact_2x1_crossing_count();

// Exact P(A_{3,OOC}(1,2)) by full enumeration of the 28 annulus edges.
// The two disjoint open arms are certified by Menger (no single-vertex cut);
// the closed dual crossing of a width-1 annulus is vacuous by convention.
double exact_pi3_annulus_1_2(int threads = 0);

// The brute-force equivalence suites: production algorithms against the
// oracles above, on batches of seeded tiny configurations.  scale multiplies
// the per-suite batch sizes (1 = the full acceptance batches).
struct SuiteResult {
    std::string name;
    uint64_t cases = 0;
    uint64_t mismatches = 0;
};
struct SuiteReport {
    std::vector<SuiteResult> suites;
    bool pass() const {
        for (const auto& s : suites)
            if (s.mismatches > 0 || s.cases == 0) return false;
        return !suites.empty();
    }
    std::string summary() const;
};
SuiteReport run_equivalence_suites(uint64_t seed, double scale = 1.0, int threads = 0);

} // namespace oracle
} // namespace perc
