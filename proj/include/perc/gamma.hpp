// Construction of the radial three-arm path gamma and its decomposition.
//
// On {0 <-> dB_n} the path is built from the successive innermost open
// circuits around the origin (case C0) or, when no circuit exists (C0^c), as
// the open arm counterclockwise-closest to the first closed dual path from
// the origin to the boundary.  Every edge of gamma is a quantitative
// three-arm point; verify_three_arm produces the witness.
#pragma once

#include "perc/arm_events.hpp"
#include "perc/connectivity.hpp"

#include <functional>

namespace perc {

struct NoDualPathError : std::runtime_error {
    NoDualPathError() : std::runtime_error("no qualifying closed dual path") {}
};
struct NoOpenArmError : std::runtime_error {
    NoOpenArmError() : std::runtime_error("no qualifying open arm") {}
};
struct GammaInvariantError : std::runtime_error {
    explicit GammaInvariantError(const std::string& what) : std::runtime_error(what) {}
};

// Vertex order used by the deterministic order on paths: prefer greater x,
// then greater y.  On the all-closed box this makes the first escape path the
// straight dual ray running east from the cell at origin + (1/2,1/2).
inline bool dual_vertex_less(const Vertex& a, const Vertex& b) {
    return a.x > b.x || (a.x == b.x && a.y > b.y);
}

using CellPred = std::function<bool(const Vertex&)>;
using VertexPred = std::function<bool(const Vertex&)>;

// Order-minimal (length, then lexicographic under dual_vertex_less) closed
// dual path from one of `starts` to a cell satisfying `target`, moving across
// closed edges of the configuration through cells satisfying `allowed`.
// Cells one step outside the box are legal waypoints/targets.
LatticePath first_closed_dual_path(const Configuration& cfg, const std::vector<Vertex>& starts,
                                   const CellPred& target, const CellPred& allowed);

struct C0Result {
    bool has_circuit = false;
    LatticeCircuit innermost;  // ccw closed vertex loop, when has_circuit
    LatticePath dual_witness;  // when !has_circuit: origin-adjacent cell -> outside
};

// C0: is there an open circuit around the origin in B_n?
C0Result detect_C0(const Configuration& cfg);

struct CircuitStack {
    int K = 0;
    std::vector<LatticeCircuit> circuits;  // C_1..C_K, ccw
    LatticePath wall_first;                // c_1: origin cells -> inside C_1 (K >= 1)
    std::vector<LatticePath> walls_mid;    // c_m between C_{m-1} and C_m, m = 2..K
    LatticePath wall_escape;               // dual path past C_K (or past origin when K = 0)
    // Attachment map: for each cell of the dual cluster at its level, the
    // cluster cell adjacent to the previous circuit (or to the origin) that a
    // closed dual path from the cell can reach; -1 elsewhere.  cluster_level
    // records which dual cluster a cell belongs to (1 = innermost, m = the
    // cluster between C_{m-1} and C_m; 0 = none).
    std::vector<int32_t> attach_cell;
    std::vector<int16_t> cluster_level;
};

CircuitStack build_circuit_stack(const Configuration& cfg);

// Right-hand interface walk on open edges from `start`, with the wall cell on
// the clockwise hand, until `stop` holds.  Returns the raw walk.
std::vector<Vertex> interface_walk(const Configuration& cfg, const Vertex& start,
                                   const Vertex& wall_cell, const VertexPred& stop);

// Open path from `from_set` to `to_set` counterclockwise-closest to the
// closed dual path `wall`: the interface walk trimmed at its last from-set
// visit and loop-erased.
LatticePath ccw_closest_arm(const Configuration& cfg, const LatticePath& wall,
                            const VertexPred& from_set, const VertexPred& to_set);

enum class GammaPart : uint8_t { Sigma1, Arc, SigmaMid, SigmaLast, C0cArm };

struct GammaEdgeLabel {
    GammaPart part;
    int m = 0; // circuit/connector index where applicable
};

struct GammaDecomposition {
    bool c0 = false;           // case flag: circuit case vs C0^c
    LatticePath gamma;         // open, self-avoiding, origin -> dB_n
    std::vector<GammaEdgeLabel> labels; // one per gamma edge
    CircuitStack stack;        // K = 0 on C0^c
    std::vector<LatticePath> sigmas;    // sigma_1..sigma_{K+1}; on C0^c the single arm
    std::vector<LatticePath> arcs;      // arc on C_m from sigma_m's end to sigma_{m+1}'s start
    LatticePath c0c_wall;      // the dual path c on C0^c

    size_t length() const { return gamma.edge_count(); }
};

GammaDecomposition build_gamma(const Configuration& cfg);

// Validity of the whole decomposition: gamma open, self-avoiding, origin to
// boundary; throws GammaInvariantError on violation (used by tests and the
// acceptance suite).
void check_gamma_invariants(const Configuration& cfg, const GammaDecomposition& gd);

// --- three-arm witnesses ---

struct ArmTriple {
    LatticePath open_a, open_b; // along gamma, from the endpoints of e
    LatticePath dual;           // closed dual arm from e*
};

struct ScaleGapCheck {
    int l_from = 0, l_to = 0;
    int opens_required = 0;
    bool closed_required = false;
    bool ok = true;
};

struct ScaleSequence {
    EdgeIndex e;
    int M = 0;
    int R = 0;
    std::vector<int> scales; // l_1..l_R (nondecreasing, <= floor(log2 M))
    bool clause1_ok = false; // three arms from e to 2^{l1 - 1}
    std::vector<ScaleGapCheck> gaps;
    ScaleGapCheck beyond;    // 2R+2 open arms from 2^{l_R} to M
    bool all_ok() const;
};

struct ThreeArmWitness {
    enum class Kind : uint8_t { Trivial, Explicit, Scales } kind = Kind::Trivial;
    std::optional<ArmTriple> arms;
    std::optional<ScaleSequence> scales;
    bool ok = true;
};

// Witness for gamma edge i: explicit arm triple on sigma_1 / sigma_{K+1} /
// the C0^c arm, a ScaleSequence on intermediate connectors and circuit arcs.
ThreeArmWitness verify_three_arm(const Configuration& cfg, const GammaDecomposition& gd,
                                 size_t gamma_edge_index, int R = 3);

// Scale count for the ScaleSequence: the smallest R with
// pi'_{2R+2}(n) <= pi3(n) n^{-epsilon}, decided from measured estimates at
// their Wilson bounds; falls back to 3 when no comparison is decisive at
// these sample counts.
int choose_scale_count(int n, double epsilon, uint64_t samples, uint64_t seed, int threads = 0);

// Closed dual connection from e* to a cell of `wall` (duality witness on C0^c).
bool dual_connection_to_wall(const Configuration& cfg, const EdgeIndex& e, const LatticePath& wall);

// --- cumulative sum check:  sum_{l<=L} l pi3(l) <= C L^2 pi3(L) ---

struct CumulativeSumReport {
    std::vector<int> L_values;
    std::vector<double> c_hat;
    bool growth_flag = false; // c_hat more than doubles from first to last L
};

// pi3_dyadic: (l, pi3-hat(l)) on a grid including l = 1; intermediate values
// are interpolated geometrically (log-linear).
CumulativeSumReport cumulative_sum_check(const std::vector<std::pair<int, double>>& pi3_dyadic,
                                         const std::vector<int>& L_values);

} // namespace perc
