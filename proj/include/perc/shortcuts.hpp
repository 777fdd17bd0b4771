// nu-shortcuts around edges of gamma: open detours inside dyadic annuli that
// replace a segment of gamma, and the spliced path s assembled from a
// disjoint collection of them.
#pragma once

#include "perc/gamma.hpp"

namespace perc {

struct ShortcutCandidate {
    EdgeIndex e;
    int scale_j = 0;
    LatticePath detour;      // r: open, edge-disjoint from gamma, endpoints on gamma
    size_t tau_begin = 0;    // gamma edge interval [tau_begin, tau_end) replaced by r
    size_t tau_end = 0;
    size_t tau_len() const { return tau_end - tau_begin; }
    size_t r_len() const { return detour.edge_count(); }
    // nu = #r / #tau, compared exactly by cross-multiplication
    friend bool ratio_less(const ShortcutCandidate& a, const ShortcutCandidate& b) {
        return a.r_len() * b.tau_len() < b.r_len() * a.tau_len();
    }
};

// Annulus Ann_j = e_x + B(2^j, 2^{j + floor(log2(1/epsilon))}).
AnnulusSpec shortcut_annulus(const EdgeIndex& e, int j, double epsilon);

// Minimal-ratio open detour around gamma-edge `edge_index` inside Ann_j
// (ties: smallest #r, then lexicographically smallest vertex sequence).
// Throws if the annulus does not fit inside the box.
std::optional<ShortcutCandidate> find_shortcut(const Configuration& cfg, const GammaDecomposition& gd,
                                               size_t edge_index, int j, double epsilon);

// E_j(e, epsilon, nu): a shortcut with #r <= nu * #tau exists in Ann_j.
bool detect_Ej(const Configuration& cfg, const GammaDecomposition& gd, size_t edge_index, int j,
               double epsilon, double nu);

struct SplicedPath {
    LatticePath s;
    std::vector<ShortcutCandidate> chosen;
    size_t savings = 0; // sum over chosen of (#tau - #r)
};

// Scale range for the splice: j in [ceil(delta/8 log2 n), floor(delta/4 log2 n)].
std::pair<int, int> splice_scale_range(int n, double delta);

// Exact weighted interval scheduling (maximize total tau length over
// interval-disjoint candidates); exposed for tests.
std::vector<size_t> max_tau_interval_schedule(const std::vector<ShortcutCandidate>& cands);

// Detour collection maximizing total #tau over interval-disjoint candidates
// with ratio <= nu, then greedily filtered (by savings) to pairwise
// vertex-disjoint detours; s is gamma with the chosen segments replaced.
SplicedPath splice(const Configuration& cfg, const GammaDecomposition& gd, double delta,
                   double epsilon, double nu);

} // namespace perc
