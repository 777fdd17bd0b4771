#include "perc/shortcuts.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace perc {

namespace {

int floor_log2_inv(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must be in (0,1)");
    return static_cast<int>(std::floor(std::log2(1.0 / epsilon)));
}

} // namespace

AnnulusSpec shortcut_annulus(const EdgeIndex& e, int j, double epsilon) {
    int inner = 1 << j;
    int outer = 1 << (j + floor_log2_inv(epsilon));
    if (outer <= inner) outer = inner + 1; // floor(log2(1/eps)) = 0: degenerate width
    return AnnulusSpec(e.a, inner, outer);
}

std::optional<ShortcutCandidate> find_shortcut(const Configuration& cfg, const GammaDecomposition& gd,
                                               size_t edge_index, int j, double epsilon) {
    const BoxGeometry& g = cfg.geometry();
    const LatticePath& gamma = gd.gamma;
    EdgeIndex e = gamma.edge(edge_index);
    AnnulusSpec ann = shortcut_annulus(e, j, epsilon);
    if (linf(e.a - g.center) + ann.outer > g.radius)
        throw std::out_of_range("shortcut annulus extends outside the box");

    // gamma's trace inside the annulus
    std::unordered_map<Vertex, size_t> gamma_pos;
    for (size_t i = 0; i < gamma.verts.size(); ++i) gamma_pos[gamma.verts[i]] = i;
    std::unordered_set<size_t> gamma_edges;
    auto edge_key = [](const EdgeIndex& f) {
        return std::hash<Vertex>()(f.a) * 2 + static_cast<size_t>(f.o);
    };
    for (const EdgeIndex& f : gamma.edges()) gamma_edges.insert(edge_key(f));

    auto vertex_in_ann = [&](const Vertex& v) {
        int r = linf(v - ann.center);
        return r >= ann.inner && r <= ann.outer;
    };
    auto edge_ok = [&](const EdgeIndex& f) {
        return ann.contains_edge(f) && g.contains_edge(f) && cfg.open(f) && !gamma_edges.count(edge_key(f));
    };

    // BFS from each gamma vertex u in the annulus with position <= edge_index;
    // detour targets are gamma vertices v with position > edge_index, so that
    // tau = gamma[pos(u)..pos(v)] contains e.
    std::optional<ShortcutCandidate> best;
    auto consider = [&](ShortcutCandidate&& c) {
        if (!best) {
            best = std::move(c);
            return;
        }
        size_t lhs = c.r_len() * best->tau_len(), rhs = best->r_len() * c.tau_len();
        if (lhs > rhs) return;
        if (lhs == rhs) {
            if (c.r_len() > best->r_len()) return;
            if (c.r_len() == best->r_len() && !(c.detour.verts < best->detour.verts)) return;
        }
        best = std::move(c);
    };

    constexpr int kInf = INT_MAX;
    int W = 2 * ann.outer + 1;
    auto rid = [&](const Vertex& v) {
        return (v.y - ann.center.y + ann.outer) * W + (v.x - ann.center.x + ann.outer);
    };

    // BFS from each candidate far endpoint v (gamma position > edge_index);
    // the forward walk u -> v can then pick the smallest next vertex at each
    // step, giving the lexicographically least shortest detour.
    for (size_t vi = edge_index + 1; vi < gamma.verts.size(); ++vi) {
        const Vertex v = gamma.verts[vi];
        if (!vertex_in_ann(v)) continue;
        std::vector<int> dist(static_cast<size_t>(W) * W, kInf);
        std::deque<Vertex> q{v};
        dist[rid(v)] = 0;
        while (!q.empty()) {
            Vertex a = q.front();
            q.pop_front();
            for (const Vertex& d : kDirs) {
                Vertex w = a + d;
                if (!vertex_in_ann(w) || dist[rid(w)] != kInf) continue;
                Vertex lo = std::min(a, w);
                if (!edge_ok({lo, d.x != 0 ? Orientation::H : Orientation::V})) continue;
                dist[rid(w)] = dist[rid(a)] + 1;
                q.push_back(w);
            }
        }
        for (size_t ui = 0; ui <= edge_index; ++ui) {
            const Vertex u = gamma.verts[ui];
            if (!vertex_in_ann(u) || dist[rid(u)] == kInf || v == u) continue;
            std::vector<Vertex> verts{u};
            Vertex cur = u;
            for (int rem = dist[rid(u)]; rem > 0; --rem) {
                std::optional<Vertex> pick;
                for (const Vertex& d : kDirs) {
                    Vertex w = cur + d;
                    if (!vertex_in_ann(w) || dist[rid(w)] != rem - 1) continue;
                    Vertex lo = std::min(cur, w);
                    if (!edge_ok({lo, d.x != 0 ? Orientation::H : Orientation::V})) continue;
                    if (!pick || w < *pick) pick = w;
                }
                cur = *pick;
                verts.push_back(cur);
            }
            ShortcutCandidate cand;
            cand.e = e;
            cand.scale_j = j;
            cand.detour = {LatticeKind::Primal, std::move(verts)};
            cand.tau_begin = ui;
            cand.tau_end = vi;
            consider(std::move(cand));
        }
    }
    return best;
}

bool detect_Ej(const Configuration& cfg, const GammaDecomposition& gd, size_t edge_index, int j,
               double epsilon, double nu) {
    auto c = find_shortcut(cfg, gd, edge_index, j, epsilon);
    if (!c) return false;
    return static_cast<double>(c->r_len()) <= nu * static_cast<double>(c->tau_len());
}

std::pair<int, int> splice_scale_range(int n, double delta) {
    double l = std::log2(static_cast<double>(n));
    int jlo = static_cast<int>(std::ceil(delta / 8.0 * l));
    int jhi = static_cast<int>(std::floor(delta / 4.0 * l));
    return {std::max(0, jlo), jhi};
}

std::vector<size_t> max_tau_interval_schedule(const std::vector<ShortcutCandidate>& cands) {
    // Weighted interval scheduling on [tau_begin, tau_end), weight = tau_len.
    std::vector<size_t> order(cands.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return cands[a].tau_end < cands[b].tau_end;
    });
    size_t m = order.size();
    std::vector<uint64_t> dp(m + 1, 0);
    std::vector<int> take_prev(m + 1, 0);
    for (size_t i = 1; i <= m; ++i) {
        const ShortcutCandidate& c = cands[order[i - 1]];
        // last candidate (in order) ending at or before c.tau_begin
        size_t lo = 0, hi = i - 1;
        while (lo < hi) {
            size_t mid = (lo + hi + 1) / 2;
            if (cands[order[mid - 1]].tau_end <= c.tau_begin) lo = mid;
            else hi = mid - 1;
        }
        uint64_t with = dp[lo] + c.tau_len();
        if (with > dp[i - 1]) {
            dp[i] = with;
            take_prev[i] = static_cast<int>(lo);
        } else {
            dp[i] = dp[i - 1];
            take_prev[i] = -1;
        }
    }
    std::vector<size_t> chosen;
    for (size_t i = m; i > 0;) {
        if (take_prev[i] < 0) --i;
        else {
            chosen.push_back(order[i - 1]);
            i = static_cast<size_t>(take_prev[i]);
        }
    }
    std::reverse(chosen.begin(), chosen.end());
    return chosen;
}

SplicedPath splice(const Configuration& cfg, const GammaDecomposition& gd, double delta,
                   double epsilon, double nu) {
    const LatticePath& gamma = gd.gamma;
    SplicedPath out;
    auto [jlo, jhi] = splice_scale_range(static_cast<int>(cfg.geometry().radius), delta);

    // Collect the best candidate per gamma edge over the scale range.
    std::vector<ShortcutCandidate> cands;
    for (size_t i = 0; i < gamma.edge_count(); ++i) {
        std::optional<ShortcutCandidate> best;
        for (int j = jlo; j <= jhi; ++j) {
            std::optional<ShortcutCandidate> c;
            try {
                c = find_shortcut(cfg, gd, i, j, epsilon);
            } catch (const std::out_of_range&) {
                continue; // annulus does not fit near the boundary
            }
            if (!c) continue;
            if (static_cast<double>(c->r_len()) > nu * static_cast<double>(c->tau_len())) continue;
            if (c->r_len() > c->tau_len()) continue; // never lengthen the path
            if (!best || ratio_less(*c, *best)) best = c;
        }
        if (best) cands.push_back(std::move(*best));
    }
    // Identical intervals from adjacent edges collapse.
    std::sort(cands.begin(), cands.end(), [](const ShortcutCandidate& a, const ShortcutCandidate& b) {
        return std::tie(a.tau_begin, a.tau_end, a.detour.verts) <
               std::tie(b.tau_begin, b.tau_end, b.detour.verts);
    });
    cands.erase(std::unique(cands.begin(), cands.end(),
                            [](const ShortcutCandidate& a, const ShortcutCandidate& b) {
                                return a.tau_begin == b.tau_begin && a.tau_end == b.tau_end &&
                                       a.detour.verts == b.detour.verts;
                            }),
                cands.end());

    std::vector<size_t> schedule = max_tau_interval_schedule(cands);

    // Greedy vertex-disjointness filter in savings order.
    std::sort(schedule.begin(), schedule.end(), [&](size_t a, size_t b) {
        return cands[a].tau_len() - cands[a].r_len() > cands[b].tau_len() - cands[b].r_len();
    });
    std::unordered_set<Vertex> used;
    for (size_t idx : schedule) {
        const ShortcutCandidate& c = cands[idx];
        bool clash = false;
        for (const Vertex& v : c.detour.verts)
            if (used.count(v)) {
                clash = true;
                break;
            }
        if (clash) continue;
        for (const Vertex& v : c.detour.verts) used.insert(v);
        out.chosen.push_back(c);
    }
    std::sort(out.chosen.begin(), out.chosen.end(),
              [](const ShortcutCandidate& a, const ShortcutCandidate& b) {
                  return a.tau_begin < b.tau_begin;
              });

    // Rebuild s: gamma with each chosen interval replaced by its detour.
    out.s.kind = LatticeKind::Primal;
    size_t pos = 0;
    for (const ShortcutCandidate& c : out.chosen) {
        for (size_t i = pos; i <= c.tau_begin; ++i) out.s.verts.push_back(gamma.verts[i]);
        for (size_t i = 1; i < c.detour.verts.size(); ++i) out.s.verts.push_back(c.detour.verts[i]);
        pos = c.tau_end + 1;
        out.savings += c.tau_len() - c.r_len();
    }
    for (size_t i = pos; i < gamma.verts.size(); ++i) out.s.verts.push_back(gamma.verts[i]);
    return out;
}

} // namespace perc
