#include "perc/connectivity.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace perc {

namespace {

// Unit-capacity max-flow on a node-split graph, BFS augmentation.  All arcs
// have capacity 1; flows here are tiny (a handful of arms), so Edmonds-Karp
// is plenty.
struct UnitFlow {
    struct Arc {
        int to;
        int rev;
        int cap;
    };
    std::vector<std::vector<Arc>> g;
    explicit UnitFlow(int n) : g(n) {}
    void add(int u, int v) {
        g[u].push_back({v, static_cast<int>(g[v].size()), 1});
        g[v].push_back({u, static_cast<int>(g[u].size()) - 1, 0});
    }
    int maxflow(int s, int t, int limit) {
        int flow = 0;
        std::vector<int> prev_node(g.size()), prev_arc(g.size());
        while (flow < limit) {
            std::fill(prev_node.begin(), prev_node.end(), -1);
            std::deque<int> q{s};
            prev_node[s] = s;
            while (!q.empty() && prev_node[t] < 0) {
                int u = q.front();
                q.pop_front();
                for (size_t i = 0; i < g[u].size(); ++i) {
                    const Arc& a = g[u][i];
                    if (a.cap > 0 && prev_node[a.to] < 0) {
                        prev_node[a.to] = u;
                        prev_arc[a.to] = static_cast<int>(i);
                        q.push_back(a.to);
                    }
                }
            }
            if (prev_node[t] < 0) break;
            for (int v = t; v != s; v = prev_node[v]) {
                Arc& a = g[prev_node[v]][prev_arc[v]];
                a.cap -= 1;
                g[v][a.rev].cap += 1;
            }
            ++flow;
        }
        return flow;
    }
};

// Local raster over [center - r, center + r]^2 for vertices or cells.
struct Raster {
    Vertex center;
    int r;
    int w;
    Raster(Vertex c, int radius, bool cells) : center(c), r(radius), w(cells ? 2 * radius : 2 * radius + 1) {}
    bool holds(const Vertex& v) const {
        int ux = v.x - center.x + r, uy = v.y - center.y + r;
        return ux >= 0 && ux < w && uy >= 0 && uy < w;
    }
    int id(const Vertex& v) const { return (v.y - center.y + r) * w + (v.x - center.x + r); }
    size_t size() const { return static_cast<size_t>(w) * w; }
};

bool edge_in_cfg(const Configuration& cfg, const EdgeIndex& e) {
    return cfg.geometry().contains_edge(e);
}

int cell_radius2_about(const Vertex& cell, const Vertex& center) {
    int dx = 2 * (cell.x - center.x) + 1;
    int dy = 2 * (cell.y - center.y) + 1;
    return std::max(std::abs(dx), std::abs(dy));
}

} // namespace

ClusterLabeling label_clusters(const Configuration& cfg) {
    const BoxGeometry& g = cfg.geometry();
    ClusterLabeling out;

    // Union-find over vertices joined by open edges.
    std::vector<int32_t> uf(g.vertex_count());
    std::iota(uf.begin(), uf.end(), 0);
    auto find = [&](int32_t x) {
        while (uf[x] != x) x = uf[x] = uf[uf[x]];
        return x;
    };
    auto unite = [&](int32_t a, int32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) uf[std::max(a, b)] = std::min(a, b); // min id becomes the root
    };
    for (size_t i = 0; i < g.edge_count(); ++i) {
        EdgeIndex e = g.edge_at(i);
        if (cfg.open(e)) unite(static_cast<int32_t>(g.vertex_id(e.a)), static_cast<int32_t>(g.vertex_id(e.other())));
    }
    out.open_vertex_cluster.resize(g.vertex_count());
    for (size_t i = 0; i < g.vertex_count(); ++i) out.open_vertex_cluster[i] = find(static_cast<int32_t>(i));

    // Same for cells joined by closed edges.
    std::vector<int32_t> cf(g.cell_count());
    std::iota(cf.begin(), cf.end(), 0);
    auto cfind = [&](int32_t x) {
        while (cf[x] != x) x = cf[x] = cf[cf[x]];
        return x;
    };
    for (size_t ci = 0; ci < g.cell_count(); ++ci) {
        Vertex c = g.cell_at(ci);
        for (int dir = 0; dir < 2; ++dir) { // east/north; other directions covered symmetrically
            EdgeIndex e = cell_step_edge(c, dir);
            Vertex nb = c + kDirs[dir];
            if (!g.contains_cell(nb) || !edge_in_cfg(cfg, e) || cfg.open(e)) continue;
            int32_t a = cfind(static_cast<int32_t>(ci));
            int32_t b = cfind(static_cast<int32_t>(g.cell_id(nb)));
            if (a != b) cf[std::max(a, b)] = std::min(a, b);
        }
    }
    out.closed_cell_cluster.resize(g.cell_count());
    for (size_t i = 0; i < g.cell_count(); ++i) out.closed_cell_cluster[i] = cfind(static_cast<int32_t>(i));
    return out;
}

bool radial_connection(const Configuration& cfg) {
    const BoxGeometry& g = cfg.geometry();
    if (g.radius == 0) return true;
    std::vector<uint8_t> seen(g.vertex_count(), 0);
    std::deque<Vertex> q{g.center};
    seen[g.vertex_id(g.center)] = 1;
    while (!q.empty()) {
        Vertex v = q.front();
        q.pop_front();
        if (g.radius_of(v) == g.radius) return true;
        for (const Vertex& d : kDirs) {
            Vertex u = v + d;
            if (!g.contains_vertex(u) || seen[g.vertex_id(u)]) continue;
            Vertex lo = std::min(v, u);
            EdgeIndex e{lo, d.x != 0 ? Orientation::H : Orientation::V};
            if (!cfg.open(e)) continue;
            seen[g.vertex_id(u)] = 1;
            q.push_back(u);
        }
    }
    return false;
}

GeodesicWitness chemical_distance(const Configuration& cfg) {
    const BoxGeometry& g = cfg.geometry();
    if (g.radius == 0) return {0, {LatticeKind::Primal, {g.center}}};

    constexpr int kInf = INT_MAX;
    auto bfs = [&](const std::vector<Vertex>& sources) {
        std::vector<int> dist(g.vertex_count(), kInf);
        std::deque<Vertex> q;
        for (const Vertex& s : sources) {
            dist[g.vertex_id(s)] = 0;
            q.push_back(s);
        }
        while (!q.empty()) {
            Vertex v = q.front();
            q.pop_front();
            int dv = dist[g.vertex_id(v)];
            for (const Vertex& d : kDirs) {
                Vertex u = v + d;
                if (!g.contains_vertex(u) || dist[g.vertex_id(u)] != kInf) continue;
                Vertex lo = std::min(v, u);
                if (!cfg.open({lo, d.x != 0 ? Orientation::H : Orientation::V})) continue;
                dist[g.vertex_id(u)] = dv + 1;
                q.push_back(u);
            }
        }
        return dist;
    };

    std::vector<Vertex> boundary;
    int n = g.radius;
    for (int x = -n; x <= n; ++x)
        for (int y = -n; y <= n; ++y)
            if (std::max(std::abs(x), std::abs(y)) == n) boundary.push_back(g.center + Vertex{x, y});

    std::vector<int> to_boundary = bfs(boundary);
    int L = to_boundary[g.vertex_id(g.center)];
    if (L == kInf) throw NotConnectedError();

    // Greedy lexicographic reconstruction: any vertex with to_boundary = L-k
    // extends to a full shortest path, so taking the smallest valid neighbor
    // at each step yields the lexicographically least witness.
    LatticePath path{LatticeKind::Primal, {g.center}};
    Vertex v = g.center;
    for (int k = 0; k < L; ++k) {
        std::optional<Vertex> best;
        for (const Vertex& d : kDirs) {
            Vertex u = v + d;
            if (!g.contains_vertex(u)) continue;
            Vertex lo = std::min(v, u);
            if (!cfg.open({lo, d.x != 0 ? Orientation::H : Orientation::V})) continue;
            if (to_boundary[g.vertex_id(u)] != L - k - 1) continue;
            if (!best || u < *best) best = u;
        }
        path.verts.push_back(*best);
        v = *best;
    }
    return {static_cast<size_t>(L), std::move(path)};
}

bool crossing_exists(const Configuration& cfg, const RectSpec& rect, ArmColor color, CrossDir dir) {
    const BoxGeometry& g = cfg.geometry();
    if (!g.contains_vertex(rect.lo) || !g.contains_vertex(rect.hi) || rect.hi.x < rect.lo.x ||
        rect.hi.y < rect.lo.y)
        throw std::invalid_argument("rectangle outside configuration");

    if (color == ArmColor::Open) {
        auto in_rect = [&](const Vertex& v) {
            return v.x >= rect.lo.x && v.x <= rect.hi.x && v.y >= rect.lo.y && v.y <= rect.hi.y;
        };
        Raster ras(g.center, g.radius, false);
        std::vector<uint8_t> seen(ras.size(), 0);
        std::deque<Vertex> q;
        auto is_target = [&](const Vertex& v) {
            return dir == CrossDir::Horizontal ? v.x == rect.hi.x : v.y == rect.hi.y;
        };
        for (int a = (dir == CrossDir::Horizontal ? rect.lo.y : rect.lo.x);
             a <= (dir == CrossDir::Horizontal ? rect.hi.y : rect.hi.x); ++a) {
            Vertex s = dir == CrossDir::Horizontal ? Vertex{rect.lo.x, a} : Vertex{a, rect.lo.y};
            seen[ras.id(s)] = 1;
            q.push_back(s);
        }
        while (!q.empty()) {
            Vertex v = q.front();
            q.pop_front();
            if (is_target(v)) return true;
            for (const Vertex& d : kDirs) {
                Vertex u = v + d;
                if (!in_rect(u) || seen[ras.id(u)]) continue;
                Vertex lo = std::min(v, u);
                if (!cfg.open({lo, d.x != 0 ? Orientation::H : Orientation::V})) continue;
                seen[ras.id(u)] = 1;
                q.push_back(u);
            }
        }
        return false;
    }

    // Closed-dual crossing of the dual rectangle.  For a vertical crossing the
    // usable cells are a in [lo.x, hi.x-1], b in [lo.y-1, hi.y]; the crossing
    // runs from the b = lo.y-1 row to the b = hi.y row through closed edges of
    // the rectangle.
    bool vertical = dir == CrossDir::Vertical;
    auto cell_ok = [&](const Vertex& c) {
        if (vertical)
            return c.x >= rect.lo.x && c.x <= rect.hi.x - 1 && c.y >= rect.lo.y - 1 && c.y <= rect.hi.y;
        return c.y >= rect.lo.y && c.y <= rect.hi.y - 1 && c.x >= rect.lo.x - 1 && c.x <= rect.hi.x;
    };
    auto edge_in_rect = [&](const EdgeIndex& e) {
        Vertex b = e.other();
        return e.a.x >= rect.lo.x && b.x <= rect.hi.x && e.a.y >= rect.lo.y && b.y <= rect.hi.y;
    };
    auto is_target = [&](const Vertex& c) { return vertical ? c.y == rect.hi.y : c.x == rect.hi.x; };

    Raster ras(g.center, g.radius + 1, true);
    std::vector<uint8_t> seen(ras.size(), 0);
    std::deque<Vertex> q;
    if (vertical) {
        for (int a = rect.lo.x; a <= rect.hi.x - 1; ++a) {
            Vertex c{a, rect.lo.y - 1};
            seen[ras.id(c)] = 1;
            q.push_back(c);
        }
    } else {
        for (int b = rect.lo.y; b <= rect.hi.y - 1; ++b) {
            Vertex c{rect.lo.x - 1, b};
            seen[ras.id(c)] = 1;
            q.push_back(c);
        }
    }
    while (!q.empty()) {
        Vertex c = q.front();
        q.pop_front();
        if (is_target(c)) return true;
        for (int d = 0; d < 4; ++d) {
            Vertex nb = c + kDirs[d];
            if (!cell_ok(nb) || seen[ras.id(nb)]) continue;
            EdgeIndex e = cell_step_edge(c, d);
            if (!edge_in_rect(e) || !edge_in_cfg(cfg, e) || cfg.open(e)) continue;
            seen[ras.id(nb)] = 1;
            q.push_back(nb);
        }
    }
    return false;
}

namespace {

struct AnnulusArmGraph {
    // Shared setup for open-arm flow/BFS queries on an annulus.
    const Configuration& cfg;
    AnnulusSpec ann;
    std::optional<HalfPlane> hp;
    Raster ras;

    AnnulusArmGraph(const Configuration& c, const AnnulusSpec& a, std::optional<HalfPlane> h)
        : cfg(c), ann(a), hp(std::move(h)), ras(a.center, a.outer, false) {
        // Annuli clipped to the box are only meaningful for half-plane events.
        if (!hp &&
            (!cfg.geometry().contains_vertex({ann.center.x + ann.outer, ann.center.y + ann.outer}) ||
             !cfg.geometry().contains_vertex({ann.center.x - ann.outer, ann.center.y - ann.outer})))
            throw std::invalid_argument("annulus extends outside configuration");
    }
    int radius_of(const Vertex& v) const { return linf(v - ann.center); }
    bool vertex_ok(const Vertex& v) const {
        int r = radius_of(v);
        if (r < ann.inner || r > ann.outer) return false;
        if (!cfg.geometry().contains_vertex(v)) return false;
        if (hp && !hp->allows_vertex(v)) return false;
        return true;
    }
    bool edge_ok(const EdgeIndex& e) const {
        if (!ann.contains_edge(e)) return false;
        if (!cfg.geometry().contains_edge(e)) return false;
        if (hp && (!hp->allows_vertex(e.a) || !hp->allows_vertex(e.other()))) return false;
        return cfg.open(e);
    }
};

struct DualAnnulusArmGraph {
    const Configuration& cfg;
    AnnulusSpec ann;
    std::optional<HalfPlane> hp;
    Raster ras;

    DualAnnulusArmGraph(const Configuration& c, const AnnulusSpec& a, std::optional<HalfPlane> h)
        : cfg(c), ann(a), hp(std::move(h)), ras(a.center, a.outer, true) {}
    int rho2(const Vertex& cell) const { return cell_radius2_about(cell, ann.center); }
    bool cell_ok(const Vertex& cell) const {
        int r2 = rho2(cell);
        if (r2 < 2 * ann.inner + 1 || r2 > 2 * ann.outer - 1) return false;
        if (hp && !hp->allows_cell(cell)) return false;
        return true;
    }
    // Step c -> c+dir is usable if the crossed primal edge is a closed edge of
    // the annulus inside the configuration.
    bool step_ok(const Vertex& cell, int dir) const {
        EdgeIndex e = cell_step_edge(cell, dir);
        if (!ann.contains_edge(e) || !cfg.geometry().contains_edge(e)) return false;
        return cfg.closed(e);
    }
    bool is_source(const Vertex& cell) const { return rho2(cell) == 2 * ann.inner + 1; }
    bool is_target(const Vertex& cell) const { return rho2(cell) == 2 * ann.outer - 1; }
};

} // namespace

int disjoint_arm_count(const Configuration& cfg, const AnnulusSpec& ann, ArmColor color,
                       const std::optional<HalfPlane>& hp, int cap) {
    if (color == ArmColor::Open) {
        AnnulusArmGraph gr(cfg, ann, hp);
        int nNodes = static_cast<int>(gr.ras.size());
        UnitFlow flow(2 * nNodes + 2);
        int S = 2 * nNodes, T = 2 * nNodes + 1;
        auto in_node = [](int id) { return 2 * id; };
        auto out_node = [](int id) { return 2 * id + 1; };
        for (int uy = 0; uy < gr.ras.w; ++uy) {
            for (int ux = 0; ux < gr.ras.w; ++ux) {
                Vertex v{ux + ann.center.x - ann.outer, uy + ann.center.y - ann.outer};
                if (!gr.vertex_ok(v)) continue;
                int id = gr.ras.id(v);
                flow.add(in_node(id), out_node(id));
                if (gr.radius_of(v) == ann.inner) flow.add(S, in_node(id));
                if (gr.radius_of(v) == ann.outer) flow.add(out_node(id), T);
                for (int d = 0; d < 2; ++d) { // east/north; reverse arcs added on the other endpoint
                    Vertex u = v + kDirs[d];
                    if (!gr.vertex_ok(u)) continue;
                    EdgeIndex e{v, d == 0 ? Orientation::H : Orientation::V};
                    if (!gr.edge_ok(e)) continue;
                    flow.add(out_node(id), in_node(gr.ras.id(u)));
                    flow.add(out_node(gr.ras.id(u)), in_node(id));
                }
            }
        }
        return flow.maxflow(S, T, cap);
    }

    DualAnnulusArmGraph gr(cfg, ann, hp);
    int nNodes = static_cast<int>(gr.ras.size());
    UnitFlow flow(2 * nNodes + 2);
    int S = 2 * nNodes, T = 2 * nNodes + 1;
    for (int uy = 0; uy < gr.ras.w; ++uy) {
        for (int ux = 0; ux < gr.ras.w; ++ux) {
            Vertex c{ux + ann.center.x - ann.outer, uy + ann.center.y - ann.outer};
            if (!gr.cell_ok(c)) continue;
            int id = gr.ras.id(c);
            flow.add(2 * id, 2 * id + 1);
            if (gr.is_source(c)) flow.add(S, 2 * id);
            if (gr.is_target(c)) flow.add(2 * id + 1, T);
            for (int d = 0; d < 2; ++d) {
                Vertex nb = c + kDirs[d];
                if (!gr.cell_ok(nb) || !gr.step_ok(c, d)) continue;
                flow.add(2 * id + 1, 2 * gr.ras.id(nb));
                flow.add(2 * gr.ras.id(nb) + 1, 2 * id);
            }
        }
    }
    return flow.maxflow(S, T, cap);
}

bool annulus_arm_exists(const Configuration& cfg, const AnnulusSpec& ann, ArmColor color,
                        const std::optional<HalfPlane>& hp) {
    if (color == ArmColor::Open) {
        AnnulusArmGraph gr(cfg, ann, hp);
        std::vector<uint8_t> seen(gr.ras.size(), 0);
        std::deque<Vertex> q;
        for (int i = -ann.inner; i <= ann.inner; ++i) {
            for (Vertex v : {Vertex{i, ann.inner}, Vertex{i, -ann.inner}, Vertex{ann.inner, i},
                             Vertex{-ann.inner, i}}) {
                v = v + ann.center;
                if (!gr.vertex_ok(v) || seen[gr.ras.id(v)]) continue;
                seen[gr.ras.id(v)] = 1;
                q.push_back(v);
            }
        }
        while (!q.empty()) {
            Vertex v = q.front();
            q.pop_front();
            if (gr.radius_of(v) == ann.outer) return true;
            for (const Vertex& d : kDirs) {
                Vertex u = v + d;
                if (!gr.vertex_ok(u) || seen[gr.ras.id(u)]) continue;
                Vertex lo = std::min(v, u);
                if (!gr.edge_ok({lo, d.x != 0 ? Orientation::H : Orientation::V})) continue;
                seen[gr.ras.id(u)] = 1;
                q.push_back(u);
            }
        }
        return false;
    }

    DualAnnulusArmGraph gr(cfg, ann, hp);
    std::vector<uint8_t> seen(gr.ras.size(), 0);
    std::deque<Vertex> q;
    for (int uy = 0; uy < gr.ras.w; ++uy) {
        for (int ux = 0; ux < gr.ras.w; ++ux) {
            Vertex c{ux + ann.center.x - ann.outer, uy + ann.center.y - ann.outer};
            if (!gr.cell_ok(c) || !gr.is_source(c)) continue;
            seen[gr.ras.id(c)] = 1;
            q.push_back(c);
        }
    }
    while (!q.empty()) {
        Vertex c = q.front();
        q.pop_front();
        if (gr.is_target(c)) return true;
        for (int d = 0; d < 4; ++d) {
            Vertex nb = c + kDirs[d];
            if (!gr.cell_ok(nb) || seen[gr.ras.id(nb)] || !gr.step_ok(c, d)) continue;
            seen[gr.ras.id(nb)] = 1;
            q.push_back(nb);
        }
    }
    return false;
}

int edge_open_arm_pair(const Configuration& cfg, const EdgeIndex& e, int r) {
    if (r <= 0) return 2;
    const BoxGeometry& g = cfg.geometry();
    Vertex c = e.a;
    Raster ras(c, r, false);
    int nNodes = static_cast<int>(ras.size());
    UnitFlow flow(2 * nNodes + 2);
    int S = 2 * nNodes, T = 2 * nNodes + 1;
    auto vertex_ok = [&](const Vertex& v) { return linf(v - c) <= r && g.contains_vertex(v); };
    for (int uy = 0; uy < ras.w; ++uy) {
        for (int ux = 0; ux < ras.w; ++ux) {
            Vertex v{ux + c.x - r, uy + c.y - r};
            if (!vertex_ok(v)) continue;
            int id = ras.id(v);
            flow.add(2 * id, 2 * id + 1);
            if (v == e.a || v == e.other()) flow.add(S, 2 * id);
            if (linf(v - c) == r) flow.add(2 * id + 1, T);
            for (int d = 0; d < 2; ++d) {
                Vertex u = v + kDirs[d];
                if (!vertex_ok(u)) continue;
                EdgeIndex f{v, d == 0 ? Orientation::H : Orientation::V};
                if (f == e || !g.contains_edge(f) || !cfg.open(f)) continue;
                if (linf(u - c) > r) continue;
                flow.add(2 * id + 1, 2 * ras.id(u));
                flow.add(2 * ras.id(u) + 1, 2 * id);
            }
        }
    }
    return flow.maxflow(S, T, 2);
}

bool edge_dual_arm(const Configuration& cfg, const EdgeIndex& e, int r) {
    if (r <= 0) return true;
    const BoxGeometry& g = cfg.geometry();
    Vertex c = e.a;
    auto [c1, c2] = cells_of_edge(e);
    Raster ras(c, r, true);
    auto cell_ok = [&](const Vertex& cell) { return cell_radius2_about(cell, c) <= 2 * r - 1; };
    std::vector<uint8_t> seen(ras.size(), 0);
    std::deque<Vertex> q;
    for (const Vertex& s : {c1, c2}) {
        if (!cell_ok(s)) return true; // the dual endpoint already sits at the target ring
        seen[ras.id(s)] = 1;
        q.push_back(s);
    }
    while (!q.empty()) {
        Vertex cell = q.front();
        q.pop_front();
        if (cell_radius2_about(cell, c) == 2 * r - 1) return true;
        for (int d = 0; d < 4; ++d) {
            Vertex nb = cell + kDirs[d];
            if (!cell_ok(nb) || seen[ras.id(nb)]) continue;
            EdgeIndex f = cell_step_edge(cell, d);
            if (!g.contains_edge(f) || cfg.open(f)) continue;
            if (linf(f.a - c) > r || linf(f.other() - c) > r) continue;
            seen[ras.id(nb)] = 1;
            q.push_back(nb);
        }
    }
    return false;
}

bool edge_three_arm(const Configuration& cfg, const EdgeIndex& e, int r) {
    if (r <= 0) return true;
    return edge_dual_arm(cfg, e, r) && edge_open_arm_pair(cfg, e, r) >= 2;
}

} // namespace perc
