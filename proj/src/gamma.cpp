#include "perc/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace perc {

namespace {

// Cell raster one ring wider than the box, so cells just outside are
// addressable (they are the dual boundary dB_n^*).
struct CellRaster {
    Vertex center;
    int n;
    int w;
    explicit CellRaster(const BoxGeometry& g) : center(g.center), n(g.radius), w(2 * g.radius + 2) {}
    bool holds(const Vertex& c) const {
        int ux = c.x - center.x + n + 1, uy = c.y - center.y + n + 1;
        return ux >= 0 && ux < w && uy >= 0 && uy < w;
    }
    int id(const Vertex& c) const { return (c.y - center.y + n + 1) * w + (c.x - center.x + n + 1); }
    size_t size() const { return static_cast<size_t>(w) * w; }
};

bool cell_in_box(const BoxGeometry& g, const Vertex& c) { return g.contains_cell(c); }

std::vector<Vertex> origin_cells(const BoxGeometry& g) {
    Vertex c = g.center;
    return {{c.x, c.y}, {c.x - 1, c.y}, {c.x, c.y - 1}, {c.x - 1, c.y - 1}};
}

// Closed-dual cluster growth from seed cells among in-box cells for which
// `allowed` holds.  Reports whether the cluster can step outside the box
// (across a closed boundary edge).
struct ClusterGrowth {
    std::vector<uint8_t> mask; // over box cells
    bool escaped = false;
};

ClusterGrowth grow_dual_cluster(const Configuration& cfg, const std::vector<Vertex>& seeds,
                                const std::function<bool(const Vertex&)>& allowed) {
    const BoxGeometry& g = cfg.geometry();
    ClusterGrowth out;
    out.mask.assign(g.cell_count(), 0);
    std::deque<Vertex> q;
    for (const Vertex& s : seeds) {
        if (!cell_in_box(g, s) || !allowed(s)) continue;
        if (out.mask[g.cell_id(s)]) continue;
        out.mask[g.cell_id(s)] = 1;
        q.push_back(s);
    }
    while (!q.empty()) {
        Vertex c = q.front();
        q.pop_front();
        for (int d = 0; d < 4; ++d) {
            EdgeIndex e = cell_step_edge(c, d);
            if (!g.contains_edge(e) || cfg.open(e)) continue;
            Vertex nb = c + kDirs[d];
            if (!cell_in_box(g, nb)) {
                out.escaped = true;
                continue;
            }
            if (!allowed(nb) || out.mask[g.cell_id(nb)]) continue;
            out.mask[g.cell_id(nb)] = 1;
            q.push_back(nb);
        }
    }
    return out;
}

// Outer contour of a set of box cells, traced with the region on the left;
// the result is a ccw, vertex-self-avoiding closed loop of open edges
// whenever the region is a closed-dual cluster (pinch points force holes).
LatticeCircuit trace_outer_contour(const BoxGeometry& g, const std::vector<uint8_t>& region) {
    bool found = false;
    Vertex best{0, 0};
    for (size_t i = 0; i < g.cell_count(); ++i) {
        if (!region[i]) continue;
        Vertex c = g.cell_at(i);
        if (!found || c.x > best.x || (c.x == best.x && c.y > best.y)) {
            best = c;
            found = true;
        }
    }
    if (!found) throw GammaInvariantError("contour of empty region");

    auto in_region = [&](const Vertex& c) { return cell_in_box(g, c) && region[g.cell_id(c)]; };

    Vertex v0{best.x + 1, best.y};
    int h0 = 1; // east side of the eastmost-topmost cell, heading north
    LatticeCircuit loop{LatticeKind::Primal, {v0}};
    Vertex v = v0;
    int h = h0;
    size_t guard = 8 * g.cell_count() + 16;
    while (true) {
        Vertex nv = v + kDirs[h];
        loop.verts.push_back(nv);
        // ahead-right / ahead-left cells decide the turn
        Vertex ar = corner_cell(nv, (h + 3) & 3);
        Vertex al = corner_cell(nv, h);
        int nh;
        if (in_region(ar)) nh = (h + 3) & 3;      // turn right
        else if (in_region(al)) nh = h;           // straight
        else nh = (h + 1) & 3;                    // turn left
        v = nv;
        h = nh;
        if (v == v0 && h == h0) break;
        if (loop.verts.size() > guard) throw GammaInvariantError("contour trace failed to close");
    }
    return loop;
}

// Cells whose center lies inside the ccw loop (scanline parity fill).
std::vector<uint8_t> fill_circuit(const BoxGeometry& g, const LatticeCircuit& loop) {
    std::vector<uint8_t> mask(g.cell_count(), 0);
    int n = g.radius;
    // vertical loop edges indexed by the row of their lower endpoint
    std::unordered_map<int, std::vector<int>> xs_by_row;
    for (size_t i = 0; i + 1 < loop.verts.size(); ++i) {
        const Vertex& a = loop.verts[i];
        const Vertex& b = loop.verts[i + 1];
        if (a.x == b.x) xs_by_row[std::min(a.y, b.y)].push_back(a.x);
    }
    for (int b = g.center.y - n; b <= g.center.y + n - 1; ++b) {
        auto it = xs_by_row.find(b);
        if (it == xs_by_row.end()) continue;
        std::vector<int>& xs = it->second;
        std::sort(xs.begin(), xs.end());
        for (size_t j = 0; j + 1 < xs.size(); j += 2)
            for (int a = xs[j]; a < xs[j + 1]; ++a)
                mask[g.cell_id({a, b})] = 1;
    }
    return mask;
}

int floor_log2(int m) {
    int l = 0;
    while ((2 << l) <= m) ++l;
    return l;
}
int ceil_log2_at_least(int d) { // smallest l >= 0 with 2^l >= d
    int l = 0;
    while ((1 << l) < d) ++l;
    return l;
}

} // namespace

LatticePath first_closed_dual_path(const Configuration& cfg, const std::vector<Vertex>& starts,
                                   const CellPred& target, const CellPred& allowed) {
    const BoxGeometry& g = cfg.geometry();
    CellRaster ras(g);
    constexpr int kInf = INT_MAX;

    auto ok = [&](const Vertex& c) { return ras.holds(c) && allowed(c); };
    auto step_ok = [&](const Vertex& c, int d) {
        EdgeIndex e = cell_step_edge(c, d);
        return g.contains_edge(e) && cfg.closed(e);
    };

    // distance-to-target over the allowed cells (adjacency is symmetric)
    std::vector<int> dist(ras.size(), kInf);
    std::deque<Vertex> q;
    for (int uy = 0; uy < ras.w; ++uy) {
        for (int ux = 0; ux < ras.w; ++ux) {
            Vertex c{ux + ras.center.x - ras.n - 1, uy + ras.center.y - ras.n - 1};
            if (ok(c) && target(c)) {
                dist[ras.id(c)] = 0;
                q.push_back(c);
            }
        }
    }
    while (!q.empty()) {
        Vertex c = q.front();
        q.pop_front();
        int dc = dist[ras.id(c)];
        for (int d = 0; d < 4; ++d) {
            Vertex nb = c + kDirs[d];
            if (!ok(nb) || dist[ras.id(nb)] != kInf) continue;
            if (!step_ok(c, d)) continue;
            dist[ras.id(nb)] = dc + 1;
            q.push_back(nb);
        }
    }

    int L = kInf;
    for (const Vertex& s : starts)
        if (ok(s)) L = std::min(L, dist[ras.id(s)]);
    if (L == kInf) throw NoDualPathError();

    std::optional<Vertex> cur;
    for (const Vertex& s : starts)
        if (ok(s) && dist[ras.id(s)] == L && (!cur || dual_vertex_less(s, *cur))) cur = s;

    LatticePath path{LatticeKind::Dual, {*cur}};
    Vertex c = *cur;
    for (int rem = L; rem > 0; --rem) {
        std::optional<Vertex> next;
        for (int d = 0; d < 4; ++d) {
            Vertex nb = c + kDirs[d];
            if (!ok(nb) || dist[ras.id(nb)] != rem - 1 || !step_ok(c, d)) continue;
            if (!next || dual_vertex_less(nb, *next)) next = nb;
        }
        c = *next;
        path.verts.push_back(c);
    }
    return path;
}

C0Result detect_C0(const Configuration& cfg) {
    const BoxGeometry& g = cfg.geometry();
    if (g.radius < 1) throw std::invalid_argument("detect_C0 needs radius >= 1");
    auto allow_all = [](const Vertex&) { return true; };
    ClusterGrowth p = grow_dual_cluster(cfg, origin_cells(g), allow_all);

    C0Result out;
    if (p.escaped) {
        out.has_circuit = false;
        out.dual_witness = first_closed_dual_path(
            cfg, origin_cells(g), [&](const Vertex& c) { return !cell_in_box(g, c); },
            [](const Vertex&) { return true; });
        return out;
    }
    out.has_circuit = true;
    out.innermost = trace_outer_contour(g, p.mask);
    return out;
}

CircuitStack build_circuit_stack(const Configuration& cfg) {
    const BoxGeometry& g = cfg.geometry();
    CircuitStack st;
    st.attach_cell.assign(g.cell_count(), -1);
    st.cluster_level.assign(g.cell_count(), 0);

    auto allow_all = [](const Vertex&) { return true; };
    ClusterGrowth p = grow_dual_cluster(cfg, origin_cells(g), allow_all);
    if (p.escaped) {
        st.K = 0;
        st.wall_escape = first_closed_dual_path(
            cfg, origin_cells(g), [&](const Vertex& c) { return !cell_in_box(g, c); }, allow_all);
        return st;
    }

    // Attachment map per cluster: the seed cell (adjacent to the previous
    // circuit, or an origin cell) reachable by closed dual steps.
    auto propagate_attach = [&](const std::vector<Vertex>& seeds,
                                const std::function<bool(const Vertex&)>& allowed, int16_t level) {
        std::deque<Vertex> q;
        for (const Vertex& s : seeds) {
            if (!cell_in_box(g, s) || !allowed(s)) continue;
            size_t id = g.cell_id(s);
            if (st.attach_cell[id] >= 0) continue;
            st.attach_cell[id] = static_cast<int32_t>(id);
            st.cluster_level[id] = level;
            q.push_back(s);
        }
        while (!q.empty()) {
            Vertex c = q.front();
            q.pop_front();
            for (int d = 0; d < 4; ++d) {
                EdgeIndex e = cell_step_edge(c, d);
                if (!g.contains_edge(e) || cfg.open(e)) continue;
                Vertex nb = c + kDirs[d];
                if (!cell_in_box(g, nb) || !allowed(nb)) continue;
                size_t id = g.cell_id(nb);
                if (st.attach_cell[id] >= 0) continue;
                st.attach_cell[id] = st.attach_cell[g.cell_id(c)];
                st.cluster_level[id] = level;
                q.push_back(nb);
            }
        }
    };
    propagate_attach(origin_cells(g), allow_all, 1);

    LatticeCircuit c1 = trace_outer_contour(g, p.mask);
    std::vector<uint8_t> filled = fill_circuit(g, c1);
    st.circuits.push_back(c1);

    auto edge_set_of = [](const LatticeCircuit& loop) {
        std::unordered_set<size_t> out;
        for (const EdgeIndex& e : loop.edges())
            out.insert(std::hash<Vertex>()(e.a) * 2 + static_cast<size_t>(e.o));
        return out;
    };
    auto cell_touches = [&](const std::unordered_set<size_t>& es, const Vertex& c) {
        for (int d = 0; d < 4; ++d) {
            EdgeIndex e = cell_step_edge(c, d);
            if (es.count(std::hash<Vertex>()(e.a) * 2 + static_cast<size_t>(e.o))) return true;
        }
        return false;
    };

    std::unordered_set<size_t> c1_edges = edge_set_of(c1);
    st.wall_first = first_closed_dual_path(
        cfg, origin_cells(g), [&](const Vertex& c) { return cell_in_box(g, c) && cell_touches(c1_edges, c); },
        [&](const Vertex& c) { return cell_in_box(g, c); });

    while (true) {
        // Seeds: cells just outside the current filled region.
        std::vector<Vertex> seeds;
        bool outside_seed = false;
        for (size_t i = 0; i < g.cell_count(); ++i) {
            if (!filled[i]) continue;
            Vertex c = g.cell_at(i);
            for (int d = 0; d < 4; ++d) {
                Vertex nb = c + kDirs[d];
                if (!cell_in_box(g, nb)) {
                    outside_seed = true;
                    continue;
                }
                if (!filled[g.cell_id(nb)]) seeds.push_back(nb);
            }
        }
        std::sort(seeds.begin(), seeds.end());
        seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

        auto not_filled = [&](const Vertex& c) { return !cell_in_box(g, c) || !filled[g.cell_id(c)]; };

        if (outside_seed) {
            // The current circuit already touches dB_n; the dual witness is a
            // cell just outside the box.
            std::vector<Vertex> all_starts = seeds;
            for (size_t i = 0; i < g.cell_count(); ++i) {
                if (!filled[i]) continue;
                Vertex c = g.cell_at(i);
                for (int d = 0; d < 4; ++d) {
                    Vertex nb = c + kDirs[d];
                    if (!cell_in_box(g, nb)) all_starts.push_back(nb);
                }
            }
            st.wall_escape = first_closed_dual_path(
                cfg, all_starts, [&](const Vertex& c) { return !cell_in_box(g, c); }, not_filled);
            break;
        }

        ClusterGrowth q = grow_dual_cluster(cfg, seeds, not_filled);
        if (q.escaped) {
            st.wall_escape = first_closed_dual_path(
                cfg, seeds, [&](const Vertex& c) { return !cell_in_box(g, c); }, not_filled);
            break;
        }

        propagate_attach(seeds, not_filled, static_cast<int16_t>(st.circuits.size() + 1));

        std::vector<uint8_t> region = filled;
        for (size_t i = 0; i < g.cell_count(); ++i)
            if (q.mask[i]) region[i] = 1;
        LatticeCircuit cm = trace_outer_contour(g, region);
        std::unordered_set<size_t> cm_edges = edge_set_of(cm);
        st.walls_mid.push_back(first_closed_dual_path(
            cfg, seeds,
            [&](const Vertex& c) { return cell_in_box(g, c) && cell_touches(cm_edges, c); }, not_filled));
        st.circuits.push_back(cm);
        filled = fill_circuit(g, cm);
    }
    st.K = static_cast<int>(st.circuits.size());
    return st;
}

std::vector<Vertex> interface_walk(const Configuration& cfg, const Vertex& start,
                                   const Vertex& wall_cell, const VertexPred& stop) {
    const BoxGeometry& g = cfg.geometry();
    int h = -1;
    for (int d = 0; d < 4; ++d)
        if (corner_cell(start, d) == wall_cell) h = (d + 2) & 3;
    if (h < 0) throw GammaInvariantError("interface walk: wall cell not adjacent to start");

    std::vector<Vertex> walk{start};
    Vertex v = start;
    size_t guard = 4 * g.edge_count() + 8;
    while (!stop(v)) {
        bool stepped = false;
        for (int k = 3; k < 7; ++k) { // directions h-1, h, h+1, h+2
            int d = (h + k) & 3;
            Vertex u = v + kDirs[d];
            if (!g.contains_vertex(u)) continue;
            Vertex lo = std::min(v, u);
            if (!cfg.open({lo, kDirs[d].x != 0 ? Orientation::H : Orientation::V})) continue;
            v = u;
            h = d;
            walk.push_back(v);
            stepped = true;
            break;
        }
        if (!stepped) throw NoOpenArmError();
        if (walk.size() > guard) throw GammaInvariantError("interface walk failed to terminate");
    }
    return walk;
}

LatticePath ccw_closest_arm(const Configuration& cfg, const LatticePath& wall,
                            const VertexPred& from_set, const VertexPred& to_set) {
    if (wall.verts.empty()) throw std::invalid_argument("empty wall path");
    const BoxGeometry& g = cfg.geometry();
    Vertex c0 = wall.verts.front();

    std::optional<Vertex> start;
    int start_d = 0;
    for (int d = 0; d < 4; ++d) {
        // corner v with corner_cell(v, d) == c0
        Vertex v;
        switch (d) {
            case 0: v = {c0.x, c0.y}; break;
            case 1: v = {c0.x + 1, c0.y}; break;
            case 2: v = {c0.x + 1, c0.y + 1}; break;
            default: v = {c0.x, c0.y + 1}; break;
        }
        if (g.contains_vertex(v) && from_set(v)) {
            start = v;
            start_d = d;
            break;
        }
    }
    if (!start) throw GammaInvariantError("ccw arm: wall does not touch the from-set");
    (void)start_d;

    if (to_set(*start)) return {LatticeKind::Primal, {*start}};
    std::vector<Vertex> walk = interface_walk(cfg, *start, c0, to_set);

    size_t last_from = 0;
    for (size_t i = 0; i < walk.size(); ++i)
        if (from_set(walk[i])) last_from = i;
    std::vector<Vertex> tail(walk.begin() + last_from, walk.end());
    return {LatticeKind::Primal, loop_erase(tail)};
}

namespace {

std::unordered_set<Vertex> vertex_set_of(const LatticePath& p) {
    return std::unordered_set<Vertex>(p.verts.begin(), p.verts.end());
}

} // namespace

GammaDecomposition build_gamma(const Configuration& cfg) {
    const BoxGeometry& g = cfg.geometry();
    if (!radial_connection(cfg)) throw NotConnectedError();

    GammaDecomposition gd;
    gd.stack = build_circuit_stack(cfg);
    int K = gd.stack.K;
    gd.c0 = K > 0;

    auto at_boundary = [&](const Vertex& v) { return g.radius_of(v) == g.radius; };

    if (!gd.c0) {
        gd.c0c_wall = gd.stack.wall_escape;
        LatticePath arm = ccw_closest_arm(
            cfg, gd.c0c_wall, [&](const Vertex& v) { return v == g.center; }, at_boundary);
        gd.sigmas.push_back(arm);
        gd.gamma = arm;
        gd.labels.assign(arm.edge_count(), {GammaPart::C0cArm, 0});
        return gd;
    }

    // Connectors sigma_1..sigma_{K+1}.
    std::vector<std::unordered_set<Vertex>> circuit_verts;
    circuit_verts.reserve(K);
    for (const auto& c : gd.stack.circuits) circuit_verts.push_back(vertex_set_of(c));

    auto on_circuit = [&](int m) { // 1-based
        const auto& set = circuit_verts[m - 1];
        return [&set](const Vertex& v) { return set.count(v) > 0; };
    };

    gd.sigmas.push_back(ccw_closest_arm(
        cfg, gd.stack.wall_first, [&](const Vertex& v) { return v == g.center; }, on_circuit(1)));
    for (int m = 2; m <= K; ++m)
        gd.sigmas.push_back(
            ccw_closest_arm(cfg, gd.stack.walls_mid[m - 2], on_circuit(m - 1), on_circuit(m)));
    gd.sigmas.push_back(ccw_closest_arm(cfg, gd.stack.wall_escape, on_circuit(K), at_boundary));

    // Arcs along each circuit, counterclockwise from sigma_m's endpoint to
    // sigma_{m+1}'s start.
    std::vector<Vertex> walk;
    std::vector<int> labels; // encoded: part * 1000 + m
    auto append = [&](const std::vector<Vertex>& verts, int label) {
        for (const Vertex& v : verts) {
            if (!walk.empty() && walk.back() == v) continue;
            if (!walk.empty()) labels.push_back(label);
            walk.push_back(v);
        }
    };

    auto encode = [](GammaPart p, int m) { return static_cast<int>(p) * 1000 + m; };

    append(gd.sigmas[0].verts, encode(GammaPart::Sigma1, 1));
    for (int m = 1; m <= K; ++m) {
        const LatticeCircuit& cm = gd.stack.circuits[m - 1];
        std::unordered_map<Vertex, size_t> index;
        size_t L = cm.verts.size() - 1;
        for (size_t i = 0; i < L; ++i) index[cm.verts[i]] = i;
        Vertex a = gd.sigmas[m - 1].verts.back();
        Vertex b = gd.sigmas[m].verts.front();
        if (!index.count(a) || !index.count(b))
            throw GammaInvariantError("connector endpoint missing from circuit");
        std::vector<Vertex> arc_verts{a};
        size_t i = index[a];
        while (cm.verts[i] != b) {
            i = (i + 1) % L;
            arc_verts.push_back(cm.verts[i]);
        }
        gd.arcs.push_back({LatticeKind::Primal, arc_verts});
        append(arc_verts, encode(GammaPart::Arc, m));
        append(gd.sigmas[m].verts,
               encode(m == K ? GammaPart::SigmaLast : GammaPart::SigmaMid, m + 1));
    }

    auto [gverts, glabels] = loop_erase_labeled(walk, labels);
    // A circuit arc may run along dB_n itself; gamma ends at its first
    // boundary touch.
    for (size_t i = 0; i < gverts.size(); ++i) {
        if (g.radius_of(gverts[i]) == g.radius) {
            gverts.resize(i + 1);
            glabels.resize(i);
            break;
        }
    }
    gd.gamma = {LatticeKind::Primal, gverts};
    gd.labels.reserve(glabels.size());
    for (int enc : glabels)
        gd.labels.push_back({static_cast<GammaPart>(enc / 1000), enc % 1000});
    return gd;
}

void check_gamma_invariants(const Configuration& cfg, const GammaDecomposition& gd) {
    const BoxGeometry& g = cfg.geometry();
    const LatticePath& gamma = gd.gamma;
    if (gamma.verts.empty()) throw GammaInvariantError("gamma empty");
    if (gamma.verts.front() != g.center) throw GammaInvariantError("gamma does not start at the origin");
    if (g.radius_of(gamma.verts.back()) != g.radius)
        throw GammaInvariantError("gamma does not reach the boundary");
    for (size_t i = 0; i + 1 < gamma.verts.size(); ++i)
        if (g.radius_of(gamma.verts[i]) == g.radius)
            throw GammaInvariantError("gamma touches the boundary before its endpoint");
    if (!is_lattice_path(gamma)) throw GammaInvariantError("gamma is not a lattice path");
    if (!is_self_avoiding(gamma)) throw GammaInvariantError("gamma is not self-avoiding");
    for (const EdgeIndex& e : gamma.edges())
        if (!cfg.open(e)) throw GammaInvariantError("gamma uses a closed edge");
    if (gd.labels.size() != gamma.edge_count())
        throw GammaInvariantError("gamma label count mismatch");
    if (gd.c0) {
        if (gd.stack.K <= 0 || gd.sigmas.size() != static_cast<size_t>(gd.stack.K) + 1)
            throw GammaInvariantError("circuit stack inconsistent");
    }
}

bool ScaleSequence::all_ok() const {
    if (!clause1_ok) return false;
    for (const auto& gc : gaps)
        if (!gc.ok) return false;
    return beyond.ok;
}

namespace {

// Closed dual arm from e*'s endpoints out to L-inf radius r around e_x, with
// the path extracted.  Returns nullopt when absent.
std::optional<LatticePath> dual_arm_path(const Configuration& cfg, const EdgeIndex& e, int r) {
    const BoxGeometry& g = cfg.geometry();
    auto [s1, s2] = cells_of_edge(e);
    auto rho2 = [&](const Vertex& c) {
        return std::max(std::abs(2 * (c.x - e.a.x) + 1), std::abs(2 * (c.y - e.a.y) + 1));
    };
    if (r <= 0 || rho2(s1) >= 2 * r - 1)
        return LatticePath{LatticeKind::Dual, {s1}};
    std::unordered_map<Vertex, Vertex> parent;
    std::deque<Vertex> q;
    for (const Vertex& s : {s1, s2}) {
        parent.emplace(s, s);
        q.push_back(s);
    }
    while (!q.empty()) {
        Vertex c = q.front();
        q.pop_front();
        if (rho2(c) == 2 * r - 1) {
            std::vector<Vertex> rev{c};
            while (parent.at(rev.back()) != rev.back()) rev.push_back(parent.at(rev.back()));
            std::reverse(rev.begin(), rev.end());
            return LatticePath{LatticeKind::Dual, rev};
        }
        for (int d = 0; d < 4; ++d) {
            Vertex nb = c + kDirs[d];
            if (rho2(nb) > 2 * r - 1 || parent.count(nb)) continue;
            EdgeIndex f = cell_step_edge(c, d);
            if (!g.contains_edge(f) || cfg.open(f)) continue;
            parent.emplace(nb, c);
            q.push_back(nb);
        }
    }
    return std::nullopt;
}

// One open arm along gamma starting at vertex index `from`, walking in
// direction step (+1/-1) until it first reaches L-inf radius M around e_x.
std::optional<LatticePath> gamma_arm(const LatticePath& gamma, size_t from, int step, Vertex center,
                                     int M) {
    LatticePath arm{LatticeKind::Primal, {}};
    for (long long i = static_cast<long long>(from);
         i >= 0 && i < static_cast<long long>(gamma.verts.size()); i += step) {
        arm.verts.push_back(gamma.verts[i]);
        if (linf(gamma.verts[i] - center) >= M) return arm;
    }
    return std::nullopt;
}

} // namespace

ThreeArmWitness verify_three_arm(const Configuration& cfg, const GammaDecomposition& gd,
                                 size_t gamma_edge_index, int R) {
    const BoxGeometry& g = cfg.geometry();
    EdgeIndex e = gd.gamma.edge(gamma_edge_index);
    int M = displacement_M(e, g);
    GammaEdgeLabel label = gd.labels[gamma_edge_index];

    ThreeArmWitness w;
    bool explicit_route = label.part == GammaPart::Sigma1 || label.part == GammaPart::SigmaLast ||
                          label.part == GammaPart::C0cArm;

    if (M == 0 || (!explicit_route && M <= 1)) {
        w.kind = ThreeArmWitness::Kind::Trivial;
        w.ok = true;
        return w;
    }

    if (explicit_route) {
        w.kind = ThreeArmWitness::Kind::Explicit;
        ArmTriple t;
        // gamma.edge(i) is the normalized lower-left form of the step between
        // verts[i] and verts[i+1]; arms leave from those two vertices.
        auto a = gamma_arm(gd.gamma, gamma_edge_index, -1, e.a, M);
        auto b = gamma_arm(gd.gamma, gamma_edge_index + 1, +1, e.a, M);
        auto du = dual_arm_path(cfg, e, M);
        w.ok = a && b && du;
        if (a) t.open_a = *a;
        if (b) t.open_b = *b;
        if (du) t.dual = *du;
        w.arms = std::move(t);
        return w;
    }

    // Scale sequence route (intermediate connectors and circuit arcs).
    w.kind = ThreeArmWitness::Kind::Scales;
    ScaleSequence seq;
    seq.e = e;
    seq.M = M;
    seq.R = R;
    int L = floor_log2(M);
    int m = label.m;

    // First scale: for a connector sigma_m from its endpoints on the two
    // circuits; for a circuit edge from the dual attachment to the previous
    // circuit (m >= 2) or to the origin (m = 1, where dist(e,0) >= M always
    // collapses all scales to floor(log M)).
    int l1;
    if (label.part == GammaPart::SigmaMid) {
        const LatticePath& sigma = gd.sigmas[m - 1];
        int d_raw = std::max(linf(sigma.verts.front() - e.a), linf(sigma.verts.back() - e.a));
        l1 = ceil_log2_at_least(std::max(1, d_raw));
    } else if (m == 1) {
        l1 = L; // 2^{l1} >= dist(e,0) >= M
    } else {
        // the inner side cell belongs to this circuit's own dual cluster
        auto [ca, cb] = cells_of_edge(e);
        int32_t att = -1;
        for (const Vertex& c : {ca, cb}) {
            if (!g.contains_cell(c)) continue;
            size_t id = g.cell_id(c);
            if (gd.stack.cluster_level[id] == m && gd.stack.attach_cell[id] >= 0)
                att = gd.stack.attach_cell[id];
        }
        if (att < 0) {
            seq.clause1_ok = false; // no dual attachment recorded: invariant bug
            w.scales = std::move(seq);
            w.ok = false;
            return w;
        }
        Vertex att_cell = g.cell_at(att);
        // D+1 bounds dist(e, e') from above, so C_{m-1} meets B(e, 2^{l1});
        // and 2^{l1-1} <= D keeps the clause-1 radius within the real dual
        // arm's reach.
        int D = std::max(1, linf(att_cell - e.a));
        l1 = ceil_log2_at_least(D + 1);
    }

    if ((1 << l1) >= M) {
        seq.scales.assign(R, L);
    } else {
        seq.scales.push_back(std::max(1, l1));
        for (int i = 2; i <= R; ++i) {
            int prev = seq.scales.back();
            if (prev >= L || m - i < 1) {
                seq.scales.push_back(L);
                continue;
            }
            // sigma_m and C_m both reference C_{m-i} at scale i
            const LatticeCircuit& ref = gd.stack.circuits[m - i - 1];
            int dist = INT_MAX;
            for (const Vertex& v : ref.verts) dist = std::min(dist, linf(v - e.a));
            int li = ceil_log2_at_least(std::max(1, dist));
            if ((1 << li) >= M) li = L;
            seq.scales.push_back(std::min(L, std::max(li, prev)));
        }
    }

    int r1 = seq.scales[0] >= 1 ? (1 << (seq.scales[0] - 1)) : 0;
    seq.clause1_ok = edge_three_arm(cfg, e, r1);

    for (int i = 2; i <= R; ++i) {
        int prev = seq.scales[i - 2], cur = seq.scales[i - 1];
        ScaleGapCheck gc{prev, cur, 2 * i, true, true};
        if (prev < L && cur > prev) {
            AnnulusSpec ann(e.a, 1 << prev, 1 << cur);
            gc.ok = disjoint_arm_count(cfg, ann, ArmColor::Open, std::nullopt, 2 * i) >= 2 * i &&
                    annulus_arm_exists(cfg, ann, ArmColor::ClosedDual);
        }
        seq.gaps.push_back(gc);
    }

    int lR = seq.scales.back();
    seq.beyond = {lR, L, 2 * R + 2, false, true};
    if (lR < L) {
        AnnulusSpec ann(e.a, 1 << lR, M);
        seq.beyond.ok =
            disjoint_arm_count(cfg, ann, ArmColor::Open, std::nullopt, 2 * R + 2) >= 2 * R + 2;
    }

    w.ok = seq.all_ok();
    w.scales = std::move(seq);
    return w;
}

int choose_scale_count(int n, double epsilon, uint64_t samples, uint64_t seed, int threads) {
    EstimateRecord pi3 = estimate_pi(PiFamily::Pi3OOC, 0, 1, n, samples, seed, 0.5, threads);
    double budget = pi3.ci.lo * std::pow(static_cast<double>(n), -epsilon);
    for (int R = 1; R <= 4; ++R) {
        int arms = 2 * R + 2;
        if (n0_for_arms(arms) > 1) break;
        EstimateRecord mono =
            estimate_pi(PiFamily::MonoOpen, arms, 1, n, samples, mix64(seed ^ arms), 0.5, threads);
        if (mono.ci.hi <= budget) return R;
    }
    return 3;
}

bool dual_connection_to_wall(const Configuration& cfg, const EdgeIndex& e, const LatticePath& wall) {
    const BoxGeometry& g = cfg.geometry();
    std::unordered_set<Vertex> wall_cells(wall.verts.begin(), wall.verts.end());
    auto [s1, s2] = cells_of_edge(e);
    std::unordered_set<Vertex> seen{s1, s2};
    std::deque<Vertex> q{s1, s2};
    while (!q.empty()) {
        Vertex c = q.front();
        q.pop_front();
        if (wall_cells.count(c)) return true;
        for (int d = 0; d < 4; ++d) {
            EdgeIndex f = cell_step_edge(c, d);
            if (!g.contains_edge(f) || cfg.open(f)) continue;
            Vertex nb = c + kDirs[d];
            if (seen.count(nb)) continue;
            seen.insert(nb);
            q.push_back(nb);
        }
    }
    return false;
}

CumulativeSumReport cumulative_sum_check(const std::vector<std::pair<int, double>>& pi3_dyadic,
                                         const std::vector<int>& L_values) {
    if (pi3_dyadic.empty() || pi3_dyadic.front().first != 1)
        throw std::invalid_argument("pi3 grid must start at l = 1");
    std::vector<std::pair<int, double>> grid = pi3_dyadic;
    std::sort(grid.begin(), grid.end());
    int Lmax = 0;
    for (int L : L_values) Lmax = std::max(Lmax, L);
    if (Lmax > grid.back().first) throw std::invalid_argument("L exceeds the pi3 grid");

    // log-linear interpolation between grid points
    std::vector<double> pi(Lmax + 1, 0.0);
    for (size_t j = 0; j + 1 < grid.size(); ++j) {
        auto [l0, p0] = grid[j];
        auto [l1, p1] = grid[j + 1];
        if (p0 <= 0 || p1 <= 0) throw std::invalid_argument("pi3 estimates must be positive");
        for (int l = l0; l <= std::min(l1, Lmax); ++l) {
            double t = l1 == l0 ? 0.0 : (std::log(l) - std::log(l0)) / (std::log(l1) - std::log(l0));
            pi[l] = std::exp((1 - t) * std::log(p0) + t * std::log(p1));
        }
    }

    CumulativeSumReport rep;
    double running = 0;
    int next = 1;
    std::vector<int> sorted_L = L_values;
    std::sort(sorted_L.begin(), sorted_L.end());
    for (int L : sorted_L) {
        for (; next <= L; ++next) running += next * pi[next];
        rep.L_values.push_back(L);
        rep.c_hat.push_back(running / (static_cast<double>(L) * L * pi[L]));
    }
    rep.growth_flag = rep.c_hat.back() > 2.0 * rep.c_hat.front();
    return rep;
}

} // namespace perc
