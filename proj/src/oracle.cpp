#include "perc/oracle.hpp"

#include "perc/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace perc {
namespace oracle {

namespace {

struct EdgeKey {
    static size_t of(const EdgeIndex& e) {
        return std::hash<Vertex>()(e.a) * 2 + static_cast<size_t>(e.o);
    }
};

EdgeIndex edge_between(const Vertex& a, const Vertex& b) {
    Vertex lo = std::min(a, b);
    return {lo, a.x == b.x ? Orientation::V : Orientation::H};
}

} // namespace

std::optional<size_t> shortest_path_length(const Configuration& cfg) {
    const BoxGeometry& g = cfg.geometry();
    if (g.radius == 0) return 0;
    using Item = std::pair<size_t, Vertex>;
    auto cmp = [](const Item& a, const Item& b) { return a.first > b.first; };
    std::priority_queue<Item, std::vector<Item>, decltype(cmp)> pq(cmp);
    std::map<Vertex, size_t> dist;
    pq.push({0, g.center});
    dist[g.center] = 0;
    while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (dist[v] < d) continue;
        if (g.radius_of(v) == g.radius) return d;
        for (const Vertex& dir : kDirs) {
            Vertex u = v + dir;
            if (!g.contains_vertex(u) || !cfg.open(edge_between(v, u))) continue;
            auto it = dist.find(u);
            if (it == dist.end() || it->second > d + 1) {
                dist[u] = d + 1;
                pq.push({d + 1, u});
            }
        }
    }
    return std::nullopt;
}

std::vector<LatticeCircuit> open_circuits_around_origin(const Configuration& cfg, size_t limit) {
    const BoxGeometry& g = cfg.geometry();
    std::vector<LatticeCircuit> out;

    // Simple-cycle enumeration rooted at the smallest raster vertex of each
    // cycle; each cycle is emitted once by forcing the second vertex to
    // compare below the last one.
    std::vector<Vertex> verts;
    for (size_t i = 0; i < g.vertex_count(); ++i) verts.push_back(g.vertex_at(i));

    std::vector<Vertex> path;
    std::unordered_set<Vertex> on_path;
    size_t work = 0;

    std::function<void(const Vertex&, const Vertex&)> dfs = [&](const Vertex& root, const Vertex& v) {
        if (++work > limit) throw std::runtime_error("circuit enumeration limit exceeded");
        for (const Vertex& dir : kDirs) {
            Vertex u = v + dir;
            if (!g.contains_vertex(u) || !cfg.open(edge_between(v, u))) continue;
            if (u == root && path.size() >= 4) {
                if (path[1] < path.back()) {
                    LatticeCircuit c{LatticeKind::Primal, path};
                    c.verts.push_back(root);
                    // origin strictly inside, not on the cycle
                    bool on = false;
                    for (const Vertex& w : path)
                        if (w == g.center) on = true;
                    if (!on && point_in_polygon2(c.verts, 2LL * g.center.x, 2LL * g.center.y))
                        out.push_back(c);
                }
                continue;
            }
            if (g.vertex_id(u) <= g.vertex_id(root) || on_path.count(u)) continue;
            path.push_back(u);
            on_path.insert(u);
            dfs(root, u);
            on_path.erase(u);
            path.pop_back();
        }
    };

    for (const Vertex& root : verts) {
        path = {root};
        on_path = {root};
        dfs(root, root);
    }
    return out;
}

namespace {

long long circuit_area2(const LatticeCircuit& c) { return std::llabs(signed_area2(c.verts)); }

} // namespace

std::vector<EdgeIndex> circuit_edge_list(const LatticeCircuit& c) {
    std::vector<EdgeIndex> out = c.edges();
    std::sort(out.begin(), out.end());
    return out;
}

bool same_circuit(const LatticeCircuit& a, const LatticeCircuit& b) {
    return circuit_edge_list(a) == circuit_edge_list(b);
}

std::optional<LatticeCircuit> innermost_circuit(const Configuration& cfg) {
    auto all = open_circuits_around_origin(cfg);
    if (all.empty()) return std::nullopt;
    const LatticeCircuit* best = &all[0];
    for (const auto& c : all)
        if (circuit_area2(c) < circuit_area2(*best)) best = &c;
    for (const auto& c : all)
        if (&c != best && circuit_area2(c) == circuit_area2(*best) && !same_circuit(c, *best))
            throw std::runtime_error("innermost circuit not unique");
    return *best;
}

std::vector<LatticeCircuit> circuit_stack(const Configuration& cfg) {
    auto all = open_circuits_around_origin(cfg);
    std::vector<LatticeCircuit> stack;
    std::vector<uint8_t> alive(all.size(), 1);
    while (true) {
        int best = -1;
        for (size_t i = 0; i < all.size(); ++i)
            if (alive[i] && (best < 0 || circuit_area2(all[i]) < circuit_area2(all[best])))
                best = static_cast<int>(i);
        if (best < 0) break;
        const LatticeCircuit prev = all[best];
        stack.push_back(prev);
        std::unordered_set<size_t> prev_edges;
        for (const EdgeIndex& e : prev.edges()) prev_edges.insert(EdgeKey::of(e));
        // survivors: circuits with every edge off the previous circuit and
        // its interior (edge midpoints tested against the filled polygon)
        for (size_t i = 0; i < all.size(); ++i) {
            if (!alive[i]) continue;
            bool ok = true;
            for (const EdgeIndex& e : all[i].edges()) {
                if (prev_edges.count(EdgeKey::of(e))) {
                    ok = false;
                    break;
                }
                long long mx2 = 2LL * e.a.x + (e.o == Orientation::H ? 1 : 0);
                long long my2 = 2LL * e.a.y + (e.o == Orientation::V ? 1 : 0);
                if (point_in_polygon2(prev.verts, mx2, my2)) {
                    ok = false;
                    break;
                }
            }
            alive[i] = ok;
        }
    }
    return stack;
}

std::vector<std::vector<Vertex>> annulus_crossings(const Configuration& cfg, const AnnulusSpec& ann,
                                                   ArmColor color, size_t limit) {
    const BoxGeometry& g = cfg.geometry();
    std::vector<std::vector<Vertex>> out;
    size_t work = 0;

    if (color == ArmColor::Open) {
        auto ok_vertex = [&](const Vertex& v) {
            int r = linf(v - ann.center);
            return r >= ann.inner && r <= ann.outer && g.contains_vertex(v);
        };
        std::vector<Vertex> path;
        std::set<Vertex> used;
        std::function<void(const Vertex&)> dfs = [&](const Vertex& v) {
            if (++work > limit) throw std::runtime_error("crossing enumeration limit exceeded");
            if (linf(v - ann.center) == ann.outer) {
                out.push_back(path);
                return;
            }
            for (const Vertex& dir : kDirs) {
                Vertex u = v + dir;
                if (!ok_vertex(u) || used.count(u)) continue;
                if (linf(u - ann.center) == ann.inner) continue; // trimmed: inner ring only at start
                EdgeIndex e = edge_between(v, u);
                if (!ann.contains_edge(e) || !g.contains_edge(e) || !cfg.open(e)) continue;
                path.push_back(u);
                used.insert(u);
                dfs(u);
                used.erase(u);
                path.pop_back();
            }
        };
        for (int i = -ann.inner; i <= ann.inner; ++i) {
            for (Vertex s : {Vertex{i, ann.inner}, Vertex{i, -ann.inner}, Vertex{ann.inner, i},
                             Vertex{-ann.inner, i}}) {
                s = s + ann.center;
                if (!ok_vertex(s) || linf(s - ann.center) != ann.inner) continue;
                path = {s};
                used = {s};
                dfs(s);
            }
        }
        // starts on the four sides overlap at corners; dedupe
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    // closed dual crossings over cells
    auto rho2 = [&](const Vertex& c) {
        return std::max(std::abs(2 * (c.x - ann.center.x) + 1), std::abs(2 * (c.y - ann.center.y) + 1));
    };
    auto ok_cell = [&](const Vertex& c) {
        return rho2(c) >= 2 * ann.inner + 1 && rho2(c) <= 2 * ann.outer - 1;
    };
    std::vector<Vertex> path;
    std::set<Vertex> used;
    std::function<void(const Vertex&)> dfs = [&](const Vertex& c) {
        if (++work > limit) throw std::runtime_error("crossing enumeration limit exceeded");
        if (rho2(c) == 2 * ann.outer - 1) {
            out.push_back(path);
            return;
        }
        for (int d = 0; d < 4; ++d) {
            Vertex nb = c + kDirs[d];
            if (!ok_cell(nb) || used.count(nb)) continue;
            if (rho2(nb) == 2 * ann.inner + 1) continue;
            EdgeIndex e = cell_step_edge(c, d);
            if (!ann.contains_edge(e) || !g.contains_edge(e) || !cfg.closed(e)) continue;
            path.push_back(nb);
            used.insert(nb);
            dfs(nb);
            used.erase(nb);
            path.pop_back();
        }
    };
    for (int dx = -ann.outer; dx < ann.outer; ++dx) {
        for (int dy = -ann.outer; dy < ann.outer; ++dy) {
            Vertex s{ann.center.x + dx, ann.center.y + dy};
            if (rho2(s) != 2 * ann.inner + 1) continue;
            path = {s};
            used = {s};
            dfs(s);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

int max_disjoint_from(const std::vector<std::vector<Vertex>>& paths) {
    // Branch and bound over the path list with a running vertex set.
    std::vector<std::set<Vertex>> vsets;
    vsets.reserve(paths.size());
    for (const auto& p : paths) vsets.emplace_back(p.begin(), p.end());
    int best = 0;
    std::set<Vertex> used;
    std::function<void(size_t, int)> rec = [&](size_t i, int count) {
        best = std::max(best, count);
        if (i >= paths.size() || count + static_cast<int>(paths.size() - i) <= best) return;
        // include paths[i] if disjoint
        bool clash = false;
        for (const Vertex& v : vsets[i])
            if (used.count(v)) {
                clash = true;
                break;
            }
        if (!clash) {
            for (const Vertex& v : vsets[i]) used.insert(v);
            rec(i + 1, count + 1);
            for (const Vertex& v : vsets[i]) used.erase(v);
        }
        rec(i + 1, count);
    };
    rec(0, 0);
    return best;
}

} // namespace

int max_disjoint_arms(const Configuration& cfg, const AnnulusSpec& ann, ArmColor color) {
    return max_disjoint_from(annulus_crossings(cfg, ann, color));
}

bool arm_event_exists(const Configuration& cfg, const AnnulusSpec& ann, const ColorSequence& colors) {
    int k = static_cast<int>(colors.size());
    int c = colors.count_closed();
    if (c == k) return max_disjoint_arms(cfg, ann, ArmColor::ClosedDual) >= k;
    if (c == 0) return max_disjoint_arms(cfg, ann, ArmColor::Open) >= k;
    if (c != 1) throw UnsupportedColorSequence(colors.str());
    return !annulus_crossings(cfg, ann, ArmColor::ClosedDual).empty() &&
           max_disjoint_arms(cfg, ann, ArmColor::Open) >= k - 1;
}

int min_vertex_cut(const Configuration& cfg, const AnnulusSpec& ann, ArmColor color, int upto) {
    // Vertices (or cells) of the annulus graph; a cut is a vertex subset whose
    // removal kills every crossing.
    auto crossing_avoiding = [&](const std::set<Vertex>& removed) {
        auto paths = annulus_crossings(cfg, ann, color);
        for (const auto& p : paths) {
            bool hit = false;
            for (const Vertex& v : p)
                if (removed.count(v)) {
                    hit = true;
                    break;
                }
            if (!hit) return true;
        }
        return false;
    };
    if (!crossing_avoiding({})) return 0;

    std::set<Vertex> support;
    for (const auto& p : annulus_crossings(cfg, ann, color))
        for (const Vertex& v : p) support.insert(v);
    std::vector<Vertex> verts(support.begin(), support.end());

    std::vector<size_t> idx;
    std::function<bool(size_t, int)> choose = [&](size_t start, int remaining) {
        if (remaining == 0) {
            std::set<Vertex> removed;
            for (size_t i : idx) removed.insert(verts[i]);
            return !crossing_avoiding(removed);
        }
        for (size_t i = start; i + remaining <= verts.size() + 1 && i < verts.size(); ++i) {
            idx.push_back(i);
            if (choose(i + 1, remaining - 1)) return true;
            idx.pop_back();
        }
        return false;
    };
    for (int size = 1; size <= upto; ++size) {
        idx.clear();
        if (choose(0, size)) return size;
    }
    return upto + 1;
}

long long ccw_area_between(const BoxGeometry& geom, const std::vector<Vertex>& arm,
                           const LatticePath& wall) {
    // Closed polygon in doubled coordinates: origin -> wall cell centers
    // (ending outside the box) -> ccw along the outer square of radius
    // 2n+1 -> the arm's boundary endpoint -> back along the arm.
    const int R = 2 * geom.radius + 1;
    std::vector<std::pair<long long, long long>> poly;
    auto push = [&](long long x, long long y) { poly.emplace_back(x, y); };

    push(2LL * geom.center.x, 2LL * geom.center.y);
    for (const Vertex& c : wall.verts) push(2LL * (c.x - geom.center.x) + 1 + 2LL * geom.center.x,
                                            2LL * (c.y - geom.center.y) + 1 + 2LL * geom.center.y);

    // walk the outer square counterclockwise from the wall exit to the arm exit
    auto on_square = [&](std::pair<long long, long long> p) {
        long long x = p.first - 2LL * geom.center.x, y = p.second - 2LL * geom.center.y;
        return std::max(std::llabs(x), std::llabs(y)) == R;
    };
    std::pair<long long, long long> wall_exit = poly.back();
    if (!on_square(wall_exit)) throw std::invalid_argument("wall path does not exit the box");

    Vertex arm_end = arm.back();
    std::pair<long long, long long> arm_exit{2LL * arm_end.x, 2LL * arm_end.y};
    // push the arm endpoint radially out to the square
    {
        long long x = arm_exit.first - 2LL * geom.center.x, y = arm_exit.second - 2LL * geom.center.y;
        long long m = std::max(std::llabs(x), std::llabs(y));
        long long ox = x, oy = y;
        if (std::llabs(x) == m && x != 0) ox = x > 0 ? R : -R;
        if (std::llabs(y) == m && y != 0) oy = y > 0 ? R : -R;
        arm_exit = {ox + 2LL * geom.center.x, oy + 2LL * geom.center.y};
    }

    // ccw perimeter walk on the square
    auto perimeter_pos = [&](std::pair<long long, long long> p) {
        long long x = p.first - 2LL * geom.center.x, y = p.second - 2LL * geom.center.y;
        // ccw starting at (R,-R): right side up, top right-to-left, left down, bottom left-to-right
        if (x == R) return y + R;                  // [0, 2R]
        if (y == R) return 2 * R + (R - x);        // (2R, 4R]
        if (x == -R) return 4 * R + (R - y);       // (4R, 6R]
        return 6 * R + (x + R);                    // (6R, 8R)
    };
    long long a = perimeter_pos(wall_exit), b = perimeter_pos(arm_exit);
    std::vector<long long> corner_pos = {2 * R, 4 * R, 6 * R, 0};
    std::vector<std::pair<long long, long long>> corners = {
        {R + 2 * geom.center.x, R + 2 * geom.center.y},
        {-R + 2 * geom.center.x, R + 2 * geom.center.y},
        {-R + 2 * geom.center.x, -R + 2 * geom.center.y},
        {R + 2 * geom.center.x, -R + 2 * geom.center.y}};
    long long cur = a;
    while (cur != b) {
        // advance ccw to the next corner or to b
        long long next = b > cur ? b : b + 8 * R;
        int ci = -1;
        for (int i = 0; i < 4; ++i) {
            long long cp = corner_pos[i] > cur ? corner_pos[i] : corner_pos[i] + 8 * R;
            if (cp <= next && cp != cur) {
                next = cp;
                ci = i;
            }
        }
        if (ci >= 0 && next != (b > cur ? b : b + 8 * R)) {
            push(corners[ci].first, corners[ci].second);
            cur = corner_pos[ci];
        } else {
            break;
        }
    }
    push(arm_exit.first, arm_exit.second);
    for (auto it = arm.rbegin(); it != arm.rend(); ++it) push(2LL * it->x, 2LL * it->y);
    // close
    push(poly.front().first, poly.front().second);

    // count cells with center strictly inside, excluding the wall's own cells
    std::set<Vertex> wall_cells(wall.verts.begin(), wall.verts.end());
    auto inside = [&](long long px, long long py) {
        bool in = false;
        for (size_t i = 0; i + 1 < poly.size(); ++i) {
            auto [x1, y1] = poly[i];
            auto [x2, y2] = poly[i + 1];
            if ((y1 > py) != (y2 > py)) {
                long long num = x1 * (y2 - py) + x2 * (py - y1);
                long long den = y2 - y1;
                if (den < 0) {
                    num = -num;
                    den = -den;
                }
                if (num > px * den) in = !in;
            }
        }
        return in;
    };
    long long count = 0;
    for (size_t i = 0; i < geom.cell_count(); ++i) {
        Vertex c = geom.cell_at(i);
        if (wall_cells.count(c)) continue;
        if (inside(2LL * c.x + 1, 2LL * c.y + 1)) ++count;
    }
    return count;
}

std::vector<std::vector<Vertex>> origin_arms(const Configuration& cfg, size_t limit) {
    const BoxGeometry& g = cfg.geometry();
    std::vector<std::vector<Vertex>> out;
    std::vector<Vertex> path{g.center};
    std::set<Vertex> used{g.center};
    size_t work = 0;
    std::function<void(const Vertex&)> dfs = [&](const Vertex& v) {
        if (++work > limit) throw std::runtime_error("arm enumeration limit exceeded");
        if (g.radius_of(v) == g.radius) {
            out.push_back(path);
            return;
        }
        for (const Vertex& dir : kDirs) {
            Vertex u = v + dir;
            if (!g.contains_vertex(u) || used.count(u) || !cfg.open(edge_between(v, u))) continue;
            path.push_back(u);
            used.insert(u);
            dfs(u);
            used.erase(u);
            path.pop_back();
        }
    };
    dfs(g.center);
    return out;
}

std::optional<LatticePath> ccw_closest_arm(const Configuration& cfg, const LatticePath& wall) {
    const BoxGeometry& g = cfg.geometry();
    auto arms = origin_arms(cfg);
    if (arms.empty()) return std::nullopt;
    std::optional<std::vector<Vertex>> best;
    long long best_area = 0;
    for (const auto& arm : arms) {
        long long area = ccw_area_between(g, arm, wall);
        if (!best || area < best_area ||
            (area == best_area && (arm.size() < best->size() || (arm.size() == best->size() && arm < *best)))) {
            best = arm;
            best_area = area;
        }
    }
    return LatticePath{LatticeKind::Primal, *best};
}

std::optional<ShortcutCandidate> min_ratio_detour(const Configuration& cfg,
                                                  const GammaDecomposition& gd, size_t edge_index,
                                                  const AnnulusSpec& ann, size_t limit) {
    const BoxGeometry& g = cfg.geometry();
    const LatticePath& gamma = gd.gamma;
    std::unordered_map<Vertex, size_t> pos;
    for (size_t i = 0; i < gamma.verts.size(); ++i) pos[gamma.verts[i]] = i;
    std::unordered_set<size_t> gamma_edges;
    for (const EdgeIndex& f : gamma.edges()) gamma_edges.insert(EdgeKey::of(f));

    auto in_ann_vertex = [&](const Vertex& v) {
        int r = linf(v - ann.center);
        return r >= ann.inner && r <= ann.outer;
    };
    auto usable = [&](const EdgeIndex& f) {
        return ann.contains_edge(f) && g.contains_edge(f) && cfg.open(f) && !gamma_edges.count(EdgeKey::of(f));
    };

    std::optional<ShortcutCandidate> best;
    auto consider = [&](const std::vector<Vertex>& verts, size_t ui, size_t vi) {
        ShortcutCandidate c;
        c.e = gamma.edge(edge_index);
        c.detour = {LatticeKind::Primal, verts};
        c.tau_begin = ui;
        c.tau_end = vi;
        if (!best) {
            best = c;
            return;
        }
        size_t lhs = c.r_len() * best->tau_len(), rhs = best->r_len() * c.tau_len();
        if (lhs > rhs) return;
        if (lhs == rhs) {
            if (c.r_len() > best->r_len()) return;
            if (c.r_len() == best->r_len() && !(c.detour.verts < best->detour.verts)) return;
        }
        best = c;
    };

    size_t work = 0;
    std::vector<Vertex> path;
    std::set<Vertex> used;
    std::function<void(const Vertex&, size_t)> dfs = [&](const Vertex& v, size_t ui) {
        if (++work > limit) throw std::runtime_error("detour enumeration limit exceeded");
        auto it = pos.find(v);
        if (it != pos.end() && it->second > edge_index && path.size() > 1)
            consider(path, ui, it->second); // a valid far endpoint; the detour may also continue
        for (const Vertex& dir : kDirs) {
            Vertex u = v + dir;
            if (!in_ann_vertex(u) || used.count(u) || !usable(edge_between(v, u))) continue;
            path.push_back(u);
            used.insert(u);
            dfs(u, ui);
            used.erase(u);
            path.pop_back();
        }
    };
    for (size_t ui = 0; ui <= edge_index && ui < gamma.verts.size(); ++ui) {
        const Vertex& u = gamma.verts[ui];
        if (!in_ann_vertex(u)) continue;
        path = {u};
        used = {u};
        dfs(u, ui);
    }
    return best;
}

std::pair<uint64_t, uint64_t> exact_2x1_crossing_count() {
    // Rectangle [0,2]x[0,1]: 4 horizontal + 3 vertical edges.
    std::vector<std::pair<Vertex, Vertex>> edges = {
        {{0, 0}, {1, 0}}, {{1, 0}, {2, 0}}, {{0, 1}, {1, 1}}, {{1, 1}, {2, 1}},
        {{0, 0}, {0, 1}}, {{1, 0}, {1, 1}}, {{2, 0}, {2, 1}},
    };
    auto vid = [](const Vertex& v) { return v.y * 3 + v.x; };
    uint64_t crossings = 0;
    for (uint32_t mask = 0; mask < (1u << edges.size()); ++mask) {
        // union-find over the 6 vertices
        int uf[6];
        for (int i = 0; i < 6; ++i) uf[i] = i;
        std::function<int(int)> find = [&](int x) { return uf[x] == x ? x : uf[x] = find(uf[x]); };
        for (size_t i = 0; i < edges.size(); ++i)
            if (mask & (1u << i)) uf[find(vid(edges[i].first))] = find(vid(edges[i].second));
        bool cross = false;
        for (int yl = 0; yl <= 1 && !cross; ++yl)
            for (int yr = 0; yr <= 1 && !cross; ++yr)
                if (find(vid({0, yl})) == find(vid({2, yr}))) cross = true;
        if (cross) ++crossings;
    }
    return {crossings, 1ull << edges.size()};
}

double exact_pi3_annulus_1_2(int threads) {
    // Annulus B(1,2): edges of B(2) not in B(1), indexed once; vertices of
    // radius 1..2 indexed 0..23.  For each of the 2^28 configurations, two
    // vertex-disjoint open crossings exist iff some crossing exists and no
    // single vertex cuts all crossings (Menger).  The closed dual crossing of
    // a width-1 annulus is vacuous.
    BoxGeometry b2({0, 0}, 2);
    AnnulusSpec ann({0, 0}, 1, 2);
    std::vector<EdgeIndex> edges;
    for (const EdgeIndex& e : b2.edges())
        if (ann.contains_edge(e)) edges.push_back(e);
    if (edges.size() != 28) throw std::logic_error("unexpected annulus edge count");

    std::vector<Vertex> verts;
    for (size_t i = 0; i < b2.vertex_count(); ++i) {
        Vertex v = b2.vertex_at(i);
        int r = linf(v);
        if (r >= 1 && r <= 2) verts.push_back(v);
    }
    std::unordered_map<Vertex, int> vid;
    for (size_t i = 0; i < verts.size(); ++i) vid[verts[i]] = static_cast<int>(i);
    const int V = static_cast<int>(verts.size());

    // per-edge endpoint ids
    std::vector<std::pair<int, int>> ends(edges.size());
    for (size_t i = 0; i < edges.size(); ++i)
        ends[i] = {vid.at(edges[i].a), vid.at(edges[i].other())};

    uint32_t inner_mask = 0, outer_mask = 0;
    for (int i = 0; i < V; ++i) {
        if (linf(verts[i]) == 1) inner_mask |= 1u << i;
        if (linf(verts[i]) == 2) outer_mask |= 1u << i;
    }

    auto reaches = [&](const std::array<uint32_t, 24>& adj, uint32_t banned) {
        uint32_t frontier = inner_mask & ~banned;
        uint32_t seen = frontier;
        while (frontier) {
            if (seen & outer_mask) return true;
            uint32_t next = 0;
            while (frontier) {
                int v = __builtin_ctz(frontier);
                frontier &= frontier - 1;
                next |= adj[v];
            }
            next &= ~seen & ~banned;
            seen |= next;
            frontier = next;
        }
        return (seen & outer_mask) != 0;
    };

    const uint64_t total = 1ull << edges.size();
    std::atomic<uint64_t> hits{0};
    int T = resolve_threads(threads);
    parallel_for_index(static_cast<uint64_t>(T), T, [&](uint64_t t) {
        uint64_t local = 0;
        for (uint64_t mask = t; mask < total; mask += T) {
            std::array<uint32_t, 24> adj{};
            uint64_t m = mask;
            for (size_t i = 0; i < edges.size(); ++i)
                if (m & (1ull << i)) {
                    adj[ends[i].first] |= 1u << ends[i].second;
                    adj[ends[i].second] |= 1u << ends[i].first;
                }
            if (!reaches(adj, 0)) continue;
            bool two = true;
            for (int v = 0; v < V; ++v) {
                if (!reaches(adj, 1u << v)) {
                    two = false;
                    break;
                }
            }
            if (two) ++local;
        }
        hits.fetch_add(local);
    });
    return static_cast<double>(hits.load()) / static_cast<double>(total);
}

} // namespace oracle
} // namespace perc

namespace perc {
namespace oracle {

namespace {

uint64_t scaled(double scale, uint64_t base) {
    uint64_t v = static_cast<uint64_t>(base * scale);
    return v < 10 ? 10 : v;
}

} // namespace

std::string SuiteReport::summary() const {
    std::string out;
    for (const auto& s : suites) {
        out += s.name + ": " + std::to_string(s.cases) + " cases, " +
               std::to_string(s.mismatches) + " mismatches\n";
    }
    return out;
}

SuiteReport run_equivalence_suites(uint64_t seed, double scale, int threads) {
    SuiteReport rep;

    {
        SuiteResult r{"chemdist_vs_dijkstra", 0, 0};
        for (int n = 2; n <= 4; ++n) {
            uint64_t batch = scaled(scale, 400);
            for (uint64_t i = 0; i < batch; ++i) {
                Configuration cfg =
                    sample_configuration(build_box(n), 0.5, sample_seed(mix64(seed ^ n), i));
                auto want = shortest_path_length(cfg);
                ++r.cases;
                if (!want) {
                    if (radial_connection(cfg)) ++r.mismatches;
                    continue;
                }
                if (chemical_distance(cfg).length != *want) ++r.mismatches;
            }
        }
        rep.suites.push_back(r);
    }

    {
        SuiteResult r{"circuits_vs_enumeration", 0, 0};
        for (int n = 2; n <= 3; ++n) {
            uint64_t batch = scaled(scale, n == 2 ? 600 : 400);
            for (uint64_t i = 0; i < batch; ++i) {
                Configuration cfg =
                    sample_configuration(build_box(n), 0.5, sample_seed(mix64(seed ^ (16 + n)), i));
                ++r.cases;
                C0Result got = detect_C0(cfg);
                auto want = innermost_circuit(cfg);
                if (got.has_circuit != want.has_value()) {
                    ++r.mismatches;
                    continue;
                }
                if (got.has_circuit && !same_circuit(got.innermost, *want)) {
                    ++r.mismatches;
                    continue;
                }
                CircuitStack st = build_circuit_stack(cfg);
                auto stack = circuit_stack(cfg);
                if (st.K != static_cast<int>(stack.size())) {
                    ++r.mismatches;
                    continue;
                }
                for (int m = 0; m < st.K; ++m)
                    if (!same_circuit(st.circuits[m], stack[m])) {
                        ++r.mismatches;
                        break;
                    }
            }
        }
        rep.suites.push_back(r);
    }

    {
        SuiteResult r{"ccw_arm_vs_area_enumeration", 0, 0};
        uint64_t want_cases = scaled(scale, 120);
        for (uint64_t i = 0; r.cases < want_cases && i < want_cases * 40; ++i) {
            Configuration cfg = sample_configuration(build_box(3), 0.5, sample_seed(mix64(seed ^ 77), i));
            if (!radial_connection(cfg)) continue;
            if (detect_C0(cfg).has_circuit) continue;
            GammaDecomposition gd = build_gamma(cfg);
            auto want = ccw_closest_arm(cfg, gd.c0c_wall);
            ++r.cases;
            if (!want || gd.gamma.verts != want->verts) ++r.mismatches;
        }
        rep.suites.push_back(r);
    }

    {
        SuiteResult r{"shortcut_vs_detour_enumeration", 0, 0};
        uint64_t want_cases = scaled(scale, 200);
        for (uint64_t i = 0; r.cases < want_cases && i < want_cases * 20; ++i) {
            Configuration cfg =
                sample_configuration(build_box(4), 0.55, sample_seed(mix64(seed ^ 99), i));
            if (!radial_connection(cfg)) continue;
            GammaDecomposition gd = build_gamma(cfg);
            for (size_t idx = 0; idx < gd.gamma.edge_count() && r.cases < want_cases; ++idx) {
                EdgeIndex e = gd.gamma.edge(idx);
                if (linf(e.a - Vertex{0, 0}) + 2 > 4) continue;
                ++r.cases;
                auto got = find_shortcut(cfg, gd, idx, 0, 0.5);
                auto want = min_ratio_detour(cfg, gd, idx, shortcut_annulus(e, 0, 0.5));
                if (got.has_value() != want.has_value()) {
                    ++r.mismatches;
                    continue;
                }
                if (got && (got->tau_begin != want->tau_begin || got->tau_end != want->tau_end ||
                            got->detour.verts != want->detour.verts))
                    ++r.mismatches;
            }
        }
        rep.suites.push_back(r);
    }

    {
        SuiteResult r{"arm_detection_vs_enumeration", 0, 0};
        AnnulusSpec ann({0, 0}, 1, 3);
        std::vector<ColorSequence> seqs = {
            ColorSequence{ArmC::O}, ColorSequence{ArmC::O, ArmC::C},
            ColorSequence{ArmC::O, ArmC::O, ArmC::C}, ColorSequence::mono_open(2),
            ColorSequence::mono_closed(2)};
        uint64_t batch = scaled(scale, 300);
        for (uint64_t i = 0; i < batch; ++i) {
            Configuration cfg = sample_configuration(build_box(3), 0.5, sample_seed(mix64(seed ^ 5), i));
            for (const ColorSequence& cs : seqs) {
                ++r.cases;
                bool got = detect_arm_event(cfg, {ann, cs, std::nullopt});
                if (got != arm_event_exists(cfg, ann, cs)) ++r.mismatches;
            }
        }
        rep.suites.push_back(r);
    }

    {
        SuiteResult r{"exact_2x1_crossing", 1, 0};
        auto [crossings, total] = exact_2x1_crossing_count();
        if (!(crossings * 2 == total)) r.mismatches = 1;
        rep.suites.push_back(r);
    }

    {
        // exact enumeration vs the Monte Carlo estimator (4 sigma agreement)
        SuiteResult r{"exact_pi3_1_2_vs_estimator", 1, 0};
        double exact = exact_pi3_annulus_1_2(threads);
        uint64_t samples = scaled(scale, 400000);
        EstimateRecord mc = estimate_pi(PiFamily::Pi3OOC, 0, 1, 2, samples, mix64(seed ^ 13), 0.5, threads);
        double sigma = std::sqrt(exact * (1 - exact) / static_cast<double>(samples));
        if (std::abs(mc.estimate - exact) > 4 * sigma + 1e-12) r.mismatches = 1;
        rep.suites.push_back(r);
    }

    return rep;
}

} // namespace oracle
} // namespace perc
