#include "perc/path.hpp"

#include <algorithm>
#include <unordered_map>

namespace perc {

EdgeIndex LatticePath::edge(size_t i) const {
    Vertex u = verts[i], v = verts[i + 1];
    if (v < u) std::swap(u, v);
    return {u, u.x == v.x ? Orientation::V : Orientation::H};
}

std::vector<EdgeIndex> LatticePath::edges() const {
    std::vector<EdgeIndex> out;
    out.reserve(edge_count());
    for (size_t i = 0; i + 1 < verts.size(); ++i) out.push_back(edge(i));
    return out;
}

bool is_lattice_path(const LatticePath& p) {
    for (size_t i = 0; i + 1 < p.verts.size(); ++i)
        if (l1(p.verts[i], p.verts[i + 1]) != 1) return false;
    return true;
}

bool is_self_avoiding(const LatticePath& p) {
    std::vector<Vertex> v = p.verts;
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) == v.end();
}

bool is_self_avoiding_circuit(const LatticePath& p) {
    if (p.verts.size() < 5 || p.verts.front() != p.verts.back()) return false;
    if (!is_lattice_path(p)) return false;
    std::vector<Vertex> v(p.verts.begin() + 1, p.verts.end());
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) == v.end();
}

long long signed_area2(const std::vector<Vertex>& closed) {
    long long a = 0;
    for (size_t i = 0; i + 1 < closed.size(); ++i) {
        const Vertex& p = closed[i];
        const Vertex& q = closed[i + 1];
        a += static_cast<long long>(p.x) * q.y - static_cast<long long>(q.x) * p.y;
    }
    return a;
}

bool point_in_polygon2(const std::vector<Vertex>& closed, long long px2, long long py2) {
    // Crossing count against a horizontal ray to +x, on coordinates doubled so
    // half-integer query points avoid vertices of the integer polygon.
    bool inside = false;
    for (size_t i = 0; i + 1 < closed.size(); ++i) {
        long long x1 = 2LL * closed[i].x, y1 = 2LL * closed[i].y;
        long long x2 = 2LL * closed[i + 1].x, y2 = 2LL * closed[i + 1].y;
        if ((y1 > py2) != (y2 > py2)) {
            // x coordinate where the segment crosses the ray's height
            long long xc_num = x1 * (y2 - py2) + x2 * (py2 - y1);
            long long den = y2 - y1;
            if (den < 0) { xc_num = -xc_num; den = -den; }
            if (xc_num > px2 * den) inside = !inside;
        }
    }
    return inside;
}

std::vector<Vertex> loop_erase(const std::vector<Vertex>& walk) {
    std::vector<Vertex> out;
    std::unordered_map<Vertex, size_t> pos;
    for (const Vertex& v : walk) {
        auto it = pos.find(v);
        if (it != pos.end()) {
            while (out.size() > it->second + 1) {
                pos.erase(out.back());
                out.pop_back();
            }
        } else {
            pos[v] = out.size();
            out.push_back(v);
        }
    }
    return out;
}

std::pair<std::vector<Vertex>, std::vector<int>>
loop_erase_labeled(const std::vector<Vertex>& walk, const std::vector<int>& edge_labels) {
    std::vector<Vertex> out;
    std::vector<int> labels;
    std::unordered_map<Vertex, size_t> pos;
    for (size_t i = 0; i < walk.size(); ++i) {
        const Vertex& v = walk[i];
        auto it = pos.find(v);
        if (it != pos.end()) {
            while (out.size() > it->second + 1) {
                pos.erase(out.back());
                out.pop_back();
                labels.pop_back();
            }
        } else {
            pos[v] = out.size();
            out.push_back(v);
            if (out.size() > 1) labels.push_back(edge_labels[i - 1]);
        }
    }
    return {out, labels};
}

} // namespace perc
