#include "perc/lattice.hpp"

#include <algorithm>
#include <array>

namespace perc {

size_t BoxGeometry::edge_index(const EdgeIndex& e) const {
    if (!contains_edge(e)) throw std::out_of_range("edge outside box");
    int n = radius;
    int ux = e.a.x - center.x + n;
    int uy = e.a.y - center.y + n;
    size_t w = 2 * static_cast<size_t>(n) + 1;
    if (e.o == Orientation::H) return static_cast<size_t>(uy) * (w - 1) + ux;
    size_t h_count = w * (w - 1);
    return h_count + static_cast<size_t>(uy) * w + ux;
}

EdgeIndex BoxGeometry::edge_at(size_t idx) const {
    int n = radius;
    size_t w = 2 * static_cast<size_t>(n) + 1;
    size_t h_count = w * (w - 1);
    if (idx < h_count) {
        int uy = static_cast<int>(idx / (w - 1));
        int ux = static_cast<int>(idx % (w - 1));
        return {{ux + center.x - n, uy + center.y - n}, Orientation::H};
    }
    idx -= h_count;
    int uy = static_cast<int>(idx / w);
    int ux = static_cast<int>(idx % w);
    return {{ux + center.x - n, uy + center.y - n}, Orientation::V};
}

std::vector<EdgeIndex> BoxGeometry::edges() const {
    std::vector<EdgeIndex> out;
    out.reserve(edge_count());
    for (size_t i = 0; i < edge_count(); ++i) out.push_back(edge_at(i));
    return out;
}

std::vector<EdgeIndex> BoxGeometry::boundary_edges() const {
    std::vector<EdgeIndex> out;
    for (const EdgeIndex& e : edges())
        if (boundary_edge(e)) out.push_back(e);
    return out;
}

int displacement_M(const EdgeIndex& e, const BoxGeometry& geom) {
    if (!geom.contains_edge(e)) throw std::out_of_range("edge outside box");
    int r = geom.radius_of(e.a);
    return std::min(r, geom.radius - r);
}

Vertex boundary_projection(const EdgeIndex& e, const BoxGeometry& geom) {
    if (!geom.contains_edge(e)) throw std::out_of_range("edge outside box");
    Vertex d = e.a - geom.center;
    int n = geom.radius;
    std::array<Vertex, 4> cand = {Vertex{n, d.y}, Vertex{-n, d.y}, Vertex{d.x, n}, Vertex{d.x, -n}};
    Vertex best = cand[0];
    long best_d2 = -1;
    for (const Vertex& c : cand) {
        long dx = c.x - d.x, dy = c.y - d.y;
        long d2 = dx * dx + dy * dy;
        if (best_d2 < 0 || d2 < best_d2 || (d2 == best_d2 && c < best)) {
            best = c;
            best_d2 = d2;
        }
    }
    return best + geom.center;
}

} // namespace perc
