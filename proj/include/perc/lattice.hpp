// Square-lattice geometry: boxes, annuli, edges and the dual lattice.
//
// Conventions used throughout:
//  - A vertex is an integer pair.  Distances are L-infinity unless stated.
//  - An edge is identified by its lower-left endpoint e_x (the lexicographic
//    first of its two endpoints) plus an orientation.
//  - A dual vertex is the cell anchor (a,b), standing for the plaquette
//    [a,a+1]x[b,b+1], i.e. the dual lattice point (a+1/2, b+1/2).
#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace perc {

struct Vertex {
    int x = 0;
    int y = 0;
    friend bool operator==(const Vertex&, const Vertex&) = default;
    friend auto operator<=>(const Vertex&, const Vertex&) = default; // lexicographic (x, then y)
    Vertex operator+(const Vertex& o) const { return {x + o.x, y + o.y}; }
    Vertex operator-(const Vertex& o) const { return {x - o.x, y - o.y}; }
};

inline int linf(const Vertex& v) { return std::max(std::abs(v.x), std::abs(v.y)); }
inline int l1(const Vertex& a, const Vertex& b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

// Directions in counterclockwise order.
inline constexpr Vertex kDirs[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}}; // E N W S

enum class Orientation : uint8_t { H = 0, V = 1 };

// Edge identified by lower-left endpoint + orientation.
// H: {a, a+(1,0)}, V: {a, a+(0,1)}.
struct EdgeIndex {
    Vertex a;
    Orientation o = Orientation::H;
    friend bool operator==(const EdgeIndex&, const EdgeIndex&) = default;
    friend auto operator<=>(const EdgeIndex&, const EdgeIndex&) = default;
    Vertex other() const { return o == Orientation::H ? Vertex{a.x + 1, a.y} : Vertex{a.x, a.y + 1}; }
};

// Edge of the dual lattice, anchored on cell coordinates.
// H: {cell, cell+(1,0)}, V: {cell, cell+(0,1)} where "cell" (a,b) is the
// dual vertex at (a+1/2, b+1/2).
struct DualEdgeIndex {
    Vertex cell;
    Orientation o = Orientation::H;
    friend bool operator==(const DualEdgeIndex&, const DualEdgeIndex&) = default;
};

// e <-> e* share a midpoint; the mapping is an involution.
inline DualEdgeIndex dual_of(const EdgeIndex& e) {
    if (e.o == Orientation::H) return {{e.a.x, e.a.y - 1}, Orientation::V};
    return {{e.a.x - 1, e.a.y}, Orientation::H};
}
inline EdgeIndex primal_of(const DualEdgeIndex& d) {
    if (d.o == Orientation::V) return {{d.cell.x, d.cell.y + 1}, Orientation::H};
    return {{d.cell.x + 1, d.cell.y}, Orientation::V};
}

// The two cells on either side of a primal edge (the endpoints of its dual).
inline std::pair<Vertex, Vertex> cells_of_edge(const EdgeIndex& e) {
    DualEdgeIndex d = dual_of(e);
    Vertex c2 = d.o == Orientation::H ? Vertex{d.cell.x + 1, d.cell.y} : Vertex{d.cell.x, d.cell.y + 1};
    return {d.cell, c2};
}

// Step from cell c to its 4-neighbor in direction dir; returns the primal
// edge crossed by that step.
inline EdgeIndex cell_step_edge(const Vertex& c, int dir) {
    switch (dir) {
        case 0: return {{c.x + 1, c.y}, Orientation::V}; // east
        case 1: return {{c.x, c.y + 1}, Orientation::H}; // north
        case 2: return {{c.x, c.y}, Orientation::V};     // west
        default: return {{c.x, c.y}, Orientation::H};    // south
    }
}

// Cell between edge-directions d and d+1 (ccw) around vertex v:
// d=0 NE, d=1 NW, d=2 SW, d=3 SE.
inline Vertex corner_cell(const Vertex& v, int d) {
    switch (d & 3) {
        case 0: return {v.x, v.y};
        case 1: return {v.x - 1, v.y};
        case 2: return {v.x - 1, v.y - 1};
        default: return {v.x, v.y - 1};
    }
}

// B(x,n): all nearest-neighbor edges with both endpoints within L-inf
// distance n of the center.
struct BoxGeometry {
    Vertex center{0, 0};
    int radius = 0;

    BoxGeometry() = default;
    BoxGeometry(Vertex c, int n) : center(c), radius(n) {
        if (n < 0) throw std::invalid_argument("box radius must be >= 0");
    }

    int radius_of(const Vertex& v) const { return linf(v - center); }
    bool contains_vertex(const Vertex& v) const { return radius_of(v) <= radius; }
    bool contains_edge(const EdgeIndex& e) const {
        return contains_vertex(e.a) && contains_vertex(e.other());
    }
    bool on_boundary(const Vertex& v) const { return radius_of(v) == radius; }
    bool boundary_edge(const EdgeIndex& e) const {
        return radius_of(e.a) == radius && radius_of(e.other()) == radius;
    }

    // 2*(2n+1)*2n edges for n >= 1, 0 for n = 0.
    size_t edge_count() const {
        if (radius == 0) return 0;
        size_t w = 2 * static_cast<size_t>(radius) + 1;
        return 2 * w * (w - 1);
    }

    // Row-major edge indexing, H block then V block.
    size_t edge_index(const EdgeIndex& e) const;
    EdgeIndex edge_at(size_t idx) const;
    std::vector<EdgeIndex> edges() const;
    std::vector<EdgeIndex> boundary_edges() const;

    // Vertex/cell raster helpers for flat arrays.
    int vertex_row_width() const { return 2 * radius + 1; }
    size_t vertex_count() const {
        size_t w = vertex_row_width();
        return w * w;
    }
    size_t vertex_id(const Vertex& v) const {
        int w = vertex_row_width();
        return static_cast<size_t>(v.y - center.y + radius) * w + (v.x - center.x + radius);
    }
    Vertex vertex_at(size_t id) const {
        int w = vertex_row_width();
        return {static_cast<int>(id % w) + center.x - radius,
                static_cast<int>(id / w) + center.y - radius};
    }

    // Cells of the box: anchors a,b in [c-n, c+n-1].
    bool contains_cell(const Vertex& cell) const {
        return cell.x >= center.x - radius && cell.x <= center.x + radius - 1 &&
               cell.y >= center.y - radius && cell.y <= center.y + radius - 1;
    }
    int cell_row_width() const { return 2 * radius; }
    size_t cell_count() const {
        size_t w = cell_row_width();
        return w * w;
    }
    size_t cell_id(const Vertex& cell) const {
        int w = cell_row_width();
        return static_cast<size_t>(cell.y - center.y + radius) * w + (cell.x - center.x + radius);
    }
    Vertex cell_at(size_t id) const {
        int w = cell_row_width();
        return {static_cast<int>(id % w) + center.x - radius,
                static_cast<int>(id / w) + center.y - radius};
    }
    // Twice the L-inf distance from the cell's midpoint to the center (odd integer).
    int cell_radius2(const Vertex& cell) const {
        int dx = 2 * (cell.x - center.x) + 1;
        int dy = 2 * (cell.y - center.y) + 1;
        return std::max(std::abs(dx), std::abs(dy));
    }

    friend bool operator==(const BoxGeometry&, const BoxGeometry&) = default;
};

inline BoxGeometry build_box(int n, Vertex center = {0, 0}) { return BoxGeometry(center, n); }

// B(x,n,N) = B(x,N) \ B(x,n).
struct AnnulusSpec {
    Vertex center{0, 0};
    int inner = 0;
    int outer = 0;

    AnnulusSpec() = default;
    AnnulusSpec(Vertex c, int n, int N) : center(c), inner(n), outer(N) {
        if (!(0 < n && n < N)) throw std::invalid_argument("annulus requires 0 < inner < outer");
    }
    bool contains_edge(const EdgeIndex& e) const {
        BoxGeometry big(center, outer), small(center, inner);
        return big.contains_edge(e) && !small.contains_edge(e);
    }
    friend bool operator==(const AnnulusSpec&, const AnnulusSpec&) = default;
};

// dist(e,S) := L-inf distance from the lower-left endpoint e_x to the nearest
// vertex of S.  M(e) = min(dist(e,0), dist(e, boundary)).
int displacement_M(const EdgeIndex& e, const BoxGeometry& geom);

// Nearest boundary vertex in L2, ties toward the lexicographically smallest.
Vertex boundary_projection(const EdgeIndex& e, const BoxGeometry& geom);

} // namespace perc

template <> struct std::hash<perc::Vertex> {
    size_t operator()(const perc::Vertex& v) const {
        return (static_cast<size_t>(static_cast<uint32_t>(v.x)) << 32) ^ static_cast<uint32_t>(v.y);
    }
};
