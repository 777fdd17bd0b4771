// Lattice paths and circuits on the primal or dual lattice.
//
// A path is stored as its vertex sequence (v0, ..., vN); the edges are the
// consecutive pairs.  Dual paths use cell anchors as vertices.
#pragma once

#include "perc/lattice.hpp"

#include <optional>
#include <vector>

namespace perc {

enum class LatticeKind : uint8_t { Primal, Dual };

struct LatticePath {
    LatticeKind kind = LatticeKind::Primal;
    std::vector<Vertex> verts;

    size_t edge_count() const { return verts.empty() ? 0 : verts.size() - 1; }
    bool empty() const { return verts.empty(); }

    // Edge between verts[i] and verts[i+1], normalized to lower-left anchor.
    EdgeIndex edge(size_t i) const;
    std::vector<EdgeIndex> edges() const;
};

using LatticeCircuit = LatticePath; // circuit: verts.front() == verts.back()

// Consecutive vertices at L1 distance 1.
bool is_lattice_path(const LatticePath& p);
// v_i = v_j implies i = j.
bool is_self_avoiding(const LatticePath& p);
// Closed, and self-avoiding except v0 = vN.
bool is_self_avoiding_circuit(const LatticePath& p);

// Twice the signed area of a closed vertex polygon (shoelace).
long long signed_area2(const std::vector<Vertex>& closed);

// True if the point p (offset by (ox,oy) half-units, passed doubled) is
// strictly inside the closed polygon, by ray casting on doubled coordinates.
bool point_in_polygon2(const std::vector<Vertex>& closed, long long px2, long long py2);

// Chronological loop erasure; keeps endpoints, output self-avoiding.
std::vector<Vertex> loop_erase(const std::vector<Vertex>& walk);

// Loop erasure that carries one label per edge along with it.
std::pair<std::vector<Vertex>, std::vector<int>>
loop_erase_labeled(const std::vector<Vertex>& walk, const std::vector<int>& edge_labels);

} // namespace perc
