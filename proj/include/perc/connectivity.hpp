// Cluster structure, crossings, chemical distance and disjoint-arm counting
// on a fixed configuration.  All operations are pure reads of the
// configuration; callers may evaluate different samples in parallel.
#pragma once

#include "perc/config.hpp"
#include "perc/path.hpp"

#include <climits>
#include <optional>
#include <stdexcept>

namespace perc {

struct NotConnectedError : std::runtime_error {
    NotConnectedError() : std::runtime_error("origin not connected to the box boundary") {}
};

// Per-vertex cluster id for the open primal subgraph and per-cell id for the
// closed dual subgraph.  Ids are the minimal raster index in the cluster, so
// they are stable for a fixed configuration.
struct ClusterLabeling {
    std::vector<int32_t> open_vertex_cluster;
    std::vector<int32_t> closed_cell_cluster;
};
ClusterLabeling label_clusters(const Configuration& cfg);

// True iff an open path joins the center to a vertex at L-inf radius n.
bool radial_connection(const Configuration& cfg);

struct GeodesicWitness {
    size_t length = 0;
    LatticePath path;
};

// Shortest open path center -> boundary; ties broken by the lexicographically
// smallest vertex sequence.  Throws NotConnectedError if no path exists.
GeodesicWitness chemical_distance(const Configuration& cfg);

// Vertex rectangle [lo.x,hi.x] x [lo.y,hi.y].
struct RectSpec {
    Vertex lo, hi;
};

enum class ArmColor : uint8_t { Open, ClosedDual };
enum class CrossDir : uint8_t { Horizontal, Vertical };

// Open crossings connect opposite vertex sides of the rectangle through open
// edges inside it.  Closed-dual crossings cross the dual rectangle: e.g. a
// vertical one runs from the dual row just below the rectangle to the dual
// row just above, confined horizontally to the rectangle's interior.
bool crossing_exists(const Configuration& cfg, const RectSpec& rect, ArmColor color, CrossDir dir);

// Axis-aligned half-plane through `anchor`, facing box side `side`
// (direction index into kDirs).  Keeps the side of the line that contains
// the box.
struct HalfPlane {
    Vertex anchor;
    int side = 0;
    bool allows_vertex(const Vertex& v) const {
        switch (side) {
            case 0: return v.x <= anchor.x;
            case 1: return v.y <= anchor.y;
            case 2: return v.x >= anchor.x;
            default: return v.y >= anchor.y;
        }
    }
    bool allows_cell(const Vertex& cell) const {
        switch (side) {
            case 0: return cell.x < anchor.x;
            case 1: return cell.y < anchor.y;
            case 2: return cell.x >= anchor.x;
            default: return cell.y >= anchor.y;
        }
    }
};

// Maximum number of vertex-disjoint monochromatic crossings of the annulus,
// by node-splitting max-flow (Menger).  Open arms run between the vertex
// rings at the inner and outer radii; closed dual arms between the cell rings
// just outside the inner radius and just inside the outer one.
int disjoint_arm_count(const Configuration& cfg, const AnnulusSpec& ann, ArmColor color,
                       const std::optional<HalfPlane>& hp = std::nullopt, int cap = INT_MAX);

// Existence of a single crossing arm (BFS).
bool annulus_arm_exists(const Configuration& cfg, const AnnulusSpec& ann, ArmColor color,
                        const std::optional<HalfPlane>& hp = std::nullopt);

// Edge-rooted events: arms emanating from e itself to L-inf distance r around
// e_x.  The open pair takes one arm from each endpoint of e (e's own edge is
// not available); the dual arm starts at an endpoint of e*.  r <= 0 counts as
// trivially satisfied.
int edge_open_arm_pair(const Configuration& cfg, const EdgeIndex& e, int r);
bool edge_dual_arm(const Configuration& cfg, const EdgeIndex& e, int r);
bool edge_three_arm(const Configuration& cfg, const EdgeIndex& e, int r);

} // namespace perc
