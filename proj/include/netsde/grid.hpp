#pragma once

#include <utility>
#include <vector>

#include "netsde/network.hpp"

namespace netsde {

/// Flat nodal layout over the network: edge interiors in declaration order,
/// then the vertex values. Edge endpoints are not stored; the nodal value at
/// an endpoint IS the shared vertex value, so continuity across vertices is
/// built into the state vector.
struct GridLayout {
    std::vector<int> cells;              // N_j per edge, each >= 2
    std::vector<int> interior_offset;    // flat index of node (j, k=1)
    std::vector<std::pair<int, int>> ends; // (tail, head) per edge
    int n_vertices = 0;
    int n_interior = 0;

    int dim() const { return n_interior + n_vertices; }
    int n_edges() const { return static_cast<int>(cells.size()); }
    double h(int j) const { return 1.0 / static_cast<double>(cells[j]); }

    /// Interior node k in 1..N_j-1 of edge j.
    int interior_index(int j, int k) const { return interior_offset[j] + (k - 1); }
    int vertex_index(int i) const { return n_interior + i; }

    /// Any node k in 0..N_j (endpoints resolve to vertex slots).
    int node_index(int j, int k) const {
        if (k == 0) return vertex_index(ends[j].first);
        if (k == cells[j]) return vertex_index(ends[j].second);
        return interior_index(j, k);
    }
};

/// Builds the layout; cells may hold one entry per edge or a single entry
/// broadcast to all edges. Throws on counts below 2.
GridLayout build_grid(const NetworkModel& model, std::vector<int> cells);

} // namespace netsde
