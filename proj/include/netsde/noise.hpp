#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "netsde/grid.hpp"
#include "netsde/network.hpp"
#include "netsde/rng.hpp"

namespace netsde {

/// Identifies the driving-noise stream of one path.
struct NoiseAddress {
    std::uint64_t seed = 0;
    std::uint64_t path = 0;
};

/// One time step of driving noise in nodal form: the leading entries (edge
/// interiors) are Gaussian with variance dt/(mu_j h_j) (cylindrical
/// increments paired with cell indicators), the trailing vertex entries have
/// variance dt (scalar Brownian increments). The lineage (seed, path, step)
/// fully reproduces the draw.
struct NoiseIncrement {
    Eigen::VectorXd nodal;
    double dt = 0.0;
    NoiseAddress address;
    std::uint64_t step = 0;
};

/// Underlying generation lattice for one grid. Raw draws live on
/// gen_cells[j] equal cells per edge (default 2*N_j); a node's value is the
/// mean of the draws on the cells its half-open sampling interval covers.
/// Refining a grid while keeping the lattice fixed couples the noise across
/// resolutions: a coarse-cell increment is exactly the mean of its fine-cell
/// children, and the variance stays dt/(mu_j h_j) at every level.
struct NoiseLattice {
    std::vector<int> gen_cells;     // per edge, divisible by 2*N_j
    std::vector<std::uint64_t> gen_offset; // flat lattice index of edge j
    std::uint64_t vertex_base = 0;  // flat index of the first vertex slot

    static NoiseLattice standard(const GridLayout& grid);
    /// Lattice shared by every grid of the family {N, 2N, 4N, ...} up to
    /// finest_cells (per edge).
    static NoiseLattice shared(const GridLayout& grid, const std::vector<int>& finest_cells);
};

/// Draws one step of noise; deterministic in (address, step).
NoiseIncrement sample_increment(const GridLayout& grid, const NetworkModel& model, double dt,
                                const NoiseAddress& address, std::uint64_t step,
                                const NoiseLattice& lattice);

/// Convenience overload using the grid's own standard lattice.
NoiseIncrement sample_increment(const GridLayout& grid, const NetworkModel& model, double dt,
                                const NoiseAddress& address, std::uint64_t step);

} // namespace netsde
