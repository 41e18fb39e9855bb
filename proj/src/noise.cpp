#include "netsde/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace netsde {

NoiseLattice NoiseLattice::standard(const GridLayout& grid) {
    std::vector<int> finest(grid.cells.begin(), grid.cells.end());
    return shared(grid, finest);
}

NoiseLattice NoiseLattice::shared(const GridLayout& grid, const std::vector<int>& finest_cells) {
    if (finest_cells.size() != grid.cells.size())
        throw std::invalid_argument("noise lattice: need one finest cell count per edge");
    NoiseLattice lattice;
    lattice.gen_cells.resize(grid.cells.size());
    lattice.gen_offset.resize(grid.cells.size());
    std::uint64_t offset = 0;
    for (std::size_t j = 0; j < grid.cells.size(); ++j) {
        if (finest_cells[j] % grid.cells[j] != 0)
            throw std::invalid_argument(
                "noise lattice: finest cell count must be a multiple of the grid's");
        lattice.gen_cells[j] = 2 * finest_cells[j];
        lattice.gen_offset[j] = offset;
        offset += static_cast<std::uint64_t>(lattice.gen_cells[j]);
    }
    lattice.vertex_base = offset;
    return lattice;
}

NoiseIncrement sample_increment(const GridLayout& grid, const NetworkModel& model, double dt,
                                const NoiseAddress& address, std::uint64_t step,
                                const NoiseLattice& lattice) {
    if (!(dt > 0.0))
        throw std::invalid_argument("sample_increment: dt must be positive");
    const CounterRng rng(address.seed, address.path);
    NoiseIncrement inc;
    inc.dt = dt;
    inc.address = address;
    inc.step = step;
    inc.nodal = Eigen::VectorXd::Zero(grid.dim());
    for (int j = 0; j < grid.n_edges(); ++j) {
        const int n_cells = grid.cells[j];
        const int gen = lattice.gen_cells[j];
        const int per_node = gen / n_cells;      // cells covered by one node
        const int half = per_node / 2;           // offset of the node's first cell
        const double cell_sd = std::sqrt(dt * gen / model.edges[j].mu);
        for (int k = 1; k < n_cells; ++k) {
            double sum = 0.0;
            const std::uint64_t first =
                lattice.gen_offset[j] + static_cast<std::uint64_t>(k * per_node - half);
            for (int c = 0; c < per_node; ++c)
                sum += rng.normal(step, first + static_cast<std::uint64_t>(c));
            inc.nodal[grid.interior_index(j, k)] = cell_sd * sum / per_node;
        }
    }
    const double vertex_sd = std::sqrt(dt);
    for (int i = 0; i < grid.n_vertices; ++i)
        inc.nodal[grid.vertex_index(i)] =
            vertex_sd * rng.normal(step, lattice.vertex_base + static_cast<std::uint64_t>(i));
    return inc;
}

NoiseIncrement sample_increment(const GridLayout& grid, const NetworkModel& model, double dt,
                                const NoiseAddress& address, std::uint64_t step) {
    return sample_increment(grid, model, dt, address, step, NoiseLattice::standard(grid));
}

} // namespace netsde
