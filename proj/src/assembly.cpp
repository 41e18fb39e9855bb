#include "netsde/assembly.hpp"

#include <cmath>
#include <stdexcept>

namespace netsde {

GridLayout build_grid(const NetworkModel& model, std::vector<int> cells) {
    const int m = model.n_edges();
    if (cells.size() == 1 && m > 1)
        cells.assign(static_cast<std::size_t>(m), cells[0]);
    if (static_cast<int>(cells.size()) != m)
        throw std::invalid_argument("need one cell count per edge");
    for (int j = 0; j < m; ++j)
        if (cells[j] < 2)
            throw std::invalid_argument("edge " + std::to_string(j) +
                                        ": cell count must be at least 2");
    GridLayout grid;
    grid.cells = std::move(cells);
    grid.n_vertices = model.n_vertices;
    grid.interior_offset.resize(m);
    grid.ends.resize(m);
    int offset = 0;
    for (int j = 0; j < m; ++j) {
        grid.interior_offset[j] = offset;
        offset += grid.cells[j] - 1;
        grid.ends[j] = {model.edges[j].tail, model.edges[j].head};
    }
    grid.n_interior = offset;
    return grid;
}

Eigen::VectorXd assemble_mass(const NetworkModel& model, const GridLayout& grid) {
    Eigen::VectorXd mass = Eigen::VectorXd::Zero(grid.dim());
    for (int i = 0; i < grid.n_vertices; ++i)
        mass[grid.vertex_index(i)] = 1.0;
    for (int j = 0; j < grid.n_edges(); ++j) {
        const double muh = model.edges[j].mu * grid.h(j);
        for (int k = 1; k < grid.cells[j]; ++k)
            mass[grid.interior_index(j, k)] = muh;
        mass[grid.vertex_index(model.edges[j].tail)] += 0.5 * muh;
        mass[grid.vertex_index(model.edges[j].head)] += 0.5 * muh;
    }
    return mass;
}

Eigen::SparseMatrix<double> assemble_stiffness(const NetworkModel& model,
                                               const GridLayout& grid) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(4 * grid.dim()));
    for (int j = 0; j < grid.n_edges(); ++j) {
        const EdgeSpec& e = model.edges[j];
        const int n_cells = grid.cells[j];
        const double h = grid.h(j);
        // Gradient part: one symmetric 2x2 block per cell, c at the midpoint.
        for (int k = 0; k < n_cells; ++k) {
            const double w = e.mu * e.c((k + 0.5) * h) / h;
            const int a = grid.node_index(j, k);
            const int b = grid.node_index(j, k + 1);
            trip.emplace_back(a, a, w);
            trip.emplace_back(b, b, w);
            trip.emplace_back(a, b, -w);
            trip.emplace_back(b, a, -w);
        }
        // Potential part: trapezoid-weighted diagonal.
        for (int k = 0; k <= n_cells; ++k) {
            const double wk = (k == 0 || k == n_cells) ? 0.5 : 1.0;
            const double v = e.mu * h * wk * e.p(k * h);
            if (v != 0.0)
                trip.emplace_back(grid.node_index(j, k), grid.node_index(j, k), v);
        }
    }
    // Vertex coupling block: -M.
    for (int i = 0; i < grid.n_vertices; ++i)
        for (int k = 0; k < grid.n_vertices; ++k)
            if (model.M(i, k) != 0.0)
                trip.emplace_back(grid.vertex_index(i), grid.vertex_index(k), -model.M(i, k));

    Eigen::SparseMatrix<double> K(grid.dim(), grid.dim());
    K.setFromTriplets(trip.begin(), trip.end());
    return K;
}

Eigen::SparseMatrix<double> assemble_drift1(const NetworkModel& model, const GridLayout& grid) {
    std::vector<Eigen::Triplet<double>> trip;
    for (int j = 0; j < grid.n_edges(); ++j) {
        const EdgeSpec& e = model.edges[j];
        const double h = grid.h(j);
        for (int k = 1; k < grid.cells[j]; ++k) {
            const double w = e.d(k * h) / (2.0 * h);
            if (w == 0.0)
                continue;
            const int row = grid.interior_index(j, k);
            trip.emplace_back(row, grid.node_index(j, k + 1), w);
            trip.emplace_back(row, grid.node_index(j, k - 1), -w);
        }
    }
    Eigen::SparseMatrix<double> D(grid.dim(), grid.dim());
    D.setFromTriplets(trip.begin(), trip.end());
    return D;
}

DiscreteOperator assemble_operator(const NetworkModel& model, const GridLayout& grid) {
    DiscreteOperator op;
    op.layout = grid;
    op.mass = assemble_mass(model, grid);
    op.stiffness = assemble_stiffness(model, grid);
    op.drift1 = assemble_drift1(model, grid);
    return op;
}

State DiscreteOperator::apply_generator(const State& u) const {
    if (u.size() != mass.size())
        throw std::invalid_argument("generator_apply: state dimension mismatch");
    return -(stiffness * u).cwiseQuotient(mass);
}

State generator_apply(const DiscreteOperator& op, const State& u) {
    return op.apply_generator(u);
}

double EdgePolynomial::eval(double x) const {
    double acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;)
        acc = acc * x + coeffs[i];
    return acc;
}

double EdgePolynomial::deriv(double x) const {
    double acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 1;)
        acc = acc * x + coeffs[i] * static_cast<double>(i);
    return acc;
}

State sample_profile(const GridLayout& grid, const std::vector<EdgePolynomial>& profile) {
    if (static_cast<int>(profile.size()) != grid.n_edges())
        throw std::invalid_argument("need one polynomial per edge");
    State u = State::Zero(grid.dim());
    std::vector<bool> vertex_set(static_cast<std::size_t>(grid.n_vertices), false);
    double scale = 1.0;
    for (const auto& poly : profile)
        for (double c : poly.coeffs) scale = std::max(scale, std::abs(c));
    for (int j = 0; j < grid.n_edges(); ++j) {
        const double h = grid.h(j);
        for (int k = 1; k < grid.cells[j]; ++k)
            u[grid.interior_index(j, k)] = profile[j].eval(k * h);
        for (int side = 0; side < 2; ++side) {
            const int vi = side == 0 ? grid.ends[j].first : grid.ends[j].second;
            const double value = profile[j].eval(side == 0 ? 0.0 : 1.0);
            const int idx = grid.vertex_index(vi);
            if (vertex_set[static_cast<std::size_t>(vi)]) {
                if (std::abs(u[idx] - value) > 1e-12 * scale)
                    throw std::invalid_argument(
                        "profile is discontinuous at vertex " + std::to_string(vi));
            } else {
                u[idx] = value;
                vertex_set[static_cast<std::size_t>(vi)] = true;
            }
        }
    }
    return u;
}

Eigen::VectorXd kirchhoff_residual(const DiscreteOperator& op, const NetworkModel& model,
                                   const std::vector<EdgePolynomial>& profile) {
    const GridLayout& grid = op.layout;
    const State u = sample_profile(grid, profile);
    const Eigen::VectorXd flux_balance = -(op.stiffness * u);

    // Exact vertex rate: M r plus the signed weighted fluxes. The half-cell
    // potential weights are carried on both sides so they cancel exactly and
    // the residual isolates the flux approximation error.
    Eigen::VectorXd exact = Eigen::VectorXd::Zero(grid.n_vertices);
    for (int i = 0; i < grid.n_vertices; ++i)
        exact[i] = model.M.row(i).dot(u.tail(grid.n_vertices));
    for (int j = 0; j < grid.n_edges(); ++j) {
        const EdgeSpec& e = model.edges[j];
        const double h = grid.h(j);
        exact[e.tail] += e.mu * e.c(0.0) * profile[j].deriv(0.0) -
                         0.5 * e.mu * h * e.p(0.0) * u[grid.vertex_index(e.tail)];
        exact[e.head] -= e.mu * e.c(1.0) * profile[j].deriv(1.0) +
                         0.5 * e.mu * h * e.p(1.0) * u[grid.vertex_index(e.head)];
    }

    Eigen::VectorXd residual(grid.n_vertices);
    for (int i = 0; i < grid.n_vertices; ++i)
        residual[i] = flux_balance[grid.vertex_index(i)] - exact[i];
    return residual;
}

} // namespace netsde
