#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "netsde/grid.hpp"
#include "netsde/network.hpp"

namespace netsde {

using State = Eigen::VectorXd;

/// Per-edge polynomial test profile (coefficients lowest degree first); used
/// by the flux-balance consistency harness.
struct EdgePolynomial {
    std::vector<double> coeffs;

    double eval(double x) const;
    double deriv(double x) const;
};

/// Discrete spatial operator over a GridLayout: diagonal (lumped) mass,
/// energy-form stiffness K_h, and the first-order drift matrix D_h. The
/// generator is kept implicitly as -mass^{-1} K_h.
struct DiscreteOperator {
    GridLayout layout;
    Eigen::VectorXd mass;                  // > 0 entrywise
    Eigen::SparseMatrix<double> stiffness; // symmetric, positive definite for valid models
    Eigen::SparseMatrix<double> drift1;    // vertex rows identically zero

    State apply_generator(const State& u) const;
};

/// Diagonal mass weights: mu_j*h_j per interior node; 1 + sum of incident
/// half cells mu_j*h_j/2 per vertex.
Eigen::VectorXd assemble_mass(const NetworkModel& model, const GridLayout& grid);

/// Matrix of the discrete energy form
///   a_h(U,V) = sum_j mu_j sum_cells c_j(midpoint) (du)(dv)/h_j
///            + sum_j mu_j h_j sum_nodes w_k p_j(x_k) u_k v_k  -  <M r, q>
/// with trapezoid weights w_k (1 interior, 1/2 at endpoints) and endpoint
/// nodal values identified with the vertex unknowns.
Eigen::SparseMatrix<double> assemble_stiffness(const NetworkModel& model, const GridLayout& grid);

/// Central-difference first-order term d_j(x_k)*(u_{k+1}-u_{k-1})/(2 h_j) on
/// interior nodes; vertex rows are zero.
Eigen::SparseMatrix<double> assemble_drift1(const NetworkModel& model, const GridLayout& grid);

DiscreteOperator assemble_operator(const NetworkModel& model, const GridLayout& grid);

/// A_h U = -mass^{-1} (K_h U). Throws on dimension mismatch.
State generator_apply(const DiscreteOperator& op, const State& u);

/// Samples per-edge polynomials (plus the implied vertex values) onto the grid.
/// Throws if the profile is discontinuous at a shared vertex.
State sample_profile(const GridLayout& grid, const std::vector<EdgePolynomial>& profile);

/// Flux-balance residual at each vertex: the unscaled vertex row of the
/// discrete system, -[K_h U]_i, minus the exact vertex rate
/// [M r]_i + sum_j phi_ij mu_j c_j(v_i) u_j'(v_i) computed from the
/// polynomial's exact derivative. Zero for constant data; O(h) on smooth data.
Eigen::VectorXd kirchhoff_residual(const DiscreteOperator& op, const NetworkModel& model,
                                   const std::vector<EdgePolynomial>& profile);

} // namespace netsde
