#pragma once

#include <string>
#include <vector>

#include "netsde/assembly.hpp"
#include "netsde/grid.hpp"
#include "netsde/network.hpp"

namespace netsde {

/// Degree bookkeeping for the reaction polynomials: K = 2*max k_j + 1,
/// k = 2*min k_j + 1. The ratio k/K bounds the admissible noise growth.
struct DegreeInfo {
    int k = 1;
    int K = 1;
    std::vector<int> edge_odd_degree; // 2*k_j + 1 per edge

    double growth_exponent() const { return static_cast<double>(k) / static_cast<double>(K); }
};

DegreeInfo degrees(const NetworkModel& model);

/// Nemytskii evaluation of the reactions: f_j(t, x_k, U_k) on interior nodes,
/// zero on vertex slots. Throws BlowupError when the state has non-finite
/// entries (carrying t).
State eval_reaction(const NetworkModel& model, const GridLayout& grid, double t, const State& u);

/// Diagonal noise action: h_j(t, U_k) * dW_k on interior nodes and
/// g_i(t, r_i) * dW_vertex on vertex slots.
State eval_diffusion(const NetworkModel& model, const GridLayout& grid, double t,
                     const State& u, const Eigen::VectorXd& dw);

struct DissipativityReport {
    bool ok = false;
    double a = 0.0;
    double b = 0.0; // must be strictly positive for a passing fit
    double c = 0.0;
    double worst_slack = 0.0;
    double witness_eta = 0.0;
    double witness_zeta = 0.0;
    int worst_edge = -1;
    bool degenerate = false; // zero reaction: passes with an arbitrarily small b
    std::string message;
};

/// Samples (t, x, eta, zeta) on [-R, R] and fits constants a, c and b > 0 with
///   [f_j(t,x,eta+zeta) - f_j(t,x,zeta)] * sign(eta) <= a - b|eta|^(2k_j+1) + c|zeta|^(2k_j+1)
/// on every sample. Fails when no positive b fits (nonnegative leading term).
DissipativityReport validate_dissipativity(const NetworkModel& model, int samples, double radius);

struct GrowthReport {
    bool ok = false;
    double allowed_exponent = 0.0; // k/K
    double worst_slope = 0.0;      // largest empirical log-log tail slope
    double fitted_scale = 0.0;     // smallest c' with |coef| <= c'(1+|eta|)^(k/K) on samples
    double max_difference_quotient = 0.0; // local Lipschitz probe
    std::string worst_coefficient;
    std::string message;
};

/// Samples every noise coefficient over a log-spaced range of |eta| up to 1e6
/// and verifies the growth bound |coef| <= c'(1+|eta|)^(k/K); fails when the
/// empirical tail exponent exceeds k/K + 0.01. Also probes local Lipschitz
/// continuity through difference quotients on nested balls.
GrowthReport validate_growth(const NetworkModel& model);

} // namespace netsde
