#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "netsde/coefficients.hpp"

namespace netsde {

/// Bounded time modulation of reaction coefficients: factor(t) = 1 + amplitude*sin(omega*t).
/// |amplitude| < 1 keeps the modulated leading coefficient bounded away from zero.
struct TimeModulation {
    double amplitude = 0.0;
    double omega = 0.0;

    double factor(double t) const;
    bool trivial() const { return amplitude == 0.0; }
    bool operator==(const TimeModulation&) const = default;
};

/// Reaction on one edge: an odd-degree polynomial in the state with negative
/// leading term, the FitzHugh-Nagumo cubic eta*(eta-1)*(a-eta), or zero.
struct ReactionSpec {
    enum class Kind { Zero, FitzHughNagumo, Polynomial };

    Kind kind = Kind::Zero;
    double fhn_a = 0.5;                    // FitzHughNagumo: a in (0,1)
    int degree_k = 0;                      // Polynomial: highest power is 2k+1
    CoefficientProfile leading;            // Polynomial: coefficient of -eta^(2k+1)
    std::vector<CoefficientProfile> lower; // Polynomial: powers 0..2k
    TimeModulation modulation;

    static ReactionSpec zero();
    static ReactionSpec fitzhugh_nagumo(double a, TimeModulation mod = {});
    static ReactionSpec polynomial(int k, CoefficientProfile leading,
                                   std::vector<CoefficientProfile> lower,
                                   TimeModulation mod = {});

    /// Degree index k_j (Zero counts as 0, FitzHugh-Nagumo as 1).
    int kj() const;
    double eval(double t, double x, double eta) const;
    bool operator==(const ReactionSpec&) const = default;
};

/// Scalar noise coefficient (edge h_j or vertex g_i); acts pointwise on the state.
struct DiffusionSpec1D {
    enum class Kind { Additive, BoundedMultiplicative, PolynomialCapped };

    Kind kind = Kind::Additive;
    double sigma = 0.0;                 // Additive / BoundedMultiplicative
    double saturation = 1.0;            // BoundedMultiplicative: cap argument at |eta| = s
    std::vector<double> coeffs;         // PolynomialCapped, lowest degree first
    double cap = 1.0;                   // PolynomialCapped: clamp to [-cap, cap]

    static DiffusionSpec1D additive(double sigma);
    static DiffusionSpec1D bounded_multiplicative(double sigma, double saturation);
    static DiffusionSpec1D polynomial_capped(std::vector<double> coeffs, double cap);

    /// Pointwise coefficient value; growth_exponent is the model's k/K ratio
    /// used by the bounded multiplicative kind.
    double value(double t, double eta, double growth_exponent) const;
    bool operator==(const DiffusionSpec1D&) const = default;
};

/// One edge of the network, parametrized on [0,1] from tail to head.
struct EdgeSpec {
    int tail = 0; // vertex index of the x=0 endpoint
    int head = 1; // vertex index of the x=1 endpoint
    double mu = 1.0;
    CoefficientProfile c = CoefficientProfile::constant(1.0); // conductance, > 0
    CoefficientProfile d = CoefficientProfile::constant(0.0); // first-order drift
    CoefficientProfile p = CoefficientProfile::constant(0.0); // potential, >= 0
    ReactionSpec reaction;
    DiffusionSpec1D edge_noise;
};

/// The full problem statement: topology, coefficients, vertex coupling matrix,
/// and noise specification. Immutable after construction; safe to share.
struct NetworkModel {
    int n_vertices = 0;
    std::vector<EdgeSpec> edges;
    Eigen::MatrixXd M; // n x n vertex coupling
    std::vector<DiffusionSpec1D> vertex_noise;

    int n_edges() const { return static_cast<int>(edges.size()); }
};

struct Violation {
    std::string rule;
    int i = -1;
    int j = -1;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

/// Checks the three standing conditions on the vertex coupling matrix:
/// (1) symmetric within 1e-12 * ||M||_inf, (2) nonnegative off-diagonal,
/// (3) strictly negative row sums. Returns the violations, never throws.
ValidationReport validate_vertex_matrix(const Eigen::MatrixXd& M);

/// Full model validation: connectivity, index bounds, no self-loops,
/// positivity of mu and c, nonnegativity of p, reaction/noise hypotheses,
/// and the vertex matrix conditions.
ValidationReport validate_model(const NetworkModel& model);

struct Incidence {
    Eigen::MatrixXd plus;  // n x m, 1 where edge j starts at vertex i
    Eigen::MatrixXd minus; // n x m, 1 where edge j ends at vertex i
    Eigen::MatrixXd signed_incidence; // plus - minus
};

Incidence build_incidence(const NetworkModel& model);

/// Indices of the edges meeting each vertex (0-based).
std::vector<std::vector<int>> gamma_sets(const NetworkModel& model);

struct WeightedIncidence {
    Eigen::MatrixXd plus;  // mu_j * c_j(0) at tails
    Eigen::MatrixXd minus; // mu_j * c_j(1) at heads
};

WeightedIncidence weighted_incidence(const NetworkModel& model);

} // namespace netsde
