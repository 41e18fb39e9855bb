#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "netsde/assembly.hpp"

namespace netsde {

/// Eigenpairs of the pencil K_h phi = lambda * mass * phi, ascending, with
/// mass-orthonormal modes (Phi^T mass Phi = I). The generator A_h = -mass^{-1} K_h
/// shares the modes with eigenvalues -lambda.
struct SpectralFactorization {
    Eigen::VectorXd eigenvalues; // ascending
    Eigen::MatrixXd modes;       // columns, mass-orthonormal
    Eigen::VectorXd mass;
    int n_vertices = 0; // trailing vertex slots of the nodal layout

    int dim() const { return static_cast<int>(eigenvalues.size()); }

    /// exp(t A_h) v = Phi diag(e^{-lambda t}) Phi^T mass v.
    State apply_expm(double t, const State& v) const;

    /// Dense semigroup matrix in nodal coordinates.
    Eigen::MatrixXd semigroup_matrix(double t) const;

    /// Dense A_h exp(t A_h) in nodal coordinates.
    Eigen::MatrixXd generator_semigroup_matrix(double t) const;
};

/// Solves the generalized symmetric eigenproblem through the symmetric scaling
/// mass^{-1/2} K mass^{-1/2}; deterministic ordering (ascending eigenvalues,
/// first nonzero entry of each mode positive). Throws NumericalError when the
/// residual exceeds 1e-8 * ||K||_inf.
SpectralFactorization factorize(const DiscreteOperator& op);

State expm_apply(const SpectralFactorization& fact, double t, const State& v);

struct SubMarkovEntry {
    double t = 0.0;
    double min_entry = 0.0;        // smallest entry of the semigroup matrix
    double max_image_one = 0.0;    // largest component of exp(tA) * ones
    double max_vertex_image = 0.0; // same, restricted to vertex slots
};

struct SubMarkovReport {
    std::vector<SubMarkovEntry> entries;
    double min_entry = 0.0;
    double max_image_one = 0.0;
};

/// Positivity and sup-norm contraction of the semigroup matrix at each time.
SubMarkovReport check_submarkov(const SpectralFactorization& fact, std::span<const double> ts);

struct AnalyticityReport {
    double supremum = 0.0;
    double t_at_supremum = 0.0;
    std::vector<double> ts;
    std::vector<double> values; // t * ||A exp(tA)||_inf per time
};

/// sup over the supplied times of t * ||A_h exp(t A_h)||_inf (max row sum).
/// A finite, mesh-stable supremum is the discrete analogue of the analytic
/// semigroup bound ||A S(t)|| <= C/t.
AnalyticityReport check_analyticity(const SpectralFactorization& fact,
                                    std::span<const double> ts);

/// count log-spaced points covering [t_lo, t_hi].
std::vector<double> log_spaced(double t_lo, double t_hi, int count);

} // namespace netsde
