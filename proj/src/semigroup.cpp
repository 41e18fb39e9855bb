#include "netsde/semigroup.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "netsde/errors.hpp"

namespace netsde {

SpectralFactorization factorize(const DiscreteOperator& op) {
    const int n = static_cast<int>(op.mass.size());
    if ((op.mass.array() <= 0.0).any())
        throw std::invalid_argument("factorize: mass weights must be positive");

    const Eigen::VectorXd sqrt_m = op.mass.cwiseSqrt();
    const Eigen::VectorXd inv_sqrt_m = sqrt_m.cwiseInverse();
    Eigen::MatrixXd scaled = Eigen::MatrixXd(op.stiffness);
    scaled = inv_sqrt_m.asDiagonal() * scaled * inv_sqrt_m.asDiagonal();
    scaled = 0.5 * (scaled + scaled.transpose()).eval(); // clean roundoff asymmetry

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(scaled);
    if (solver.info() != Eigen::Success)
        throw NumericalError("factorize: eigensolver failed to converge");

    SpectralFactorization fact;
    fact.eigenvalues = solver.eigenvalues();
    fact.modes = inv_sqrt_m.asDiagonal() * solver.eigenvectors();
    fact.mass = op.mass;
    fact.n_vertices = op.layout.n_vertices;

    // Sign convention: first entry above roundoff positive.
    for (int c = 0; c < n; ++c) {
        const double scale = fact.modes.col(c).cwiseAbs().maxCoeff();
        for (int r = 0; r < n; ++r) {
            const double v = fact.modes(r, c);
            if (std::abs(v) > 1e-12 * scale) {
                if (v < 0.0)
                    fact.modes.col(c) *= -1.0;
                break;
            }
        }
    }

    const double k_norm = Eigen::MatrixXd(op.stiffness).cwiseAbs().rowwise().sum().maxCoeff();
    const Eigen::MatrixXd residual =
        op.stiffness * fact.modes -
        op.mass.asDiagonal() * (fact.modes * fact.eigenvalues.asDiagonal());
    const double res = residual.cwiseAbs().maxCoeff();
    if (res > 1e-8 * std::max(k_norm, 1e-300)) {
        std::ostringstream os;
        os << "factorize: eigen residual " << res << " exceeds 1e-8 * " << k_norm;
        throw NumericalError(os.str());
    }
    return fact;
}

State SpectralFactorization::apply_expm(double t, const State& v) const {
    if (t < 0.0)
        throw std::invalid_argument("apply_expm: t must be nonnegative");
    if (v.size() != mass.size())
        throw std::invalid_argument("apply_expm: dimension mismatch");
    const Eigen::VectorXd coeff = modes.transpose() * mass.cwiseProduct(v);
    const Eigen::VectorXd damped = (-t * eigenvalues.array()).exp() * coeff.array();
    return modes * damped;
}

Eigen::MatrixXd SpectralFactorization::semigroup_matrix(double t) const {
    const Eigen::VectorXd damp = (-t * eigenvalues.array()).exp();
    return modes * damp.asDiagonal() * modes.transpose() * mass.asDiagonal();
}

Eigen::MatrixXd SpectralFactorization::generator_semigroup_matrix(double t) const {
    const Eigen::VectorXd damp =
        (-eigenvalues.array()) * (-t * eigenvalues.array()).exp();
    return modes * damp.asDiagonal() * modes.transpose() * mass.asDiagonal();
}

State expm_apply(const SpectralFactorization& fact, double t, const State& v) {
    return fact.apply_expm(t, v);
}

SubMarkovReport check_submarkov(const SpectralFactorization& fact, std::span<const double> ts) {
    SubMarkovReport report;
    report.min_entry = std::numeric_limits<double>::infinity();
    report.max_image_one = -std::numeric_limits<double>::infinity();
    const int n_total = fact.dim();
    for (double t : ts) {
        if (t < 0.0)
            throw std::invalid_argument("check_submarkov: times must be nonnegative");
        const Eigen::MatrixXd s = fact.semigroup_matrix(t);
        const Eigen::VectorXd image = s * Eigen::VectorXd::Ones(n_total);
        SubMarkovEntry entry;
        entry.t = t;
        entry.min_entry = s.minCoeff();
        entry.max_image_one = image.maxCoeff();
        entry.max_vertex_image =
            fact.n_vertices > 0 ? image.tail(fact.n_vertices).maxCoeff() : entry.max_image_one;
        report.entries.push_back(entry);
        report.min_entry = std::min(report.min_entry, entry.min_entry);
        report.max_image_one = std::max(report.max_image_one, entry.max_image_one);
    }
    return report;
}

AnalyticityReport check_analyticity(const SpectralFactorization& fact,
                                    std::span<const double> ts) {
    AnalyticityReport report;
    for (double t : ts) {
        if (!(t > 0.0))
            throw std::invalid_argument("check_analyticity: times must be positive");
        const Eigen::MatrixXd g = fact.generator_semigroup_matrix(t);
        const double value = t * g.cwiseAbs().rowwise().sum().maxCoeff();
        report.ts.push_back(t);
        report.values.push_back(value);
        if (value > report.supremum) {
            report.supremum = value;
            report.t_at_supremum = t;
        }
    }
    return report;
}

std::vector<double> log_spaced(double t_lo, double t_hi, int count) {
    if (!(t_lo > 0.0) || !(t_hi > t_lo) || count < 2)
        throw std::invalid_argument("log_spaced: need 0 < t_lo < t_hi and count >= 2");
    std::vector<double> ts(static_cast<std::size_t>(count));
    const double l0 = std::log(t_lo);
    const double l1 = std::log(t_hi);
    for (int i = 0; i < count; ++i)
        ts[static_cast<std::size_t>(i)] = std::exp(l0 + (l1 - l0) * i / (count - 1));
    return ts;
}

} // namespace netsde
