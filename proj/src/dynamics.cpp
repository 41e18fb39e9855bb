#include "netsde/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "netsde/errors.hpp"

namespace netsde {

DegreeInfo degrees(const NetworkModel& model) {
    if (model.edges.empty())
        throw std::invalid_argument("degrees: model has no edges");
    DegreeInfo info;
    int kmin = model.edges.front().reaction.kj();
    int kmax = kmin;
    info.edge_odd_degree.reserve(model.edges.size());
    for (const EdgeSpec& e : model.edges) {
        const int kj = e.reaction.kj();
        kmin = std::min(kmin, kj);
        kmax = std::max(kmax, kj);
        info.edge_odd_degree.push_back(2 * kj + 1);
    }
    info.k = 2 * kmin + 1;
    info.K = 2 * kmax + 1;
    return info;
}

State eval_reaction(const NetworkModel& model, const GridLayout& grid, double t, const State& u) {
    if (u.size() != grid.dim())
        throw std::invalid_argument("eval_reaction: state dimension mismatch");
    if (!u.allFinite())
        throw BlowupError(t, "non-finite state entry at t=" + std::to_string(t));
    State f = State::Zero(grid.dim());
    for (int j = 0; j < grid.n_edges(); ++j) {
        const ReactionSpec& r = model.edges[j].reaction;
        if (r.kind == ReactionSpec::Kind::Zero)
            continue;
        const double h = grid.h(j);
        for (int k = 1; k < grid.cells[j]; ++k) {
            const int idx = grid.interior_index(j, k);
            f[idx] = r.eval(t, k * h, u[idx]);
        }
    }
    return f;
}

State eval_diffusion(const NetworkModel& model, const GridLayout& grid, double t,
                     const State& u, const Eigen::VectorXd& dw) {
    if (u.size() != grid.dim() || dw.size() != grid.dim())
        throw std::invalid_argument("eval_diffusion: dimension mismatch");
    const double kk = degrees(model).growth_exponent();
    State out = State::Zero(grid.dim());
    for (int j = 0; j < grid.n_edges(); ++j) {
        const DiffusionSpec1D& hj = model.edges[j].edge_noise;
        for (int k = 1; k < grid.cells[j]; ++k) {
            const int idx = grid.interior_index(j, k);
            out[idx] = hj.value(t, u[idx], kk) * dw[idx];
        }
    }
    for (int i = 0; i < grid.n_vertices; ++i) {
        const int idx = grid.vertex_index(i);
        out[idx] = model.vertex_noise[i].value(t, u[idx], kk) * dw[idx];
    }
    return out;
}

namespace {

constexpr double kTimeSamples[] = {0.0, 0.37, 1.7, 6.3};
constexpr double kDegenerateB = 1e-12;

// Smallest sampled leading coefficient of the odd top-degree term.
double leading_lower_bound(const ReactionSpec& r) {
    const double mod_min = 1.0 - std::abs(r.modulation.amplitude);
    switch (r.kind) {
    case ReactionSpec::Kind::Zero: return 0.0;
    case ReactionSpec::Kind::FitzHughNagumo: return mod_min;
    case ReactionSpec::Kind::Polynomial: return mod_min * r.leading.min_sampled();
    }
    return 0.0;
}

} // namespace

DissipativityReport validate_dissipativity(const NetworkModel& model, int samples,
                                           double radius) {
    if (samples < 1 || !(radius > 0.0))
        throw std::invalid_argument("validate_dissipativity: need samples >= 1 and radius > 0");
    DissipativityReport report;
    report.ok = true;
    report.degenerate = true;
    report.b = std::numeric_limits<double>::infinity();
    report.worst_slack = std::numeric_limits<double>::infinity();

    const int grid_n = std::max(3, static_cast<int>(std::ceil(std::sqrt(samples))));
    std::vector<double> etas(grid_n);
    for (int i = 0; i < grid_n; ++i)
        etas[i] = -radius + 2.0 * radius * i / (grid_n - 1);

    for (int j = 0; j < model.n_edges(); ++j) {
        const ReactionSpec& r = model.edges[j].reaction;
        const int deg = 2 * r.kj() + 1;
        double b = kDegenerateB;
        if (r.kind != ReactionSpec::Kind::Zero) {
            report.degenerate = false;
            const double lead = leading_lower_bound(r);
            if (!(lead > 0.0)) {
                report.ok = false;
                report.worst_edge = j;
                std::ostringstream os;
                os << "edge " << j << ": leading reaction coefficient is not strictly "
                   << "positive (no b > 0 fits the one-sided bound)";
                report.message = os.str();
                return report;
            }
            b = 0.5 * lead;
        }

        // Residual r(eta, zeta) = LHS + b|eta|^deg must fit below a + c|zeta|^deg.
        double a_fit = 0.0;
        double c_fit = 0.0;
        auto for_samples = [&](auto&& fn) {
            for (double t : kTimeSamples)
                for (double x : {0.0, 0.25, 0.5, 0.75, 1.0})
                    for (double eta : etas) {
                        if (eta == 0.0)
                            continue;
                        for (double zeta : etas) {
                            const double lhs = (r.eval(t, x, eta + zeta) - r.eval(t, x, zeta)) *
                                               (eta > 0.0 ? 1.0 : -1.0);
                            fn(eta, zeta, lhs);
                        }
                    }
        };
        for_samples([&](double eta, double zeta, double lhs) {
            const double res = lhs + b * std::pow(std::abs(eta), deg);
            if (std::abs(zeta) <= 1.0)
                a_fit = std::max(a_fit, res);
        });
        for_samples([&](double eta, double zeta, double lhs) {
            const double res = lhs + b * std::pow(std::abs(eta), deg);
            if (std::abs(zeta) > 1.0)
                c_fit = std::max(c_fit, (res - a_fit) / std::pow(std::abs(zeta), deg));
        });
        c_fit = std::max(c_fit, 0.0);

        double worst = std::numeric_limits<double>::infinity();
        double w_eta = 0.0, w_zeta = 0.0;
        for_samples([&](double eta, double zeta, double lhs) {
            const double slack = a_fit - b * std::pow(std::abs(eta), deg) +
                                 c_fit * std::pow(std::abs(zeta), deg) - lhs;
            if (slack < worst) {
                worst = slack;
                w_eta = eta;
                w_zeta = zeta;
            }
        });
        if (worst < -1e-9 * (1.0 + a_fit)) {
            report.ok = false;
            report.worst_edge = j;
            std::ostringstream os;
            os << "edge " << j << ": fitted constants violated at eta=" << w_eta
               << " zeta=" << w_zeta;
            report.message = os.str();
        }
        if (worst < report.worst_slack) {
            report.worst_slack = worst;
            report.witness_eta = w_eta;
            report.witness_zeta = w_zeta;
            report.worst_edge = j;
        }
        report.a = std::max(report.a, a_fit);
        report.b = std::min(report.b, b);
        report.c = std::max(report.c, c_fit);
    }
    if (report.ok)
        report.message = report.degenerate
                             ? "all reactions vanish; bound holds with arbitrarily small b"
                             : "one-sided polynomial bound fitted on all samples";
    return report;
}

namespace {

struct SlopeFit {
    double slope = 0.0;
    double scale = 0.0;
    double max_dq = 0.0;
};

SlopeFit probe_coefficient(const DiffusionSpec1D& g, double kk) {
    SlopeFit fit;
    std::vector<double> logx, logv;
    for (int sign = -1; sign <= 1; sign += 2)
        for (double e = -2.0; e <= 6.0 + 1e-9; e += 0.1) {
            const double eta = sign * std::pow(10.0, e);
            double v = 0.0;
            for (double t : kTimeSamples)
                v = std::max(v, std::abs(g.value(t, eta, kk)));
            fit.scale = std::max(fit.scale, v / std::pow(1.0 + std::abs(eta), kk));
            if (std::abs(eta) >= 1e3 && v > 0.0) {
                logx.push_back(std::log(1.0 + std::abs(eta)));
                logv.push_back(std::log(v));
            }
        }
    if (logx.size() >= 2) {
        // Least-squares slope over the tail decades.
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(logx.size());
        for (std::size_t i = 0; i < logx.size(); ++i) {
            sx += logx[i];
            sy += logv[i];
            sxx += logx[i] * logx[i];
            sxy += logx[i] * logv[i];
        }
        const double denom = n * sxx - sx * sx;
        if (denom > 0.0)
            fit.slope = (n * sxy - sx * sy) / denom;
    }
    for (double ball : {1.0, 10.0, 100.0}) {
        const double delta = 1e-3 * ball;
        for (int i = -8; i <= 8; ++i) {
            const double eta = ball * i / 8.0;
            const double dq =
                std::abs(g.value(0.0, eta + delta, kk) - g.value(0.0, eta, kk)) / delta;
            fit.max_dq = std::max(fit.max_dq, dq);
        }
    }
    return fit;
}

} // namespace

GrowthReport validate_growth(const NetworkModel& model) {
    GrowthReport report;
    const double kk = degrees(model).growth_exponent();
    report.allowed_exponent = kk;
    report.ok = true;
    report.worst_slope = -std::numeric_limits<double>::infinity();

    auto consider = [&](const DiffusionSpec1D& g, const std::string& name) {
        const SlopeFit fit = probe_coefficient(g, kk);
        report.fitted_scale = std::max(report.fitted_scale, fit.scale);
        report.max_difference_quotient = std::max(report.max_difference_quotient, fit.max_dq);
        if (fit.slope > report.worst_slope) {
            report.worst_slope = fit.slope;
            report.worst_coefficient = name;
        }
    };
    for (int j = 0; j < model.n_edges(); ++j)
        consider(model.edges[j].edge_noise, "edge " + std::to_string(j));
    for (int i = 0; i < model.n_vertices; ++i)
        consider(model.vertex_noise[i], "vertex " + std::to_string(i));

    if (report.worst_slope > kk + 0.01) {
        report.ok = false;
        std::ostringstream os;
        os << report.worst_coefficient << ": empirical growth exponent " << report.worst_slope
           << " exceeds the admissible " << kk << " + 0.01";
        report.message = os.str();
    } else {
        report.message = "all noise coefficients within the admissible growth exponent";
    }
    return report;
}

} // namespace netsde
