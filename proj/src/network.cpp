#include "netsde/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace netsde {

double TimeModulation::factor(double t) const {
    return 1.0 + amplitude * std::sin(omega * t);
}

ReactionSpec ReactionSpec::zero() { return ReactionSpec{}; }

ReactionSpec ReactionSpec::fitzhugh_nagumo(double a, TimeModulation mod) {
    ReactionSpec r;
    r.kind = Kind::FitzHughNagumo;
    r.fhn_a = a;
    r.modulation = mod;
    return r;
}

ReactionSpec ReactionSpec::polynomial(int k, CoefficientProfile leading,
                                      std::vector<CoefficientProfile> lower,
                                      TimeModulation mod) {
    if (k < 0)
        throw std::invalid_argument("reaction degree index must be nonnegative");
    if (static_cast<int>(lower.size()) != 2 * k + 1)
        throw std::invalid_argument("polynomial reaction needs 2k+1 lower coefficients");
    ReactionSpec r;
    r.kind = Kind::Polynomial;
    r.degree_k = k;
    r.leading = std::move(leading);
    r.lower = std::move(lower);
    r.modulation = mod;
    return r;
}

int ReactionSpec::kj() const {
    switch (kind) {
    case Kind::Zero: return 0;
    case Kind::FitzHughNagumo: return 1;
    case Kind::Polynomial: return degree_k;
    }
    return 0;
}

double ReactionSpec::eval(double t, double x, double eta) const {
    double base = 0.0;
    switch (kind) {
    case Kind::Zero:
        return 0.0;
    case Kind::FitzHughNagumo:
        base = eta * (eta - 1.0) * (fhn_a - eta);
        break;
    case Kind::Polynomial: {
        double poweta = 1.0;
        for (const auto& a_l : lower) { // powers 0..2k
            base += a_l(x) * poweta;
            poweta *= eta;
        }
        base -= leading(x) * poweta; // poweta == eta^(2k+1) after the loop
        break;
    }
    }
    return modulation.trivial() ? base : modulation.factor(t) * base;
}

ValidationReport validate_vertex_matrix(const Eigen::MatrixXd& M) {
    ValidationReport report;
    if (M.rows() != M.cols()) {
        report.violations.push_back({"square", -1, -1, "vertex matrix must be square"});
        return report;
    }
    const int n = static_cast<int>(M.rows());
    if (!M.allFinite()) {
        report.violations.push_back({"finite", -1, -1, "vertex matrix has non-finite entries"});
        return report;
    }
    const double scale = M.cwiseAbs().rowwise().sum().maxCoeff();
    const double sym_tol = 1e-12 * scale;
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k)
            if (std::abs(M(i, k) - M(k, i)) > sym_tol) {
                std::ostringstream os;
                os << "entries (" << i + 1 << "," << k + 1 << ") and (" << k + 1 << ","
                   << i + 1 << ") differ by " << std::abs(M(i, k) - M(k, i));
                report.violations.push_back({"symmetry", i, k, os.str()});
            }
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            if (i != k && M(i, k) < 0.0) {
                std::ostringstream os;
                os << "off-diagonal entry (" << i + 1 << "," << k + 1 << ") = " << M(i, k)
                   << " must be nonnegative";
                report.violations.push_back({"offdiagonal-sign", i, k, os.str()});
            }
    for (int i = 0; i < n; ++i) {
        const double row_sum = M.row(i).sum();
        if (!(row_sum < 0.0)) {
            std::ostringstream os;
            os << "row " << i + 1 << " sum = " << row_sum << ", violates strict negativity";
            report.violations.push_back({"row-sum", i, -1, os.str()});
        }
    }
    return report;
}

namespace {

void validate_reaction(const ReactionSpec& r, int edge, ValidationReport& report) {
    switch (r.kind) {
    case ReactionSpec::Kind::Zero:
        break;
    case ReactionSpec::Kind::FitzHughNagumo:
        if (!(r.fhn_a > 0.0 && r.fhn_a < 1.0))
            report.violations.push_back({"reaction-fhn-a", -1, edge,
                                         "FitzHugh-Nagumo parameter must lie in (0,1)"});
        break;
    case ReactionSpec::Kind::Polynomial:
        if (static_cast<int>(r.lower.size()) != 2 * r.degree_k + 1)
            report.violations.push_back({"reaction-coefficient-count", -1, edge,
                                         "polynomial reaction needs 2k+1 lower coefficients"});
        if (!(r.leading.min_sampled() > 0.0))
            report.violations.push_back({"reaction-leading-coefficient", -1, edge,
                                         "leading reaction coefficient must be strictly positive"});
        break;
    }
    if (!(std::abs(r.modulation.amplitude) < 1.0))
        report.violations.push_back({"reaction-modulation", -1, edge,
                                     "modulation amplitude must have magnitude below 1"});
}

void validate_noise(const DiffusionSpec1D& g, const std::string& where, int idx,
                    ValidationReport& report) {
    switch (g.kind) {
    case DiffusionSpec1D::Kind::Additive:
        if (g.sigma < 0.0)
            report.violations.push_back({where + "-sigma", idx, -1, "sigma must be nonnegative"});
        break;
    case DiffusionSpec1D::Kind::BoundedMultiplicative:
        if (g.sigma < 0.0)
            report.violations.push_back({where + "-sigma", idx, -1, "sigma must be nonnegative"});
        if (!(g.saturation > 0.0))
            report.violations.push_back({where + "-saturation", idx, -1,
                                         "saturation must be strictly positive"});
        break;
    case DiffusionSpec1D::Kind::PolynomialCapped:
        if (!(g.cap > 0.0))
            report.violations.push_back({where + "-cap", idx, -1, "cap must be strictly positive"});
        if (g.coeffs.empty())
            report.violations.push_back({where + "-coeffs", idx, -1,
                                         "capped polynomial noise needs coefficients"});
        break;
    }
}

} // namespace

ValidationReport validate_model(const NetworkModel& model) {
    ValidationReport report;
    const int n = model.n_vertices;
    const int m = model.n_edges();
    if (n < 1)
        report.violations.push_back({"vertex-count", -1, -1, "need at least one vertex"});
    if (m < 1)
        report.violations.push_back({"edge-count", -1, -1, "need at least one edge"});
    if (!report.ok())
        return report;

    for (int j = 0; j < m; ++j) {
        const EdgeSpec& e = model.edges[j];
        if (e.tail < 0 || e.tail >= n || e.head < 0 || e.head >= n) {
            std::ostringstream os;
            os << "edge " << j << " references vertex outside 0.." << n - 1;
            report.violations.push_back({"edge-endpoint", -1, j, os.str()});
            continue;
        }
        if (e.tail == e.head)
            report.violations.push_back({"self-loop", -1, j,
                                         "self-loops are rejected; flux bookkeeping at a loop "
                                         "endpoint is ambiguous"});
        if (!(e.mu > 0.0))
            report.violations.push_back({"mu-positive", -1, j, "mu must be strictly positive"});
        if (!(e.c.min_sampled() > 0.0))
            report.violations.push_back({"c-positive", -1, j, "c must be strictly positive"});
        if (e.p.min_sampled() < 0.0)
            report.violations.push_back({"p-nonnegative", -1, j, "p must be nonnegative"});
        validate_reaction(e.reaction, j, report);
        validate_noise(e.edge_noise, "edge-noise", j, report);
    }

    // Connectivity over the undirected support, and no isolated vertices.
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    std::vector<bool> touched(n, false);
    for (const EdgeSpec& e : model.edges) {
        if (e.tail < 0 || e.tail >= n || e.head < 0 || e.head >= n)
            continue;
        touched[e.tail] = touched[e.head] = true;
        parent[find(e.tail)] = find(e.head);
    }
    for (int i = 0; i < n; ++i)
        if (!touched[i]) {
            std::ostringstream os;
            os << "vertex " << i << " has no incident edge";
            report.violations.push_back({"isolated-vertex", i, -1, os.str()});
        }
    int components = 0;
    for (int i = 0; i < n; ++i)
        if (touched[i] && find(i) == i)
            ++components;
    if (components > 1)
        report.violations.push_back({"connectivity", -1, -1, "graph must be connected"});

    if (model.M.rows() != n || model.M.cols() != n) {
        report.violations.push_back({"vertex-matrix-shape", -1, -1,
                                     "vertex matrix must be n x n"});
    } else {
        auto mm = validate_vertex_matrix(model.M);
        report.violations.insert(report.violations.end(), mm.violations.begin(),
                                 mm.violations.end());
    }

    if (static_cast<int>(model.vertex_noise.size()) != n)
        report.violations.push_back({"vertex-noise-count", -1, -1,
                                     "need one vertex noise spec per vertex"});
    else
        for (int i = 0; i < n; ++i)
            validate_noise(model.vertex_noise[i], "vertex-noise", i, report);

    return report;
}

std::string ValidationReport::to_string() const {
    if (ok())
        return "ok";
    std::ostringstream os;
    for (const auto& v : violations)
        os << "[" << v.rule << "] " << v.detail << "\n";
    return os.str();
}

namespace {

void require_endpoints(const NetworkModel& model) {
    const int n = model.n_vertices;
    for (int j = 0; j < model.n_edges(); ++j) {
        const EdgeSpec& e = model.edges[j];
        if (e.tail < 0 || e.tail >= n || e.head < 0 || e.head >= n)
            throw std::invalid_argument("edge " + std::to_string(j) +
                                        " references a vertex outside the model");
    }
}

} // namespace

Incidence build_incidence(const NetworkModel& model) {
    require_endpoints(model);
    const int n = model.n_vertices;
    const int m = model.n_edges();
    Incidence inc;
    inc.plus = Eigen::MatrixXd::Zero(n, m);
    inc.minus = Eigen::MatrixXd::Zero(n, m);
    for (int j = 0; j < m; ++j) {
        inc.plus(model.edges[j].tail, j) = 1.0;
        inc.minus(model.edges[j].head, j) = 1.0;
    }
    inc.signed_incidence = inc.plus - inc.minus;
    return inc;
}

std::vector<std::vector<int>> gamma_sets(const NetworkModel& model) {
    require_endpoints(model);
    std::vector<std::vector<int>> gamma(model.n_vertices);
    for (int j = 0; j < model.n_edges(); ++j) {
        gamma[model.edges[j].tail].push_back(j);
        if (model.edges[j].head != model.edges[j].tail)
            gamma[model.edges[j].head].push_back(j);
    }
    for (int i = 0; i < model.n_vertices; ++i)
        if (gamma[i].empty())
            throw std::invalid_argument("vertex " + std::to_string(i) +
                                        " is isolated; every vertex needs an incident edge");
    return gamma;
}

WeightedIncidence weighted_incidence(const NetworkModel& model) {
    require_endpoints(model);
    const int n = model.n_vertices;
    const int m = model.n_edges();
    WeightedIncidence w;
    w.plus = Eigen::MatrixXd::Zero(n, m);
    w.minus = Eigen::MatrixXd::Zero(n, m);
    for (int j = 0; j < m; ++j) {
        const EdgeSpec& e = model.edges[j];
        w.plus(e.tail, j) = e.mu * e.c(0.0);
        w.minus(e.head, j) = e.mu * e.c(1.0);
    }
    return w;
}

DiffusionSpec1D DiffusionSpec1D::additive(double sigma) {
    DiffusionSpec1D g;
    g.kind = Kind::Additive;
    g.sigma = sigma;
    return g;
}

DiffusionSpec1D DiffusionSpec1D::bounded_multiplicative(double sigma, double saturation) {
    DiffusionSpec1D g;
    g.kind = Kind::BoundedMultiplicative;
    g.sigma = sigma;
    g.saturation = saturation;
    return g;
}

DiffusionSpec1D DiffusionSpec1D::polynomial_capped(std::vector<double> coeffs, double cap) {
    DiffusionSpec1D g;
    g.kind = Kind::PolynomialCapped;
    g.coeffs = std::move(coeffs);
    g.cap = cap;
    return g;
}

double DiffusionSpec1D::value(double /*t*/, double eta, double growth_exponent) const {
    switch (kind) {
    case Kind::Additive:
        return sigma;
    case Kind::BoundedMultiplicative:
        return sigma * std::pow(1.0 + std::min(std::abs(eta), saturation), growth_exponent);
    case Kind::PolynomialCapped: {
        double acc = 0.0;
        for (std::size_t i = coeffs.size(); i-- > 0;)
            acc = acc * eta + coeffs[i];
        return std::clamp(acc, -cap, cap);
    }
    }
    return 0.0;
}

} // namespace netsde
