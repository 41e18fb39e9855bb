#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "netsde/dynamics.hpp"
#include "netsde/errors.hpp"
#include "testutil.hpp"

using namespace netsde;
using testutil::single_edge_model;
using testutil::star_model;

namespace {

ReactionSpec pure_odd(int k, double leading) {
    return ReactionSpec::polynomial(
        k, CoefficientProfile::constant(leading),
        std::vector<CoefficientProfile>(static_cast<std::size_t>(2 * k + 1),
                                        CoefficientProfile::constant(0.0)));
}

NetworkModel mixed_degree_model() {
    NetworkModel m;
    m.n_vertices = 3;
    for (int j = 0; j < 2; ++j) {
        EdgeSpec e;
        e.tail = j;
        e.head = j + 1;
        e.reaction = pure_odd(j + 1, 1.0); // k_j = 1, 2
        m.edges.push_back(e);
    }
    m.M = -Eigen::MatrixXd::Identity(3, 3);
    m.vertex_noise.assign(3, DiffusionSpec1D::additive(0.0));
    return m;
}

} // namespace

TEST_CASE("degree bookkeeping") {
    NetworkModel m;
    m.n_vertices = 4;
    const int ks[] = {1, 2, 1};
    for (int j = 0; j < 3; ++j) {
        EdgeSpec e;
        e.tail = 0;
        e.head = j + 1;
        e.reaction = pure_odd(ks[j], 1.0);
        m.edges.push_back(e);
    }
    m.M = -Eigen::MatrixXd::Identity(4, 4);
    m.vertex_noise.assign(4, DiffusionSpec1D::additive(0.0));
    const DegreeInfo info = degrees(m);
    CHECK(info.k == 3);
    CHECK(info.K == 5);
    CHECK(info.edge_odd_degree == std::vector<int>{3, 5, 3});

    const DegreeInfo fhn = degrees(star_model());
    CHECK(fhn.k == 3);
    CHECK(fhn.K == 3);
    CHECK(fhn.growth_exponent() == doctest::Approx(1.0));

    auto affine = single_edge_model();
    affine.edges[0].reaction = pure_odd(0, 1.0);
    const DegreeInfo a = degrees(affine);
    CHECK(a.k == 1);
    CHECK(a.K == 1);
}

TEST_CASE("FitzHugh-Nagumo values") {
    const auto r = ReactionSpec::fitzhugh_nagumo(0.5);
    CHECK(r.eval(0.0, 0.0, 0.0) == 0.0);
    CHECK(r.eval(0.0, 0.0, 0.5) == 0.0);
    CHECK(r.eval(0.0, 0.0, 1.0) == 0.0);
    CHECK(r.eval(0.0, 0.0, 2.0) == doctest::Approx(-3.0));

    const auto cubic = pure_odd(1, 1.0);
    CHECK(cubic.eval(0.0, 0.0, 3.0) == doctest::Approx(-27.0));
}

TEST_CASE("reaction evaluation is zero on vertices") {
    auto m = star_model();
    const GridLayout grid = build_grid(m, {5});
    testutil::TestRng rng(3);
    for (int trial = 0; trial < 6; ++trial) {
        State u(grid.dim());
        for (int i = 0; i < grid.dim(); ++i)
            u[i] = rng.uniform(-3.0, 3.0);
        const State f = eval_reaction(m, grid, 0.2 * trial, u);
        for (int i = 0; i < grid.n_vertices; ++i)
            CHECK(f[grid.vertex_index(i)] == 0.0);
        for (int k = 1; k < 5; ++k) {
            const int idx = grid.interior_index(0, k);
            CHECK(f[idx] ==
                  doctest::Approx(u[idx] * (u[idx] - 1.0) * (0.5 - u[idx])).epsilon(1e-14));
        }
    }
}

TEST_CASE("odd reactions have odd symmetry") {
    const auto r = pure_odd(2, 0.7);
    for (double eta : {0.1, 0.9, 2.4, 17.0})
        CHECK(r.eval(0.0, 0.3, -eta) == doctest::Approx(-r.eval(0.0, 0.3, eta)));
}

TEST_CASE("non-finite states raise a blow-up error with the time attached") {
    auto m = single_edge_model();
    const GridLayout grid = build_grid(m, {4});
    State u = State::Zero(grid.dim());
    u[1] = std::numeric_limits<double>::quiet_NaN();
    try {
        eval_reaction(m, grid, 1.25, u);
        FAIL("expected BlowupError");
    } catch (const BlowupError& e) {
        CHECK(e.time() == doctest::Approx(1.25));
    }
}

TEST_CASE("diffusion action is diagonal") {
    auto m = star_model();
    const GridLayout grid = build_grid(m, {4});
    testutil::TestRng rng(9);
    State u(grid.dim()), dw(grid.dim());
    for (int i = 0; i < grid.dim(); ++i) {
        u[i] = rng.uniform(-1.0, 1.0);
        dw[i] = rng.uniform(-1.0, 1.0);
    }
    const State base = eval_diffusion(m, grid, 0.0, u, dw);
    for (int node = 0; node < grid.dim(); ++node) {
        State bumped = u;
        bumped[node] += 0.37;
        const State out = eval_diffusion(m, grid, 0.0, bumped, dw);
        for (int i = 0; i < grid.dim(); ++i)
            if (i != node)
                CHECK(out[i] == base[i]);
    }
}

TEST_CASE("diffusion kinds evaluate as specified") {
    auto m = star_model();
    const GridLayout grid = build_grid(m, {4});
    State u(grid.dim()), dw(grid.dim());
    u.setConstant(0.3);
    dw.setConstant(1.0);

    SUBCASE("zero coefficients give the zero increment") {
        for (auto& e : m.edges)
            e.edge_noise = DiffusionSpec1D::additive(0.0);
        m.vertex_noise.assign(4, DiffusionSpec1D::additive(0.0));
        CHECK(eval_diffusion(m, grid, 0.0, u, dw).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("unit additive noise passes the increment through") {
        for (auto& e : m.edges)
            e.edge_noise = DiffusionSpec1D::additive(1.0);
        m.vertex_noise.assign(4, DiffusionSpec1D::additive(1.0));
        const State out = eval_diffusion(m, grid, 0.0, u, dw);
        CHECK((out - dw).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("linear vertex coefficient multiplies by the state") {
        // k/K = 1 for the all-FitzHugh-Nagumo model, so linear growth is legal.
        m.vertex_noise.assign(
            4, DiffusionSpec1D::polynomial_capped({0.0, 1.0}, 1e18));
        State mixed = u;
        for (int i = 0; i < grid.n_vertices; ++i)
            mixed[grid.vertex_index(i)] = 0.25 * (i + 1);
        const State out = eval_diffusion(m, grid, 0.0, mixed, dw);
        for (int i = 0; i < grid.n_vertices; ++i)
            CHECK(out[grid.vertex_index(i)] == doctest::Approx(0.25 * (i + 1)));
    }
}

TEST_CASE("dissipativity validation accepts FitzHugh-Nagumo at all radii") {
    for (double a : {0.1, 0.5, 0.9}) {
        const auto m = star_model(a);
        for (double radius : {1.0, 10.0, 100.0}) {
            const DissipativityReport report = validate_dissipativity(m, 2000, radius);
            CHECK(report.ok);
            CHECK(report.b > 0.0);
            CHECK_FALSE(report.degenerate);

            // Brute-force oracle: the fitted constants must hold on a fresh
            // dense sample of the same box.
            for (int ei = -7; ei <= 7; ++ei)
                for (int zi = -7; zi <= 7; ++zi) {
                    const double eta = radius * ei / 7.0;
                    const double zeta = radius * zi / 7.0;
                    if (eta == 0.0)
                        continue;
                    const auto& r = m.edges[0].reaction;
                    const double lhs =
                        (r.eval(0.0, 0.5, eta + zeta) - r.eval(0.0, 0.5, zeta)) *
                        (eta > 0 ? 1.0 : -1.0);
                    const double bound = report.a - report.b * std::pow(std::abs(eta), 3) +
                                         report.c * std::pow(std::abs(zeta), 3);
                    CHECK(lhs <= bound + 1e-9 * (1.0 + std::abs(bound)));
                }
        }
    }
}

TEST_CASE("dissipativity validation accepts general bounded-coefficient polynomials") {
    auto m = star_model();
    // Degree-5 reaction with positive variable leading coefficient and
    // bounded lower terms, time-modulated.
    m.edges[0].reaction = ReactionSpec::polynomial(
        2, CoefficientProfile::polynomial({0.8, 0.2}),
        {CoefficientProfile::constant(0.5), CoefficientProfile::samples({-0.2, 0.4}),
         CoefficientProfile::constant(-0.3), CoefficientProfile::constant(0.1),
         CoefficientProfile::constant(0.2)},
        TimeModulation{0.3, 1.0});
    m.edges[1].reaction = pure_odd(1, 2.0);
    REQUIRE(validate_model(m).ok());
    for (double radius : {1.0, 10.0, 100.0}) {
        const DissipativityReport report = validate_dissipativity(m, 2000, radius);
        CHECK(report.ok);
        CHECK(report.b > 0.0);
    }
}

TEST_CASE("dissipativity validation rejects a positive leading term") {
    auto m = single_edge_model();
    m.edges[0].reaction = pure_odd(1, -1.0); // f(eta) = +eta^3
    const DissipativityReport report = validate_dissipativity(m, 500, 10.0);
    CHECK_FALSE(report.ok);
    CHECK(report.message.find("leading") != std::string::npos);
}

TEST_CASE("zero reactions pass as degenerate") {
    const auto m = single_edge_model();
    const DissipativityReport report = validate_dissipativity(m, 500, 5.0);
    CHECK(report.ok);
    CHECK(report.degenerate);
}

TEST_CASE("growth validation") {
    SUBCASE("additive noise has slope zero") {
        auto m = star_model();
        for (auto& e : m.edges)
            e.edge_noise = DiffusionSpec1D::additive(2.0);
        m.vertex_noise.assign(4, DiffusionSpec1D::additive(2.0));
        const GrowthReport report = validate_growth(m);
        CHECK(report.ok);
        CHECK(std::abs(report.worst_slope) < 0.01);
    }
    SUBCASE("bounded multiplicative noise saturates") {
        const auto m = star_model(); // bounded_mult everywhere
        const GrowthReport report = validate_growth(m);
        CHECK(report.ok);
        CHECK(report.worst_slope < 0.05);
    }
    SUBCASE("a quadratic coefficient fails a linear-growth budget") {
        auto m = star_model(); // k/K = 1
        m.vertex_noise[0] = DiffusionSpec1D::polynomial_capped({0.0, 0.0, 1.0}, 1e30);
        const GrowthReport report = validate_growth(m);
        CHECK_FALSE(report.ok);
        CHECK(report.worst_slope == doctest::Approx(2.0).epsilon(0.05));
        CHECK(report.worst_coefficient == "vertex 0");
    }
    SUBCASE("linear growth passes when k/K = 1") {
        auto m = star_model();
        m.vertex_noise.assign(4, DiffusionSpec1D::polynomial_capped({0.0, 1.0}, 1e30));
        const GrowthReport report = validate_growth(m);
        CHECK(report.ok);
        CHECK(report.worst_slope == doctest::Approx(1.0).epsilon(0.02));
    }
}

TEST_CASE("time modulation keeps bounds and shifts values") {
    TimeModulation mod{0.5, 2.0};
    auto r = ReactionSpec::fitzhugh_nagumo(0.5, mod);
    const double base = ReactionSpec::fitzhugh_nagumo(0.5).eval(0.0, 0.0, 2.0);
    CHECK(r.eval(0.0, 0.0, 2.0) == doctest::Approx(base)); // sin(0) = 0
    const double t = 0.785;
    CHECK(r.eval(t, 0.0, 2.0) ==
          doctest::Approx((1.0 + 0.5 * std::sin(2.0 * t)) * base));

    auto m = star_model();
    for (auto& e : m.edges)
        e.reaction = ReactionSpec::fitzhugh_nagumo(0.5, mod);
    CHECK(validate_model(m).ok());
    CHECK(validate_dissipativity(m, 1000, 10.0).ok);
}

TEST_CASE("degenerate modulation amplitude is rejected") {
    auto m = star_model();
    m.edges[0].reaction = ReactionSpec::fitzhugh_nagumo(0.5, TimeModulation{1.0, 1.0});
    CHECK_FALSE(validate_model(m).ok());
}
