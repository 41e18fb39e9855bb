#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "netsde/noise.hpp"
#include "netsde/rng.hpp"
#include "testutil.hpp"

using namespace netsde;
using testutil::single_edge_model;

TEST_CASE("counter rng is deterministic and address-sensitive") {
    const CounterRng a(42, 0);
    const CounterRng b(42, 0);
    CHECK(a.normal(3, 7) == b.normal(3, 7));
    CHECK(a.normal(3, 7) != a.normal(3, 8));
    CHECK(a.normal(3, 7) != a.normal(4, 7));
    const CounterRng c(42, 1);
    CHECK(a.normal(3, 7) != c.normal(3, 7));
    const CounterRng d(43, 0);
    CHECK(a.normal(3, 7) != d.normal(3, 7));
    CHECK(a.uniform(0, 0) > 0.0);
    CHECK(a.uniform(0, 0) < 1.0);
}

TEST_CASE("normal draws have the right moments") {
    const CounterRng rng(7, 0);
    const int n = 1000000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal(0, static_cast<std::uint64_t>(i));
        sum += z;
        sum2 += z * z;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n))); // 4 standard errors
    CHECK(var == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("draws at distinct addresses are uncorrelated") {
    const CounterRng rng(11, 2);
    const int n = 200000;
    double c_node = 0.0, c_step = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto u = static_cast<std::uint64_t>(i);
        c_node += rng.normal(0, u) * rng.normal(0, u + 1);
        c_step += rng.normal(u, 0) * rng.normal(u + 1, 0);
    }
    const double se = 1.0 / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(c_node / n) < 4.0 * se);
    CHECK(std::abs(c_step / n) < 4.0 * se);
}

TEST_CASE("increment variances: edge cells and vertices") {
    const auto m = single_edge_model(); // mu = 1
    const GridLayout grid = build_grid(m, {4}); // h = 0.25
    const double dt = 0.01;
    const int steps = 200000;
    double sum2_edge = 0.0, sum_edge = 0.0, sum2_vertex = 0.0;
    for (int s = 0; s < steps; ++s) {
        const NoiseIncrement inc =
            sample_increment(grid, m, dt, {123, 0}, static_cast<std::uint64_t>(s));
        const double e = inc.nodal[grid.interior_index(0, 2)];
        const double v = inc.nodal[grid.vertex_index(0)];
        sum_edge += e;
        sum2_edge += e * e;
        sum2_vertex += v * v;
    }
    // std = sqrt(dt/(mu h)) = sqrt(0.01/0.25) = 0.2 on the edge, sqrt(dt) = 0.1 at vertices.
    CHECK(std::sqrt(sum2_edge / steps) == doctest::Approx(0.2).epsilon(0.01));
    CHECK(std::sqrt(sum2_vertex / steps) == doctest::Approx(0.1).epsilon(0.01));
    const double se = 0.2 / std::sqrt(static_cast<double>(steps));
    CHECK(std::abs(sum_edge / steps) < 4.0 * se);
}

TEST_CASE("same address reproduces the same increment") {
    const auto m = single_edge_model();
    const GridLayout grid = build_grid(m, {8});
    const NoiseIncrement a = sample_increment(grid, m, 0.05, {9, 4}, 17);
    const NoiseIncrement b = sample_increment(grid, m, 0.05, {9, 4}, 17);
    CHECK((a.nodal - b.nodal).cwiseAbs().maxCoeff() == 0.0);
    const NoiseIncrement c = sample_increment(grid, m, 0.05, {9, 4}, 18);
    CHECK((a.nodal - c.nodal).cwiseAbs().maxCoeff() != 0.0);
}

TEST_CASE("spatial coupling: node values aggregate lattice cells exactly") {
    const auto m = single_edge_model();
    const GridLayout coarse = build_grid(m, {4});
    const GridLayout fine = build_grid(m, {8});
    const std::vector<int> finest = {8};
    const NoiseLattice lattice_c = NoiseLattice::shared(coarse, finest);
    const NoiseLattice lattice_f = NoiseLattice::shared(fine, finest);
    REQUIRE(lattice_c.gen_cells[0] == 16);
    REQUIRE(lattice_f.gen_cells[0] == 16);

    const NoiseAddress addr{2024, 3};
    const std::uint64_t step = 5;
    const double dt = 0.02;
    const NoiseIncrement inc_c = sample_increment(coarse, m, dt, addr, step, lattice_c);
    const NoiseIncrement inc_f = sample_increment(fine, m, dt, addr, step, lattice_f);

    // Raw lattice draws, reconstructed with the same addressing.
    const CounterRng rng(addr.seed, addr.path);
    const double cell_sd = std::sqrt(dt * 16 / m.edges[0].mu);
    auto cell = [&](int l) { return cell_sd * rng.normal(step, static_cast<std::uint64_t>(l)); };

    for (int k = 1; k < 4; ++k) { // coarse node owns 4 cells centred at 4k
        double mean = 0.0;
        for (int l = 4 * k - 2; l <= 4 * k + 1; ++l)
            mean += cell(l);
        mean /= 4.0;
        CHECK(inc_c.nodal[coarse.interior_index(0, k)] == doctest::Approx(mean).epsilon(1e-14));
    }
    for (int k = 1; k < 8; ++k) { // fine node owns 2 cells centred at 2k
        const double mean = (cell(2 * k - 1) + cell(2 * k)) / 2.0;
        CHECK(inc_f.nodal[fine.interior_index(0, k)] == doctest::Approx(mean).epsilon(1e-14));
    }
    // Vertex draws coincide across resolutions.
    CHECK(inc_c.nodal[coarse.vertex_index(0)] == inc_f.nodal[fine.vertex_index(0)]);
    CHECK(inc_c.nodal[coarse.vertex_index(1)] == inc_f.nodal[fine.vertex_index(1)]);
}

TEST_CASE("coupled lattice keeps the nominal variance at every level") {
    const auto m = single_edge_model();
    const GridLayout coarse = build_grid(m, {4});
    const std::vector<int> finest = {16};
    const NoiseLattice lattice = NoiseLattice::shared(coarse, finest);
    const double dt = 0.01;
    const int steps = 200000;
    double sum2 = 0.0;
    for (int s = 0; s < steps; ++s) {
        const NoiseIncrement inc =
            sample_increment(coarse, m, dt, {55, 0}, static_cast<std::uint64_t>(s), lattice);
        const double x = inc.nodal[coarse.interior_index(0, 1)];
        sum2 += x * x;
    }
    CHECK(std::sqrt(sum2 / steps) == doctest::Approx(std::sqrt(dt / 0.25)).epsilon(0.01));
}

TEST_CASE("temporal coupling: summed half-steps match the full-step variance") {
    const auto m = single_edge_model();
    const GridLayout grid = build_grid(m, {4});
    const double dt_fine = 0.005;
    const int steps = 100000;
    double sum2 = 0.0;
    for (int s = 0; s < steps; ++s) {
        const NoiseIncrement a =
            sample_increment(grid, m, dt_fine, {77, 0}, static_cast<std::uint64_t>(2 * s));
        const NoiseIncrement b =
            sample_increment(grid, m, dt_fine, {77, 0}, static_cast<std::uint64_t>(2 * s + 1));
        const double x = a.nodal[grid.interior_index(0, 1)] + b.nodal[grid.interior_index(0, 1)];
        sum2 += x * x;
    }
    // Two fine increments sum to a coarse increment of variance 2*dt_fine/(mu h).
    CHECK(std::sqrt(sum2 / steps) == doctest::Approx(std::sqrt(2 * dt_fine / 0.25)).epsilon(0.01));
}

TEST_CASE("lattice rejects incompatible refinements") {
    const auto m = single_edge_model();
    const GridLayout grid = build_grid(m, {4});
    CHECK_THROWS_AS(NoiseLattice::shared(grid, {6}), std::invalid_argument);
    CHECK_THROWS_AS(sample_increment(grid, m, 0.0, {1, 0}, 0), std::invalid_argument);
}
