#pragma once

#include <cstdint>
#include <vector>

#include "netsde/network.hpp"
#include "netsde/rng.hpp"

namespace netsde::testutil {

// Simple deterministic generator for randomized tests.
class TestRng {
public:
    explicit TestRng(std::uint64_t seed) : state_(splitmix64(seed)) {}

    double uniform() {
        state_ = splitmix64(state_);
        return (static_cast<double>(state_ >> 11) + 0.5) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int integer(int lo, int hi) { // inclusive
        return lo + static_cast<int>(uniform() * (hi - lo + 1)) % (hi - lo + 1);
    }
    bool coin(double p = 0.5) { return uniform() < p; }

private:
    std::uint64_t state_;
};

// Vertex coupling matrix with nonnegative off-diagonal and strictly negative
// row sums: off-diagonal from the sparsity coin, diagonals dominate.
inline Eigen::MatrixXd random_vertex_matrix(TestRng& rng, int n) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k)
            if (rng.coin(0.5)) {
                const double v = rng.uniform(0.0, 1.5);
                m(i, k) = v;
                m(k, i) = v;
            }
    for (int i = 0; i < n; ++i)
        m(i, i) = -m.row(i).sum() - rng.uniform(0.1, 2.0);
    return m;
}

// Random connected model: a spanning tree plus optional extra edges (cycles
// and multi-edges allowed), varied coefficient representations.
inline NetworkModel random_model(std::uint64_t seed, int max_vertices = 8, int max_edges = 10) {
    TestRng rng(seed);
    NetworkModel model;
    model.n_vertices = rng.integer(2, max_vertices);
    const int n = model.n_vertices;

    auto random_edge = [&](int tail, int head) {
        EdgeSpec e;
        e.tail = tail;
        e.head = head;
        e.mu = rng.uniform(0.5, 2.0);
        switch (rng.integer(0, 2)) {
        case 0: e.c = CoefficientProfile::constant(rng.uniform(0.5, 2.0)); break;
        case 1:
            e.c = CoefficientProfile::polynomial({rng.uniform(0.5, 1.5), rng.uniform(0.0, 0.5)});
            break;
        default:
            e.c = CoefficientProfile::samples({rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0),
                                               rng.uniform(0.5, 2.0)});
        }
        e.p = rng.coin() ? CoefficientProfile::constant(rng.uniform(0.0, 1.0))
                         : CoefficientProfile::polynomial({rng.uniform(0.0, 0.5),
                                                           rng.uniform(0.0, 0.5)});
        e.d = rng.coin() ? CoefficientProfile::constant(rng.uniform(-0.5, 0.5))
                         : CoefficientProfile::constant(0.0);
        if (rng.coin(0.4))
            e.reaction = ReactionSpec::fitzhugh_nagumo(rng.uniform(0.1, 0.9));
        e.edge_noise = DiffusionSpec1D::additive(rng.uniform(0.0, 0.2));
        return e;
    };

    for (int v = 1; v < n; ++v) {
        const int parent = rng.integer(0, v - 1);
        model.edges.push_back(rng.coin() ? random_edge(parent, v) : random_edge(v, parent));
    }
    const int extra = rng.integer(0, std::max(0, max_edges - (n - 1)));
    for (int x = 0; x < extra && static_cast<int>(model.edges.size()) < max_edges; ++x) {
        const int a = rng.integer(0, n - 1);
        const int b = rng.integer(0, n - 1);
        if (a != b)
            model.edges.push_back(random_edge(a, b));
    }

    model.M = random_vertex_matrix(rng, n);
    for (int i = 0; i < n; ++i)
        model.vertex_noise.push_back(DiffusionSpec1D::additive(rng.uniform(0.0, 0.2)));
    return model;
}

// Three edges out of a central vertex; the workhorse example.
inline NetworkModel star_model(double fhn_a = 0.5, double sigma = 0.1) {
    NetworkModel model;
    model.n_vertices = 4;
    for (int leaf = 1; leaf <= 3; ++leaf) {
        EdgeSpec e;
        e.tail = 0;
        e.head = leaf;
        e.mu = 1.0;
        e.c = CoefficientProfile::constant(1.0);
        e.reaction = ReactionSpec::fitzhugh_nagumo(fhn_a);
        e.edge_noise = DiffusionSpec1D::bounded_multiplicative(sigma, 1.0);
        model.edges.push_back(e);
    }
    model.M = -Eigen::MatrixXd::Identity(4, 4);
    model.vertex_noise.assign(4, DiffusionSpec1D::bounded_multiplicative(sigma, 1.0));
    return model;
}

// One edge between two vertices, heat-equation coefficients.
inline NetworkModel single_edge_model() {
    NetworkModel model;
    model.n_vertices = 2;
    EdgeSpec e;
    e.tail = 0;
    e.head = 1;
    e.mu = 1.0;
    e.c = CoefficientProfile::constant(1.0);
    model.edges.push_back(e);
    model.M = -Eigen::MatrixXd::Identity(2, 2);
    model.vertex_noise.assign(2, DiffusionSpec1D::additive(0.0));
    return model;
}

} // namespace netsde::testutil
