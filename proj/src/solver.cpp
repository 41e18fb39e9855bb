#include "netsde/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "netsde/dynamics.hpp"
#include "netsde/errors.hpp"

namespace netsde {

std::int64_t SolverConfig::n_steps() const {
    return std::max<std::int64_t>(1, std::llround(T / dt));
}

void SolverConfig::validate() const {
    if (!(T > 0.0))
        throw std::invalid_argument("solver: T must be positive");
    if (!(dt > 0.0))
        throw std::invalid_argument("solver: dt must be positive");
    if (dt > T * (1.0 + 1e-12))
        throw std::invalid_argument("solver: dt must not exceed T");
    if (paths < 1)
        throw std::invalid_argument("solver: need at least one path");
    if (save_every < 1)
        throw std::invalid_argument("solver: save_every must be at least 1");
    if (!(q > 0.0))
        throw std::invalid_argument("solver: moment order q must be positive");
    if (cells.empty())
        throw std::invalid_argument("solver: need cell counts");
}

State InitialSpec::realize(const GridLayout& grid) const {
    if (kind == Kind::Constant)
        return State::Constant(grid.dim(), value);
    return sample_profile(grid, edge_polys);
}

double sup_norm(const State& u) { return u.cwiseAbs().maxCoeff(); }

double mass_norm(const Eigen::VectorXd& mass, const State& u) {
    return std::sqrt(u.cwiseProduct(mass.cwiseProduct(u)).sum());
}

namespace {

Eigen::VectorXd tame(const Eigen::VectorXd& f, double dt) {
    return f.array() / (1.0 + dt * f.array().abs());
}

} // namespace

Stepper::Stepper(const NetworkModel& model, const DiscreteOperator& op,
                 const SpectralFactorization* fact, Scheme scheme, double dt, bool taming)
    : model_(model), op_(op), fact_(fact), scheme_(scheme), dt_(dt), taming_(taming) {
    if (!(dt > 0.0))
        throw std::invalid_argument("stepper: dt must be positive");
    if (scheme == Scheme::Exponential && fact == nullptr)
        throw std::invalid_argument("stepper: exponential scheme needs a factorization");
    if (scheme == Scheme::LinearImplicit) {
        Eigen::SparseMatrix<double> system = dt * op.stiffness;
        for (int i = 0; i < op.mass.size(); ++i)
            system.coeffRef(i, i) += op.mass[i];
        system.makeCompressed();
        implicit_solver_.compute(system);
        if (implicit_solver_.info() != Eigen::Success)
            throw NumericalError("stepper: factorization of mass + dt*K failed");
    }
}

State Stepper::step(double t, const State& u, const NoiseIncrement& dw) const {
    if (u.size() != op_.mass.size() || dw.nodal.size() != op_.mass.size())
        throw std::invalid_argument("step: dimension mismatch");
    if (std::abs(dw.dt - dt_) > 1e-12 * dt_)
        throw std::invalid_argument("step: noise increment was sampled for a different dt");

    const GridLayout& grid = op_.layout;
    const Eigen::VectorXd noise = eval_diffusion(model_, grid, t, u, dw.nodal);
    const Eigen::VectorXd first_order = op_.drift1 * u;
    Eigen::VectorXd reaction = eval_reaction(model_, grid, t, u);
    if (taming_)
        reaction = tame(reaction, dt_);

    State next;
    switch (scheme_) {
    case Scheme::LinearImplicit: {
        const Eigen::VectorXd rhs =
            op_.mass.cwiseProduct(u + dt_ * (first_order + reaction) + noise);
        next = implicit_solver_.solve(rhs);
        break;
    }
    case Scheme::Exponential:
        next = fact_->apply_expm(dt_, u + dt_ * (first_order + reaction) + noise);
        break;
    case Scheme::TamedExplicit:
        next = u + dt_ * (op_.apply_generator(u) + first_order + reaction) + noise;
        break;
    }
    if (!next.allFinite())
        throw BlowupError(t + dt_, "state blew up at t=" + std::to_string(t + dt_));
    return next;
}

State step(const DiscreteOperator& op, const SpectralFactorization* fact,
           const NetworkModel& model, const State& u, double t, double dt,
           const NoiseIncrement& dw, Scheme scheme) {
    const Stepper stepper(model, op, fact, scheme, dt, scheme == Scheme::TamedExplicit);
    return stepper.step(t, u, dw);
}

namespace {

NoiseLattice lattice_for(const SolverConfig& config, const GridLayout& grid) {
    if (config.noise_finest_cells.empty())
        return NoiseLattice::standard(grid);
    std::vector<int> finest = config.noise_finest_cells;
    if (finest.size() == 1 && grid.n_edges() > 1)
        finest.assign(static_cast<std::size_t>(grid.n_edges()), finest[0]);
    return NoiseLattice::shared(grid, finest);
}

struct PathRunner {
    const SolverConfig& config;
    const NetworkModel& model;
    const GridLayout& grid;
    const Stepper& stepper;
    NoiseLattice lattice;

    NoiseIncrement increment(std::uint64_t path, std::int64_t n) const {
        if (config.disable_noise) {
            NoiseIncrement zero;
            zero.nodal = Eigen::VectorXd::Zero(grid.dim());
            zero.dt = config.dt;
            return zero;
        }
        return sample_increment(grid, model, config.dt, {config.seed, path},
                                static_cast<std::uint64_t>(n), lattice);
    }
};

} // namespace

Trajectory simulate_path(const SolverConfig& config, const NetworkModel& model,
                         const DiscreteOperator& op, const SpectralFactorization* fact,
                         const State& u0, std::uint64_t path_id) {
    config.validate();
    const Stepper stepper(model, op, fact, config.scheme, config.dt, config.taming_enabled());
    const PathRunner runner{config, model, op.layout, stepper,
                            lattice_for(config, op.layout)};
    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(u0);
    State u = u0;
    const std::int64_t steps = config.n_steps();
    for (std::int64_t n = 0; n < steps; ++n) {
        const double t = static_cast<double>(n) * config.dt;
        try {
            u = stepper.step(t, u, runner.increment(path_id, n));
        } catch (const BlowupError& e) {
            traj.completed = false;
            traj.blowup_time = e.time();
            traj.blowup_step = n;
            return traj;
        }
        if ((n + 1) % config.save_every == 0 || n + 1 == steps) {
            traj.times.push_back(static_cast<double>(n + 1) * config.dt);
            traj.states.push_back(u);
        }
    }
    return traj;
}

MomentStats monte_carlo(const SolverConfig& config, const NetworkModel& model, const State& u0) {
    config.validate();
    if (config.paths < 2)
        throw std::invalid_argument("monte_carlo: need at least two paths");

    const GridLayout grid = build_grid(model, config.cells);
    const DiscreteOperator op = assemble_operator(model, grid);
    SpectralFactorization fact;
    const bool need_fact = config.scheme == Scheme::Exponential;
    if (need_fact)
        fact = factorize(op);
    const Stepper stepper(model, op, need_fact ? &fact : nullptr, config.scheme, config.dt,
                          config.taming_enabled());
    const PathRunner runner{config, model, grid, stepper, lattice_for(config, grid)};

    const std::int64_t steps = config.n_steps();
    std::vector<double> sup_q(static_cast<std::size_t>(config.paths),
                              std::numeric_limits<double>::quiet_NaN());

    auto run_one = [&](std::uint64_t path) {
        State u = u0;
        double sup = sup_norm(u);
        for (std::int64_t n = 0; n < steps; ++n) {
            u = stepper.step(static_cast<double>(n) * config.dt, u, runner.increment(path, n));
            if ((n + 1) % config.save_every == 0 || n + 1 == steps)
                sup = std::max(sup, sup_norm(u));
        }
        sup_q[path] = std::pow(sup, config.q);
    };

    const unsigned workers =
        std::max(1u, std::min(std::thread::hardware_concurrency(),
                              static_cast<unsigned>(config.paths)));
    std::atomic<int> next_path{0};
    auto worker = [&] {
        for (;;) {
            const int p = next_path.fetch_add(1);
            if (p >= config.paths)
                return;
            try {
                run_one(static_cast<std::uint64_t>(p));
            } catch (const BlowupError&) {
                // left as NaN; counted below
            }
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }

    MomentStats stats;
    stats.q = config.q;
    double sum = 0.0;
    std::vector<double> completed;
    completed.reserve(sup_q.size());
    for (double v : sup_q) {
        if (std::isnan(v)) {
            ++stats.blowups;
        } else {
            completed.push_back(v);
            sum += v;
        }
    }
    stats.paths = static_cast<int>(completed.size());
    if (stats.paths == 0)
        throw NumericalError("monte_carlo: every path blew up");
    if (stats.blowups > 0 &&
        static_cast<double>(stats.blowups) > 0.01 * static_cast<double>(config.paths)) {
        std::ostringstream os;
        os << "monte_carlo: blow-up fraction "
           << static_cast<double>(stats.blowups) / config.paths << " exceeds 1%";
        throw NumericalError(os.str());
    }
    stats.estimate = sum / static_cast<double>(stats.paths);
    if (stats.paths > 1) {
        double ss = 0.0;
        for (double v : completed)
            ss += (v - stats.estimate) * (v - stats.estimate);
        stats.std_error = std::sqrt(ss / (stats.paths - 1)) / std::sqrt(double(stats.paths));
    }
    return stats;
}

namespace {

double fit_log2_slope(const std::vector<double>& x, const std::vector<double>& y) {
    // least-squares slope of log2(y) against log2(x)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log2(x[i]);
        const double ly = std::log2(std::max(y[i], 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    return denom > 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
}

} // namespace

StrongStudy coupled_refinement_run(const SolverConfig& config, const NetworkModel& model,
                                   const State& u0, int levels) {
    config.validate();
    if (levels < 3)
        throw std::invalid_argument("coupled_refinement_run: need at least 3 dyadic levels");

    const GridLayout grid = build_grid(model, config.cells);
    const DiscreteOperator op = assemble_operator(model, grid);
    SpectralFactorization fact;
    const bool need_fact = config.scheme == Scheme::Exponential;
    if (need_fact)
        fact = factorize(op);
    const SpectralFactorization* fact_ptr = need_fact ? &fact : nullptr;

    const std::int64_t n0 = config.n_steps();
    const double dt0 = config.dt;
    const int ref_level = levels + 1; // reference two halvings below the finest error level
    const double dt_ref = dt0 / static_cast<double>(1ll << ref_level);
    const NoiseLattice lattice = lattice_for(config, grid);

    std::vector<std::unique_ptr<Stepper>> steppers;
    for (int l = 0; l <= ref_level; ++l)
        steppers.push_back(std::make_unique<Stepper>(model, op, fact_ptr, config.scheme,
                                                     dt0 / static_cast<double>(1ll << l),
                                                     config.taming_enabled()));

    StrongStudy study;
    study.reference_dt = dt_ref;
    for (int l = 0; l < levels; ++l)
        study.dts.push_back(dt0 / static_cast<double>(1ll << l));
    study.errors.assign(static_cast<std::size_t>(levels), 0.0);

    auto integrate_level = [&](int l, std::uint64_t path) {
        const double dt_l = dt0 / static_cast<double>(1ll << l);
        const std::int64_t steps = n0 << l;
        const std::int64_t children = 1ll << (ref_level - l);
        State u = u0;
        for (std::int64_t n = 0; n < steps; ++n) {
            NoiseIncrement inc;
            inc.nodal = Eigen::VectorXd::Zero(grid.dim());
            inc.dt = dt_l;
            if (!config.disable_noise) {
                for (std::int64_t c = 0; c < children; ++c) {
                    const std::uint64_t s = static_cast<std::uint64_t>(n * children + c);
                    inc.nodal += sample_increment(grid, model, dt_ref, {config.seed, path}, s,
                                                  lattice)
                                     .nodal;
                }
            }
            u = steppers[static_cast<std::size_t>(l)]->step(static_cast<double>(n) * dt_l, u,
                                                            inc);
        }
        return u;
    };

    for (int p = 0; p < config.paths; ++p) {
        const auto path = static_cast<std::uint64_t>(p);
        State x_ref;
        try {
            x_ref = integrate_level(ref_level, path);
        } catch (const BlowupError& e) {
            std::ostringstream os;
            os << "refinement study: reference level blew up at t=" << e.time() << " on path "
               << p;
            throw NumericalError(os.str());
        }
        for (int l = 0; l < levels; ++l) {
            State x_l;
            try {
                x_l = integrate_level(l, path);
            } catch (const BlowupError& e) {
                std::ostringstream os;
                os << "refinement study: level " << l << " blew up at t=" << e.time()
                   << " on path " << p;
                throw NumericalError(os.str());
            }
            study.errors[static_cast<std::size_t>(l)] +=
                mass_norm(op.mass, x_l - x_ref) / static_cast<double>(config.paths);
        }
    }

    study.fitted_order = fit_log2_slope(study.dts, study.errors);
    study.monotone = true;
    for (std::size_t l = 1; l < study.errors.size(); ++l)
        if (!(study.errors[l] < study.errors[l - 1]))
            study.monotone = false;
    return study;
}

namespace {

State deterministic_terminal(const NetworkModel& model, const DiscreteOperator& op,
                             const SpectralFactorization* fact, Scheme scheme, double dt,
                             double T, const State& u0) {
    SolverConfig cfg;
    cfg.T = T;
    cfg.dt = dt;
    cfg.scheme = scheme;
    cfg.cells = op.layout.cells;
    cfg.disable_noise = true;
    cfg.save_every = std::numeric_limits<int>::max() / 2; // terminal state only
    const Trajectory traj = simulate_path(cfg, model, op, fact, u0);
    if (!traj.completed)
        throw NumericalError("deterministic run blew up at t=" +
                             std::to_string(traj.blowup_time));
    return traj.states.back();
}

} // namespace

DeterministicStudy spatial_convergence(const NetworkModel& model, const InitialSpec& initial,
                                       Scheme scheme, int base_cells, int levels,
                                       int ref_extra_log2, double dt, double T) {
    if (levels < 2)
        throw std::invalid_argument("spatial_convergence: need at least 2 levels");
    const int ref_factor = 1 << (levels - 1 + ref_extra_log2);
    const int ref_cells = base_cells * ref_factor;

    const GridLayout ref_grid = build_grid(model, {ref_cells});
    const DiscreteOperator ref_op = assemble_operator(model, ref_grid);
    SpectralFactorization ref_fact;
    const bool need_fact = scheme == Scheme::Exponential;
    if (need_fact)
        ref_fact = factorize(ref_op);
    const State ref_terminal = deterministic_terminal(
        model, ref_op, need_fact ? &ref_fact : nullptr, scheme, dt, T,
        initial.realize(ref_grid));

    DeterministicStudy study;
    for (int l = 0; l < levels; ++l) {
        const int cells = base_cells << l;
        const GridLayout grid = build_grid(model, {cells});
        const DiscreteOperator op = assemble_operator(model, grid);
        SpectralFactorization fact;
        if (need_fact)
            fact = factorize(op);
        const State terminal = deterministic_terminal(model, op, need_fact ? &fact : nullptr,
                                                      scheme, dt, T, initial.realize(grid));
        // Restrict the reference to this grid's nodes and measure in its mass norm.
        State diff = State::Zero(grid.dim());
        const int stride = ref_cells / cells;
        for (int j = 0; j < grid.n_edges(); ++j)
            for (int k = 1; k < grid.cells[j]; ++k)
                diff[grid.interior_index(j, k)] =
                    terminal[grid.interior_index(j, k)] -
                    ref_terminal[ref_grid.interior_index(j, k * stride)];
        for (int i = 0; i < grid.n_vertices; ++i)
            diff[grid.vertex_index(i)] =
                terminal[grid.vertex_index(i)] - ref_terminal[ref_grid.vertex_index(i)];
        study.resolution.push_back(1.0 / static_cast<double>(cells));
        study.errors.push_back(mass_norm(op.mass, diff));
    }
    study.fitted_order = fit_log2_slope(study.resolution, study.errors);
    return study;
}

DeterministicStudy temporal_convergence(const NetworkModel& model, const InitialSpec& initial,
                                        Scheme scheme, int cells, double dt0, int levels,
                                        int ref_extra_log2, double T) {
    if (levels < 2)
        throw std::invalid_argument("temporal_convergence: need at least 2 levels");
    const GridLayout grid = build_grid(model, {cells});
    const DiscreteOperator op = assemble_operator(model, grid);
    SpectralFactorization fact;
    const bool need_fact = scheme == Scheme::Exponential;
    if (need_fact)
        fact = factorize(op);
    const SpectralFactorization* fact_ptr = need_fact ? &fact : nullptr;
    const State u0 = initial.realize(grid);

    const double dt_ref = dt0 / static_cast<double>(1 << (levels - 1 + ref_extra_log2));
    const State ref_terminal =
        deterministic_terminal(model, op, fact_ptr, scheme, dt_ref, T, u0);

    DeterministicStudy study;
    for (int l = 0; l < levels; ++l) {
        const double dt = dt0 / static_cast<double>(1 << l);
        const State terminal = deterministic_terminal(model, op, fact_ptr, scheme, dt, T, u0);
        study.resolution.push_back(dt);
        study.errors.push_back(mass_norm(op.mass, terminal - ref_terminal));
    }
    study.fitted_order = fit_log2_slope(study.resolution, study.errors);
    return study;
}

} // namespace netsde
