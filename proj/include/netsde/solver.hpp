#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cstdint>
#include <optional>
#include <vector>

#include "netsde/assembly.hpp"
#include "netsde/noise.hpp"
#include "netsde/semigroup.hpp"

namespace netsde {

enum class Scheme { LinearImplicit, Exponential, TamedExplicit };

struct SolverConfig {
    double T = 1.0;
    double dt = 1e-2;
    Scheme scheme = Scheme::LinearImplicit;
    std::vector<int> cells = {16}; // per edge, or one entry broadcast
    int paths = 1;
    double q = 6.0; // moment order of the pathwise sup norm
    std::uint64_t seed = 0;
    int save_every = 1;
    std::optional<bool> taming; // default: on for the explicit scheme only
    bool disable_noise = false;
    // When set, noise is generated on the lattice shared with this finer grid
    // (per edge), coupling realizations across spatial resolutions.
    std::vector<int> noise_finest_cells;

    bool taming_enabled() const { return taming.value_or(scheme == Scheme::TamedExplicit); }
    std::int64_t n_steps() const;
    void validate() const; // throws std::invalid_argument
};

/// Initial data: a global constant, or per-edge polynomials (continuous at the
/// vertices; the shared vertex values come from the endpoint evaluations).
struct InitialSpec {
    enum class Kind { Constant, Profiles };
    Kind kind = Kind::Constant;
    double value = 0.0;
    std::vector<EdgePolynomial> edge_polys;

    State realize(const GridLayout& grid) const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;
    bool completed = true;
    double blowup_time = 0.0;
    std::int64_t blowup_step = -1;
};

struct MomentStats {
    double estimate = 0.0;  // mean of (sup_t ||X||_inf)^q over completed paths
    double std_error = 0.0;
    double q = 0.0;
    int paths = 0;   // completed
    int blowups = 0;
};

/// One time-stepping engine for a fixed (scheme, dt); immutable after
/// construction, shareable across concurrently simulated paths.
class Stepper {
public:
    Stepper(const NetworkModel& model, const DiscreteOperator& op,
            const SpectralFactorization* fact, Scheme scheme, double dt, bool taming);

    /// Advances one step from (t, u) with the supplied noise increment.
    /// Throws BlowupError when the result has non-finite entries.
    State step(double t, const State& u, const NoiseIncrement& dw) const;

    double dt() const { return dt_; }

private:
    const NetworkModel& model_;
    const DiscreteOperator& op_;
    const SpectralFactorization* fact_;
    Scheme scheme_;
    double dt_;
    bool taming_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> implicit_solver_;
};

/// Single-call stepping with the scheme's default taming.
State step(const DiscreteOperator& op, const SpectralFactorization* fact,
           const NetworkModel& model, const State& u, double t, double dt,
           const NoiseIncrement& dw, Scheme scheme);

/// Integrates one path from t=0 to T; snapshots every save_every steps (the
/// initial and final states always included). Blow-ups are recorded on the
/// trajectory, not thrown.
Trajectory simulate_path(const SolverConfig& config, const NetworkModel& model,
                         const DiscreteOperator& op, const SpectralFactorization* fact,
                         const State& u0, std::uint64_t path_id = 0);

/// Monte Carlo estimate of E sup_{t<=T} ||X(t)||_inf^q over independent paths.
/// Throws NumericalError when every path blows up or the blow-up fraction
/// exceeds 1 percent.
MomentStats monte_carlo(const SolverConfig& config, const NetworkModel& model, const State& u0);

struct StrongStudy {
    std::vector<double> dts;    // error levels, coarsest first
    std::vector<double> errors; // E ||X_level(T) - X_ref(T)|| in the mass norm
    double reference_dt = 0.0;
    double fitted_order = 0.0;  // slope of log2(error) against log2(dt)
    bool monotone = false;
};

/// Dyadic-dt strong convergence study: `levels` error levels plus a reference
/// two halvings finer, all driven by one noise realization per path (coarse
/// increments are sums of the reference increments). Throws NumericalError if
/// any run blows up.
StrongStudy coupled_refinement_run(const SolverConfig& config, const NetworkModel& model,
                                   const State& u0, int levels);

struct DeterministicStudy {
    std::vector<double> resolution; // h (space) or dt (time), coarsest first
    std::vector<double> errors;
    double fitted_order = 0.0;
};

/// Noise-free spatial refinement study against a fine-grid reference run at
/// the same dt; errors in the coarse-grid mass norm on shared nodes.
DeterministicStudy spatial_convergence(const NetworkModel& model, const InitialSpec& initial,
                                       Scheme scheme, int base_cells, int levels,
                                       int ref_extra_log2, double dt, double T);

/// Noise-free dt refinement study on a fixed grid against a fine-dt reference.
DeterministicStudy temporal_convergence(const NetworkModel& model, const InitialSpec& initial,
                                        Scheme scheme, int cells, double dt0, int levels,
                                        int ref_extra_log2, double T);

double sup_norm(const State& u);
double mass_norm(const Eigen::VectorXd& mass, const State& u);

} // namespace netsde
