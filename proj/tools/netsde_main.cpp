#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "netsde/errors.hpp"
#include "netsde/model_io.hpp"
#include "netsde/semigroup.hpp"
#include "netsde/solver.hpp"
#include "netsde/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitNumerical = 3;

std::string format_full(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

netsde::ParsedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::ostringstream os;
        os << "cannot open model file '" << path << "'";
        throw std::ios_base::failure(os.str());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return netsde::parse_model(buffer.str());
}

int cmd_simulate(const std::string& model_path, const std::string& out_prefix, int paths_override,
                 std::int64_t seed_override) {
    netsde::ParsedModel parsed = load_model(model_path);
    if (paths_override > 0)
        parsed.config.paths = paths_override;
    if (seed_override >= 0)
        parsed.config.seed = static_cast<std::uint64_t>(seed_override);
    parsed.config.validate();

    const netsde::GridLayout grid = netsde::build_grid(parsed.model, parsed.config.cells);
    const netsde::DiscreteOperator op = netsde::assemble_operator(parsed.model, grid);
    netsde::SpectralFactorization fact;
    const bool need_fact = parsed.config.scheme == netsde::Scheme::Exponential;
    if (need_fact)
        fact = netsde::factorize(op);
    const netsde::State u0 = parsed.initial.realize(grid);

    netsde::MomentStats stats;
    stats.q = parsed.config.q;
    std::vector<double> sup_q;
    for (int p = 0; p < parsed.config.paths; ++p) {
        const netsde::Trajectory traj = netsde::simulate_path(
            parsed.config, parsed.model, op, need_fact ? &fact : nullptr, u0,
            static_cast<std::uint64_t>(p));
        const std::string file = out_prefix + "_p" + std::to_string(p) + ".csv";
        std::ofstream out(file);
        if (!out) {
            std::cerr << "error: cannot write '" << file << "'\n";
            return kExitIo;
        }
        netsde::write_trajectory(out, grid, traj);
        if (traj.completed) {
            double sup = 0.0;
            for (const auto& state : traj.states)
                sup = std::max(sup, netsde::sup_norm(state));
            sup_q.push_back(std::pow(sup, parsed.config.q));
        } else {
            ++stats.blowups;
            std::cerr << "warning: path " << p << " blew up at t=" << traj.blowup_time << "\n";
        }
    }
    if (sup_q.empty()) {
        std::cerr << "error: every path blew up\n";
        return kExitNumerical;
    }
    stats.paths = static_cast<int>(sup_q.size());
    double sum = 0.0;
    for (double v : sup_q) sum += v;
    stats.estimate = sum / static_cast<double>(stats.paths);
    if (stats.paths > 1) {
        double ss = 0.0;
        for (double v : sup_q) ss += (v - stats.estimate) * (v - stats.estimate);
        stats.std_error =
            std::sqrt(ss / (stats.paths - 1)) / std::sqrt(static_cast<double>(stats.paths));
    }

    const std::string summary_file = out_prefix + "_summary.json";
    std::ofstream summary(summary_file);
    if (!summary) {
        std::cerr << "error: cannot write '" << summary_file << "'\n";
        return kExitIo;
    }
    summary << netsde::summary_json(stats, parsed.config);
    std::cout << "wrote " << stats.paths + stats.blowups << " trajectory file(s) and "
              << summary_file << "\n";
    if (stats.blowups > 0 &&
        static_cast<double>(stats.blowups) > 0.01 * parsed.config.paths) {
        std::cerr << "error: blow-up fraction exceeds 1%\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_verify(const std::string& model_path, const std::string& report_path) {
    const netsde::ParsedModel parsed = load_model(model_path);
    const netsde::VerificationReport report =
        netsde::run_verification(parsed.model, parsed.config);
    std::cout << report.to_string();
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) {
            std::cerr << "error: cannot write '" << report_path << "'\n";
            return kExitIo;
        }
        out << report.to_string();
    }
    return report.all_pass() ? kExitOk : kExitValidation;
}

int cmd_converge(const std::string& model_path, const std::string& mode, int levels,
                 const std::string& out_path) {
    const netsde::ParsedModel parsed = load_model(model_path);
    std::ostringstream table;
    if (mode == "strong") {
        const netsde::GridLayout grid = netsde::build_grid(parsed.model, parsed.config.cells);
        const netsde::State u0 = parsed.initial.realize(grid);
        const netsde::StrongStudy study =
            netsde::coupled_refinement_run(parsed.config, parsed.model, u0, levels);
        table << "dt,error\n";
        for (std::size_t l = 0; l < study.dts.size(); ++l)
            table << format_full(study.dts[l]) << "," << format_full(study.errors[l]) << "\n";
        table << "# reference_dt " << format_full(study.reference_dt) << "\n";
        table << "# fitted_order " << format_full(study.fitted_order) << "\n";
        table << "# monotone " << (study.monotone ? "yes" : "no") << "\n";
    } else if (mode == "space" || mode == "time") {
        netsde::DeterministicStudy study;
        const int base = parsed.config.cells[0];
        if (mode == "space")
            study = netsde::spatial_convergence(parsed.model, parsed.initial,
                                                parsed.config.scheme, base, levels, 3,
                                                parsed.config.dt, parsed.config.T);
        else
            study = netsde::temporal_convergence(parsed.model, parsed.initial,
                                                 parsed.config.scheme, base, parsed.config.dt,
                                                 levels, 2, parsed.config.T);
        table << (mode == "space" ? "h,error\n" : "dt,error\n");
        for (std::size_t l = 0; l < study.resolution.size(); ++l)
            table << format_full(study.resolution[l]) << "," << format_full(study.errors[l])
                  << "\n";
        table << "# fitted_order " << format_full(study.fitted_order) << "\n";
    } else {
        std::cerr << "error: --mode must be space, time, or strong\n";
        return kExitValidation;
    }
    std::cout << table.str();
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "error: cannot write '" << out_path << "'\n";
            return kExitIo;
        }
        out << table.str();
    }
    return kExitOk;
}

int cmd_spectrum(const std::string& model_path, const std::string& out_path) {
    const netsde::ParsedModel parsed = load_model(model_path);
    const netsde::GridLayout grid = netsde::build_grid(parsed.model, parsed.config.cells);
    const netsde::DiscreteOperator op = netsde::assemble_operator(parsed.model, grid);
    const netsde::SpectralFactorization fact = netsde::factorize(op);
    std::ostringstream lines;
    for (int i = 0; i < fact.dim(); ++i)
        lines << format_full(fact.eigenvalues[i]) << "\n";
    if (out_path.empty()) {
        std::cout << lines.str();
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "error: cannot write '" << out_path << "'\n";
            return kExitIo;
        }
        out << lines.str();
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic reaction-diffusion dynamics on metric graphs"};
    app.require_subcommand(1);

    std::string model_path, out_path, report_path, mode = "strong";
    int paths_override = 0, levels = 4;
    std::int64_t seed_override = -1;

    auto* simulate = app.add_subcommand("simulate", "integrate sample paths and write "
                                                    "trajectory files plus a summary");
    simulate->add_option("--model", model_path, "model file")->required();
    simulate->add_option("--out", out_path, "output prefix")->required();
    simulate->add_option("--paths", paths_override, "override the path count");
    simulate->add_option("--seed", seed_override, "override the seed");

    auto* verify = app.add_subcommand("verify", "run the structural invariant suite");
    verify->add_option("--model", model_path, "model file")->required();
    verify->add_option("--report", report_path, "also write the report here");

    auto* converge = app.add_subcommand("converge", "refinement studies (space, time, or "
                                                    "coupled-noise strong error)");
    converge->add_option("--model", model_path, "model file")->required();
    converge->add_option("--mode", mode, "space|time|strong")->required();
    converge->add_option("--levels", levels, "number of refinement levels");
    converge->add_option("--out", out_path, "also write the table here");

    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of the stiffness/mass "
                                                    "pencil, ascending");
    spectrum->add_option("--model", model_path, "model file")->required();
    spectrum->add_option("--out", out_path, "write eigenvalues here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed())
            return cmd_simulate(model_path, out_path, paths_override, seed_override);
        if (verify->parsed())
            return cmd_verify(model_path, report_path);
        if (converge->parsed())
            return cmd_converge(model_path, mode, levels, out_path);
        if (spectrum->parsed())
            return cmd_spectrum(model_path, out_path);
    } catch (const netsde::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const netsde::BlowupError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const netsde::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
