// Command-line front end: synthetic waveform generation, scenario runs over
// generated or ingested recordings, and the eigen-iteration benchmark.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "winlsq/harness.hpp"
#include "winlsq/linalg.hpp"

namespace {

namespace harness = winlsq::harness;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitStrictFailure = 3;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct SignalFlags {
    std::size_t cycles = 3;
    std::uint64_t seed = 61;
    double noise_std = 1e-9;
    double fundamental_hz = 60.0;
    std::size_t samples_per_cycle = 256;
    std::vector<std::string> components;  // order:amplitude:phase
};

void add_signal_flags(CLI::App* cmd, SignalFlags& f) {
    cmd->add_option("--cycles", f.cycles, "signal duration in fundamental cycles");
    cmd->add_option("--seed", f.seed, "noise seed");
    cmd->add_option("--noise", f.noise_std, "gaussian noise standard deviation");
    cmd->add_option("--fundamental", f.fundamental_hz, "fundamental frequency in Hz");
    cmd->add_option("--samples-per-cycle", f.samples_per_cycle, "sampling rate per cycle");
    cmd->add_option("--component", f.components,
                    "harmonic component order:amplitude:phase (repeatable; replaces the default "
                    "fundamental-plus-four set)");
}

harness::SignalSpec signal_spec_from(const SignalFlags& f) {
    harness::SignalSpec spec;
    spec.cycles = f.cycles;
    spec.seed = f.seed;
    spec.noise_std = f.noise_std;
    spec.fundamental_hz = f.fundamental_hz;
    spec.samples_per_cycle = f.samples_per_cycle;
    if (!f.components.empty()) {
        spec.harmonics.clear();
        for (const std::string& c : f.components) {
            harness::HarmonicComponent h;
            char trailing = 0;
            if (std::sscanf(c.c_str(), "%u:%lf:%lf%c", &h.order, &h.amplitude, &h.phase,
                            &trailing) != 3) {
                throw CLI::ValidationError("--component", "expected order:amplitude:phase, got '" +
                                                              c + "'");
            }
            spec.harmonics.push_back(h);
        }
    }
    spec.validate();
    return spec;
}

struct ScenarioFlags {
    std::size_t w = 48;
    double delta_rel = 1e-7;
    double safety = winlsq::richardson::default_safety;
    double eps_rel = 1e-3;
    std::size_t max_iters = 200000;
    std::string solvers;
    std::string traces;
    bool strict = false;
};

void add_scenario_flags(CLI::App* cmd, ScenarioFlags& f, const std::string& default_traces) {
    cmd->add_option("--w", f.w, "window size in samples");
    cmd->add_option("--delta-rel", f.delta_rel, "residual bound relative to ||b||");
    cmd->add_option("--safety", f.safety, "safety factor on the simplest gain");
    cmd->add_option("--eps-rel", f.eps_rel, "suboptimal eps relative to the top eigenvalue");
    cmd->add_option("--max-iters", f.max_iters, "iteration cap per solve");
    cmd->add_option("--solvers", f.solvers,
                    "comma-separated list: ldl,gauss,richardson-simplest,richardson-optimal,"
                    "richardson-suboptimal,recursive,recursive-ns (default: all)");
    cmd->add_option("--traces", f.traces, "prefix for per-solver residual trace files")
        ->default_val(default_traces);
    cmd->add_flag("--strict", f.strict, "exit 3 when any solver row reports a failure");
}

harness::ScenarioConfig scenario_config_from(const ScenarioFlags& f) {
    harness::ScenarioConfig cfg;
    cfg.w = f.w;
    cfg.delta_rel = f.delta_rel;
    cfg.safety = f.safety;
    cfg.eps_rel = f.eps_rel;
    cfg.richardson_max_iters = f.max_iters;
    if (!f.solvers.empty()) {
        cfg.solvers.clear();
        std::stringstream ss(f.solvers);
        std::string token;
        while (std::getline(ss, token, ',')) {
            const auto id = harness::parse_solver(token);
            if (!id) throw CLI::ValidationError("--solvers", "unknown solver '" + token + "'");
            cfg.solvers.push_back(*id);
        }
    }
    return cfg;
}

int run_report(const std::vector<double>& signal, const winlsq::window::HarmonicBasis& basis,
               const harness::ScenarioConfig& cfg, const winlsq::Vector* theta_star,
               std::uint64_t k0, const ScenarioFlags& flags, const std::string& out_path,
               std::vector<std::pair<std::string, std::string>> echo_front) {
    harness::ScenarioReport report = harness::run_scenario(signal, basis, cfg, theta_star, k0);
    report.config_echo.insert(report.config_echo.begin(), echo_front.begin(), echo_front.end());
    harness::write_report_csv(out_path, report);
    if (!flags.traces.empty()) {
        for (const std::string& path : harness::write_residual_traces(flags.traces, report)) {
            std::cout << "trace: " << path << "\n";
        }
    }

    std::size_t failures = 0;
    for (const auto& row : report.rows) {
        if (row.status != harness::RowStatus::Ok) ++failures;
    }
    std::cout << "report: " << out_path << " (" << report.rows.size() << " rows, " << failures
              << " failure rows, cond_est " << format_double(report.cond_est) << ")\n";
    if (flags.strict && failures > 0) {
        std::cerr << "strict mode: " << failures << " failure rows\n";
        return kExitStrictFailure;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"moving-window harmonic least squares workbench"};
    app.require_subcommand(1);

    // generate
    auto* gen_cmd = app.add_subcommand("generate", "write a synthetic waveform CSV");
    SignalFlags gen_signal;
    std::string gen_out;
    gen_cmd->add_option("--out", gen_out, "output waveform CSV")->required();
    add_signal_flags(gen_cmd, gen_signal);
    gen_cmd->set_config("--config", "", "key = value file; flags take precedence");

    // run
    auto* run_cmd = app.add_subcommand("run", "run the solver comparison on an ingested waveform");
    std::string run_in, run_out;
    ScenarioFlags run_flags;
    std::size_t run_harmonics = 5;
    std::size_t run_spc = 256;
    run_cmd->add_option("--in", run_in, "input waveform CSV")->required();
    run_cmd->add_option("--out", run_out, "output report CSV")->required();
    run_cmd->add_option("--harmonics", run_harmonics, "number of cos/sin harmonic pairs");
    run_cmd->add_option("--samples-per-cycle", run_spc, "sampling rate per fundamental cycle");
    add_scenario_flags(run_cmd, run_flags, "");
    run_cmd->set_config("--config", "", "key = value file; flags take precedence");

    // compare
    auto* cmp_cmd =
        app.add_subcommand("compare", "generate a synthetic waveform and compare all solvers");
    std::string cmp_out = "report.csv";
    SignalFlags cmp_signal;
    ScenarioFlags cmp_flags;
    cmp_cmd->add_option("--out", cmp_out, "output report CSV");
    add_signal_flags(cmp_cmd, cmp_signal);
    add_scenario_flags(cmp_cmd, cmp_flags, "trace");
    cmp_cmd->set_config("--config", "", "key = value file; flags take precedence");

    // eigbench
    auto* eig_cmd = app.add_subcommand("eigbench", "largest-eigenpair iteration counts by size");
    std::string eig_out = "eigbench.csv";
    std::vector<std::size_t> eig_sizes{4, 8, 16, 32, 64};
    double eig_tol = 0.01;
    std::size_t eig_max_iters = 0;
    std::uint64_t eig_seed = 1;
    eig_cmd->add_option("--out", eig_out, "output CSV");
    eig_cmd->add_option("--sizes", eig_sizes, "ascending matrix sizes")->delimiter(',');
    eig_cmd->add_option("--tol", eig_tol, "residual threshold");
    eig_cmd->add_option("--max-iters", eig_max_iters, "iteration cap (0 = 100 * n)");
    eig_cmd->add_option("--seed", eig_seed, "start-vector seed");
    eig_cmd->set_config("--config", "", "key = value file; flags take precedence");

    for (CLI::App* sub : {gen_cmd, run_cmd, cmp_cmd, eig_cmd}) {
        sub->allow_config_extras(CLI::config_extras_mode::error);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (gen_cmd->parsed()) {
            const harness::SignalSpec spec = signal_spec_from(gen_signal);
            harness::write_waveform_csv(gen_out, harness::generate(spec));
            std::cout << "waveform: " << gen_out << " (" << spec.sample_count() << " samples)\n";
            return kExitOk;
        }

        if (run_cmd->parsed()) {
            if (!std::filesystem::exists(run_in)) {
                std::cerr << "input file not found: " << run_in << "\n";
                return kExitConfig;
            }
            const harness::SampleSeries series = harness::ingest_csv(run_in);
            const double q0 = 2.0 * std::numbers::pi / static_cast<double>(run_spc);
            const auto basis = winlsq::window::HarmonicBasis::fundamental(q0, run_harmonics);
            const harness::ScenarioConfig cfg = scenario_config_from(run_flags);
            std::vector<std::pair<std::string, std::string>> echo{
                {"subcommand", "run"},
                {"input", run_in},
                {"harmonics", std::to_string(run_harmonics)},
                {"samples_per_cycle", std::to_string(run_spc)},
            };
            return run_report(series.values, basis, cfg, nullptr, series.k0, run_flags, run_out,
                              std::move(echo));
        }

        if (cmp_cmd->parsed()) {
            const harness::SignalSpec spec = signal_spec_from(cmp_signal);
            const std::vector<double> signal = harness::generate(spec);
            const auto basis = harness::basis_for(spec);
            const winlsq::Vector theta_star = harness::true_parameters(spec, basis);
            const harness::ScenarioConfig cfg = scenario_config_from(cmp_flags);
            std::vector<std::pair<std::string, std::string>> echo{
                {"subcommand", "compare"},
                {"cycles", std::to_string(spec.cycles)},
                {"signal_seed", std::to_string(spec.seed)},
                {"noise_std", format_double(spec.noise_std)},
                {"fundamental_hz", format_double(spec.fundamental_hz)},
                {"samples_per_cycle", std::to_string(spec.samples_per_cycle)},
            };
            return run_report(signal, basis, cfg, &theta_star, 0, cmp_flags, cmp_out,
                              std::move(echo));
        }

        if (eig_cmd->parsed()) {
            winlsq::eigen::PowerConfig pcfg;
            pcfg.tol = eig_tol;
            pcfg.max_iters = eig_max_iters;
            pcfg.seed = eig_seed;
            const auto rows = harness::eig_iteration_sweep(
                eig_sizes, harness::short_window_information_matrix, pcfg);
            std::ofstream out(eig_out);
            if (!out) {
                std::cerr << "cannot open " << eig_out << " for writing\n";
                return kExitConfig;
            }
            out << "# tol = " << format_double(eig_tol) << "\n";
            out << "# seed = " << eig_seed << "\n";
            out << "size,iterations,lam_max_hat,status\n";
            for (const auto& row : rows) {
                out << row.size << "," << row.iterations << "," << format_double(row.value) << ","
                    << (row.converged ? "ok" : "not_converged") << "\n";
            }
            std::cout << "eigbench: " << eig_out << " (" << rows.size() << " sizes)\n";
            return kExitOk;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const winlsq::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitConfig;
    } catch (const winlsq::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
