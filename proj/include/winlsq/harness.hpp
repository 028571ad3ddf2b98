#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "winlsq/dense.hpp"
#include "winlsq/eigen.hpp"
#include "winlsq/recursive.hpp"
#include "winlsq/richardson.hpp"
#include "winlsq/window.hpp"

namespace winlsq::harness {

struct HarmonicComponent {
    unsigned order = 1;     ///< multiple of the fundamental
    double amplitude = 0.0;
    double phase = 0.0;     ///< radians
};

/// y_k = sum_i a_i cos(order_i q0 k + phase_i) + gaussian(0, noise_std),
/// with q0 = 2 pi / samples_per_cycle.
struct SignalSpec {
    double fundamental_hz = 60.0;
    std::size_t samples_per_cycle = 256;
    std::vector<HarmonicComponent> harmonics = default_harmonics();
    double noise_std = 1e-9;
    std::size_t cycles = 3;
    std::uint64_t seed = 61;

    /// Fundamental plus four higher harmonics with mild distortion levels.
    static std::vector<HarmonicComponent> default_harmonics();
    std::size_t sample_count() const { return cycles * samples_per_cycle; }
    unsigned highest_order() const;
    void validate() const;  ///< throws std::invalid_argument
};

/// Deterministic for a given seed (hand-rolled Box-Muller over mt19937_64,
/// so the sequence does not depend on the standard library's distributions).
std::vector<double> generate(const SignalSpec& spec);

/// Basis holding one cos/sin pair per distinct harmonic order.
window::HarmonicBasis basis_for(const SignalSpec& spec);

/// The parameter vector the noise-free signal satisfies exactly under basis_for.
Vector true_parameters(const SignalSpec& spec, const window::HarmonicBasis& basis);

enum class SolverId {
    LdlInverse,
    Gauss,
    RichardsonSimplest,
    RichardsonOptimal,
    RichardsonSuboptimal,
    Recursive,
    RecursiveNewtonSchulz,
};

std::string solver_name(SolverId id);
std::optional<SolverId> parse_solver(std::string_view name);
std::vector<SolverId> all_solvers();

enum class RowStatus { Ok, NotConverged, SingularPivot, SNearSingular };
std::string status_name(RowStatus st);

struct ReportRow {
    std::uint64_t k = 0;
    SolverId solver{};
    double residual = 0.0;  ///< ||A_k theta - b_k||_2; NaN when no theta was produced
    std::optional<double> param_error;
    double cond_est = 0.0;
    std::size_t iterations = 0;
    std::int64_t elapsed_us = 0;
    RowStatus status = RowStatus::Ok;
    double delta = 0.0;  ///< residual bound in force at this step
};

struct ScenarioConfig {
    std::size_t w = 48;
    std::vector<SolverId> solvers = all_solvers();
    double delta_rel = 1e-7;   ///< richardson residual bound, relative to ||b_k||
    double safety = richardson::default_safety;
    double eps_rel = 1e-3;     ///< suboptimal eps = eps_rel * lam_max_hat
    std::size_t richardson_max_iters = 200000;
    recursive::Options recursive_options{};
    std::uint64_t spectrum_seed = 1;
    std::size_t spectrum_max_iters = 300000;  ///< one-time lam_max / lam_min estimation cap
};

struct ScenarioReport {
    std::vector<ReportRow> rows;
    std::vector<std::pair<std::string, std::string>> config_echo;
    std::size_t steps = 0;
    double lam_max_hat = 0.0;
    double lam_min_hat = 0.0;   ///< clamped to keep the condition estimate finite
    double cond_est = 0.0;      ///< shared across steps: the spectrum is slide-invariant
    std::size_t recursive_reinits = 0;
};

/// Warm-starts a window over the first w samples, then slides through the
/// rest invoking every configured solver per step. Solver failures become
/// status rows; nothing aborts the scenario.
ScenarioReport run_scenario(std::span<const double> signal, const window::HarmonicBasis& basis,
                            const ScenarioConfig& cfg, const Vector* theta_star = nullptr,
                            std::uint64_t k0 = 0);

struct SweepRow {
    std::size_t size = 0;
    std::size_t iterations = 0;
    bool converged = true;
    double value = 0.0;
};

using MatrixGenerator = std::function<Matrix(std::size_t)>;

/// Information matrix of a short harmonic window (w = size + 2) with the
/// harmonic count chosen to reach the requested dimension.
Matrix short_window_information_matrix(std::size_t size);

/// Largest-eigenpair iteration counts across matrix sizes.
std::vector<SweepRow> eig_iteration_sweep(std::span<const std::size_t> sizes,
                                          const MatrixGenerator& gen,
                                          const eigen::PowerConfig& cfg);

/// Condition estimates over a range of window sizes for one basis.
std::vector<std::pair<std::size_t, double>> window_condition_sweep(
    const window::HarmonicBasis& basis, std::span<const std::size_t> sizes,
    std::size_t max_iters = 100000);

// ---- file formats ----

struct SampleSeries {
    std::uint64_t k0 = 0;
    std::vector<double> values;
};

/// Waveform CSV: header "k,value", consecutive integer k. Throws ParseError
/// with the offending line number.
SampleSeries ingest_csv(const std::string& path);
void write_waveform_csv(const std::string& path, std::span<const double> values,
                        std::uint64_t k0 = 0);

/// Report CSV: "# key = value" config comments, a fixed header, then one row
/// per (step, solver).
void write_report_csv(std::ostream& out, const ScenarioReport& report);
void write_report_csv(const std::string& path, const ScenarioReport& report);
std::string report_to_csv(const ScenarioReport& report);

/// One "k,residual" trace file per solver: <prefix>_<solver>.csv
std::vector<std::string> write_residual_traces(const std::string& prefix,
                                               const ScenarioReport& report);

// ---- summaries ----

double median_residual(const ScenarioReport& report, SolverId id);
double max_residual(const ScenarioReport& report, SolverId id);
double max_converged_residual(const ScenarioReport& report, SolverId id);
std::size_t failure_count(const ScenarioReport& report, SolverId id);

}  // namespace winlsq::harness
