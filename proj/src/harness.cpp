#include "winlsq/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "winlsq/linalg.hpp"

namespace winlsq::harness {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Box-Muller over raw mt19937_64 draws; the standard engine output is fully
// specified, so generated signals are identical across platforms.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

    double operator()(double std_dev) {
        if (std_dev == 0.0) return 0.0;
        double u1 = 0.0;
        while (u1 == 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std_dev * std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    double uniform01() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
    std::mt19937_64 rng_;
};

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::vector<HarmonicComponent> SignalSpec::default_harmonics() {
    return {{1, 1.0, 0.0}, {2, 0.05, 0.7}, {3, 0.08, 2.1}, {4, 0.03, 4.2}, {5, 0.04, 1.3}};
}

unsigned SignalSpec::highest_order() const {
    unsigned top = 0;
    for (const auto& h : harmonics) top = std::max(top, h.order);
    return top;
}

void SignalSpec::validate() const {
    if (harmonics.empty()) throw std::invalid_argument("at least one harmonic required");
    for (const auto& h : harmonics) {
        if (h.order == 0) throw std::invalid_argument("harmonic order must be >= 1");
        if (!std::isfinite(h.amplitude) || !std::isfinite(h.phase)) {
            throw std::invalid_argument("non-finite harmonic component");
        }
    }
    if (samples_per_cycle < 2 * (static_cast<std::size_t>(highest_order()) + 1)) {
        throw std::invalid_argument("samples_per_cycle too small for the highest harmonic");
    }
    if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) {
        throw std::invalid_argument("noise_std must be finite and non-negative");
    }
    if (cycles == 0) throw std::invalid_argument("cycles must be positive");
    if (!(fundamental_hz > 0.0)) throw std::invalid_argument("fundamental must be positive");
}

std::vector<double> generate(const SignalSpec& spec) {
    spec.validate();
    const double q0 = 2.0 * std::numbers::pi / static_cast<double>(spec.samples_per_cycle);
    GaussianSampler noise(spec.seed);
    std::vector<double> out(spec.sample_count());
    for (std::size_t k = 0; k < out.size(); ++k) {
        double y = 0.0;
        for (const auto& h : spec.harmonics) {
            y += h.amplitude * std::cos(h.order * q0 * static_cast<double>(k) + h.phase);
        }
        out[k] = y + noise(spec.noise_std);
    }
    return out;
}

window::HarmonicBasis basis_for(const SignalSpec& spec) {
    spec.validate();
    const double q0 = 2.0 * std::numbers::pi / static_cast<double>(spec.samples_per_cycle);
    std::set<unsigned> orders;
    for (const auto& h : spec.harmonics) orders.insert(h.order);
    std::vector<double> freqs;
    freqs.reserve(orders.size());
    for (unsigned o : orders) freqs.push_back(o * q0);
    return window::HarmonicBasis(std::move(freqs));
}

Vector true_parameters(const SignalSpec& spec, const window::HarmonicBasis& basis) {
    const double q0 = 2.0 * std::numbers::pi / static_cast<double>(spec.samples_per_cycle);
    Vector theta(basis.dimension());
    const auto freqs = basis.frequencies();
    for (const auto& h : spec.harmonics) {
        const double q = h.order * q0;
        bool found = false;
        for (std::size_t i = 0; i < freqs.size(); ++i) {
            if (std::abs(freqs[i] - q) <= 1e-12 * q) {
                // a cos(qk + p) = a cos(p) cos(qk) - a sin(p) sin(qk)
                theta[2 * i] += h.amplitude * std::cos(h.phase);
                theta[2 * i + 1] -= h.amplitude * std::sin(h.phase);
                found = true;
                break;
            }
        }
        if (!found) throw std::invalid_argument("basis does not contain a harmonic of the signal");
    }
    return theta;
}

std::string solver_name(SolverId id) {
    switch (id) {
        case SolverId::LdlInverse: return "ldl";
        case SolverId::Gauss: return "gauss";
        case SolverId::RichardsonSimplest: return "richardson-simplest";
        case SolverId::RichardsonOptimal: return "richardson-optimal";
        case SolverId::RichardsonSuboptimal: return "richardson-suboptimal";
        case SolverId::Recursive: return "recursive";
        case SolverId::RecursiveNewtonSchulz: return "recursive-ns";
    }
    return "?";
}

std::optional<SolverId> parse_solver(std::string_view name) {
    for (SolverId id : all_solvers()) {
        if (solver_name(id) == name) return id;
    }
    return std::nullopt;
}

std::vector<SolverId> all_solvers() {
    return {SolverId::LdlInverse,          SolverId::Gauss,
            SolverId::RichardsonSimplest,  SolverId::RichardsonOptimal,
            SolverId::RichardsonSuboptimal, SolverId::Recursive,
            SolverId::RecursiveNewtonSchulz};
}

std::string status_name(RowStatus st) {
    switch (st) {
        case RowStatus::Ok: return "ok";
        case RowStatus::NotConverged: return "not_converged";
        case RowStatus::SingularPivot: return "singular_pivot";
        case RowStatus::SNearSingular: return "s_near_singular";
    }
    return "?";
}

namespace {

struct SpectrumEstimates {
    double lam_max = 0.0;
    double lam_min = 0.0;  // clamped away from zero
    double cond = 0.0;
};

// Best-effort extreme-eigenvalue estimates: iteration caps and indefinite
// shifts degrade the estimate instead of failing.
SpectrumEstimates estimate_spectrum(const Matrix& A, std::uint64_t seed, std::size_t max_iters) {
    eigen::PowerConfig cfg;
    cfg.tol = 1e-9 * std::max(max_row_sum_norm(A), std::numeric_limits<double>::min());
    cfg.max_iters = max_iters;
    cfg.seed = seed;

    SpectrumEstimates est;
    try {
        est.lam_max = eigen::power_iterate(A, cfg).value;
    } catch (const eigen::NotConverged& nc) {
        est.lam_max = nc.best().value;
    }
    double lam_min = 0.0;
    try {
        lam_min = eigen::min_eigen_shifted(A, est.lam_max, eigen::default_shift_eps(est.lam_max),
                                           cfg).value;
    } catch (const eigen::NotConverged& nc) {
        lam_min = nc.best().value;
    } catch (const ShiftTooSmall&) {
        lam_min = 0.0;
    }
    est.lam_min = std::max(lam_min, std::numeric_limits<double>::epsilon() * est.lam_max);
    est.cond = est.lam_max / est.lam_min;
    return est;
}

class StepTimer {
public:
    StepTimer() : start_(std::chrono::steady_clock::now()) {}
    std::int64_t elapsed_us() const {
        return std::chrono::duration_cast<std::chrono::microseconds>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace

ScenarioReport run_scenario(std::span<const double> signal, const window::HarmonicBasis& basis,
                            const ScenarioConfig& cfg, const Vector* theta_star,
                            std::uint64_t k0) {
    const std::size_t m = basis.dimension();
    if (cfg.w < m) throw WindowTooSmall(cfg.w, m);
    if (signal.size() < cfg.w + 1) {
        throw std::invalid_argument("signal too short: need more than w samples");
    }
    if (!(cfg.delta_rel > 0.0)) throw std::invalid_argument("delta_rel must be positive");

    std::vector<SolverId> solvers = cfg.solvers;
    std::sort(solvers.begin(), solvers.end());
    solvers.erase(std::unique(solvers.begin(), solvers.end()), solvers.end());
    if (solvers.empty()) throw std::invalid_argument("no solvers configured");

    auto win = window::WindowState::warm_start(basis, cfg.w, signal.subspan(0, cfg.w), k0);

    const SpectrumEstimates spec =
        estimate_spectrum(win.information_matrix(), cfg.spectrum_seed, cfg.spectrum_max_iters);

    // Per-solver chained state. Richardson chains start from the direct
    // solution of the warm window, like the recursive initialization.
    Vector theta_init(m);
    try {
        theta_init = gauss_solve(win.information_matrix(), win.rhs());
    } catch (const SingularPivot&) {
        // keep zeros
    }
    struct SolverState {
        Vector theta;
        std::optional<recursive::State> rec;
    };
    std::vector<SolverState> state(solvers.size());

    recursive::Options rec_plain = cfg.recursive_options;
    rec_plain.policy = recursive::CorrectionPolicy::none();
    recursive::Options rec_ns = cfg.recursive_options;
    rec_ns.policy = recursive::CorrectionPolicy::newton_schulz(1);

    ScenarioReport report;
    for (std::size_t s = 0; s < solvers.size(); ++s) {
        state[s].theta = theta_init;
        const SolverId id = solvers[s];
        if (id == SolverId::Recursive || id == SolverId::RecursiveNewtonSchulz) {
            const auto& opt = id == SolverId::Recursive ? rec_plain : rec_ns;
            try {
                state[s].rec = recursive::init(win.information_matrix(), win.rhs(), opt);
            } catch (const SingularPivot&) {
                state[s].rec.reset();
            }
        }
    }

    const richardson::Preconditioner precond_opt =
        richardson::precond_optimal(spec.lam_min, spec.lam_max);
    const richardson::Preconditioner precond_sub =
        richardson::precond_suboptimal(spec.lam_max, cfg.eps_rel * spec.lam_max);

    const std::size_t steps = signal.size() - cfg.w;
    report.steps = steps;
    report.lam_max_hat = spec.lam_max;
    report.lam_min_hat = spec.lam_min;
    report.cond_est = spec.cond;
    report.rows.reserve(steps * solvers.size());

    for (std::size_t stepi = 0; stepi < steps; ++stepi) {
        const window::RankTwoUpdate u = win.slide(signal[cfg.w + stepi]);
        const Matrix& A = win.information_matrix();
        const Vector& b = win.rhs();
        const double delta = richardson::relative_delta(b, cfg.delta_rel);

        for (std::size_t s = 0; s < solvers.size(); ++s) {
            const SolverId id = solvers[s];
            ReportRow row;
            row.k = win.step();
            row.solver = id;
            row.cond_est = spec.cond;
            row.delta = delta;
            row.residual = kNan;

            StepTimer timer;
            std::optional<Vector> theta;
            switch (id) {
                case SolverId::LdlInverse: {
                    try {
                        theta = invert_via_ldl(A) * b;
                    } catch (const SingularPivot&) {
                        row.status = RowStatus::SingularPivot;
                    }
                    break;
                }
                case SolverId::Gauss: {
                    try {
                        theta = gauss_solve(A, b);
                    } catch (const SingularPivot&) {
                        row.status = RowStatus::SingularPivot;
                    }
                    break;
                }
                case SolverId::RichardsonSimplest:
                case SolverId::RichardsonOptimal:
                case SolverId::RichardsonSuboptimal: {
                    const richardson::Preconditioner p =
                        id == SolverId::RichardsonSimplest
                            ? richardson::precond_simplest(A, cfg.safety)
                            : (id == SolverId::RichardsonOptimal ? precond_opt : precond_sub);
                    richardson::RichardsonConfig rc;
                    rc.delta = delta;
                    rc.max_iters = cfg.richardson_max_iters;
                    try {
                        richardson::RichardsonResult res =
                            richardson::solve(A, b, p, rc, state[s].theta);
                        row.iterations = res.iterations;
                        theta = std::move(res.theta);
                    } catch (const richardson::NotConverged& nc) {
                        row.status = RowStatus::NotConverged;
                        row.iterations = nc.best().iterations;
                        theta = nc.best().theta;
                    }
                    state[s].theta = *theta;
                    break;
                }
                case SolverId::Recursive:
                case SolverId::RecursiveNewtonSchulz: {
                    if (!state[s].rec) {
                        const auto& opt = id == SolverId::Recursive ? rec_plain : rec_ns;
                        try {
                            state[s].rec = recursive::init(A, b, opt);
                            report.recursive_reinits += 1;
                        } catch (const SingularPivot&) {
                            row.status = RowStatus::SingularPivot;
                            break;
                        }
                        theta = state[s].rec->theta;
                        break;
                    }
                    try {
                        const recursive::StepDiagnostics diag =
                            recursive::advance(*state[s].rec, u, A, b);
                        if (diag.reinitialized) {
                            report.recursive_reinits += 1;
                            if (diag.s_guard_tripped) row.status = RowStatus::SNearSingular;
                        }
                        if (diag.corrected) {
                            row.iterations = state[s].rec->options.policy.newton_schulz_steps;
                        }
                        theta = state[s].rec->theta;
                    } catch (const SingularPivot&) {
                        // re-initialization from this window failed; retry next step
                        state[s].rec.reset();
                        row.status = RowStatus::SingularPivot;
                    }
                    break;
                }
            }

            if (theta) {
                row.residual = norm2(A * *theta - b);
                if (theta_star) row.param_error = norm2(*theta - *theta_star);
            }
            row.elapsed_us = timer.elapsed_us();
            report.rows.push_back(std::move(row));
        }
    }

    // Effective configuration, embedded verbatim in the report header.
    auto& echo = report.config_echo;
    echo.emplace_back("w", std::to_string(cfg.w));
    echo.emplace_back("m", std::to_string(m));
    echo.emplace_back("k0", std::to_string(k0));
    echo.emplace_back("samples", std::to_string(signal.size()));
    echo.emplace_back("steps", std::to_string(steps));
    {
        std::string names;
        for (SolverId id : solvers) {
            if (!names.empty()) names += ",";
            names += solver_name(id);
        }
        echo.emplace_back("solvers", names);
    }
    echo.emplace_back("delta_rel", format_double(cfg.delta_rel));
    echo.emplace_back("safety", format_double(cfg.safety));
    echo.emplace_back("eps_rel", format_double(cfg.eps_rel));
    echo.emplace_back("richardson_max_iters", std::to_string(cfg.richardson_max_iters));
    echo.emplace_back("spectrum_seed", std::to_string(cfg.spectrum_seed));
    echo.emplace_back("spectrum_max_iters", std::to_string(cfg.spectrum_max_iters));
    echo.emplace_back("lam_max_hat", format_double(spec.lam_max));
    echo.emplace_back("lam_min_hat", format_double(spec.lam_min));
    echo.emplace_back("cond_est", format_double(spec.cond));
    echo.emplace_back("recursive_reinits", std::to_string(report.recursive_reinits));
    {
        std::string freqs;
        for (double q : basis.frequencies()) {
            if (!freqs.empty()) freqs += ",";
            freqs += format_double(q);
        }
        echo.emplace_back("basis_rad_per_sample", freqs);
    }
    return report;
}

Matrix short_window_information_matrix(std::size_t size) {
    if (size < 2 || size % 2 != 0) throw std::invalid_argument("size must be even and >= 2");
    const double q0 = 2.0 * std::numbers::pi / 256.0;
    const auto basis = window::HarmonicBasis::fundamental(q0, size / 2);
    const std::size_t w = size + 2;
    Matrix A(size);
    for (std::size_t j = 0; j < w; ++j) A.add_scaled_outer(basis.regressor(j), 1.0);
    return A;
}

std::vector<SweepRow> eig_iteration_sweep(std::span<const std::size_t> sizes,
                                          const MatrixGenerator& gen,
                                          const eigen::PowerConfig& cfg) {
    for (std::size_t i = 1; i < sizes.size(); ++i) {
        if (sizes[i] <= sizes[i - 1]) throw std::invalid_argument("sizes must be ascending");
    }
    std::vector<SweepRow> rows;
    rows.reserve(sizes.size());
    for (std::size_t size : sizes) {
        const Matrix A = gen(size);
        SweepRow row;
        row.size = size;
        try {
            const eigen::EigenEstimate est = eigen::power_iterate(A, cfg);
            row.iterations = est.iterations;
            row.value = est.value;
        } catch (const eigen::NotConverged& nc) {
            row.converged = false;
            row.iterations = nc.best().iterations;
            row.value = nc.best().value;
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<std::pair<std::size_t, double>> window_condition_sweep(
    const window::HarmonicBasis& basis, std::span<const std::size_t> sizes,
    std::size_t max_iters) {
    std::vector<std::pair<std::size_t, double>> out;
    for (std::size_t w : sizes) {
        if (w < basis.dimension()) throw WindowTooSmall(w, basis.dimension());
        Matrix A(basis.dimension());
        for (std::size_t j = 0; j < w; ++j) A.add_scaled_outer(basis.regressor(j), 1.0);
        out.emplace_back(w, estimate_spectrum(A, 1, max_iters).cond);
    }
    return out;
}

SampleSeries ingest_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open " + path);

    SampleSeries series;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    bool have_first = false;
    std::uint64_t prev_k = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!have_header) {
            if (line != "k,value") throw ParseError(lineno, "expected header 'k,value'");
            have_header = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ParseError(lineno, "expected 'k,value'");
        std::uint64_t k = 0;
        double v = 0.0;
        try {
            std::size_t used = 0;
            const std::string ks = line.substr(0, comma);
            k = std::stoull(ks, &used);
            if (used != ks.size()) throw std::invalid_argument("trailing characters");
            const std::string vs = line.substr(comma + 1);
            v = std::stod(vs, &used);
            if (used != vs.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw ParseError(lineno, "malformed row '" + line + "'");
        }
        if (!std::isfinite(v)) throw ParseError(lineno, "non-finite value");
        if (have_first) {
            if (k <= prev_k) throw ParseError(lineno, "k must be strictly increasing");
            if (k != prev_k + 1) throw ParseError(lineno, "k must be consecutive");
        } else {
            series.k0 = k;
            have_first = true;
        }
        prev_k = k;
        series.values.push_back(v);
    }
    if (!have_header) throw ParseError(lineno == 0 ? 1 : lineno, "missing header");
    return series;
}

void write_waveform_csv(const std::string& path, std::span<const double> values,
                        std::uint64_t k0) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "k,value\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        out << (k0 + i) << "," << format_double(values[i]) << "\n";
    }
}

void write_report_csv(std::ostream& out, const ScenarioReport& report) {
    for (const auto& [key, value] : report.config_echo) {
        out << "# " << key << " = " << value << "\n";
    }
    out << "k,solver,residual,param_error,cond_est,iterations,elapsed_us,status\n";
    for (const ReportRow& row : report.rows) {
        out << row.k << "," << solver_name(row.solver) << "," << format_double(row.residual) << ",";
        if (row.param_error) out << format_double(*row.param_error);
        out << "," << format_double(row.cond_est) << "," << row.iterations << ","
            << row.elapsed_us << "," << status_name(row.status) << "\n";
    }
}

void write_report_csv(const std::string& path, const ScenarioReport& report) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_report_csv(out, report);
}

std::string report_to_csv(const ScenarioReport& report) {
    std::ostringstream ss;
    write_report_csv(ss, report);
    return ss.str();
}

std::vector<std::string> write_residual_traces(const std::string& prefix,
                                               const ScenarioReport& report) {
    std::set<SolverId> present;
    for (const ReportRow& row : report.rows) present.insert(row.solver);
    std::vector<std::string> paths;
    for (SolverId id : present) {
        const std::string path = prefix + "_" + solver_name(id) + ".csv";
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open " + path + " for writing");
        out << "k,residual\n";
        for (const ReportRow& row : report.rows) {
            if (row.solver != id) continue;
            out << row.k << "," << format_double(row.residual) << "\n";
        }
        paths.push_back(path);
    }
    return paths;
}

namespace {

std::vector<double> residuals_of(const ScenarioReport& report, SolverId id, bool converged_only) {
    std::vector<double> rs;
    for (const ReportRow& row : report.rows) {
        if (row.solver != id) continue;
        if (converged_only && row.status != RowStatus::Ok) continue;
        if (std::isfinite(row.residual)) rs.push_back(row.residual);
    }
    return rs;
}

}  // namespace

double median_residual(const ScenarioReport& report, SolverId id) {
    std::vector<double> rs = residuals_of(report, id, false);
    if (rs.empty()) return kNan;
    std::sort(rs.begin(), rs.end());
    const std::size_t mid = rs.size() / 2;
    return rs.size() % 2 == 1 ? rs[mid] : 0.5 * (rs[mid - 1] + rs[mid]);
}

double max_residual(const ScenarioReport& report, SolverId id) {
    const std::vector<double> rs = residuals_of(report, id, false);
    if (rs.empty()) return kNan;
    return *std::max_element(rs.begin(), rs.end());
}

double max_converged_residual(const ScenarioReport& report, SolverId id) {
    const std::vector<double> rs = residuals_of(report, id, true);
    if (rs.empty()) return kNan;
    return *std::max_element(rs.begin(), rs.end());
}

std::size_t failure_count(const ScenarioReport& report, SolverId id) {
    std::size_t n = 0;
    for (const ReportRow& row : report.rows) {
        if (row.solver == id && row.status != RowStatus::Ok) ++n;
    }
    return n;
}

}  // namespace winlsq::harness
