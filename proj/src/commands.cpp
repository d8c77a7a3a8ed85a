#include "rsnl/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "json.hpp"

#include "rsnl/analysis.hpp"
#include "rsnl/nonlocal.hpp"
#include "rsnl/oracle.hpp"
#include "rsnl/parallel.hpp"

namespace rsnl {

namespace {

using ordered_json = nlohmann::ordered_json;

// Round-trip-exact, locale-independent float formatting for CSV cells.
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_output(const std::string& out_dir, const std::string& name) {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path path = std::filesystem::path(out_dir) / name;
    std::ofstream out(path, std::ios::binary);  // '\n' endings on all platforms
    if (!out) throw std::runtime_error("cannot open output file " + path.string());
    return out;
}

std::vector<double> default_lambda_grid() {
    std::vector<double> out;
    for (int i = 0; i < 25; ++i) out.push_back(std::pow(10.0, 4.0 * i / 24.0));
    return out;
}

std::vector<double> grid_lambdas(const RunConfig& cfg) {
    return cfg.kernel_lambdas.empty() ? default_lambda_grid() : cfg.kernel_lambdas;
}

std::vector<double> grid_times(const RunConfig& cfg) {
    if (!cfg.kernel_times.empty()) return cfg.kernel_times;
    return {0.01, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0};
}

}  // namespace

int cmd_eval_kernel(const RunConfig& cfg, const std::string& out_dir, int threads) {
    const FracParams p = cfg.frac_params();
    const std::vector<double> lambdas = grid_lambdas(cfg);
    const std::vector<double> times = grid_times(cfg);

    struct Row {
        double B, err, dB;
    };
    const std::size_t nt = times.size();
    std::vector<Row> rows(lambdas.size() * nt);
    parallel_for(static_cast<int>(rows.size()), threads, [&](int idx) {
        const double lam = lambdas[static_cast<std::size_t>(idx) / nt];
        const double t = times[static_cast<std::size_t>(idx) % nt];
        const KernelValue B = relaxation(p, lam, t, cfg.quad);
        const double dB = t > 0.0 ? relaxation_dt(p, lam, t, cfg.quad).value
                                  : -std::numeric_limits<double>::infinity();
        rows[static_cast<std::size_t>(idx)] = {B.value, B.est_error, dB};
    });

    std::ofstream out = open_output(out_dir, "kernel.csv");
    out << "lambda,t,B,est_error,dBdt\n";
    for (std::size_t i = 0; i < lambdas.size(); ++i)
        for (std::size_t j = 0; j < nt; ++j) {
            const Row& r = rows[i * nt + j];
            out << fmt(lambdas[i]) << ',' << fmt(times[j]) << ',' << fmt(r.B) << ','
                << fmt(r.err) << ',' << fmt(r.dB) << '\n';
        }
    return kExitOk;
}

int cmd_verify_bounds(const RunConfig& cfg, const std::string& out_dir, int threads) {
    const FracParams p = cfg.frac_params();
    const std::vector<double> lambdas = grid_lambdas(cfg);
    const std::vector<double> times = grid_times(cfg);
    const double T = std::max(cfg.bounds_horizon(),
                              *std::max_element(times.begin(), times.end()));

    const std::vector<BoundReport> reports =
        verify_kernel_bounds(p, lambdas, times, T, cfg.quad, threads);

    ordered_json arr = ordered_json::array();
    bool all_hard_pass = true;
    for (const BoundReport& r : reports) {
        ordered_json item;
        item["id"] = r.id;
        item["grid"] = r.grid;
        item["hard"] = r.hard;
        item["max_violation"] = r.max_violation;
        item["fitted_constant"] = r.fitted_constant;
        item["pass"] = r.pass;
        arr.push_back(item);
        if (r.hard && !r.pass) all_hard_pass = false;
    }
    std::ofstream out = open_output(out_dir, "bounds.json");
    out << arr.dump(2) << '\n';
    return all_hard_pass ? kExitOk : kExitBoundViolation;
}

namespace {

ordered_json regime_to_json(const Regime& regime) {
    ordered_json j;
    j["tag"] = to_string(regime.tag);
    j["k0"] = regime.k0;
    j["min_gap"] = regime.min_gap;
    j["near_resonance"] = regime.near_resonance;
    j["warnings"] = regime.warnings;
    return j;
}

}  // namespace

int cmd_solve(const RunConfig& cfg, const std::string& out_dir, int threads) {
    const Spectrum spectrum = cfg.build_spectrum();
    NonlocalSpec spec(cfg.frac_params(), cfg.beta, cfg.t0, cfg.T,
                      cfg.build_phi(spectrum), cfg.build_forcing(spectrum));
    TimeGrid grid(cfg.T, cfg.solution_steps);

    NonlocalSolution sol = solve_nonlocal(spec, spectrum, grid, cfg.quad, cfg.k0_tol, {},
                                          threads);

    // solution.csv: mode-major, t-minor
    const int K = spectrum.size();
    std::vector<std::vector<double>> table(static_cast<std::size_t>(K));
    parallel_for(K, threads, [&](int idx) {
        const int k = idx + 1;
        std::vector<double> col(static_cast<std::size_t>(grid.size()));
        for (int j = 0; j < grid.size(); ++j)
            col[static_cast<std::size_t>(j)] =
                sol.series.h[k - 1] *
                    relaxation(sol.params, sol.lambdas[k - 1], grid.node(j), cfg.quad).value +
                sol.omega.at(k, j);
        table[static_cast<std::size_t>(idx)] = std::move(col);
    });
    {
        std::ofstream out = open_output(out_dir, "solution.csv");
        out << "t,k,u_k\n";
        for (int k = 1; k <= K; ++k)
            for (int j = 0; j < grid.size(); ++j)
                out << fmt(grid.node(j)) << ',' << k << ','
                    << fmt(table[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j)])
                    << '\n';
    }

    const ResidualReport report =
        verify_solution(sol, spectrum, std::max(1024, cfg.oracle_steps), cfg.quad, threads);

    ordered_json j;
    j["regime"] = regime_to_json(sol.regime);
    j["nonlocal_residual"] = report.nonlocal_max;
    j["nonlocal_residual_scaled"] = report.nonlocal_max_scaled;
    j["equation_residual"] = report.equation_max;
    j["equation_residual_bulk"] = report.equation_max_bulk;
    j["continuity_drift"] = report.continuity_drift;
    j["warnings"] = report.warnings;
    std::ofstream out = open_output(out_dir, "residuals.json");
    out << j.dump(2) << '\n';
    return kExitOk;
}

int cmd_sweep_beta(const RunConfig& cfg, const std::string& out_dir, int threads) {
    if (cfg.beta_list.empty()) throw ConfigError("sweep-beta requires a nonempty beta_list");
    const Spectrum spectrum = cfg.build_spectrum();
    const FracParams p = cfg.frac_params();

    std::vector<ConditioningTable> tables(cfg.beta_list.size());
    parallel_for(static_cast<int>(cfg.beta_list.size()), threads, [&](int i) {
        tables[static_cast<std::size_t>(i)] = amplification_spectrum(
            cfg.beta_list[static_cast<std::size_t>(i)], cfg.t0, spectrum, p, cfg.quad,
            cfg.k0_tol);
    });

    std::ofstream out = open_output(out_dir, "sweep.csv");
    out << "beta,k,lambda,B,gap,amplification,resonant\n";
    for (const ConditioningTable& table : tables)
        for (const ConditioningRow& row : table.rows)
            out << fmt(table.beta) << ',' << row.k << ',' << fmt(row.lambda) << ','
                << fmt(row.relax_t0) << ',' << fmt(row.gap) << ',' << fmt(row.amplification)
                << ',' << (row.resonant ? 1 : 0) << '\n';
    return kExitOk;
}

int cmd_find_k0(const RunConfig& cfg, const std::string& out_dir, int /*threads*/) {
    const Spectrum spectrum = cfg.build_spectrum();
    NonlocalSpec spec(cfg.frac_params(), cfg.beta, cfg.t0, cfg.T,
                      CoeffVector::zeros(spectrum.size()), Forcing::zero());
    const Regime regime = classify(spec, spectrum, cfg.quad, cfg.k0_tol);

    ordered_json j = regime_to_json(regime);
    j["beta"] = cfg.beta;
    j["t0"] = cfg.t0;
    j["k0_tol"] = cfg.k0_tol;
    std::ofstream out = open_output(out_dir, "k0.json");
    out << j.dump(2) << '\n';
    return kExitOk;
}

int cmd_oracle_compare(const RunConfig& cfg, const std::string& out_dir, int threads) {
    const FracParams p = cfg.frac_params();
    const std::vector<double> lambdas = grid_lambdas(cfg);
    std::vector<double> times = grid_times(cfg);
    times.erase(std::remove_if(times.begin(), times.end(), [](double t) { return t <= 0.0; }),
                times.end());
    if (times.empty()) throw ConfigError("oracle-compare needs positive times");
    const double t_end = *std::max_element(times.begin(), times.end());
    const int base = cfg.compare_base_steps;

    // snap requested times to base-grid nodes so both routes are compared
    // at identical arguments
    std::vector<double> snapped;
    snapped.reserve(times.size());
    const double h = t_end / base;
    for (double t : times) {
        const int j = std::max<int>(1, static_cast<int>(std::lround(t / h)));
        snapped.push_back(j * h);
    }

    struct Row {
        double lam, t, quad, oracle;
    };
    std::vector<Row> rows(lambdas.size() * snapped.size());
    parallel_for(static_cast<int>(lambdas.size()), threads, [&](int i) {
        const double lam = lambdas[static_cast<std::size_t>(i)];
        const std::vector<double> oracle = oracle_relaxation(p, lam, snapped, t_end, base);
        for (std::size_t j = 0; j < snapped.size(); ++j) {
            const double q = relaxation(p, lam, snapped[j], cfg.quad).value;
            rows[static_cast<std::size_t>(i) * snapped.size() + j] = {lam, snapped[j], q,
                                                                      oracle[j]};
        }
    });

    std::ofstream out = open_output(out_dir, "oracle_compare.csv");
    out << "lambda,t,B_quadrature,B_oracle,rel_error\n";
    for (const Row& r : rows)
        out << fmt(r.lam) << ',' << fmt(r.t) << ',' << fmt(r.quad) << ',' << fmt(r.oracle)
            << ',' << fmt(std::abs(r.quad - r.oracle) / std::max(1e-300, std::abs(r.quad)))
            << '\n';
    return kExitOk;
}

}  // namespace rsnl
