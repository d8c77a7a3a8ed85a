#include "rsnl/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rsnl/parallel.hpp"

namespace rsnl {

namespace {

std::string grid_label(std::size_t nl, std::size_t nt) {
    std::ostringstream os;
    os << nl << " lambdas x " << nt << " times";
    return os.str();
}

}  // namespace

std::vector<BoundReport> verify_kernel_bounds(const FracParams& p,
                                              const std::vector<double>& lambdas,
                                              const std::vector<double>& times,
                                              double T, const QuadConfig& cfg,
                                              int threads) {
    if (lambdas.empty() || times.empty())
        throw std::invalid_argument("verify_kernel_bounds: grids must be nonempty");
    if (!(T > 0.0) || T < *std::max_element(times.begin(), times.end()))
        throw std::invalid_argument("verify_kernel_bounds: T must cover the time grid");

    const double slack = 1e-8;
    const std::size_t nl = lambdas.size(), nt = times.size();
    const std::string label = grid_label(nl, nt);

    // B and dB/dt over the product grid (t = 0 handled exactly).
    std::vector<double> B(nl * nt), dB(nl * nt);
    parallel_for(static_cast<int>(nl * nt), threads, [&](int idx) {
        const std::size_t i = static_cast<std::size_t>(idx) / nt;
        const std::size_t j = static_cast<std::size_t>(idx) % nt;
        B[idx] = relaxation(p, lambdas[i], times[j], cfg).value;
        dB[idx] = times[j] > 0.0 ? relaxation_dt(p, lambdas[i], times[j], cfg).value
                                 : -std::numeric_limits<double>::infinity();
    });

    std::vector<BoundReport> reports;

    {  // 0 < B < 1 for t > 0; B(lambda, 0) = 1
        BoundReport r{"range01", label};
        for (std::size_t i = 0; i < nl; ++i)
            for (std::size_t j = 0; j < nt; ++j) {
                const double v = B[i * nt + j];
                if (times[j] == 0.0) {
                    r.max_violation = std::max(r.max_violation, std::abs(v - 1.0));
                } else {
                    r.max_violation = std::max(r.max_violation, -v);        // v > 0
                    r.max_violation = std::max(r.max_violation, v - 1.0);   // v < 1
                }
            }
        r.pass = r.max_violation <= slack;
        reports.push_back(r);
    }

    {  // dB/dt < 0 and B decreasing along each increasing t-row
        BoundReport r{"monotone_decay", label};
        std::vector<double> ts(times);
        std::sort(ts.begin(), ts.end());
        for (std::size_t i = 0; i < nl; ++i) {
            for (std::size_t j = 0; j < nt; ++j)
                if (times[j] > 0.0) r.max_violation = std::max(r.max_violation, dB[i * nt + j]);
            for (std::size_t j = 1; j < ts.size(); ++j) {
                const double prev = relaxation(p, lambdas[i], ts[j - 1], cfg).value;
                const double next = relaxation(p, lambdas[i], ts[j], cfg).value;
                r.max_violation = std::max(r.max_violation, next - prev);
            }
        }
        r.pass = r.max_violation <= slack;
        reports.push_back(r);
    }

    {  // lambda B <= C min(1/t, t^(alpha-1)): fitted constant
        BoundReport r{"peak_shape", label};
        r.hard = false;
        for (std::size_t i = 0; i < nl; ++i)
            for (std::size_t j = 0; j < nt; ++j) {
                if (times[j] <= 0.0) continue;
                const double envelope =
                    std::min(1.0 / times[j], std::pow(times[j], p.alpha - 1.0));
                r.fitted_constant =
                    std::max(r.fitted_constant, lambdas[i] * B[i * nt + j] / envelope);
            }
        r.pass = std::isfinite(r.fitted_constant);
        reports.push_back(r);
    }

    {  // int_0^T B dt <= 1/lambda
        BoundReport r{"time_integral", label};
        std::vector<double> vals(nl);
        parallel_for(static_cast<int>(nl), threads, [&](int i) {
            vals[i] = relaxation_integral(p, lambdas[i], T, cfg).value;
        });
        for (std::size_t i = 0; i < nl; ++i)
            r.max_violation = std::max(r.max_violation, vals[i] - 1.0 / lambdas[i]);
        r.pass = r.max_violation <= slack;
        reports.push_back(r);
    }

    {  // |dB/dt| lambda t^(2-alpha) <= Gamma(2-alpha)/(gamma pi sin(alpha pi))
        BoundReport r{"dt_explicit", label};
        const double bound = std::tgamma(2.0 - p.alpha) /
                             (p.gamma * M_PI * std::sin(p.alpha * M_PI));
        r.fitted_constant = bound;
        for (std::size_t i = 0; i < nl; ++i)
            for (std::size_t j = 0; j < nt; ++j) {
                if (times[j] <= 0.0) continue;
                const double lhs = std::abs(dB[i * nt + j]) * lambdas[i] *
                                   std::pow(times[j], 2.0 - p.alpha);
                r.max_violation = std::max(r.max_violation, lhs - bound);
            }
        r.pass = r.max_violation <= slack;
        reports.push_back(r);
    }

    {  // B >= C(alpha, gamma, lambda1)/lambda at horizon T
        BoundReport r{"lower_bound", label};
        const double C = lower_bound_constant(p, lambdas.front(), T, cfg);
        r.fitted_constant = C;
        for (std::size_t i = 0; i < nl; ++i)
            for (std::size_t j = 0; j < nt; ++j)
                r.max_violation = std::max(r.max_violation, C / lambdas[i] - B[i * nt + j]);
        r.pass = r.max_violation <= 1e-10;
        reports.push_back(r);
    }

    return reports;
}

ConditioningTable amplification_spectrum(double beta, double t0, const Spectrum& spectrum,
                                         const FracParams& p, const QuadConfig& cfg,
                                         double k0_tol) {
    ConditioningTable table{beta, t0, {}, std::nullopt};
    const int K = spectrum.size();
    table.rows.reserve(static_cast<std::size_t>(K));
    for (int k = 1; k <= K; ++k) {
        const double Bk = relaxation(p, spectrum.eigenvalue(k), t0, cfg).value;
        const double gap = Bk - beta;
        ConditioningRow row{k, spectrum.eigenvalue(k), Bk, gap, 0.0, false};
        row.resonant = beta > 0.0 && beta < 1.0 && std::abs(gap) <= k0_tol;
        row.amplification = row.resonant ? std::numeric_limits<double>::infinity()
                                         : 1.0 / std::abs(gap);
        table.rows.push_back(row);
    }
    if (beta == 0.0) {
        // least-squares slope of log(amplification) against log(lambda)
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (const ConditioningRow& row : table.rows) {
            const double x = std::log(row.lambda);
            const double y = std::log(row.amplification);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
        }
        const double n = static_cast<double>(table.rows.size());
        table.loglog_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    return table;
}

namespace {

void require_increasing(const std::vector<double>& grid, const char* who) {
    if (grid.empty()) throw std::invalid_argument(std::string(who) + ": empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument(std::string(who) + ": grid must be increasing");
}

}  // namespace

std::optional<double> monotonicity_threshold_lambda(const FracParams& p, double t0,
                                                    const std::vector<double>& lambda_grid,
                                                    const QuadConfig& cfg) {
    require_increasing(lambda_grid, "monotonicity_threshold_lambda");
    // scan from the top: the threshold is the first grid point of the
    // maximal all-negative suffix
    int first_negative_suffix = static_cast<int>(lambda_grid.size());
    for (int i = static_cast<int>(lambda_grid.size()) - 1; i >= 0; --i) {
        if (relaxation_dlambda(p, lambda_grid[i], t0, cfg).value < 0.0)
            first_negative_suffix = i;
        else
            break;
    }
    if (first_negative_suffix == static_cast<int>(lambda_grid.size())) return std::nullopt;
    return lambda_grid[first_negative_suffix];
}

std::optional<double> monotonicity_threshold_time(const FracParams& p, double lambda1,
                                                  const std::vector<double>& t_grid,
                                                  const std::vector<double>& lambda_grid,
                                                  const QuadConfig& cfg) {
    require_increasing(t_grid, "monotonicity_threshold_time");
    if (lambda_grid.empty())
        throw std::invalid_argument("monotonicity_threshold_time: empty grid");
    if (!(*std::max_element(t_grid.begin(), t_grid.end()) >= 1.0))
        throw std::invalid_argument("monotonicity_threshold_time: t grid must reach 1");
    for (double lam : lambda_grid)
        if (lam < lambda1)
            throw std::invalid_argument("monotonicity_threshold_time: lambda grid below lambda1");

    auto all_negative = [&](double t) {
        for (double lam : lambda_grid)
            if (relaxation_dlambda(p, lam, t, cfg).value >= 0.0) return false;
        return true;
    };
    int first_good_suffix = static_cast<int>(t_grid.size());
    for (int i = static_cast<int>(t_grid.size()) - 1; i >= 0; --i) {
        if (all_negative(t_grid[i]))
            first_good_suffix = i;
        else
            break;
    }
    if (first_good_suffix == static_cast<int>(t_grid.size())) return std::nullopt;
    return t_grid[first_good_suffix];
}

namespace {

struct CoerciveFits {
    double weak;
    double sharp;
    double weak_u;
    double forced;
    double data_sup;
};

// Q(t) per the coercive estimate, assembled from tabulated coefficients via
// a central difference in t and the discrete fractional derivative of A w.
CoerciveFits coercive_fits(const NonlocalSolution& sol, const Spectrum& spectrum,
                           int steps, double eps, const QuadConfig& cfg, int threads) {
    const int K = spectrum.size();
    TimeGrid grid(sol.T, steps);
    const double h = grid.step();

    NonlocalSpec shadow(sol.params, sol.beta, sol.t0, sol.T, sol.phi, sol.forcing);
    OmegaTable omega = solve_inhomogeneous(shadow, spectrum, grid, cfg, threads);

    // per-mode tables of w_k = h_k B and omega_k
    std::vector<std::vector<double>> w(static_cast<std::size_t>(K));
    parallel_for(K, threads, [&](int idx) {
        const int k = idx + 1;
        std::vector<double> wk(static_cast<std::size_t>(grid.size()));
        for (int j = 0; j < grid.size(); ++j)
            wk[static_cast<std::size_t>(j)] =
                sol.series.h[k - 1] *
                relaxation(sol.params, sol.lambdas[k - 1], grid.node(j), cfg).value;
        w[static_cast<std::size_t>(idx)] = std::move(wk);
    });

    auto frac_of_scaled = [&](const std::vector<double>& series, double lambda) {
        TimeSeries scaled{grid, series};
        for (double& v : scaled.values) v *= lambda;
        return rl_derivative(scaled, sol.params.alpha).values;
    };

    std::vector<std::vector<double>> dAw(static_cast<std::size_t>(K)),
        dAu(static_cast<std::size_t>(K));
    parallel_for(K, threads, [&](int idx) {
        dAw[idx] = frac_of_scaled(w[idx], sol.lambdas[idx]);
        std::vector<double> u = w[idx];
        for (int j = 0; j < grid.size(); ++j) u[j] += omega.values[idx][j];
        dAu[idx] = frac_of_scaled(u, sol.lambdas[idx]);
    });

    const double psi_sq = sol.psi.l2_norm() * sol.psi.l2_norm();
    double f_sup_eps = 0.0;  // max_t ||f(t)||_eps^2 over the grid
    if (!sol.forcing.is_zero()) {
        for (int j = 0; j <= grid.n_steps; ++j) {
            double s = 0.0;
            for (int k = 1; k <= K; ++k) {
                const double fk = sol.forcing(k, grid.node(j));
                s += std::pow(sol.lambdas[k - 1], 2.0 * eps) * fk * fk;
            }
            f_sup_eps = std::max(f_sup_eps, s);
        }
    }

    CoerciveFits fits{0.0, 0.0, 0.0, 0.0, f_sup_eps};
    for (int j = 1; j < grid.n_steps; ++j) {
        const double t = grid.node(j);
        if (t < 0.1 * sol.T) continue;  // below the window the discretization noise dominates
        double q_w = 0.0, q_u = 0.0, q_f = 0.0;
        for (int idx = 0; idx < K; ++idx) {
            const double dw = (w[idx][j + 1] - w[idx][j - 1]) / (2.0 * h);
            const double aw = sol.lambdas[idx] * w[idx][j];
            q_w += dw * dw + aw * aw + dAw[idx][j] * dAw[idx][j];

            const double om_c = omega.values[idx][j];
            const double dom = (omega.values[idx][j + 1] - omega.values[idx][j - 1]) / (2.0 * h);
            const double du = dw + dom;
            const double au = sol.lambdas[idx] * (w[idx][j] + om_c);
            q_u += du * du + au * au + dAu[idx][j] * dAu[idx][j];

            const double dAom = dAu[idx][j] - dAw[idx][j];
            q_f += dom * dom + dAom * dAom;
        }
        const double weak_shape = std::pow(t, -2.0 * (2.0 - sol.params.alpha));
        const double sharp_shape = std::pow(t, -2.0 * (1.0 - sol.params.alpha));
        if (psi_sq > 0.0) {
            fits.weak = std::max(fits.weak, q_w / (weak_shape * psi_sq));
            fits.sharp = std::max(fits.sharp, q_w / (sharp_shape * psi_sq));
            fits.weak_u = std::max(fits.weak_u, q_u / (weak_shape * psi_sq));
        }
        if (f_sup_eps > 0.0) fits.forced = std::max(fits.forced, q_f / f_sup_eps);
    }
    return fits;
}

}  // namespace

CoerciveReport coercive_report(const NonlocalSolution& sol, const Spectrum& spectrum,
                               int grid_steps, double eps, const QuadConfig& cfg,
                               int threads) {
    if (grid_steps < 64) throw std::invalid_argument("coercive_report: grid too coarse");
    CoerciveFits base = coercive_fits(sol, spectrum, grid_steps, eps, cfg, threads);
    CoerciveFits fine = coercive_fits(sol, spectrum, 2 * grid_steps, eps, cfg, threads);

    CoerciveReport report;
    report.const_weak = base.weak;
    report.const_sharp = base.sharp;
    report.const_weak_refined = fine.weak;
    report.const_weak_u = base.weak_u;
    report.forced_const = base.forced;
    report.forced_refined = fine.forced;
    report.forced_data_sup = base.data_sup;
    report.pass = true;
    if (base.weak > 0.0) {
        report.drift = std::abs(fine.weak - base.weak) / base.weak;
        report.pass = report.pass && report.drift <= 0.10;
    }
    if (base.forced > 0.0) {
        report.forced_drift = std::abs(fine.forced - base.forced) / base.forced;
        report.pass = report.pass && report.forced_drift <= 0.10;
    }
    return report;
}

}  // namespace rsnl
