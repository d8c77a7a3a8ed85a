#include "rsnl/nonlocal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rsnl/parallel.hpp"

namespace rsnl {

namespace {

constexpr double kOrthoRelTol = 1e-8;

std::string join_modes(const std::vector<std::pair<int, double>>& offenders) {
    std::ostringstream os;
    os << "orthogonality violated on resonant modes:";
    for (const auto& [k, mag] : offenders) os << " k=" << k << " |psi_k|=" << mag;
    return os.str();
}

}  // namespace

NonlocalSpec::NonlocalSpec(FracParams params_, double beta_, double t0_, double T_,
                           CoeffVector phi_, Forcing forcing_)
    : params(params_), beta(beta_), t0(t0_), T(T_),
      phi(std::move(phi_)), forcing(std::move(forcing_)) {
    if (!(T > 0.0)) throw std::domain_error("NonlocalSpec: T must be positive");
    if (!(t0 > 0.0 && t0 <= T)) throw std::domain_error("NonlocalSpec: need 0 < t0 <= T");
    if (!std::isfinite(beta)) throw std::domain_error("NonlocalSpec: beta must be finite");
}

const char* to_string(RegimeTag tag) {
    switch (tag) {
        case RegimeTag::UniquelySolvable: return "UniquelySolvable";
        case RegimeTag::BackwardIllPosed: return "BackwardIllPosed";
        case RegimeTag::ResonantK0: return "ResonantK0";
    }
    return "?";
}

OrthogonalityViolation::OrthogonalityViolation(std::vector<std::pair<int, double>> offenders_)
    : std::runtime_error(join_modes(offenders_)), offenders(std::move(offenders_)) {}

Regime classify(const NonlocalSpec& spec, const Spectrum& spectrum,
                const QuadConfig& cfg, double k0_tol) {
    if (!(k0_tol > 0.0)) throw std::domain_error("classify: k0_tol must be positive");
    const int K = spectrum.size();
    Regime regime;
    regime.relax_t0.resize(static_cast<std::size_t>(K));
    for (int k = 1; k <= K; ++k)
        regime.relax_t0[k - 1] = relaxation(spec.params, spectrum.eigenvalue(k), spec.t0, cfg).value;

    // Resonance is possible only for beta in (0,1): 0 < B < 1 for t0 > 0.
    if (spec.beta > 0.0 && spec.beta < 1.0) {
        for (int k = 1; k <= K; ++k)
            if (std::abs(regime.relax_t0[k - 1] - spec.beta) <= k0_tol)
                regime.k0.push_back(k);
    }

    regime.min_gap = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= K; ++k) {
        if (std::binary_search(regime.k0.begin(), regime.k0.end(), k)) continue;
        regime.min_gap = std::min(regime.min_gap, std::abs(regime.relax_t0[k - 1] - spec.beta));
    }

    if (spec.beta == 0.0) {
        regime.tag = RegimeTag::BackwardIllPosed;
        regime.warnings.push_back("backward problem: solution exists but is not stable");
    } else if (!regime.k0.empty()) {
        regime.tag = RegimeTag::ResonantK0;
    } else {
        regime.tag = RegimeTag::UniquelySolvable;
    }

    if (regime.min_gap > 0.0 && regime.min_gap <= 10.0 * k0_tol) {
        regime.near_resonance = true;
        std::ostringstream os;
        os << "near-resonance: min |B - beta| = " << regime.min_gap
           << " within 10x the resonance tolerance " << k0_tol
           << "; per-mode amplification up to " << 1.0 / regime.min_gap;
        regime.warnings.push_back(os.str());
    }
    return regime;
}

namespace {

// Convolution-structured Duhamel tabulation for one mode. Panel width equals
// the grid spacing, so the kernel values B(lambda, d*h - sigma_m) are shared
// across all output nodes.
std::vector<double> duhamel_on_grid(const FracParams& params, double lambda,
                                    const Forcing& forcing, int mode,
                                    const TimeGrid& grid, const QuadConfig& cfg,
                                    const GaussRule& rule) {
    const int n = grid.n_steps;
    const double h = grid.step();
    const int q = static_cast<int>(rule.nodes.size());

    std::vector<double> kern(static_cast<std::size_t>(n) * q);
    std::vector<double> fval(static_cast<std::size_t>(n) * q);
    std::vector<double> sigma(q), weight(q);
    for (int m = 0; m < q; ++m) {
        sigma[m] = 0.5 * h * (rule.nodes[m] + 1.0);
        weight[m] = 0.5 * h * rule.weights[m];
    }
    for (int d = 1; d <= n; ++d)
        for (int m = 0; m < q; ++m) {
            const double lag = std::max(0.0, d * h - sigma[m]);
            kern[static_cast<std::size_t>(d - 1) * q + m] = relaxation(params, lambda, lag, cfg).value;
        }
    for (int i = 0; i < n; ++i)
        for (int m = 0; m < q; ++m)
            fval[static_cast<std::size_t>(i) * q + m] = forcing(mode, i * h + sigma[m]);

    std::vector<double> omega(static_cast<std::size_t>(n) + 1, 0.0);
    for (int j = 1; j <= n; ++j) {
        double acc = 0.0;
        for (int d = 1; d <= j; ++d) {
            const double* kp = &kern[static_cast<std::size_t>(d - 1) * q];
            const double* fp = &fval[static_cast<std::size_t>(j - d) * q];
            for (int m = 0; m < q; ++m) acc += weight[m] * kp[m] * fp[m];
        }
        omega[static_cast<std::size_t>(j)] = acc;
    }
    return omega;
}

}  // namespace

OmegaTable solve_inhomogeneous(const NonlocalSpec& spec, const Spectrum& spectrum,
                               const TimeGrid& grid, const QuadConfig& cfg, int threads) {
    const int K = spectrum.size();
    OmegaTable table{grid, std::vector<std::vector<double>>(static_cast<std::size_t>(K))};
    static const GaussRule rule16 = gauss_legendre(16);
    parallel_for(K, threads, [&](int idx) {
        const int k = idx + 1;
        if (spec.forcing.mode_is_zero(k)) {
            table.values[idx].assign(static_cast<std::size_t>(grid.size()), 0.0);
        } else {
            table.values[idx] = duhamel_on_grid(spec.params, spectrum.eigenvalue(k),
                                                spec.forcing, k, grid, cfg, rule16);
        }
    });
    return table;
}

SolutionSeries solve_homogeneous(const CoeffVector& psi, const NonlocalSpec& spec,
                                 const Spectrum& spectrum, const Regime& regime,
                                 const std::map<int, double>& free_values) {
    const int K = spectrum.size();
    if (psi.size() != K)
        throw std::invalid_argument("solve_homogeneous: psi length does not match spectrum");
    if (static_cast<int>(regime.relax_t0.size()) != K)
        throw std::invalid_argument("solve_homogeneous: regime computed for a different spectrum");
    for (const auto& [k, hk] : free_values)
        if (!std::binary_search(regime.k0.begin(), regime.k0.end(), k))
            throw std::invalid_argument("solve_homogeneous: free value for non-resonant mode " +
                                        std::to_string(k));

    const double psi_norm = psi.l2_norm();
    std::vector<std::pair<int, double>> offenders;
    for (int k : regime.k0)
        if (std::abs(psi.c[k - 1]) > kOrthoRelTol * psi_norm)
            offenders.emplace_back(k, std::abs(psi.c[k - 1]));
    if (!offenders.empty()) throw OrthogonalityViolation(std::move(offenders));

    SolutionSeries series;
    series.h.assign(static_cast<std::size_t>(K), 0.0);
    series.unstable = (spec.beta == 0.0);
    for (int k = 1; k <= K; ++k) {
        if (std::binary_search(regime.k0.begin(), regime.k0.end(), k)) {
            auto it = free_values.find(k);
            series.h[k - 1] = (it == free_values.end()) ? 0.0 : it->second;
            series.free_indices.push_back(k);
        } else {
            series.h[k - 1] = psi.c[k - 1] / (regime.relax_t0[k - 1] - spec.beta);
        }
    }
    return series;
}

NonlocalSolution solve_nonlocal(const NonlocalSpec& spec, const Spectrum& spectrum,
                                const TimeGrid& grid, const QuadConfig& cfg,
                                double k0_tol, const std::map<int, double>& free_values,
                                int threads) {
    const int K = spectrum.size();
    if (spec.phi.size() != K)
        throw std::invalid_argument("solve_nonlocal: phi length does not match spectrum");

    NonlocalSolution sol{spec.params, spec.beta, spec.t0, spec.T,
                         spectrum.eigenvalues(), spec.forcing, spec.phi,
                         CoeffVector::zeros(K), std::vector<double>(static_cast<std::size_t>(K), 0.0),
                         {}, {}, {grid, {}}};

    sol.omega = solve_inhomogeneous(spec, spectrum, grid, cfg, threads);

    // psi = phi - omega(t0), with omega(t0) evaluated directly so the
    // nonlocal identity is exact irrespective of the table grid.
    parallel_for(K, threads, [&](int idx) {
        const int k = idx + 1;
        if (!spec.forcing.mode_is_zero(k)) {
            auto fk = [&spec, k](double tau) { return spec.forcing(k, tau); };
            sol.omega_t0[idx] = duhamel(spec.params, spectrum.eigenvalue(k), spec.t0, fk, cfg);
        }
        sol.psi.c[idx] = spec.phi.c[idx] - sol.omega_t0[idx];
    });

    sol.regime = classify(spec, spectrum, cfg, k0_tol);
    sol.series = solve_homogeneous(sol.psi, spec, spectrum, sol.regime, free_values);
    return sol;
}

double NonlocalSolution::coefficient(int k, double t, const QuadConfig& cfg) const {
    const double lambda = lambdas.at(static_cast<std::size_t>(k - 1));
    double value = series.h[k - 1] * relaxation(params, lambda, t, cfg).value;
    if (!forcing.mode_is_zero(k)) {
        if (t == t0) {
            value += omega_t0[k - 1];  // reuse the solve-time evaluation
        } else {
            auto fk = [this, k](double tau) { return forcing(k, tau); };
            value += duhamel(params, lambda, t, fk, cfg);
        }
    }
    return value;
}

double NonlocalSolution::coefficient_dt(int k, double t, const QuadConfig& cfg) const {
    const double lambda = lambdas.at(static_cast<std::size_t>(k - 1));
    double value = series.h[k - 1] * relaxation_dt(params, lambda, t, cfg).value;
    if (!forcing.mode_is_zero(k)) {
        value += forcing(k, t);
        static const GaussRule rule16 = gauss_legendre(16);
        auto integrand = [&](double tau) {
            const double lag = std::max(0.0, t - tau);
            if (lag == 0.0) return 0.0;
            return relaxation_dt(params, lambda, lag, cfg).value * forcing(k, tau);
        };
        value += integrate_composite_gl(integrand, 0.0, t, cfg.duhamel_panels, rule16);
    }
    return value;
}

CoeffVector NonlocalSolution::coefficients(double t, const QuadConfig& cfg) const {
    CoeffVector out = CoeffVector::zeros(static_cast<int>(lambdas.size()));
    for (int k = 1; k <= out.size(); ++k) out.c[k - 1] = coefficient(k, t, cfg);
    return out;
}

double evaluate(const NonlocalSolution& sol, const Spectrum& spectrum,
                const Point& p, double t, const QuadConfig& cfg) {
    return synthesize(spectrum, sol.coefficients(t, cfg), p);
}

namespace {

// Tabulates u_k on the grid: kernel values plus the Duhamel table.
std::vector<double> coefficient_table(const NonlocalSolution& sol, int k,
                                      const TimeGrid& grid, const OmegaTable& omega,
                                      const QuadConfig& cfg) {
    const double lambda = sol.lambdas[static_cast<std::size_t>(k - 1)];
    std::vector<double> u(static_cast<std::size_t>(grid.size()));
    for (int j = 0; j < grid.size(); ++j)
        u[static_cast<std::size_t>(j)] =
            sol.series.h[k - 1] * relaxation(sol.params, lambda, grid.node(j), cfg).value +
            omega.at(k, j);
    return u;
}

double sup_coeff_norm(const NonlocalSolution& sol, const TimeGrid& grid,
                      const OmegaTable& omega, const QuadConfig& cfg, int threads) {
    const int K = static_cast<int>(sol.lambdas.size());
    std::vector<std::vector<double>> tables(static_cast<std::size_t>(K));
    parallel_for(K, threads, [&](int idx) {
        tables[idx] = coefficient_table(sol, idx + 1, grid, omega, cfg);
    });
    double sup = 0.0;
    for (int j = 0; j < grid.size(); ++j) {
        double norm_sq = 0.0;
        for (int idx = 0; idx < K; ++idx) {
            const double v = tables[static_cast<std::size_t>(idx)][static_cast<std::size_t>(j)];
            norm_sq += v * v;
        }
        sup = std::max(sup, norm_sq);
    }
    return std::sqrt(sup);
}

}  // namespace

ResidualReport verify_solution(const NonlocalSolution& sol, const Spectrum& spectrum,
                               int oracle_steps, const QuadConfig& cfg, int threads) {
    if (oracle_steps < 1024)
        throw std::invalid_argument("verify_solution: oracle grid needs at least 1024 steps");
    const int K = spectrum.size();
    ResidualReport report;

    // (a) nonlocal condition, per mode: u_k(t0) - beta u_k(0) - phi_k.
    // u_k(0) = h_k exactly (B = 1 at t = 0, omega(0) = 0).
    for (int k = 1; k <= K; ++k) {
        const double u_t0 = sol.series.h[k - 1] * sol.regime.relax_t0[k - 1] + sol.omega_t0[k - 1];
        const double resid = std::abs(u_t0 - sol.beta * sol.series.h[k - 1] - sol.phi.c[k - 1]);
        report.nonlocal_max = std::max(report.nonlocal_max, resid);
        report.nonlocal_max_scaled =
            std::max(report.nonlocal_max_scaled, resid / std::max(1.0, std::abs(sol.phi.c[k - 1])));
    }

    // (b) equation residual on the oracle grid via finite differences and the
    // discrete Riemann-Liouville derivative.
    TimeGrid grid(sol.T, oracle_steps);
    OmegaTable omega{grid, {}};
    {
        NonlocalSpec shadow(sol.params, sol.beta, sol.t0, sol.T, sol.phi, sol.forcing);
        omega = solve_inhomogeneous(shadow, spectrum, grid, cfg, threads);
    }
    report.equation_per_mode.assign(static_cast<std::size_t>(K), 0.0);
    std::vector<double> bulk_per_mode(static_cast<std::size_t>(K), 0.0);
    const double h = grid.step();
    parallel_for(K, threads, [&](int idx) {
        const int k = idx + 1;
        const double lambda = sol.lambdas[static_cast<std::size_t>(k - 1)];
        TimeSeries u{grid, coefficient_table(sol, k, grid, omega, cfg)};
        TimeSeries frac = rl_derivative(u, sol.params.alpha);
        double interior_max = 0.0, bulk_max = 0.0;
        for (int j = 1; j < grid.n_steps; ++j) {
            const double du = (u.values[static_cast<std::size_t>(j + 1)] -
                               u.values[static_cast<std::size_t>(j - 1)]) / (2.0 * h);
            const double resid = du + lambda * (u.values[static_cast<std::size_t>(j)] +
                                                sol.params.gamma * frac.values[static_cast<std::size_t>(j)]) -
                                 sol.forcing(k, grid.node(j));
            interior_max = std::max(interior_max, std::abs(resid));
            if (grid.node(j) >= 0.1 * sol.T) bulk_max = std::max(bulk_max, std::abs(resid));
        }
        report.equation_per_mode[static_cast<std::size_t>(idx)] = interior_max;
        bulk_per_mode[static_cast<std::size_t>(idx)] = bulk_max;
    });
    for (int idx = 0; idx < K; ++idx) {
        report.equation_max = std::max(report.equation_max, report.equation_per_mode[idx]);
        report.equation_max_bulk = std::max(report.equation_max_bulk, bulk_per_mode[idx]);
    }

    // (c) continuity: stability of sup_t ||u(t)|| under one grid doubling.
    const double sup_coarse = sup_coeff_norm(sol, grid, omega, cfg, threads);
    TimeGrid fine(sol.T, 2 * oracle_steps);
    OmegaTable omega_fine{fine, {}};
    {
        NonlocalSpec shadow(sol.params, sol.beta, sol.t0, sol.T, sol.phi, sol.forcing);
        omega_fine = solve_inhomogeneous(shadow, spectrum, fine, cfg, threads);
    }
    const double sup_fine = sup_coeff_norm(sol, fine, omega_fine, cfg, threads);
    report.continuity_drift =
        std::abs(sup_fine - sup_coarse) / std::max(1e-300, std::abs(sup_coarse));

    if (sol.series.unstable) {
        double worst = 0.0;
        for (int k = 1; k <= K; ++k)
            if (sol.psi.c[k - 1] != 0.0)
                worst = std::max(worst, std::abs(sol.series.h[k - 1] / sol.psi.c[k - 1]));
        std::ostringstream os;
        os << "backward solve: amplification |h_k|/|psi_k| up to " << worst;
        report.warnings.push_back(os.str());
    }
    for (const std::string& w : sol.regime.warnings) report.warnings.push_back(w);
    return report;
}

}  // namespace rsnl
