#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rsnl/forcing.hpp"
#include "rsnl/kernel.hpp"
#include "rsnl/oracle.hpp"
#include "rsnl/spectrum.hpp"

namespace rsnl {

/// Full problem instance in coefficient space: the evolution equation
/// u' + (1 + gamma d_t^alpha) A u = f on (0, T] under the time-nonlocal
/// condition u(t0) = beta u(0) + phi.
struct NonlocalSpec {
    FracParams params;
    double beta;
    double t0;
    double T;
    CoeffVector phi;
    Forcing forcing;

    NonlocalSpec(FracParams params_, double beta_, double t0_, double T_,
                 CoeffVector phi_, Forcing forcing_ = Forcing::zero());
};

enum class RegimeTag {
    UniquelySolvable,   // beta outside [0,1), or beta in (0,1) with empty resonant set
    BackwardIllPosed,   // beta == 0: unique solution, unbounded amplification
    ResonantK0,         // beta in (0,1) hitting B(lambda_k, t0) on some modes
};

const char* to_string(RegimeTag tag);

/// Well-posedness classification of a problem instance over a truncated
/// spectrum. relax_t0 caches B(lambda_k, t0) for downstream use; min_gap is
/// the smallest |B - beta| over modes outside the resonant set.
struct Regime {
    RegimeTag tag = RegimeTag::UniquelySolvable;
    std::vector<int> k0;
    double min_gap = 0.0;
    std::vector<double> relax_t0;
    bool near_resonance = false;
    std::vector<std::string> warnings;
};

/// Existence failure in the resonant regime: the data has nonzero projection
/// onto the kernel modes, so no solution exists.
class OrthogonalityViolation : public std::runtime_error {
public:
    explicit OrthogonalityViolation(std::vector<std::pair<int, double>> offenders_);
    std::vector<std::pair<int, double>> offenders;  // (mode, |psi_k|)
};

/// Homogeneous-part solution data: h_k = w_k(0), so w_k(t) = h_k B(lambda_k, t).
/// free_indices lists resonant modes whose h_k was caller-chosen.
struct SolutionSeries {
    std::vector<double> h;
    std::vector<int> free_indices;
    bool unstable = false;  // backward (beta = 0) solve
};

/// Per-mode Duhamel parts omega_k tabulated on a uniform grid (values[k-1][j]).
struct OmegaTable {
    TimeGrid grid;
    std::vector<std::vector<double>> values;

    double at(int k, int j) const { return values.at(k - 1).at(j); }
};

Regime classify(const NonlocalSpec& spec, const Spectrum& spectrum,
                const QuadConfig& cfg = {}, double k0_tol = 1e-9);

/// omega_k(t_j) = \int_0^{t_j} B(lambda_k, t_j - tau) f_k(tau) dtau for every
/// mode and grid node, by composite Gauss-Legendre with panel width equal to
/// the grid spacing (kernel values are shared across nodes through the
/// convolution structure). omega_k(0) = 0.
OmegaTable solve_inhomogeneous(const NonlocalSpec& spec, const Spectrum& spectrum,
                               const TimeGrid& grid, const QuadConfig& cfg = {},
                               int threads = 1);

/// Solves the homogeneous nonlocal problem for the series coefficients:
/// h_k = psi_k / (B(lambda_k, t0) - beta) off the resonant set; resonant
/// modes require psi_k = 0 (within 1e-8 ||psi||) and take h_k from
/// free_values (default 0). Throws OrthogonalityViolation when the
/// existence condition fails.
SolutionSeries solve_homogeneous(const CoeffVector& psi, const NonlocalSpec& spec,
                                 const Spectrum& spectrum, const Regime& regime,
                                 const std::map<int, double>& free_values = {});

/// Assembled solution with everything needed for evaluation.
struct NonlocalSolution {
    FracParams params;
    double beta, t0, T;
    std::vector<double> lambdas;
    Forcing forcing;
    CoeffVector phi;
    CoeffVector psi;           // phi - omega(t0)
    std::vector<double> omega_t0;
    Regime regime;
    SolutionSeries series;
    OmegaTable omega;

    /// u_k(t) = h_k B(lambda_k, t) + omega_k(t); the Duhamel part is
    /// evaluated exactly (not interpolated).
    double coefficient(int k, double t, const QuadConfig& cfg = {}) const;

    /// d/dt u_k(t) = h_k dB/dt + f_k(t) + \int_0^t dB/dt(t-tau) f_k(tau) dtau.
    double coefficient_dt(int k, double t, const QuadConfig& cfg = {}) const;

    /// Coefficient vector u_k(t) for all modes at one time.
    CoeffVector coefficients(double t, const QuadConfig& cfg = {}) const;
};

/// Splits into the Duhamel and homogeneous parts, forms psi = phi - omega(t0)
/// (with the resonant orthogonality check), and assembles the series.
NonlocalSolution solve_nonlocal(const NonlocalSpec& spec, const Spectrum& spectrum,
                                const TimeGrid& grid, const QuadConfig& cfg = {},
                                double k0_tol = 1e-9,
                                const std::map<int, double>& free_values = {},
                                int threads = 1);

/// Physical-space evaluation via synthesis (interval/rectangle spectra only).
double evaluate(const NonlocalSolution& sol, const Spectrum& spectrum,
                const Point& p, double t, const QuadConfig& cfg = {});

struct ResidualReport {
    double nonlocal_max = 0.0;           // max_k |u_k(t0) - beta u_k(0) - phi_k|
    double nonlocal_max_scaled = 0.0;    // same, scaled by max(1, |phi_k|)
    std::vector<double> equation_per_mode;  // interior max per mode
    double equation_max = 0.0;           // max over modes, all interior nodes
    double equation_max_bulk = 0.0;      // restricted to t >= 0.1 T
    double continuity_drift = 0.0;       // sup-norm drift under grid doubling
    std::vector<std::string> warnings;
};

/// Discretization-based residual check: the nonlocal condition per mode, the
/// equation residual through finite differences plus the discrete
/// Riemann-Liouville derivative, and a grid-refinement continuity check.
ResidualReport verify_solution(const NonlocalSolution& sol, const Spectrum& spectrum,
                               int oracle_steps, const QuadConfig& cfg = {},
                               int threads = 1);

}  // namespace rsnl
