#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rsnl/nonlocal.hpp"

namespace rsnl {

/// One verified (or fitted) kernel inequality on a product grid.
/// For hard bounds, max_violation is the largest amount by which the
/// inequality failed (<= 0 means it held everywhere) and pass reflects the
/// stated slack. Fitted bounds always pass and report the empirical constant.
struct BoundReport {
    std::string id;
    std::string grid;
    double max_violation = 0.0;
    double fitted_constant = 0.0;
    bool hard = true;
    bool pass = true;
};

/// Evaluates the kernel inequalities on lambdas x times:
///   range01         : 0 < B < 1 for t > 0, B = 1 at t = 0        (hard, 1e-8 slack)
///   monotone_decay  : dB/dt < 0 and B decreasing along t          (hard, 1e-8 slack)
///   peak_shape      : lambda B <= C min(1/t, t^(alpha-1)),
///                     C fitted empirically                        (fitted)
///   time_integral   : int_0^T B dt <= 1/lambda                    (hard, 1e-8 slack)
///   dt_explicit     : |dB/dt| lambda t^(2-alpha) <= Gamma(2-alpha)/(gamma pi sin(alpha pi))
///                                                                 (hard, 1e-8 slack)
///   lower_bound     : B >= C(alpha,gamma,lambda1)/lambda with the
///                     explicit constant at horizon T              (hard, 1e-10 slack)
/// T must cover the time grid; lambda1 is the smallest grid eigenvalue.
std::vector<BoundReport> verify_kernel_bounds(const FracParams& p,
                                              const std::vector<double>& lambdas,
                                              const std::vector<double>& times,
                                              double T, const QuadConfig& cfg = {},
                                              int threads = 1);

struct ConditioningRow {
    int k;
    double lambda;
    double relax_t0;       // B(lambda_k, t0)
    double gap;            // B - beta
    double amplification;  // 1/|gap| (inf on resonant rows)
    bool resonant;
};

/// Per-mode conditioning of the nonlocal solve at (beta, t0). For beta = 0
/// the log-log slope of amplification against lambda_k is fitted as well.
struct ConditioningTable {
    double beta;
    double t0;
    std::vector<ConditioningRow> rows;
    std::optional<double> loglog_slope;
};

ConditioningTable amplification_spectrum(double beta, double t0, const Spectrum& spectrum,
                                         const FracParams& p, const QuadConfig& cfg = {},
                                         double k0_tol = 1e-9);

/// Smallest grid point beyond which dB/dlambda(., t0) is negative at every
/// larger grid point; nullopt when the sign never settles within the grid.
std::optional<double> monotonicity_threshold_lambda(const FracParams& p, double t0,
                                                    const std::vector<double>& lambda_grid,
                                                    const QuadConfig& cfg = {});

/// Smallest t on the grid from which on (for it and all larger grid times)
/// dB/dlambda(lambda, t) < 0 across the whole lambda grid; nullopt if none.
std::optional<double> monotonicity_threshold_time(const FracParams& p, double lambda1,
                                                  const std::vector<double>& t_grid,
                                                  const std::vector<double>& lambda_grid,
                                                  const QuadConfig& cfg = {});

/// Fitted-constant stability report for the coercive estimates. The
/// homogeneous part w is measured as
///   Q(t) = ||dw/dt||^2 + ||A w||^2 + ||d^alpha A w||^2
/// through finite differences and the discrete fractional derivative on a
/// uniform grid, fitted against psi-norm times t^(-2(2-alpha)) (weak shape)
/// and t^(-2(1-alpha)); the Duhamel part is fitted against
/// max_t ||f(t)||_eps^2. Fits use the window t >= 0.1 T and are recomputed
/// on a doubled grid; pass requires <= 10% drift.
struct CoerciveReport {
    double const_weak = 0.0;          // w fit, exponent 2(2-alpha)
    double const_sharp = 0.0;         // w fit, exponent 2(1-alpha)
    double const_weak_refined = 0.0;
    double drift = 0.0;
    double const_weak_u = 0.0;        // same weak-shape fit for u = w + omega
    double forced_const = 0.0;        // C_eps fit of the Duhamel part (0 when f = 0)
    double forced_refined = 0.0;
    double forced_drift = 0.0;
    double forced_data_sup = 0.0;     // max_t ||f(t)||_eps^2, the truncation diagnostic
    bool pass = true;
};

CoerciveReport coercive_report(const NonlocalSolution& sol, const Spectrum& spectrum,
                               int grid_steps, double eps = 0.5,
                               const QuadConfig& cfg = {}, int threads = 1);

}  // namespace rsnl
