#pragma once

#include <functional>

#include "rsnl/quadrature.hpp"

namespace rsnl {

/// Fractional model parameters: derivative order alpha in (0,1) and
/// coefficient gamma > 0. Both are validated at construction.
struct FracParams {
    double alpha;
    double gamma;
    FracParams(double alpha_, double gamma_);
};

/// Tolerances and budgets for the kernel quadratures.
///
/// tail_cutoff optionally overrides the built-in truncation rule for the
/// relaxation-kernel integral: given (t, tol) it must return a radius R
/// such that the analytic tail bound beyond R stays below tol. When unset,
/// a radius is derived from the closed-form density bounds.
struct QuadConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_subdivisions = 200;
    std::function<double(double, double)> tail_cutoff;
    int duhamel_panels = 64;

    void validate() const;
};

/// A quadrature result together with its accumulated error estimate
/// (refinement estimate plus analytic tail bound).
struct KernelValue {
    double value;
    double est_error;
};

/// Spectral density b(lambda, r) of the relaxation kernel:
///
///   b = (gamma/pi) * lambda r^alpha sin(alpha pi)
///       / [ (-r + lambda gamma r^alpha cos(alpha pi) + lambda)^2
///           + (lambda gamma r^alpha sin(alpha pi))^2 ]
///
/// Strictly positive for lambda > 0, r > 0.
double density(const FracParams& p, double lambda, double r);

/// Relaxation kernel  B(lambda, t) = \int_0^inf e^{-rt} b(lambda, r) dr,
/// the solution of  y' + lambda (1 + gamma d_t^alpha) y = 0, y(0) = 1.
/// Exactly 1 at t = 0; in (0, 1) for t > 0.
KernelValue relaxation(const FracParams& p, double lambda, double t,
                       const QuadConfig& cfg = {});

/// Time derivative  d/dt B(lambda, t) = -\int_0^inf r e^{-rt} b(lambda, r) dr.
/// Negative for t > 0, with |value| <= Gamma(2-alpha)/(gamma pi sin(alpha pi))
/// * t^(alpha-2) / lambda.
KernelValue relaxation_dt(const FracParams& p, double lambda, double t,
                          const QuadConfig& cfg = {});

/// Eigenvalue derivative  d/dlambda B(lambda, t0), evaluated from the
/// two-term representation obtained by differentiating
/// B = (1/lambda) \int e^{-t0 r} b1(lambda, r) dr  under the integral sign.
KernelValue relaxation_dlambda(const FracParams& p, double lambda, double t0,
                               const QuadConfig& cfg = {});

/// Time integral  \int_0^T B(lambda, t) dt, computed as the single
/// r-integral  \int_0^inf b(lambda, r) (1 - e^{-rT})/r dr. Bounded by
/// 1/lambda for every T > 0.
KernelValue relaxation_integral(const FracParams& p, double lambda, double T,
                                const QuadConfig& cfg = {});

/// Lower-bound constant
///   C(alpha, gamma, lambda1)
///     = (gamma sin(alpha pi)/4)
///       \int_0^inf r^alpha e^{-rT} / (r^2/lambda1^2 + gamma^2 r^{2 alpha} + 1) dr
/// satisfying B(lambda, t) >= C/lambda for t in [0, T], lambda >= lambda1.
double lower_bound_constant(const FracParams& p, double lambda1, double T,
                            const QuadConfig& cfg = {});

/// Duhamel convolution  \int_0^t B(lambda, t - tau) f(tau) dtau by composite
/// Gauss-Legendre over cfg.duhamel_panels uniform panels.
double duhamel(const FracParams& p, double lambda, double t,
               const std::function<double(double)>& forcing,
               const QuadConfig& cfg = {});

}  // namespace rsnl
