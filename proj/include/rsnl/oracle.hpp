#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "rsnl/kernel.hpp"

namespace rsnl {

/// Uniform time grid on [0, t_end] with nodes t_j = j * step().
struct TimeGrid {
    double t_end;
    int n_steps;

    TimeGrid(double t_end_, int n_steps_);
    double step() const { return t_end / n_steps; }
    double node(int j) const { return j * step(); }
    int size() const { return n_steps + 1; }
};

struct TimeSeries {
    TimeGrid grid;
    std::vector<double> values;  // one per node, values[j] ~ y(t_j)
};

/// Grunwald-Letnikov weights g_0 = 1, g_i = g_{i-1} (1 - (alpha+1)/i)
/// for the discrete Riemann-Liouville derivative of order alpha.
std::vector<double> gl_weights(double alpha, int n);

/// Discrete Riemann-Liouville derivative of order alpha in (0,1):
/// (d^alpha y)_j = h^{-alpha} sum_{i=0..j} g_i y_{j-i}. The value at j = 0
/// is the formal h^{-alpha} y_0 term; for y_0 != 0 the true derivative is
/// singular there.
TimeSeries rl_derivative(const TimeSeries& series, double alpha);

/// Reference solver for the scalar mode problem
///   y' + lambda (1 + gamma d_t^alpha) y = f(t),  y(0) = y0,
/// independent of the kernel quadrature. Backward-Euler convolution
/// quadrature applied to the equivalent integrated equation
///   y(t) - y0 + lambda [ (I y)(t) + gamma (I^{1-alpha} y)(t) ] = (I f)(t),
/// which keeps first-order accuracy through the initial layer. Each step
/// solves the scalar linear update exactly.
TimeSeries solve_scalar_ivp(const FracParams& p, double lambda, double y0,
                            const std::function<double(double)>& forcing,
                            const TimeGrid& grid);

/// Observed convergence order from solves on nested grids (n, 2n, 4n),
/// measured at t_end. Returns nullopt when the nested differences vanish
/// (the scheme is exact for the data, e.g. y identically zero).
std::optional<double> convergence_order(const FracParams& p, double lambda, double y0,
                                        const std::function<double(double)>& forcing,
                                        const TimeGrid& base_grid);

/// Step-halved oracle value of B(lambda, t): solves the homogeneous problem
/// on grids (n, 2n, 4n) and Richardson-extrapolates the finest pair.
/// `times` must be grid nodes of the base grid.
std::vector<double> oracle_relaxation(const FracParams& p, double lambda,
                                      const std::vector<double>& times,
                                      double t_end, int base_steps);

}  // namespace rsnl
