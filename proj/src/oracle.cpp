#include "rsnl/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rsnl {

TimeGrid::TimeGrid(double t_end_, int n_steps_) : t_end(t_end_), n_steps(n_steps_) {
    if (!(t_end > 0.0)) throw std::domain_error("TimeGrid: t_end must be positive");
    if (n_steps < 2) throw std::domain_error("TimeGrid: need at least 2 steps");
}

std::vector<double> gl_weights(double alpha, int n) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("gl_weights: alpha must lie in (0,1)");
    std::vector<double> g(n + 1);
    g[0] = 1.0;
    for (int i = 1; i <= n; ++i) g[i] = g[i - 1] * (1.0 - (alpha + 1.0) / i);
    return g;
}

TimeSeries rl_derivative(const TimeSeries& series, double alpha) {
    const int n = series.grid.n_steps;
    if (static_cast<int>(series.values.size()) != n + 1)
        throw std::invalid_argument("rl_derivative: series length does not match grid");
    const std::vector<double> g = gl_weights(alpha, n);
    const double ha = std::pow(series.grid.step(), -alpha);
    TimeSeries out{series.grid, std::vector<double>(n + 1, 0.0)};
    for (int j = 0; j <= n; ++j) {
        double acc = 0.0;
        for (int i = 0; i <= j; ++i) acc += g[i] * series.values[j - i];
        out.values[j] = ha * acc;
    }
    return out;
}

namespace {

// Convolution-quadrature weights of the fractional integral I^{1-alpha}:
// coefficients of (1-z)^{alpha-1}, c_0 = 1, c_i = c_{i-1} (i - alpha)/i.
std::vector<double> frac_integral_weights(double alpha, int n) {
    std::vector<double> c(n + 1);
    c[0] = 1.0;
    for (int i = 1; i <= n; ++i) c[i] = c[i - 1] * (i - alpha) / i;
    return c;
}

}  // namespace

TimeSeries solve_scalar_ivp(const FracParams& p, double lambda, double y0,
                            const std::function<double(double)>& forcing,
                            const TimeGrid& grid) {
    if (!(lambda > 0.0)) throw std::domain_error("solve_scalar_ivp: lambda must be positive");
    const int n = grid.n_steps;
    const double h = grid.step();
    const std::vector<double> c = frac_integral_weights(p.alpha, n);
    const double h1a = std::pow(h, 1.0 - p.alpha);
    const double denom = 1.0 + lambda * h + lambda * p.gamma * h1a;

    TimeSeries out{grid, std::vector<double>(n + 1)};
    std::vector<double>& y = out.values;
    y[0] = y0;
    double running_int = 0.0;   // h * sum_{i<=j-1} y_i, right-rectangle rule
    double forcing_int = 0.0;   // same rule applied to f
    for (int j = 1; j <= n; ++j) {
        forcing_int += h * forcing(j * h);
        double hist = 0.0;
        for (int i = 1; i <= j; ++i) hist += c[i] * y[j - i];
        y[j] = (y0 + forcing_int - lambda * running_int - lambda * p.gamma * h1a * hist) / denom;
        if (!std::isfinite(y[j]))
            throw std::overflow_error("solve_scalar_ivp: overflow at t = " + std::to_string(j * h));
        running_int += h * y[j];
    }
    return out;
}

std::optional<double> convergence_order(const FracParams& p, double lambda, double y0,
                                        const std::function<double(double)>& forcing,
                                        const TimeGrid& base_grid) {
    if (base_grid.n_steps < 64)
        throw std::invalid_argument("convergence_order: base grid needs n >= 64");
    double endval[3];
    double scale = 0.0;
    for (int level = 0; level < 3; ++level) {
        TimeGrid g(base_grid.t_end, base_grid.n_steps << level);
        TimeSeries sol = solve_scalar_ivp(p, lambda, y0, forcing, g);
        endval[level] = sol.values.back();
        for (double v : sol.values) scale = std::max(scale, std::abs(v));
    }
    const double d1 = endval[0] - endval[1];
    const double d2 = endval[1] - endval[2];
    const double eps = 1e-13 * std::max(1.0, scale);
    if (std::abs(d1) < eps || std::abs(d2) < eps) return std::nullopt;  // exact
    return std::log2(std::abs(d1 / d2));
}

std::vector<double> oracle_relaxation(const FracParams& p, double lambda,
                                      const std::vector<double>& times,
                                      double t_end, int base_steps) {
    TimeGrid mid(t_end, 2 * base_steps);
    TimeGrid fine(t_end, 4 * base_steps);
    auto zero = [](double) { return 0.0; };
    TimeSeries ym = solve_scalar_ivp(p, lambda, 1.0, zero, mid);
    TimeSeries yf = solve_scalar_ivp(p, lambda, 1.0, zero, fine);

    std::vector<double> out;
    out.reserve(times.size());
    const double h = t_end / base_steps;
    for (double t : times) {
        const double jd = t / h;
        const int j = static_cast<int>(std::lround(jd));
        if (std::abs(jd - j) > 1e-9 || j < 0 || j > base_steps)
            throw std::invalid_argument("oracle_relaxation: t is not a base grid node");
        out.push_back(2.0 * yf.values[4 * j] - ym.values[2 * j]);
    }
    return out;
}

}  // namespace rsnl
