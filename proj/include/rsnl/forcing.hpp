#pragma once

#include <functional>
#include <map>
#include <vector>

#include "rsnl/kernel.hpp"
#include "rsnl/oracle.hpp"

namespace rsnl {

/// Per-mode forcing f_k(t) in coefficient space. Presets cover the zero,
/// constant-coefficient and polynomial-in-t families; sampled forcings are
/// linearly interpolated; arbitrary callables are accepted for tests.
class Forcing {
public:
    Forcing() : kind_(Kind::Zero) {}

    static Forcing zero() { return Forcing(); }

    /// f_k(t) = coeffs[k-1] for all t.
    static Forcing constant(std::vector<double> coeffs);

    /// Sparse per-mode polynomials: f_k(t) = sum_j poly[k][j] t^j;
    /// modes without an entry are zero.
    static Forcing polynomial(std::map<int, std::vector<double>> per_mode);

    /// Sampled values on a uniform grid, linear interpolation in between;
    /// constant extrapolation beyond the last node.
    static Forcing samples(const TimeGrid& grid, std::map<int, std::vector<double>> per_mode);

    /// Forcing that makes the coefficient of `mode` follow the linear ramp
    /// y(t) = t:  f(t) = 1 + lambda t + lambda gamma t^{1-alpha}/Gamma(2-alpha).
    static Forcing linear_ramp(const FracParams& p, double lambda, int mode);

    /// Arbitrary per-mode callable (mode k, time t). active_modes, when
    /// nonempty, names the modes the callable can touch; others are zero.
    static Forcing callable(std::function<double(int, double)> fn,
                            std::vector<int> active_modes = {});

    double operator()(int k, double t) const;
    bool is_zero() const { return kind_ == Kind::Zero; }
    bool mode_is_zero(int k) const;

private:
    enum class Kind { Zero, Constant, Polynomial, Samples, Callable };

    Kind kind_;
    std::vector<double> coeffs_;
    std::map<int, std::vector<double>> per_mode_;
    double sample_t_end_ = 0.0;
    double sample_step_ = 0.0;
    std::function<double(int, double)> fn_;
    std::vector<int> active_modes_;
};

}  // namespace rsnl
