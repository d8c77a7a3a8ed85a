#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace rsnl {

/// Thrown when an adaptive quadrature exhausts its subdivision budget
/// before reaching the requested tolerance.
class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct IntegralResult {
    double value;
    double est_error;
};

/// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a, b].
/// Stops once the accumulated error estimate drops below
/// max(abs_tol, rel_tol * |value|); throws QuadratureError if the
/// subdivision budget runs out first. Deterministic: the refinement
/// order depends only on the inputs.
IntegralResult integrate_adaptive(const std::function<double(double)>& f,
                                  double a, double b,
                                  double rel_tol, double abs_tol,
                                  int max_subdivisions);

/// Nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, computed by Newton iteration on P_n.
GaussRule gauss_legendre(int n);

/// Composite Gauss-Legendre quadrature with uniform panels on [a, b].
double integrate_composite_gl(const std::function<double(double)>& f,
                              double a, double b, int panels,
                              const GaussRule& rule);

/// Upper bound for the exponential tail integral  \int_R^inf r^p e^{-r t} dr
/// (t > 0, R > 0). Returns +inf when R*t <= p, in which case the caller
/// should enlarge R.
double exp_tail_bound(double p, double t, double R);

}  // namespace rsnl
