#include "rsnl/kernel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rsnl {

namespace {

struct AlphaTrig {
    double s;  // sin(alpha pi)
    double c;  // cos(alpha pi)
};

AlphaTrig trig(const FracParams& p) {
    return {std::sin(p.alpha * M_PI), std::cos(p.alpha * M_PI)};
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw std::domain_error(std::string(name) + " must be positive and finite");
}

// Integrate f over [0, R]: directly on [0, min(1,R)], and in the log variable
// on [1, R] where the density decays algebraically. The split at r = 1
// matches the density's change of regime.
IntegralResult integrate_split(const std::function<double(double)>& f, double R,
                               const QuadConfig& cfg) {
    IntegralResult lower = integrate_adaptive(f, 0.0, std::min(1.0, R),
                                              0.5 * cfg.rel_tol, cfg.abs_tol / 3.0,
                                              cfg.max_subdivisions);
    if (R <= 1.0) return lower;
    auto in_log = [&f](double s) {
        const double r = std::exp(s);
        return f(r) * r;
    };
    IntegralResult upper = integrate_adaptive(in_log, 0.0, std::log(R),
                                              0.5 * cfg.rel_tol, cfg.abs_tol / 3.0,
                                              cfg.max_subdivisions);
    return {lower.value + upper.value, lower.est_error + upper.est_error};
}

// Smallest power-of-two radius R with prefactor * exp_tail_bound(p, t, R) < tol.
double tail_radius(double prefactor, double p, double t, double tol) {
    double R = 2.0;
    while (prefactor * exp_tail_bound(p, t, R) >= tol && R < 1e250) R *= 2.0;
    return R;
}

}  // namespace

FracParams::FracParams(double alpha_, double gamma_) : alpha(alpha_), gamma(gamma_) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("FracParams: alpha must lie in (0,1)");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::domain_error("FracParams: gamma must be positive");
}

void QuadConfig::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
        throw std::domain_error("QuadConfig: tolerances must be positive");
    if (max_subdivisions < 1)
        throw std::domain_error("QuadConfig: max_subdivisions must be >= 1");
    if (duhamel_panels < 1)
        throw std::domain_error("QuadConfig: duhamel_panels must be >= 1");
}

double density(const FracParams& p, double lambda, double r) {
    require_positive(lambda, "lambda");
    require_positive(r, "r");
    const AlphaTrig tg = trig(p);
    const double ra = std::pow(r, p.alpha);
    const double bracket = lambda * (1.0 + p.gamma * ra * tg.c) - r;
    const double imag = lambda * p.gamma * ra * tg.s;
    return (p.gamma / M_PI) * lambda * ra * tg.s / (bracket * bracket + imag * imag);
}

KernelValue relaxation(const FracParams& p, double lambda, double t,
                       const QuadConfig& cfg) {
    require_positive(lambda, "lambda");
    if (t < 0.0) throw std::domain_error("relaxation: t must be >= 0");
    cfg.validate();
    if (t == 0.0) return {1.0, 0.0};  // exact by normalization of the density

    const AlphaTrig tg = trig(p);
    // density bound b <= 1/(gamma pi sin(alpha pi) lambda r^alpha)
    const double prefactor = 1.0 / (p.gamma * M_PI * tg.s * lambda);
    const double R = cfg.tail_cutoff ? cfg.tail_cutoff(t, cfg.abs_tol / 3.0)
                                     : tail_radius(prefactor, -p.alpha, t, cfg.abs_tol / 3.0);
    auto f = [&p, lambda, t](double r) {
        if (r <= 0.0) return 0.0;
        return std::exp(-r * t) * density(p, lambda, r);
    };
    IntegralResult res = integrate_split(f, R, cfg);
    const double tail = prefactor * exp_tail_bound(-p.alpha, t, R);
    return {res.value, res.est_error + tail};
}

KernelValue relaxation_dt(const FracParams& p, double lambda, double t,
                          const QuadConfig& cfg) {
    require_positive(lambda, "lambda");
    require_positive(t, "t");
    cfg.validate();

    const AlphaTrig tg = trig(p);
    const double prefactor = 1.0 / (p.gamma * M_PI * tg.s * lambda);
    const double R = tail_radius(prefactor, 1.0 - p.alpha, t, cfg.abs_tol / 3.0);
    auto f = [&p, lambda, t](double r) {
        if (r <= 0.0) return 0.0;
        return r * std::exp(-r * t) * density(p, lambda, r);
    };
    IntegralResult res = integrate_split(f, R, cfg);
    const double tail = prefactor * exp_tail_bound(1.0 - p.alpha, t, R);
    return {-res.value, res.est_error + tail};
}

KernelValue relaxation_dlambda(const FracParams& p, double lambda, double t0,
                               const QuadConfig& cfg) {
    require_positive(lambda, "lambda");
    require_positive(t0, "t0");
    cfg.validate();
    const AlphaTrig tg = trig(p);

    // b1(lambda, r) = lambda * b(lambda, r); shared denominator
    auto denom1 = [&](double r, double ra) {
        const double re = 1.0 + p.gamma * ra * tg.c - r / lambda;
        const double im = p.gamma * ra * tg.s;
        return re * re + im * im;
    };
    auto b1 = [&](double ra, double d1) {
        return (p.gamma / M_PI) * ra * tg.s / d1;
    };

    const double pre1 = 1.0 / (p.gamma * M_PI * tg.s);
    const double R1 = tail_radius(pre1, -p.alpha, t0, cfg.abs_tol / 3.0);
    auto f1 = [&](double r) {
        if (r <= 0.0) return 0.0;
        const double ra = std::pow(r, p.alpha);
        return std::exp(-r * t0) * b1(ra, denom1(r, ra));
    };
    IntegralResult term1 = integrate_split(f1, R1, cfg);
    const double tail1 = pre1 * exp_tail_bound(-p.alpha, t0, R1);

    // second term carries r (r/lambda - gamma r^alpha cos - 1) / denom
    const double s3 = tg.s * tg.s * tg.s;
    const double pre2 = (1.0 / lambda + p.gamma + 1.0) / (p.gamma * p.gamma * p.gamma * M_PI * s3);
    const double R2 = tail_radius(pre2, 2.0 - 3.0 * p.alpha, t0, cfg.abs_tol / 3.0);
    auto f2 = [&](double r) {
        if (r <= 0.0) return 0.0;
        const double ra = std::pow(r, p.alpha);
        const double d1 = denom1(r, ra);
        const double factor = r * (r / lambda - p.gamma * ra * tg.c - 1.0) / d1;
        return std::exp(-r * t0) * b1(ra, d1) * factor;
    };
    IntegralResult term2 = integrate_split(f2, R2, cfg);
    const double tail2 = pre2 * exp_tail_bound(2.0 - 3.0 * p.alpha, t0, R2);

    const double l2 = lambda * lambda;
    const double l3 = l2 * lambda;
    return {-term1.value / l2 + 2.0 * term2.value / l3,
            (term1.est_error + tail1) / l2 + 2.0 * (term2.est_error + tail2) / l3};
}

KernelValue relaxation_integral(const FracParams& p, double lambda, double T,
                                const QuadConfig& cfg) {
    require_positive(lambda, "lambda");
    require_positive(T, "T");
    cfg.validate();
    const AlphaTrig tg = trig(p);

    // Two valid tail bounds for the integrand b(r) (1 - e^{-rT})/r <= b(r)/r:
    //  - beyond r_alg the bracket dominates, |lambda(1+gamma r^a c) - r| >= r/2,
    //    so b/r <= (4 gamma lambda s/pi) r^{alpha-3} (sharp but conditional);
    //  - globally b/r <= r^{-1-alpha}/(gamma pi s lambda).
    const double tol = cfg.abs_tol / 3.0;
    const double r_alg = std::max({1.0, 4.0 * lambda,
                                   std::pow(4.0 * lambda * p.gamma, 1.0 / (1.0 - p.alpha))});
    const double ctail = 4.0 * p.gamma * lambda * tg.s / M_PI / (2.0 - p.alpha);
    const double cglob = 1.0 / (p.alpha * p.gamma * M_PI * tg.s * lambda);
    const double R_alg = std::max(r_alg, std::pow(ctail / tol, 1.0 / (2.0 - p.alpha)));
    const double R_glob = std::pow(cglob / tol, 1.0 / p.alpha);
    const double R = std::min({std::min(R_alg, R_glob), 1e120});
    auto f = [&p, lambda, T](double r) {
        if (r <= 0.0) return 0.0;
        return density(p, lambda, r) * (-std::expm1(-r * T)) / r;
    };
    IntegralResult res = integrate_split(f, R, cfg);
    double tail = cglob * std::pow(R, -p.alpha);
    if (R >= r_alg) tail = std::min(tail, ctail * std::pow(R, p.alpha - 2.0));
    return {res.value, res.est_error + tail};
}

double lower_bound_constant(const FracParams& p, double lambda1, double T,
                            const QuadConfig& cfg) {
    require_positive(lambda1, "lambda1");
    require_positive(T, "T");
    cfg.validate();
    const AlphaTrig tg = trig(p);

    const double pre = tg.s / (4.0 * p.gamma);  // integrand <= pre * r^{-alpha} e^{-rT}
    const double R = tail_radius(pre, -p.alpha, T, cfg.abs_tol / 3.0);
    const double scale = p.gamma * tg.s / 4.0;
    const double il2 = 1.0 / (lambda1 * lambda1);
    auto f = [&](double r) {
        if (r <= 0.0) return 0.0;
        const double ra = std::pow(r, p.alpha);
        return scale * ra * std::exp(-r * T) / (r * r * il2 + p.gamma * p.gamma * ra * ra + 1.0);
    };
    IntegralResult res = integrate_split(f, R, cfg);
    return res.value;
}

double duhamel(const FracParams& p, double lambda, double t,
               const std::function<double(double)>& forcing,
               const QuadConfig& cfg) {
    require_positive(lambda, "lambda");
    if (t < 0.0) throw std::domain_error("duhamel: t must be >= 0");
    cfg.validate();
    if (t == 0.0) return 0.0;

    // 16 points per panel: the kernel has a t^{1-alpha} kink at zero lag and
    // forcings may carry endpoint singularities of the same kind
    static const GaussRule rule16 = gauss_legendre(16);
    auto integrand = [&](double tau) {
        const double lag = std::max(0.0, t - tau);  // guard rounding at panel edges
        return relaxation(p, lambda, lag, cfg).value * forcing(tau);
    };
    return integrate_composite_gl(integrand, 0.0, t, cfg.duhamel_panels, rule16);
}

}  // namespace rsnl
