#include "rsnl/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace rsnl {

namespace {

// G7,K15 pair (positive half of the symmetric nodes).
constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

// Gauss weights for the embedded 7-point rule (nodes 1, 3, 5, 7 above).
constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Segment {
    double a, b;
    double value;
    double err;
};

Segment eval_gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kKronrodNodes[i]);
        fv[14 - i] = f(c + h * kKronrodNodes[i]);
    }
    fv[7] = f(c);
    double kron = kKronrodWeights[7] * fv[7];
    double gauss = kGaussWeights[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        kron += kKronrodWeights[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1)
            gauss += kGaussWeights[i / 2] * (fv[i] + fv[14 - i]);
    }
    kron *= h;
    gauss *= h;
    return {a, b, kron, std::abs(kron - gauss)};
}

struct SegmentWorse {
    bool operator()(const Segment& lhs, const Segment& rhs) const {
        if (lhs.err != rhs.err) return lhs.err < rhs.err;
        return lhs.a > rhs.a;  // fixed tie-break keeps refinement deterministic
    }
};

}  // namespace

IntegralResult integrate_adaptive(const std::function<double(double)>& f,
                                  double a, double b,
                                  double rel_tol, double abs_tol,
                                  int max_subdivisions) {
    if (!(b > a)) return {0.0, 0.0};

    std::priority_queue<Segment, std::vector<Segment>, SegmentWorse> heap;
    Segment whole = eval_gk15(f, a, b);
    double total_value = whole.value;
    double total_err = whole.err;
    heap.push(whole);

    int splits = 0;
    while (total_err > std::max(abs_tol, rel_tol * std::abs(total_value))) {
        if (splits >= max_subdivisions) {
            throw QuadratureError("adaptive quadrature did not converge within " +
                                  std::to_string(max_subdivisions) +
                                  " subdivisions (err=" + std::to_string(total_err) + ")");
        }
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval exhausted at machine precision; accept its estimate
            heap.push({worst.a, worst.b, worst.value, 0.0});
            total_err -= worst.err;
            continue;
        }
        Segment left = eval_gk15(f, worst.a, mid);
        Segment right = eval_gk15(f, mid, worst.b);
        total_value += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        ++splits;
    }

    // Re-sum in spatial order for a scheduling-independent final value.
    std::vector<Segment> segs;
    segs.reserve(heap.size());
    while (!heap.empty()) {
        segs.push_back(heap.top());
        heap.pop();
    }
    std::sort(segs.begin(), segs.end(),
              [](const Segment& x, const Segment& y) { return x.a < y.a; });
    double value = 0.0;
    for (const Segment& s : segs) value += s.value;
    return {value, total_err};
}

GaussRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    GaussRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre recurrence for P_n(x) and P_n'(x)
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

double integrate_composite_gl(const std::function<double(double)>& f,
                              double a, double b, int panels,
                              const GaussRule& rule) {
    if (panels < 1) throw std::invalid_argument("integrate_composite_gl: panels must be >= 1");
    if (!(b > a)) return 0.0;
    const double h = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double c = lo + 0.5 * h;
        double panel = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            panel += rule.weights[i] * f(c + 0.5 * h * rule.nodes[i]);
        sum += 0.5 * h * panel;
    }
    return sum;
}

double exp_tail_bound(double p, double t, double R) {
    if (!(t > 0.0) || !(R > 0.0)) return std::numeric_limits<double>::infinity();
    if (p <= 0.0) return std::pow(R, p) * std::exp(-R * t) / t;
    // r^p <= R^p exp(p (r-R)/R) for r >= R turns the tail into a pure exponential
    if (R * t <= p) return std::numeric_limits<double>::infinity();
    return std::pow(R, p) * std::exp(-R * t) / (t - p / R);
}

}  // namespace rsnl
