#include "rsnl/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rsnl {

CoeffVector CoeffVector::zeros(int n) {
    CoeffVector v;
    v.c.assign(static_cast<std::size_t>(n), 0.0);
    return v;
}

CoeffVector CoeffVector::basis(int n, int k, double scale) {
    CoeffVector v = zeros(n);
    v.c.at(k - 1) = scale;
    return v;
}

double CoeffVector::l2_norm() const {
    double s = 0.0;
    for (double x : c) s += x * x;
    return std::sqrt(s);
}

namespace {

constexpr double kGroupRelTol = 1e-12;

}  // namespace

void Spectrum::assign_groups() {
    int group = 0;
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        if (i > 0 && modes_[i].lambda - modes_[i - 1].lambda > kGroupRelTol * modes_[i].lambda)
            ++group;
        modes_[i].group = group;
        modes_[i].index = static_cast<int>(i) + 1;
    }
}

Spectrum Spectrum::dirichlet_interval(double length, int n_modes) {
    if (!(length > 0.0)) throw std::domain_error("dirichlet_interval: length must be positive");
    if (n_modes < 1) throw std::domain_error("dirichlet_interval: need at least one mode");
    Spectrum s;
    s.domain_ = Domain::Interval;
    s.extent_x_ = length;
    s.modes_.reserve(static_cast<std::size_t>(n_modes));
    for (int k = 1; k <= n_modes; ++k) {
        const double w = k * M_PI / length;
        s.modes_.push_back({k, w * w, 0, {k, 0}});
    }
    s.assign_groups();
    return s;
}

Spectrum Spectrum::dirichlet_rectangle(double a, double b, int n_modes) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::domain_error("dirichlet_rectangle: side lengths must be positive");
    if (n_modes < 1) throw std::domain_error("dirichlet_rectangle: need at least one mode");

    // Weyl count ~ (ab/4pi) Lambda; enlarge the candidate cutoff until the
    // box certainly contains the first n_modes eigenvalues.
    double cutoff = 4.0 * M_PI * n_modes / (a * b) + M_PI * M_PI * (1.0 / (a * a) + 1.0 / (b * b));
    std::vector<Mode> cand;
    for (;;) {
        cand.clear();
        const int mmax = static_cast<int>(a * std::sqrt(cutoff) / M_PI) + 1;
        const int nmax = static_cast<int>(b * std::sqrt(cutoff) / M_PI) + 1;
        for (int m = 1; m <= mmax; ++m) {
            for (int n = 1; n <= nmax; ++n) {
                const double lam = M_PI * M_PI * (m * m / (a * a) + n * n / (b * b));
                if (lam <= cutoff) cand.push_back({0, lam, 0, {m, n}});
            }
        }
        if (static_cast<int>(cand.size()) >= n_modes) break;
        cutoff *= 2.0;
    }
    std::sort(cand.begin(), cand.end(), [](const Mode& x, const Mode& y) {
        if (x.lambda != y.lambda) return x.lambda < y.lambda;
        return x.label < y.label;
    });
    cand.resize(static_cast<std::size_t>(n_modes));

    Spectrum s;
    s.domain_ = Domain::Rectangle;
    s.extent_x_ = a;
    s.extent_y_ = b;
    s.modes_ = std::move(cand);
    s.assign_groups();
    return s;
}

Spectrum Spectrum::from_eigenvalues(std::vector<double> lambdas) {
    if (lambdas.empty()) throw std::domain_error("from_eigenvalues: empty table");
    Spectrum s;
    s.domain_ = Domain::Table;
    s.modes_.reserve(lambdas.size());
    double prev = 0.0;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > 0.0))
            throw std::domain_error("from_eigenvalues: eigenvalues must be positive");
        if (lambdas[i] < prev)
            throw std::domain_error("from_eigenvalues: eigenvalues must be nondecreasing");
        prev = lambdas[i];
        s.modes_.push_back({static_cast<int>(i) + 1, lambdas[i], 0, {static_cast<int>(i) + 1, 0}});
    }
    s.assign_groups();
    return s;
}

Spectrum Spectrum::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_csv: empty file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "k,lambda")
        throw std::runtime_error("load_csv: expected header 'k,lambda', got '" + line + "'");
    std::vector<double> lambdas;
    int expected_k = 1;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string kf, lf;
        if (!std::getline(row, kf, ',') || !std::getline(row, lf))
            throw std::runtime_error("load_csv: malformed row '" + line + "'");
        std::size_t pos = 0;
        const int k = std::stoi(kf, &pos);
        if (k != expected_k)
            throw std::runtime_error("load_csv: mode indices must run 1,2,... (got " + kf + ")");
        lambdas.push_back(std::stod(lf));
        ++expected_k;
    }
    return from_eigenvalues(std::move(lambdas));
}

std::vector<double> Spectrum::eigenvalues() const {
    std::vector<double> out;
    out.reserve(modes_.size());
    for (const Mode& m : modes_) out.push_back(m.lambda);
    return out;
}

double Spectrum::eigenfunction(int k, const Point& p) const {
    const Mode& m = mode(k);
    switch (domain_) {
        case Domain::Interval:
            return std::sqrt(2.0 / extent_x_) * std::sin(m.label[0] * M_PI * p.x / extent_x_);
        case Domain::Rectangle:
            return 2.0 / std::sqrt(extent_x_ * extent_y_) *
                   std::sin(m.label[0] * M_PI * p.x / extent_x_) *
                   std::sin(m.label[1] * M_PI * p.y / extent_y_);
        case Domain::Table:
            break;
    }
    throw std::logic_error("eigenfunction: table spectra carry no eigenfunctions");
}

CoeffVector analyze(const Spectrum& spec,
                    const std::function<double(const Point&)>& field,
                    const QuadConfig& cfg) {
    cfg.validate();
    if (!spec.has_eigenfunctions())
        throw std::logic_error("analyze: table spectra carry no eigenfunctions");

    const int K = spec.size();
    CoeffVector out = CoeffVector::zeros(K);
    static const GaussRule rule = gauss_legendre(16);

    for (int k = 1; k <= K; ++k) {
        const Mode& m = spec.mode(k);
        if (spec.domain() == Spectrum::Domain::Interval) {
            const int panels = std::max(8, m.label[0] + 2);
            auto f = [&](double x) {
                Point p{x, 0.0};
                return field(p) * spec.eigenfunction(k, p);
            };
            out.c[k - 1] = integrate_composite_gl(f, 0.0, spec.extent_x(), panels, rule);
        } else {
            const int px = std::max(4, m.label[0] + 2);
            const int py = std::max(4, m.label[1] + 2);
            auto fy = [&](double x) {
                auto f = [&](double y) {
                    Point p{x, y};
                    return field(p) * spec.eigenfunction(k, p);
                };
                return integrate_composite_gl(f, 0.0, spec.extent_y(), py, rule);
            };
            out.c[k - 1] = integrate_composite_gl(fy, 0.0, spec.extent_x(), px, rule);
        }
        if (!std::isfinite(out.c[k - 1]))
            throw std::runtime_error("analyze: quadrature failure at mode " + std::to_string(k));
    }

    const int tail = std::max(1, K / 10);
    double mass = 0.0;
    for (int k = K - tail + 1; k <= K; ++k) mass += out.c[k - 1] * out.c[k - 1];
    out.tail_norm_estimate = std::sqrt(mass);
    return out;
}

double synthesize(const Spectrum& spec, const CoeffVector& coeffs, const Point& p) {
    if (coeffs.size() != spec.size())
        throw std::invalid_argument("synthesize: coefficient length does not match spectrum");
    double acc = 0.0;
    for (int k = 1; k <= spec.size(); ++k) acc += coeffs.c[k - 1] * spec.eigenfunction(k, p);
    return acc;
}

double sobolev_norm_sq(const Spectrum& spec, const CoeffVector& coeffs, double tau) {
    if (coeffs.size() != spec.size())
        throw std::invalid_argument("sobolev_norm_sq: coefficient length does not match spectrum");
    double acc = 0.0;
    for (int k = 1; k <= spec.size(); ++k) {
        const double hk = coeffs.c[k - 1];
        if (hk == 0.0) continue;
        acc += std::pow(spec.eigenvalue(k), 2.0 * tau) * hk * hk;
    }
    if (!std::isfinite(acc)) throw std::overflow_error("sobolev_norm_sq: overflow");
    return acc;
}

}  // namespace rsnl
