#include "rsnl/forcing.hpp"

#include <cmath>
#include <stdexcept>

namespace rsnl {

Forcing Forcing::constant(std::vector<double> coeffs) {
    Forcing f;
    f.kind_ = Kind::Constant;
    f.coeffs_ = std::move(coeffs);
    return f;
}

Forcing Forcing::polynomial(std::map<int, std::vector<double>> per_mode) {
    Forcing f;
    f.kind_ = Kind::Polynomial;
    f.per_mode_ = std::move(per_mode);
    return f;
}

Forcing Forcing::samples(const TimeGrid& grid, std::map<int, std::vector<double>> per_mode) {
    for (const auto& [k, vals] : per_mode)
        if (static_cast<int>(vals.size()) != grid.size())
            throw std::invalid_argument("Forcing::samples: sample count does not match grid");
    Forcing f;
    f.kind_ = Kind::Samples;
    f.per_mode_ = std::move(per_mode);
    f.sample_t_end_ = grid.t_end;
    f.sample_step_ = grid.step();
    return f;
}

Forcing Forcing::linear_ramp(const FracParams& p, double lambda, int mode) {
    const double frac_coef = lambda * p.gamma / std::tgamma(2.0 - p.alpha);
    const double alpha = p.alpha;
    return callable(
        [mode, lambda, frac_coef, alpha](int k, double t) {
            if (k != mode) return 0.0;
            return 1.0 + lambda * t + frac_coef * std::pow(t, 1.0 - alpha);
        },
        {mode});
}

Forcing Forcing::callable(std::function<double(int, double)> fn,
                          std::vector<int> active_modes) {
    Forcing f;
    f.kind_ = Kind::Callable;
    f.fn_ = std::move(fn);
    f.active_modes_ = std::move(active_modes);
    return f;
}

double Forcing::operator()(int k, double t) const {
    switch (kind_) {
        case Kind::Zero:
            return 0.0;
        case Kind::Constant:
            return (k >= 1 && k <= static_cast<int>(coeffs_.size())) ? coeffs_[k - 1] : 0.0;
        case Kind::Polynomial: {
            auto it = per_mode_.find(k);
            if (it == per_mode_.end()) return 0.0;
            double acc = 0.0;
            for (std::size_t j = it->second.size(); j-- > 0;) acc = acc * t + it->second[j];
            return acc;
        }
        case Kind::Samples: {
            auto it = per_mode_.find(k);
            if (it == per_mode_.end()) return 0.0;
            const std::vector<double>& v = it->second;
            if (t <= 0.0) return v.front();
            if (t >= sample_t_end_) return v.back();
            const double u = t / sample_step_;
            const int j = static_cast<int>(u);
            const double w = u - j;
            return (1.0 - w) * v[j] + w * v[j + 1];
        }
        case Kind::Callable:
            return fn_(k, t);
    }
    return 0.0;
}

bool Forcing::mode_is_zero(int k) const {
    switch (kind_) {
        case Kind::Zero:
            return true;
        case Kind::Constant:
            return k < 1 || k > static_cast<int>(coeffs_.size()) || coeffs_[k - 1] == 0.0;
        case Kind::Polynomial:
        case Kind::Samples: {
            auto it = per_mode_.find(k);
            if (it == per_mode_.end()) return true;
            for (double v : it->second)
                if (v != 0.0) return false;
            return true;
        }
        case Kind::Callable:
            if (active_modes_.empty()) return false;  // opaque
            for (int m : active_modes_)
                if (m == k) return false;
            return true;
    }
    return true;
}

}  // namespace rsnl
