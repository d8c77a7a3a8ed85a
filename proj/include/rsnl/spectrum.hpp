#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "rsnl/kernel.hpp"

namespace rsnl {

/// Evaluation point in the model domain; y is ignored for 1D operators.
struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// One eigenpair of the operator. Modes are ordered by nondecreasing
/// eigenvalue; modes whose eigenvalues agree to relative tolerance 1e-12
/// share a multiplicity group id. label holds the structured index
/// (k for 1D, (m,n) for 2D; second entry 0 in 1D).
struct Mode {
    int index;                 // 1-based position in the ordered spectrum
    double lambda;
    int group;
    std::array<int, 2> label;
};

/// Truncated Fourier coefficient vector; c[k-1] is the coefficient of mode k.
struct CoeffVector {
    std::vector<double> c;
    double tail_norm_estimate = 0.0;

    static CoeffVector zeros(int n);
    static CoeffVector basis(int n, int k, double scale = 1.0);
    int size() const { return static_cast<int>(c.size()); }
    double coeff(int k) const { return c.at(k - 1); }
    double l2_norm() const;
};

/// Ordered discrete spectrum of a positive self-adjoint model operator,
/// with eigenfunction evaluation for the interval and rectangle instances.
/// Immutable once built; safe for concurrent reads.
class Spectrum {
public:
    enum class Domain { Interval, Rectangle, Table };

    /// Dirichlet Laplacian on (0, L): lambda_k = (k pi / L)^2,
    /// v_k(x) = sqrt(2/L) sin(k pi x / L).
    static Spectrum dirichlet_interval(double length, int n_modes);

    /// Dirichlet Laplacian on (0,a) x (0,b): lambda_{mn} = pi^2 (m^2/a^2 + n^2/b^2)
    /// with product sine eigenfunctions, sorted and multiplicity-grouped.
    static Spectrum dirichlet_rectangle(double a, double b, int n_modes);

    /// User-supplied eigenvalue table (no eigenfunction evaluator);
    /// coefficient-space workflows only.
    static Spectrum from_eigenvalues(std::vector<double> lambdas);

    /// Loads a table spectrum from CSV with header `k,lambda`; eigenvalues
    /// must be strictly positive and nondecreasing.
    static Spectrum load_csv(const std::string& path);

    int size() const { return static_cast<int>(modes_.size()); }
    const Mode& mode(int k) const { return modes_.at(k - 1); }
    const std::vector<Mode>& modes() const { return modes_; }
    double eigenvalue(int k) const { return modes_.at(k - 1).lambda; }
    std::vector<double> eigenvalues() const;

    Domain domain() const { return domain_; }
    bool has_eigenfunctions() const { return domain_ != Domain::Table; }
    double extent_x() const { return extent_x_; }
    double extent_y() const { return extent_y_; }

    /// v_k evaluated at p; throws for table spectra.
    double eigenfunction(int k, const Point& p) const;

private:
    Spectrum() = default;
    void assign_groups();

    std::vector<Mode> modes_;
    Domain domain_ = Domain::Table;
    double extent_x_ = 0.0;
    double extent_y_ = 0.0;
};

/// Fourier coefficients (field, v_k) by composite Gauss-Legendre quadrature;
/// the panel count grows with the mode label so oscillatory modes stay
/// resolved. tail_norm_estimate is the l2 mass of the trailing tenth of
/// the coefficients.
CoeffVector analyze(const Spectrum& spec,
                    const std::function<double(const Point&)>& field,
                    const QuadConfig& cfg = {});

/// Pointwise synthesis sum_k coeffs_k v_k(p).
double synthesize(const Spectrum& spec, const CoeffVector& coeffs, const Point& p);

/// Squared fractional-power norm  sum_k lambda_k^{2 tau} |h_k|^2
/// over the truncation. Throws on overflow.
double sobolev_norm_sq(const Spectrum& spec, const CoeffVector& coeffs, double tau);

}  // namespace rsnl
