#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "rsnl/kernel.hpp"
#include "rsnl/oracle.hpp"

using namespace rsnl;

namespace {
const FracParams kHalf(0.5, 1.0);
auto kZero = [](double) { return 0.0; };
}  // namespace

TEST_CASE("TimeGrid invariants") {
    CHECK_THROWS_AS(TimeGrid(0.0, 10), std::domain_error);
    CHECK_THROWS_AS(TimeGrid(1.0, 1), std::domain_error);
    TimeGrid g(2.0, 8);
    CHECK(g.node(0) == 0.0);
    CHECK(g.node(8) == doctest::Approx(2.0));
    CHECK(g.step() == doctest::Approx(0.25));
}

TEST_CASE("Grunwald-Letnikov weights") {
    auto g = gl_weights(0.5, 4);
    CHECK(g[0] == 1.0);
    CHECK(g[1] == doctest::Approx(-0.5));
    CHECK(g[2] == doctest::Approx(-0.125));
    // they sum towards zero (the discrete derivative of a constant decays)
    auto g1000 = gl_weights(0.5, 1000);
    double s = 0.0;
    for (double v : g1000) s += v;
    CHECK(std::abs(s) < 2e-2);
}

TEST_CASE("discrete RL derivative reproduces the power rules") {
    const int n = 4096;
    TimeGrid grid(1.0, n);

    TimeSeries ones{grid, std::vector<double>(n + 1, 1.0)};
    TimeSeries d_ones = rl_derivative(ones, 0.5);
    // d^{1/2} 1 = t^{-1/2} / Gamma(1/2)
    for (double t : {0.25, 0.5, 0.75, 1.0}) {
        const int j = static_cast<int>(t * n);
        const double exact = std::pow(t, -0.5) / std::tgamma(0.5);
        CHECK(d_ones.values[j] == doctest::Approx(exact).epsilon(0.02));
    }

    TimeSeries ramp{grid, {}};
    ramp.values.resize(n + 1);
    for (int j = 0; j <= n; ++j) ramp.values[j] = grid.node(j);
    TimeSeries d_ramp = rl_derivative(ramp, 0.5);
    // d^{1/2} t = t^{1/2} / Gamma(3/2)
    for (double t : {0.25, 0.5, 1.0}) {
        const int j = static_cast<int>(t * n);
        const double exact = std::sqrt(t) / std::tgamma(1.5);
        CHECK(d_ramp.values[j] == doctest::Approx(exact).epsilon(0.01));
    }

    TimeSeries zeros{grid, std::vector<double>(n + 1, 0.0)};
    TimeSeries d_zeros = rl_derivative(zeros, 0.3);
    for (double v : d_zeros.values) CHECK(v == 0.0);
}

TEST_CASE("homogeneous solve matches the kernel quadrature") {
    TimeGrid grid(1.0, 8192);
    TimeSeries y = solve_scalar_ivp(kHalf, 1.0, 1.0, kZero, grid);
    const double quad = relaxation(kHalf, 1.0, 1.0).value;
    CHECK(std::abs(y.values.back() - quad) / quad <= 1e-4);

    // pointwise along the trajectory
    for (double t : {0.25, 0.5, 0.75}) {
        const int j = static_cast<int>(t * 8192);
        const double q = relaxation(kHalf, 1.0, grid.node(j)).value;
        CHECK(std::abs(y.values[j] - q) / q <= 2e-4);
    }
}

TEST_CASE("zero data stays zero") {
    TimeGrid grid(1.0, 128);
    TimeSeries y = solve_scalar_ivp(kHalf, 2.0, 0.0, kZero, grid);
    for (double v : y.values) CHECK(v == 0.0);
}

TEST_CASE("manufactured ramp trajectory") {
    const double lambda = 2.0;
    auto f = [lambda](double t) {
        return 1.0 + lambda * t + lambda * std::pow(t, 0.5) / std::tgamma(1.5);
    };
    TimeGrid grid(1.0, 8192);
    TimeSeries y = solve_scalar_ivp(kHalf, lambda, 0.0, f, grid);
    double worst = 0.0;
    for (int j = 0; j <= grid.n_steps; ++j)
        worst = std::max(worst, std::abs(y.values[j] - grid.node(j)));
    CHECK(worst <= 5e-3);
}

TEST_CASE("homogeneous trajectory is positive and decays") {
    TimeGrid grid(1.0, 2048);
    for (double lambda : {1.0, 10.0, 100.0}) {
        TimeSeries y = solve_scalar_ivp(FracParams(0.3, 2.0), lambda, 1.0, kZero, grid);
        double prev = y.values[0];
        CHECK(prev == 1.0);
        for (int j = 1; j <= grid.n_steps; ++j) {
            CHECK(y.values[j] > 0.0);
            CHECK(y.values[j] < prev);
            prev = y.values[j];
        }
    }
}

TEST_CASE("observed convergence order") {
    TimeGrid base(1.0, 512);
    auto order = convergence_order(kHalf, 1.0, 1.0, kZero, base);
    REQUIRE(order.has_value());
    CHECK(*order >= 0.8);
    CHECK(*order <= 1.3);

    auto order2 = convergence_order(FracParams(0.3, 1.0), 10.0, 1.0, kZero, base);
    REQUIRE(order2.has_value());
    CHECK(*order2 >= 0.8);
    CHECK(*order2 <= 1.3);

    // identically-zero solution reports the exact sentinel
    auto exact = convergence_order(kHalf, 1.0, 0.0, kZero, base);
    CHECK(!exact.has_value());

    CHECK_THROWS_AS(convergence_order(kHalf, 1.0, 1.0, kZero, TimeGrid(1.0, 32)),
                    std::invalid_argument);
}

TEST_CASE("oracle equivalence on a parameter slice") {
    // one (alpha, gamma) pair per regime corner; the full product grid runs
    // in the acceptance suite
    for (double lambda : {1.0, 10.0, 100.0}) {
        const std::vector<double> times{0.25, 0.5, 1.0};
        const std::vector<double> oracle =
            oracle_relaxation(FracParams(0.7, 2.0), lambda, times, 1.0, 2048);
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double q = relaxation(FracParams(0.7, 2.0), lambda, times[i]).value;
            CHECK(std::abs(oracle[i] - q) / q <= 2e-3);
        }
    }
}

TEST_CASE("oracle_relaxation rejects off-grid times") {
    CHECK_THROWS_AS(oracle_relaxation(kHalf, 1.0, {0.1234567}, 1.0, 100),
                    std::invalid_argument);
}
