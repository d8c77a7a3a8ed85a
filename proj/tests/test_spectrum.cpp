#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "rsnl/spectrum.hpp"

using namespace rsnl;

TEST_CASE("interval eigenpairs") {
    Spectrum s = Spectrum::dirichlet_interval(M_PI, 3);
    CHECK(s.eigenvalue(1) == doctest::Approx(1.0));
    CHECK(s.eigenvalue(2) == doctest::Approx(4.0));
    CHECK(s.eigenvalue(3) == doctest::Approx(9.0));
    CHECK(s.eigenfunction(1, {M_PI / 2, 0}) == doctest::Approx(std::sqrt(2.0 / M_PI)));

    Spectrum s2 = Spectrum::dirichlet_interval(2.0, 2);
    CHECK(s2.eigenvalue(1) == doctest::Approx(M_PI * M_PI / 4.0));

    // all multiplicities 1
    for (int k = 1; k <= 3; ++k) CHECK(s.mode(k).group == k - 1);
}

TEST_CASE("rectangle eigenpairs, ordering and multiplicity groups") {
    Spectrum sq = Spectrum::dirichlet_rectangle(M_PI, M_PI, 5);
    CHECK(sq.eigenvalue(1) == doctest::Approx(2.0));
    CHECK(sq.mode(1).group == 0);
    // eigenvalue 5 appears twice: modes (1,2) and (2,1)
    CHECK(sq.eigenvalue(2) == doctest::Approx(5.0));
    CHECK(sq.eigenvalue(3) == doctest::Approx(5.0));
    CHECK(sq.mode(2).group == sq.mode(3).group);
    CHECK(sq.mode(2).label == std::array<int, 2>{1, 2});
    CHECK(sq.mode(3).label == std::array<int, 2>{2, 1});
    CHECK(sq.mode(4).group != sq.mode(3).group);

    Spectrum rect = Spectrum::dirichlet_rectangle(M_PI, M_PI / 2, 2);
    CHECK(rect.eigenvalue(1) == doctest::Approx(5.0));  // 1 + 4

    // ordering is nondecreasing and lambda_1 > 0 for every constructor
    for (int k = 2; k <= rect.size(); ++k)
        CHECK(rect.eigenvalue(k) >= rect.eigenvalue(k - 1));
    CHECK(rect.eigenvalue(1) > 0.0);

    // groups partition the modes: ids are contiguous and nondecreasing
    Spectrum big = Spectrum::dirichlet_rectangle(M_PI, M_PI, 30);
    int prev = 0;
    for (int k = 1; k <= big.size(); ++k) {
        CHECK(big.mode(k).group >= prev);
        CHECK(big.mode(k).group <= prev + 1);
        prev = big.mode(k).group;
    }
}

TEST_CASE("orthonormality Gram matrix") {
    for (const Spectrum& s : {Spectrum::dirichlet_interval(M_PI, 12),
                              Spectrum::dirichlet_rectangle(M_PI, M_PI / 2, 12)}) {
        const int m = std::min(s.size(), 20);
        for (int i = 1; i <= m; ++i) {
            CoeffVector row = analyze(s, [&](const Point& p) { return s.eigenfunction(i, p); });
            for (int j = 1; j <= m; ++j)
                CHECK(std::abs(row.coeff(j) - (i == j ? 1.0 : 0.0)) < 1e-8);
        }
    }
}

TEST_CASE("analyze: projections of known fields") {
    Spectrum s = Spectrum::dirichlet_interval(M_PI, 8);

    CoeffVector e1 = analyze(s, [&](const Point& p) { return s.eigenfunction(1, p); });
    CHECK(std::abs(e1.coeff(1) - 1.0) < 1e-10);
    for (int k = 2; k <= 8; ++k) CHECK(std::abs(e1.coeff(k)) < 1e-10);

    CoeffVector zero = analyze(s, [](const Point&) { return 0.0; });
    for (int k = 1; k <= 8; ++k) CHECK(zero.coeff(k) == 0.0);

    // x (pi - x) has sine coefficients sqrt(2/pi) * 4 / k^3 for odd k
    CoeffVector parab = analyze(s, [](const Point& p) { return p.x * (M_PI - p.x); });
    for (int k = 1; k <= 8; ++k) {
        const double exact = (k % 2 == 1) ? std::sqrt(2.0 / M_PI) * 4.0 / (k * k * k) : 0.0;
        CHECK(parab.coeff(k) == doctest::Approx(exact).epsilon(1e-10));
    }
    CHECK(parab.tail_norm_estimate >= 0.0);
}

TEST_CASE("synthesize round-trips analyze") {
    Spectrum s = Spectrum::dirichlet_interval(M_PI, 5);
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CoeffVector v = CoeffVector::zeros(5);
    for (double& c : v.c) c = u(rng);
    CoeffVector back =
        analyze(s, [&](const Point& p) { return synthesize(s, v, p); });
    for (int k = 1; k <= 5; ++k)
        CHECK(back.coeff(k) == doctest::Approx(v.coeff(k)).epsilon(1e-10));

    CHECK(synthesize(s, CoeffVector::zeros(5), {0.7, 0}) == 0.0);
}

TEST_CASE("squared Sobolev norm") {
    Spectrum s = Spectrum::dirichlet_interval(M_PI, 2);
    CHECK(sobolev_norm_sq(s, CoeffVector::basis(2, 1), 0.0) == doctest::Approx(1.0));
    CHECK(sobolev_norm_sq(s, CoeffVector::basis(2, 2), 1.0) == doctest::Approx(16.0));

    Spectrum two = Spectrum::from_eigenvalues({1.0, 4.0});
    CoeffVector ones = CoeffVector::zeros(2);
    ones.c = {1.0, 1.0};
    CHECK(sobolev_norm_sq(two, ones, 0.5) == doctest::Approx(5.0));

    // tau = 0 equals the plain squared l2 norm
    CoeffVector v = CoeffVector::zeros(2);
    v.c = {0.3, -0.4};
    CHECK(sobolev_norm_sq(two, v, 0.0) == doctest::Approx(0.25));
    CHECK(v.l2_norm() == doctest::Approx(0.5));

    Spectrum huge = Spectrum::from_eigenvalues({1e300});
    CoeffVector one = CoeffVector::basis(1, 1);
    CHECK_THROWS_AS(sobolev_norm_sq(huge, one, 2.0), std::overflow_error);
}

TEST_CASE("table spectra and CSV loading") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "rsnl_spectrum_test";
    fs::create_directories(dir);
    const fs::path good = dir / "good.csv";
    {
        std::ofstream out(good);
        out << "k,lambda\n1,1.5\n2,2.5\n3,2.5\n";
    }
    Spectrum s = Spectrum::load_csv(good.string());
    CHECK(s.size() == 3);
    CHECK(s.eigenvalue(2) == doctest::Approx(2.5));
    CHECK(s.mode(2).group == s.mode(3).group);  // exact tie grouped
    CHECK(!s.has_eigenfunctions());
    CHECK_THROWS(s.eigenfunction(1, {0.5, 0}));

    const fs::path bad_header = dir / "bad_header.csv";
    {
        std::ofstream out(bad_header);
        out << "lambda,k\n1,1.5\n";
    }
    CHECK_THROWS(Spectrum::load_csv(bad_header.string()));

    const fs::path decreasing = dir / "decreasing.csv";
    {
        std::ofstream out(decreasing);
        out << "k,lambda\n1,2.0\n2,1.0\n";
    }
    CHECK_THROWS(Spectrum::load_csv(decreasing.string()));

    const fs::path negative = dir / "negative.csv";
    {
        std::ofstream out(negative);
        out << "k,lambda\n1,-2.0\n";
    }
    CHECK_THROWS(Spectrum::load_csv(negative.string()));

    fs::remove_all(dir);
}
