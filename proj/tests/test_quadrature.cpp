// test_quadrature.cpp - adaptive line/segment integration, tails, hints
#include <cmath>

#include "doctest.h"

#include "cbs3/quadrature.hpp"

using namespace cbs3;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("whole-line Lorentzian") {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-12;
    QuadResult r = integrate_line([](double x) { return cd(1.0 / (1.0 + x * x), 0.0); }, 10.0,
                                  {0.0}, cfg);
    CHECK(r.converged);
    CHECK(std::real(r.value) == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(std::abs(std::imag(r.value)) <= 1e-14);
}

TEST_CASE("algebraic tails are captured beyond the cutoff") {
    // integrand with significant weight outside |x| < 10
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-12;
    QuadResult r = integrate_line([](double x) { return cd(1.0 / (4.0 + x * x), 0.0); }, 10.0,
                                  {0.0}, cfg);
    CHECK(r.converged);
    CHECK(std::real(r.value) == doctest::Approx(kPi / 2.0).epsilon(1e-11));
}

TEST_CASE("complex-valued integrand") {
    // poles at +i and -2i; closing above picks the residue at +i: 2*pi/3
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-12;
    auto f = [](double x) { return 1.0 / ((x - cd(0.0, 1.0)) * (x + cd(0.0, 2.0))); };
    QuadResult r = integrate_line(f, 15.0, {0.0}, cfg);
    CHECK(r.converged);
    CHECK(std::real(r.value) == doctest::Approx(2.0 * kPi / 3.0).epsilon(1e-11));
    CHECK(std::abs(std::imag(r.value)) <= 1e-12);
}

TEST_CASE("off-center peak needs its hint") {
    // narrow Lorentzian at x = 7 with width 1e-3; without a hint the first
    // panel pass can miss it entirely, with the hint it must converge
    const double x0 = 7.0, w = 1e-3;
    auto f = [&](double x) { return cd(w / ((x - x0) * (x - x0) + w * w), 0.0); };
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-9;
    QuadResult r = integrate_line(f, 30.0, {0.0, x0}, cfg);
    CHECK(r.converged);
    CHECK(std::real(r.value) == doctest::Approx(kPi).epsilon(1e-8));
}

TEST_CASE("finite segment, smooth integrand") {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-13;
    QuadResult r = integrate_segment([](double x) { return cd(x * x * x * x * x, 0.0); }, 0.0,
                                     1.0, {}, cfg);
    CHECK(r.converged);
    CHECK(std::real(r.value) == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
    // polynomial of degree 5 is exact for Gauss-Kronrod: no subdivision needed
    CHECK(r.evals <= 64);
}

TEST_CASE("segment argument validation") {
    QuadratureConfig cfg;
    CHECK_THROWS_AS(integrate_segment([](double) { return cd(0.0, 0.0); }, 1.0, 1.0, {}, cfg),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate_line([](double) { return cd(0.0, 0.0); }, 0.0, {}, cfg),
                    std::invalid_argument);
}

TEST_CASE("exhausted subdivision budget reports non-convergence") {
    // kink at the origin cannot be resolved by a single panel at tight tolerance
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-14;
    cfg.max_intervals = 1;
    QuadResult r = integrate_segment([](double x) { return cd(std::exp(-std::abs(x)), 0.0); },
                                     -1.0, 1.0, {}, cfg);
    CHECK_FALSE(r.converged);
    // the estimate is still returned and is roughly right
    CHECK(std::real(r.value) == doctest::Approx(2.0 * (1.0 - std::exp(-1.0))).epsilon(1e-2));
}

TEST_CASE("absolute floor stops refinement of negligible integrals") {
    // tiny integrand against a large floor: converged immediately
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-14;
    cfg.abs_floor = 1e-3;
    QuadResult r = integrate_line([](double x) { return cd(1e-9 / (1.0 + x * x), 0.0); }, 10.0,
                                  {0.0}, cfg);
    CHECK(r.converged);
    CHECK(std::real(r.value) == doctest::Approx(1e-9 * kPi).epsilon(0.05));
}

TEST_CASE("peak positions of the driven atom") {
    AtomParams p{cd(3.0, 0.0), 4.0, 1.0};
    std::vector<double> h = mollow_hints(p);
    // generalized drive frequency 5: peaks {0, +-5, +-10}
    REQUIRE(h.size() == 5);
    std::vector<double> want = {0.0, 5.0, -5.0, 10.0, -10.0};
    for (double w : want) {
        double best = 1e300;
        for (double x : h) best = std::min(best, std::abs(x - w));
        CHECK(best <= 1e-12);
    }
    CHECK(default_cutoff(p) == doctest::Approx(25.0 * 4.0).epsilon(1e-15));
    CHECK(default_cutoff(p, 10.0) == doctest::Approx(10.0 * 4.0).epsilon(1e-15));
}

TEST_CASE("vector integration shares one subdivision across components") {
    // a family of shifted Lorentzians integrated together: every component
    // must match its closed form pi even though the peaks sit apart
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-10;
    const std::vector<double> centers = {-3.0, -1.0, 0.0, 2.0, 5.0};
    std::vector<double> hints(centers);
    QuadResultVec r = integrate_line_vec(
        [&](double x) {
            Eigen::VectorXcd v(static_cast<Eigen::Index>(centers.size()));
            for (size_t k = 0; k < centers.size(); ++k) {
                double d = x - centers[k];
                v(static_cast<Eigen::Index>(k)) = cd(1.0 / (1.0 + d * d), 0.0);
            }
            return v;
        },
        12.0, hints, cfg);
    REQUIRE(r.converged);
    REQUIRE(r.value.size() == 5);
    for (Eigen::Index k = 0; k < 5; ++k)
        CHECK(std::real(r.value(k)) == doctest::Approx(kPi).epsilon(1e-9));
    // the reported error bounds every component (max-norm control)
    for (Eigen::Index k = 0; k < 5; ++k)
        CHECK(std::abs(std::real(r.value(k)) - kPi) <= r.abs_error + 1e-12);
    CHECK_THROWS_AS(integrate_line_vec([](double) { return Eigen::VectorXcd::Ones(1).eval(); },
                                       0.0, {}, cfg),
                    std::invalid_argument);
}

TEST_CASE("vector integration agrees with the scalar driver") {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-11;
    auto f = [](double x) { return cd(1.0, 0.0) / (cd(x, 0.0) - cd(0.0, 1.0)) / (cd(x, 0.0) + cd(0.0, 2.0)); };
    QuadResult s = integrate_line(f, 10.0, {0.0}, cfg);
    QuadResultVec v = integrate_line_vec(
        [&](double x) {
            Eigen::VectorXcd out(1);
            out(0) = f(x);
            return out;
        },
        10.0, {0.0}, cfg);
    REQUIRE(v.converged);
    CHECK(std::abs(v.value(0) - s.value) <= 1e-10);
}
