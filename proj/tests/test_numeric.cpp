#include "confdist/errors.hpp"
#include "confdist/numeric.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace confdist;

TEST_CASE("adaptive quadrature") {
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi) ==
          doctest::Approx(2.0).epsilon(1e-13));
    const double gauss = integrate([](double x) { return std::exp(-0.5 * x * x); }, -kInf, kInf);
    CHECK(gauss == doctest::Approx(std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-12));
    CHECK(integrate([](double x) { return std::exp(-x); }, 3.0, kInf) ==
          doctest::Approx(std::exp(-3.0)).epsilon(1e-12));
    // Reversed limits change sign; an integrable endpoint singularity converges.
    CHECK(integrate([](double x) { return x * x; }, 1.0, 0.0) == doctest::Approx(-1.0 / 3.0));
    CHECK(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10, 1e-10) ==
          doctest::Approx(2.0).epsilon(1e-8));
    // A tiny integral is resolved in absolute terms, not driven to relative precision.
    CHECK(std::abs(integrate([](double x) { return 1e-30 * x; }, 0.0, 1.0)) < 1e-29);
    CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
    CHECK_THROWS_AS(integrate([](double) { return std::nan(""); }, 0.0, 1.0), NumericError);
}

TEST_CASE("bracketed root refinement") {
    const auto f = [](double x) { return x * x - 2.0; };
    CHECK(solve_bracketed(f, 0.0, 2.0, f(0.0), f(2.0)) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(solve_bracketed(f, 1.0, std::sqrt(2.0), f(1.0), 0.0) == std::sqrt(2.0));
    CHECK_THROWS_AS(solve_bracketed(f, 2.0, 3.0, f(2.0), f(3.0)), NumericError);
}

TEST_CASE("inclusive step grids") {
    const auto g = step_grid(-4.0, 4.0, 0.05);
    CHECK(g.size() == 161);
    CHECK(g.front() == -4.0);
    CHECK(g.back() == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(step_grid(0.0, 1.0, 0.3).size() == 4);  // 1.2 overshoots by more than half a step
    CHECK(step_grid(0.0, 6.0, 0.1).size() == 61);
    CHECK(step_grid(1.0, 1.0, 0.1).size() == 1);
    CHECK_THROWS_AS(step_grid(0.0, 1.0, 0.0), InvalidParameter);
    CHECK_THROWS_AS(step_grid(1.0, 0.0, 0.1), InvalidParameter);
}

TEST_CASE("seeded uniforms are reproducible and open") {
    SeededUniform a(42), b(42), c(43);
    bool differs = false;
    for (int i = 0; i < 1000; ++i) {
        const double x = a();
        CHECK(x == b());
        CHECK(x > 0.0);
        CHECK(x < 1.0);
        differs |= x != c();
    }
    CHECK(differs);
}

TEST_CASE("interval helpers") {
    Interval i{0.0, 2.0};
    CHECK(i.contains(2.0));
    CHECK(i.clamp(5.0) == 2.0);
    CHECK(i.intersect({1.0, kInf}).lo == 1.0);
    CHECK(Interval{}.finite() == false);
    CHECK(i.intersect({3.0, 4.0}).empty());
}
