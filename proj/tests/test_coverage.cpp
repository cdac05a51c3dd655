#include "confdist/asymptotic.hpp"
#include "confdist/coverage.hpp"
#include "confdist/errors.hpp"
#include "confdist/specfun.hpp"

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <memory>
#include <sstream>

using namespace confdist;

namespace {

bool within(const PropnEstimate& e, double exact, double k = 3.0) {
    return std::abs(e.actual - exact) <= k * std::max(e.std_error, 1e-300) + 1e-12;
}

}  // namespace

TEST_CASE("bounded mean: frozen quadrature value and exact zero at the bound") {
    CHECK(propn_bounded_quadrature(1.0, 0.9) == doctest::Approx(0.8879852110383903).epsilon(1e-11));
    for (double b : {0.1, 0.5, 0.9}) CHECK(propn_bounded_quadrature(0.0, b) == 0.0);
    // Far from the bound the flat posterior is nearly the confidence curve.
    CHECK(propn_bounded_quadrature(6.0, 0.5) < 0.5);
    CHECK(propn_bounded_quadrature(6.0, 0.5) > 0.5 - 1e-8);
}

TEST_CASE("bounded mean: Neyman, quadrature and Monte Carlo agree") {
    BoundedMeanNormal m;
    const auto proc = bayes_flat_bounded();
    for (double theta : {0.3, 1.0, 2.5}) {
        const double q = propn_bounded_quadrature(theta, 0.5);
        CHECK(propn_neyman(m, proc, theta, 0.5) == doctest::Approx(q).epsilon(1e-10));
        CHECK(within(propn_mc(m, proc, theta, 0.5, 20000, 3), q));
    }
    CHECK(propn_neyman(m, proc, 0.0, 0.5) == 0.0);
    CHECK(propn_mc(m, proc, 0.0, 0.5, 20000, 3).actual == 0.0);
}

TEST_CASE("radius model: threshold and indicator paths") {
    CHECK(propn_curved_quadrature(3.0, 0.5) == doctest::Approx(0.3629014779754033).epsilon(1e-11));
    for (double rho : {0.25, 1.0, 4.0, 9.0})
        for (double b : {0.1, 0.9}) {
            const double a = propn_curved_quadrature(rho, b);
            CHECK(std::abs(a - propn_curved_indicator(rho, b)) < 1e-8);
            CHECK(a < b);
        }
    CHECK(propn_curved_quadrature(0.0, 0.5) == 0.0);
    CurvedRadiusModel m;
    CHECK(propn_neyman(m, bayes_flat_curved(), 2.0, 0.5) ==
          doctest::Approx(propn_curved_quadrature(2.0, 0.5)).epsilon(1e-9));
}

TEST_CASE("confidence procedures are exact") {
    LocationModel ev(Kernel::extreme_value, 1.0);
    auto evp = std::make_shared<LocationModel>(ev);
    const auto proc = confidence_procedure(evp);
    CHECK(propn_neyman(ev, proc, 0.7, 0.3) == doctest::Approx(0.3).epsilon(1e-10));
    CHECK(within(propn_mc(ev, proc, 0.7, 0.3, 20000, 9), 0.3));
    CHECK(is_monotone(proc, 0.3, step_grid(-5, 5, 0.5)));
}

TEST_CASE("Monte Carlo contract") {
    LocationModel m(Kernel::normal, 1.0);
    auto mp = std::make_shared<LocationModel>(m);
    const auto proc = confidence_procedure(mp);
    const auto a = propn_mc(m, proc, 0.0, 0.5, 5000, 77);
    const auto b = propn_mc(m, proc, 0.0, 0.5, 5000, 77);
    CHECK(a.actual == b.actual);
    CHECK(a.std_error == doctest::Approx(std::sqrt(a.actual * (1 - a.actual) / 5000)));
    CHECK_THROWS_AS(propn_mc(m, proc, 0.0, 0.5, 999, 1), InvalidParameter);
    QuantileProcedure broken{"broken", [](double y, double) -> double {
                                 if (y > 1.0) throw NumericError("boom");
                                 return y;
                             }};
    CHECK_THROWS_WITH_AS(propn_mc(m, broken, 0.0, 0.5, 5000, 1),
                         doctest::Contains("failed at y ="), NumericError);
}

TEST_CASE("prior-averaged coverage") {
    LocationModel m(Kernel::normal, 1.0);
    auto mp = std::make_shared<LocationModel>(m);
    const auto proc = confidence_procedure(mp);
    const Prior p = Prior::custom([](double t) { return 1.0 + t * t; });
    const auto q = propn_prior_avg(m, proc, p, 0.4, {-1.0, 2.0}, AverageMethod::quadrature);
    CHECK(q.actual == doctest::Approx(0.4).epsilon(1e-7));
    const auto mc = propn_prior_avg(m, proc, p, 0.4, {-1.0, 2.0}, AverageMethod::monte_carlo,
                                    20000, 5);
    CHECK(within(mc, 0.4));
    // A zero-width window is a point mass.
    BoundedMeanNormal b;
    const auto pt = propn_prior_avg(b, bayes_flat_bounded(), Prior::flat(), 0.9, {1.0, 1.0},
                                    AverageMethod::quadrature);
    CHECK(pt.actual == doctest::Approx(0.8879852110383903).epsilon(1e-9));
    CHECK_THROWS_AS(propn_prior_avg(m, proc, p, 0.4, {}, AverageMethod::quadrature),
                    InvalidParameter);
}

TEST_CASE("Bayes error curve for the radius model") {
    const auto curve = bayes_error_curve(5.0, step_grid(0.1, 10.0, 0.1));
    for (const auto& pt : curve) CHECK(pt.error > 0.0);
    CHECK(bayes_error_quadrature(5.0, 5.0) == doctest::Approx(0.08019677354742805).epsilon(1e-10));
    CHECK(curve[49].error == doctest::Approx(bayes_error_quadrature(5.0, 5.0)).epsilon(1e-10));
}

TEST_CASE("Neyman boundary") {
    auto mp = std::make_shared<LocationModel>(Kernel::normal, 1.0);
    const auto pts = neyman_region_boundary(confidence_procedure(mp), 0.975, step_grid(-1, 1, 1));
    REQUIRE(pts.size() == 3);
    CHECK(pts[2].theta_hat == doctest::Approx(1.0 - 1.959963984540054).epsilon(1e-12));
}

TEST_CASE("audit ordering, seeding and CSV") {
    BoundedMeanNormal m;
    PropnQuery q{{0.0, 1.0}, {0.1, 0.9}, 2000, 100};
    const Method both[] = {Method::quadrature, Method::monte_carlo};
    const auto rep = audit(m, bayes_flat_bounded(), q, both, propn_bounded_quadrature);
    REQUIRE(rep.rows.size() == 8);
    CHECK(rep.rows[0].beta == 0.1);
    CHECK(rep.rows[0].theta == 0.0);
    CHECK(rep.rows[0].actual == 0.0);
    CHECK(rep.rows[1].method == Method::monte_carlo);
    CHECK(*rep.rows[1].seed == 100);
    CHECK(*rep.rows[7].seed == 103);
    CHECK(rep.rows[6].actual == doctest::Approx(0.8879852110383903).epsilon(1e-10));

    std::ostringstream a, b;
    write_csv(a, rep);
    write_csv(b, audit(m, bayes_flat_bounded(), q, both, propn_bounded_quadrature));
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("procedure,theta,beta,claimed,actual,method,stderr,n_rep,seed\n"
                        "bayes_flat,0,0.1,0.1,0,quadrature,,,\n"
                        "bayes_flat,0,0.1,0.1,0,monte_carlo,0,2000,100\n",
                        0) == 0);
}

TEST_CASE("parallel_for covers every index and propagates errors") {
    std::atomic<int> sum{0};
    parallel_for(100, [&](std::size_t i) { sum += static_cast<int>(i); });
    CHECK(sum == 4950);
    CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                        if (i == 7) throw NumericError("x");
                    }),
                    NumericError);
}

TEST_CASE("expansion Bayes procedure") {
    asymptotic::ExpansionParams p{1.0, 10.0, 0.0, 0.0, 0.5};
    const auto proc = expansion_bayes_procedure(p);
    const double z = normal_quantile(0.9);
    const double cq = 1.0 - z * (1.0 + (1.0 - z) * (1.0 - z) / 40.0);
    CHECK(proc.rule(1.0, 0.9) == doctest::Approx(cq * 1.05).epsilon(1e-14));
}
