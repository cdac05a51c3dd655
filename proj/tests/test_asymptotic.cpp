#include "confdist/asymptotic.hpp"
#include "confdist/bayes.hpp"
#include "confdist/errors.hpp"
#include "confdist/specfun.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>
#include <sstream>

using namespace confdist;
using namespace confdist::asymptotic;

namespace {

double invert(const std::function<double(double)>& rule, double theta) {
    auto f = [&](double y) { return rule(y) - theta; };
    return solve_bracketed(f, -30.0, 30.0, f(-30.0), f(30.0));
}

}  // namespace

TEST_CASE("model quantile expansion") {
    for (double n : {10.0, 100.0}) {
        for (double theta : {-2.0, 0.5, 3.0}) {
            const double e = exact_model_quantile(theta, 0.9, 1.0, n);
            const double a = model_quantile_expansion(theta, 0.9, 1.0, n);
            const double u = theta * theta / (2 * n);
            // Remainder of sqrt(1 + u) = 1 + u/2 - u^2/8 + ...
            CHECK(std::abs(e - a) <= normal_quantile(0.9) * u * u / 8.0 * 1.0001);
        }
    }
}

TEST_CASE("confidence quantile expansion against the exact root") {
    double prev = 1.0;
    for (double n : {50.0, 200.0, 800.0}) {
        const double err = std::abs(exact_conf_quantile(1.5, 0.9, 1.0, n) - conf_quantile(1.5, 0.9, 1.0, n));
        CHECK(err < prev / 8.0);
        prev = err;
    }
    CHECK(conf_quantile(0.7, 0.5, 1.0, 10.0) == 0.7);
    CHECK_THROWS_AS(exact_conf_quantile(5.0, 0.9, -1.0, 1.0), NumericError);
}

TEST_CASE("inverse weight undoes the default prior to O(n^-2)") {
    for (double n : {20.0, 80.0}) {
        VarianceCurvatureNormal m(1.0, n);
        for (double theta : {-1.0, 0.5, 2.0}) {
            const double prod = inverse_weight(theta, 1.0, 1.0, n) * default_prior(m, 1.0, theta);
            CHECK(std::abs(prod - 1.0) < 5.0 / (n * n));
        }
    }
}

TEST_CASE("likelihood quantile against the numerical flat posterior") {
    // Frozen from the scipy oracle: flat-prior posterior quantile on [-60, 60], y = 1, beta = 0.9.
    const double frozen[] = {-0.28867540934482494, -0.283240630563573, -0.2819686738932308};
    const double ns[] = {25.0, 100.0, 400.0};
    double prev = 1.0;
    for (int i = 0; i < 3; ++i) {
        auto m = std::make_shared<VarianceCurvatureNormal>(1.0, ns[i]);
        const Posterior post(m, Prior::flat({-60.0, 60.0}), 1.0);
        const double num = post.quantile(0.9);
        CHECK(num == doctest::Approx(frozen[i]).epsilon(1e-9));
        const double err = std::abs(likelihood_quantile(conf_quantile(1.0, 0.9, 1.0, ns[i]), 1.0, ns[i]) - num);
        CHECK(err < prev / 10.0);  // O(n^-2)
        prev = err;
    }
}

TEST_CASE("Bayes quantile and gaps") {
    ExpansionParams p{1.0, 10.0, 0.3, 0.5, 0.9};
    const double y = 1.2, z = p.z_beta();
    const double cq = conf_quantile(y, p.beta, p.gamma, p.n);
    const double bq = bayes_quantile_expansion(cq, y, p);
    CHECK(bq == bayes_quantile_at(y, p));
    CHECK(std::abs((bq - cq) - vertical_gap_from_conf(cq, y, p)) < 1e-12);
    // The closed form replaces conf_q by y - z; the difference is exactly
    // (conf_q - (y - z)) (gamma + c) / 2n.
    const double bound = std::abs(z) * p.gamma * (y - z) * (y - z) / (4 * p.n) *
                         std::abs(p.gamma + p.c) / (2 * p.n);
    CHECK(std::abs((bq - cq) - vertical_gap(y, p)) <= bound * (1 + 1e-9));

    ExpansionParams flat{1.0, 10.0, 0.0, 0.0, 0.9};
    CHECK(bayes_quantile_expansion(cq, y, flat) == likelihood_quantile(cq, 1.0, 10.0));
}

TEST_CASE("data-dependent prior collapses to the confidence quantile") {
    for (double y : {-1.0, 0.3, 2.0}) {
        ExpansionParams p{1.0, 10.0, 1.0 * y / 2.0, -1.0, 0.9};
        const double cq = conf_quantile(y, 0.9, 1.0, 10.0);
        CHECK(std::abs(bayes_quantile_expansion(cq, y, p) - cq) < 1e-12);
    }
}

TEST_CASE("horizontal gap against numerically inverted rules") {
    for (double n : {25.0, 100.0, 400.0}) {
        ExpansionParams p{1.0, n, 0.3, 0.5, 0.9};
        const double theta = 1.0;
        const double yc = invert([&](double y) { return conf_quantile(y, p.beta, p.gamma, n); }, theta);
        const double yb = invert([&](double y) { return bayes_quantile_at(y, p); }, theta);
        CHECK(std::abs((yc - yb) - horizontal_gap(theta, p)) < 1.0 / (n * n));
    }
}

TEST_CASE("coverage formula") {
    ExpansionParams p{1.0, 10.0, 0.0, 0.0, 0.9};
    for (double theta : {-2.0, 0.0, 1.5})
        CHECK(std::abs((p.beta - propn_formula(theta, p)) -
                       theta * p.gamma * normal_pdf(p.z_beta()) / (2 * p.n)) < 1e-12);
    CHECK(propn_formula_checked(1.0, p).in_window);
    CHECK_FALSE(propn_formula_checked(4.0, p).in_window);
    CHECK_FALSE(conf_quantile_checked(5.0, 0.5, 1.0, 10.0).in_window);
}

TEST_CASE("tilt and bend identities") {
    const TiltBend tb{0.3, 0.5};
    const double z = normal_quantile(0.8);
    double prev = 1.0;
    for (double n : {25.0, 100.0, 400.0}) {
        const double err = std::abs(tilt_bend_quantile(1.0, z, tb, n) - tilt_bend_exact_quantile(1.0, z, tb, n));
        CHECK(err < prev / 6.0);  // n^-3/2 gives a factor 8 per quadrupling
        prev = err;
        CHECK(std::abs(tilt_bend_from_variable(1.0 + z, 1.0, tb, n) - tilt_bend_quantile(1.0, z, tb, n)) < 1e-12);
        CHECK(std::abs(posterior_tilt_quantile_shifted(0.4 + z, 0.4, tb, n) -
                       posterior_tilt_quantile(0.4, z, tb, n)) < 1e-12);
    }
    // The exact form is the quantile of the completed square, N((theta + a/sqrt n)/k, 1/k).
    const double n = 16.0, k = 1.0 - tb.c_bend / n;
    CHECK(tilt_bend_exact_quantile(1.0, 0.0, tb, n) == doctest::Approx((1.0 + 0.3 / 4.0) / k));
    CHECK_THROWS_AS(tilt_bend_quantile(0.0, 0.0, TiltBend{0.0, 20.0}, 16.0), InvalidParameter);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS((ExpansionParams{1.0, 0.0, 0.0, 0.0, 0.5}.validate()), InvalidParameter);
    CHECK_THROWS_AS((ExpansionParams{30.0, 10.0, 0.0, 0.0, 0.5}.validate()), InvalidParameter);
    CHECK_THROWS_AS((ExpansionParams{1.0, 10.0, 0.0, 0.0, 1.0}.validate()), InvalidParameter);
    CHECK_THROWS_AS(conf_quantile(0.0, 0.0, 1.0, 10.0), DomainError);
}

TEST_CASE("expansion CSV schemas") {
    ExpansionParams p{1.0, 10.0, 0.0, 0.0, 0.975};
    const std::vector<double> ys{0.0};
    std::ostringstream os;
    const auto curve = expansion_curve(ys, p);
    write_csv(os, std::span<const ExpansionCurvePoint>(curve));
    CHECK(os.str().rfind("y,conf_q,lik_q,bayes_q,vertical_gap\n0,", 0) == 0);
    std::ostringstream os2;
    const std::vector<PropnFormulaRow> rows{{0.0, 0.5, 0.5, 0.5, 0.49, 0.01}};
    write_csv(os2, std::span<const PropnFormulaRow>(rows));
    CHECK(os2.str() == "theta,beta,claimed,formula_propn,mc_propn,stderr\n0,0.5,0.5,0.5,0.49,0.01\n");
}
