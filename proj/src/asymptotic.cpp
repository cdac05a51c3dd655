#include "confdist/asymptotic.hpp"

#include "confdist/confidence.hpp"
#include "confdist/csv.hpp"
#include "confdist/errors.hpp"
#include "confdist/models.hpp"
#include "confdist/specfun.hpp"

#include <cmath>
#include <ostream>
#include <string>

namespace confdist::asymptotic {

namespace {

void check_core(double gamma, double n) {
    if (!(n > 0.0) || !std::isfinite(n)) throw InvalidParameter("n must be positive and finite");
    if (!std::isfinite(gamma) || !(std::abs(gamma) / (2.0 * n) < 1.0))
        throw InvalidParameter("need |gamma| / 2n < 1");
}

double z_of(double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0, 1)");
    return normal_quantile(beta);
}

}  // namespace

double ExpansionParams::z_beta() const { return z_of(beta); }

void ExpansionParams::validate() const {
    check_core(gamma, n);
    if (!std::isfinite(a) || !std::isfinite(c)) throw InvalidParameter("a and c must be finite");
    if (!(beta > 0.0 && beta < 1.0)) throw InvalidParameter("beta must lie in (0, 1)");
}

void TiltBend::validate(double n) const {
    if (!(n > 0.0)) throw InvalidParameter("n must be positive");
    if (!std::isfinite(a_half) || !std::isfinite(c_bend))
        throw InvalidParameter("tilt and bend must be finite");
    if (!(1.0 - c_bend / n > 0.0)) throw InvalidParameter("bend needs 1 - c/n > 0");
}

bool in_window(double v, double n) { return std::abs(v) <= std::sqrt(n); }

double model_quantile_expansion(double theta, double beta, double gamma, double n) {
    check_core(gamma, n);
    return theta + z_of(beta) * (1.0 + gamma * theta * theta / (4.0 * n));
}

double exact_model_quantile(double theta, double beta, double gamma, double n) {
    check_core(gamma, n);
    const double s2 = 1.0 + gamma * theta * theta / (2.0 * n);
    if (!(s2 > 0.0)) throw DomainError("theta outside the parameter domain");
    return theta + z_of(beta) * std::sqrt(s2);
}

double conf_quantile(double y, double beta, double gamma, double n) {
    check_core(gamma, n);
    const double z = z_of(beta);
    const double d = y - z;
    return y - z * (1.0 + gamma * d * d / (4.0 * n));
}

Windowed conf_quantile_checked(double y, double beta, double gamma, double n) {
    const double v = conf_quantile(y, beta, gamma, n);
    return {v, in_window(y, n) && in_window(v, n)};
}

double inverse_weight(double theta, double y0, double gamma, double n) {
    check_core(gamma, n);
    return std::exp(gamma * theta * (theta - y0) / (2.0 * n));
}

double likelihood_quantile(double conf_q, double gamma, double n) {
    check_core(gamma, n);
    return conf_q * (1.0 + gamma / (2.0 * n));
}

double bayes_quantile_expansion(double conf_q, double y, const ExpansionParams& p) {
    p.validate();
    return conf_q * (1.0 + (p.gamma + p.c) / (2.0 * p.n)) + p.a / p.n + p.c * y / (2.0 * p.n);
}

double bayes_quantile_at(double y, const ExpansionParams& p) {
    return bayes_quantile_expansion(conf_quantile(y, p.beta, p.gamma, p.n), y, p);
}

Windowed bayes_quantile_checked(double y, const ExpansionParams& p) {
    const double v = bayes_quantile_at(y, p);
    return {v, in_window(y, p.n) && in_window(v, p.n)};
}

double vertical_gap(double y, const ExpansionParams& p) {
    p.validate();
    const double z = p.z_beta();
    return p.a / p.n + y * (p.gamma + 2.0 * p.c) / (2.0 * p.n) -
           z * (p.gamma + p.c) / (2.0 * p.n);
}

double vertical_gap_from_conf(double conf_q, double y, const ExpansionParams& p) {
    p.validate();
    return conf_q * (p.gamma + p.c) / (2.0 * p.n) + p.a / p.n + p.c * y / (2.0 * p.n);
}

double horizontal_gap(double theta, const ExpansionParams& p) {
    p.validate();
    return theta * p.gamma / (2.0 * p.n) + p.a / p.n +
           (p.c / (2.0 * p.n)) * (2.0 * theta + p.z_beta());
}

double propn_formula(double theta, const ExpansionParams& p) {
    return p.beta - horizontal_gap(theta, p) * normal_pdf(p.z_beta());
}

Windowed propn_formula_checked(double theta, const ExpansionParams& p) {
    const double v = propn_formula(theta, p);
    return {v, in_window(theta, p.n) && v > 0.0 && v < 1.0};
}

double tilt_bend_quantile(double theta, double z_beta, const TiltBend& tb, double n) {
    tb.validate(n);
    return theta * (1.0 + tb.c_bend / n) + tb.a_half / std::sqrt(n) +
           (1.0 + tb.c_bend / (2.0 * n)) * z_beta;
}

double tilt_bend_exact_quantile(double theta, double z_beta, const TiltBend& tb, double n) {
    tb.validate(n);
    const double k = 1.0 - tb.c_bend / n;
    return (theta + tb.a_half / std::sqrt(n)) / k + z_beta / std::sqrt(k);
}

double tilt_bend_from_variable(double y, double theta, const TiltBend& tb, double n) {
    tb.validate(n);
    return y * (1.0 + tb.c_bend / (2.0 * n)) + tb.a_half / std::sqrt(n) +
           theta * tb.c_bend / (2.0 * n);
}

double posterior_tilt_quantile(double y0, double z_beta, const TiltBend& tb, double n) {
    return tilt_bend_quantile(y0, z_beta, tb, n);
}

double posterior_tilt_quantile_shifted(double theta, double y0, const TiltBend& tb, double n) {
    tb.validate(n);
    return theta * (1.0 + tb.c_bend / (2.0 * n)) + tb.a_half / std::sqrt(n) +
           y0 * tb.c_bend / (2.0 * n);
}

double exact_conf_quantile(double y, double beta, double gamma, double n) {
    const VarianceCurvatureNormal model(gamma, n);
    const ConfidenceBound b = confidence_quantile(model, y, beta);
    if (b.clamped)
        throw NumericError("confidence root leaves the parameter domain at y = " +
                           std::to_string(y));
    return b.value;
}

std::vector<ExpansionCurvePoint> expansion_curve(std::span<const double> y_grid,
                                                 const ExpansionParams& p) {
    p.validate();
    std::vector<ExpansionCurvePoint> out;
    out.reserve(y_grid.size());
    for (double y : y_grid) {
        const double cq = conf_quantile(y, p.beta, p.gamma, p.n);
        out.push_back({y, cq, likelihood_quantile(cq, p.gamma, p.n),
                       bayes_quantile_expansion(cq, y, p), vertical_gap(y, p)});
    }
    return out;
}

void write_csv(std::ostream& os, std::span<const ExpansionCurvePoint> curve) {
    os << "y,conf_q,lik_q,bayes_q,vertical_gap\n";
    for (const auto& r : curve)
        os << csv_real(r.y) << ',' << csv_real(r.conf_q) << ',' << csv_real(r.lik_q) << ','
           << csv_real(r.bayes_q) << ',' << csv_real(r.vertical_gap) << '\n';
}

void write_csv(std::ostream& os, std::span<const PropnFormulaRow> rows) {
    os << "theta,beta,claimed,formula_propn,mc_propn,stderr\n";
    for (const auto& r : rows)
        os << csv_real(r.theta) << ',' << csv_real(r.beta) << ',' << csv_real(r.claimed) << ','
           << csv_real(r.formula_propn) << ',' << csv_real(r.mc_propn) << ','
           << csv_real(r.std_error) << '\n';
}

}  // namespace confdist::asymptotic
