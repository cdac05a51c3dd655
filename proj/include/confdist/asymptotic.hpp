#pragma once

// Third-order quantile expansions for the variance-curvature normal model
// y ~ N(theta, 1 + gamma theta^2 / 2n), with the coverage they imply.
// Also the tilt/bend identities for a normal density times exp(a y + c y^2 / 2).
//
// The formula functions are raw algebra and accept any argument. The
// moderate-deviation window |theta|, |y| <= sqrt(n) is reported through the
// *_checked variants rather than enforced by clamping.

#include <iosfwd>
#include <span>
#include <vector>

namespace confdist::asymptotic {

struct ExpansionParams {
    double gamma = 0.0;  // model curvature
    double n = 1.0;      // asymptotic sample size
    double a = 0.0;      // prior tilt, entering as a theta / n
    double c = 0.0;      // prior bend, entering as c theta^2 / 2n
    double beta = 0.5;

    double z_beta() const;
    // Throws InvalidParameter unless n > 0, |gamma| / 2n < 1 and 0 < beta < 1.
    void validate() const;
};

// Tilt exp(a y / sqrt(n) + c y^2 / 2n). Note the sqrt(n) scale of the tilt
// here versus the 1/n scale of ExpansionParams::a.
struct TiltBend {
    double a_half = 0.0;
    double c_bend = 0.0;

    void validate(double n) const;  // needs 1 - c/n > 0
};

struct Windowed {
    double value;
    bool in_window;
};

// |v| <= sqrt(n)
bool in_window(double v, double n);

// theta + z_beta (1 + gamma theta^2 / 4n); error O(n^-3/2) against the exact quantile.
double model_quantile_expansion(double theta, double beta, double gamma, double n);
// theta + z_beta sqrt(1 + gamma theta^2 / 2n)
double exact_model_quantile(double theta, double beta, double gamma, double n);

// Lower confidence quantile y - z_beta {1 + gamma (y - z_beta)^2 / 4n}.
double conf_quantile(double y, double beta, double gamma, double n);
Windowed conf_quantile_checked(double y, double beta, double gamma, double n);

// Weight exp{gamma theta (theta - y0) / 2n} taking confidence to likelihood.
double inverse_weight(double theta, double y0, double gamma, double n);

// Flat-prior posterior quantile: conf_q (1 + gamma / 2n).
double likelihood_quantile(double conf_q, double gamma, double n);

// Bayes quantile under exp(a theta / n + c theta^2 / 2n):
// conf_q (1 + (gamma + c) / 2n) + a / n + c y / 2n.
double bayes_quantile_expansion(double conf_q, double y, const ExpansionParams& p);
// Bayes quantile as a function of the data (conf_quantile composed with the above).
double bayes_quantile_at(double y, const ExpansionParams& p);
Windowed bayes_quantile_checked(double y, const ExpansionParams& p);

// Closed form of theta_B(y) - theta_C(y) with theta_C replaced by y - z_beta:
// a / n + y (gamma + 2c) / 2n - z_beta (gamma + c) / 2n.
double vertical_gap(double y, const ExpansionParams& p);
// The same gap before that replacement: conf_q (gamma + c) / 2n + a / n + c y / 2n.
double vertical_gap_from_conf(double conf_q, double y, const ExpansionParams& p);

// y_C(theta) - y_B(theta) = theta gamma / 2n + a / n + (c / 2n)(2 theta + z_beta).
double horizontal_gap(double theta, const ExpansionParams& p);

// Actual coverage of the Bayes quantile: beta - horizontal_gap(theta) phi(z_beta).
double propn_formula(double theta, const ExpansionParams& p);
// in_window is false when |theta| > sqrt(n) or the value leaves (0, 1).
Windowed propn_formula_checked(double theta, const ExpansionParams& p);

// Quantile of the tilted and bent N(theta, 1) variable to O(n^-3/2):
// theta (1 + c/n) + a / sqrt(n) + (1 + c / 2n) z_beta.
double tilt_bend_quantile(double theta, double z_beta, const TiltBend& tb, double n);
// Completed-square exact form (theta + a / sqrt(n)) / (1 - c/n) + (1 - c/n)^-1/2 z_beta.
double tilt_bend_exact_quantile(double theta, double z_beta, const TiltBend& tb, double n);
// Third form, in terms of the untilted value y = theta + z: y (1 + c/2n) + a / sqrt(n) + theta c / 2n.
double tilt_bend_from_variable(double y, double theta, const TiltBend& tb, double n);

// Posterior N(y0, 1) tilted and bent in theta:
// y0 (1 + c/n) + a / sqrt(n) + (1 + c/2n) z_beta.
double posterior_tilt_quantile(double y0, double z_beta, const TiltBend& tb, double n);
// Second form in terms of the untilted posterior quantile theta = y0 + z_beta:
// theta (1 + c/2n) + a / sqrt(n) + y0 c / 2n.
double posterior_tilt_quantile_shifted(double theta, double y0, const TiltBend& tb, double n);

// Root of F(y; theta) = beta on the exact model, refined to ~1e-15.
// Throws NumericError when the root leaves the parameter domain.
double exact_conf_quantile(double y, double beta, double gamma, double n);

struct ExpansionCurvePoint {
    double y;
    double conf_q;
    double lik_q;
    double bayes_q;
    double vertical_gap;
};

// Confidence, flat-prior and Bayes quantile curves over a data grid (beta from p).
std::vector<ExpansionCurvePoint> expansion_curve(std::span<const double> y_grid,
                                                 const ExpansionParams& p);
// CSV columns: y,conf_q,lik_q,bayes_q,vertical_gap
void write_csv(std::ostream& os, std::span<const ExpansionCurvePoint> curve);

struct PropnFormulaRow {
    double theta;
    double beta;
    double claimed;
    double formula_propn;
    double mc_propn;
    double std_error;
};
// CSV columns: theta,beta,claimed,formula_propn,mc_propn,stderr
void write_csv(std::ostream& os, std::span<const PropnFormulaRow> rows);

}  // namespace confdist::asymptotic
