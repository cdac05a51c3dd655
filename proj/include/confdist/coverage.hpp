#pragma once

// Neyman-diagram audit of quantile procedures: the actual proportion of true
// assertions "theta > theta_hat_beta(y)" under repetition, by deterministic
// integration and by Monte Carlo.

#include "confdist/bayes.hpp"
#include "confdist/models.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace confdist {

namespace asymptotic {
struct ExpansionParams;
}

enum class Provenance { confidence, bayes_flat, bayes_prior, expansion };
std::string to_string(Provenance p);

/// theta_hat_beta(y): the procedure asserts theta lies in (theta_hat_beta(y), inf).
/// The rule is expected to be non-decreasing in y for fixed beta.
struct QuantileProcedure {
    std::string id;
    std::function<double(double y, double beta)> rule;
    Provenance provenance = Provenance::confidence;
};

// Lower confidence bound (clamped at the parameter domain, as confidence_quantile).
QuantileProcedure confidence_procedure(ModelPtr model);
// Flat-prior Bayes quantile of the bounded mean, closed form y - z_{beta Phi(y - theta0)}.
QuantileProcedure bayes_flat_bounded(double theta0 = 0.0, double sigma0 = 1.0);
// Planar-prior Bayes quantile of the radius, chi_{1-beta}(r).
QuantileProcedure bayes_flat_curved();
// Numerical posterior quantile for an arbitrary prior; slow (one Posterior per call).
QuantileProcedure bayes_posterior_procedure(ModelPtr model, std::function<Prior(double y)> prior_for,
                                            std::string id);
// Third-order Bayes quantile from the expansion formulas (beta of the params is ignored).
QuantileProcedure expansion_bayes_procedure(const asymptotic::ExpansionParams& params);

// True when the rule is non-decreasing over the (sorted) grid.
bool is_monotone(const QuantileProcedure& proc, double beta, std::span<const double> y_grid);

struct PropnEstimate {
    double actual;
    double std_error;  // sqrt(p (1 - p) / n_rep)
    std::size_t n_rep;
    std::uint64_t seed;
};

/// Monte Carlo proportion of repetitions with theta_hat_beta(Y) < theta (strict).
/// Needs n_rep >= 1000. A rule failure is rethrown as NumericError naming the y.
PropnEstimate propn_mc(const ScalarModel& model, const QuantileProcedure& proc, double theta,
                       double beta, std::size_t n_rep, std::uint64_t seed);

/// Deterministic proportion for a monotone rule: locates the boundary
/// y_b = sup{y : theta_hat_beta(y) < theta} by bisection and returns F(y_b; theta).
double propn_neyman(const ScalarModel& model, const QuantileProcedure& proc, double theta,
                    double beta);

/// Bounded mean (theta0 = 0, sigma0 = 1), flat-prior Bayes quantile:
/// integral of phi over S = {z : Phi(z) < beta Phi(theta + z)}.
double propn_bounded_quadrature(double theta, double beta);

/// Radius model, planar-prior Bayes quantile. Threshold path: r* solves
/// H2(rho; r*) = 1 - beta and the result is H2(r*; rho).
double propn_curved_quadrature(double rho, double beta);
/// Same quantity as the integral of 1{1 - beta < H2(rho; r)} h2(r; rho) dr.
double propn_curved_indicator(double rho, double beta);

enum class AverageMethod { quadrature, monte_carlo };

/// Prior-averaged proportion over theta_window (prior must be integrable there).
/// Quadrature integrates propn_neyman against the normalized prior; Monte Carlo
/// draws theta from the prior, then Y | theta. A zero-width window is a point mass.
PropnEstimate propn_prior_avg(const ScalarModel& model, const QuantileProcedure& proc,
                              const Prior& prior, double beta, Interval theta_window,
                              AverageMethod method, std::size_t n_rep = 100000,
                              std::uint64_t seed = 0);

struct BayesErrorPoint {
    double rho;
    double p;      // H2(r0; rho)
    double s;      // 1 - H2(rho; r0)
    double error;  // s - p
};

// s(rho) - p(rho) for the radius model from the series.
std::vector<BayesErrorPoint> bayes_error_curve(double r0, std::span<const double> rho_grid);
// The same difference by quadrature of the two densities.
double bayes_error_quadrature(double r0, double rho);

struct BoundaryPoint {
    double y;
    double theta_hat;
};
// Lower boundary of the region A_beta = {(y, theta) : theta > theta_hat_beta(y)}.
std::vector<BoundaryPoint> neyman_region_boundary(const QuantileProcedure& proc, double beta,
                                                  std::span<const double> y_grid);

enum class Method { quadrature, monte_carlo };
std::string to_string(Method m);

struct CoverageRow {
    double theta;
    double beta;
    double claimed;
    double actual;
    Method method;
    std::optional<double> std_error;
    std::optional<std::size_t> n_rep;
    std::optional<std::uint64_t> seed;
};

struct CoverageReport {
    std::string procedure;
    std::vector<CoverageRow> rows;
};

struct PropnQuery {
    std::vector<double> theta_grid;
    std::vector<double> beta_list;
    std::size_t n_rep = 100000;
    std::uint64_t seed = 0;
};

/// Runs every (beta, theta) cell, beta-major. Cell k uses seed + k for Monte
/// Carlo. quadrature(theta, beta) supplies the deterministic value; when empty,
/// propn_neyman is used. Cells run in parallel; row order is by cell index.
CoverageReport audit(const ScalarModel& model, const QuantileProcedure& proc,
                     const PropnQuery& query, std::span<const Method> methods,
                     std::function<double(double, double)> quadrature = {});

// CSV columns: procedure,theta,beta,claimed,actual,method,stderr,n_rep,seed
void write_csv(std::ostream& os, const CoverageReport& report);

// Runs task(i) for i in [0, count) on up to hardware_concurrency threads.
// The first exception thrown by any task is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task);

}  // namespace confdist
