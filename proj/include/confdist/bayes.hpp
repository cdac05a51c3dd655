#pragma once

// Posterior distributions prior x likelihood for a scalar model, normalized
// numerically, plus the data-dependent default prior -F_theta / F_y.

#include "confdist/models.hpp"

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace confdist {

enum class PriorKind { flat, expansion, custom, data_dependent };

// How the linear tilt of an expansion prior scales with n:
//   per_n:      exp(a theta / n       + c theta^2 / 2n)
//   per_sqrt_n: exp(a theta / sqrt(n) + c theta^2 / 2n)
enum class TiltScale { per_n, per_sqrt_n };

/// A non-negative (possibly improper) weight function on a support interval.
class Prior {
public:
    static Prior flat(Interval support = {});
    static Prior expansion(double a, double c, double n, TiltScale scale = TiltScale::per_n);
    static Prior custom(std::function<double(double)> weight, Interval support = {},
                        std::string label = "custom");
    // Flat prior on the plane written in polar form: weight rho on [0, inf).
    static Prior planar_radius();
    // pi(theta) = -F_theta(y0; theta) / F_y(y0; theta), clamped at 0 where the
    // model stops being stochastically increasing. Recomputed for every y0.
    static Prior default_for(ModelPtr model, double y0);

    PriorKind kind() const noexcept { return kind_; }
    const std::string& label() const noexcept { return label_; }
    const Interval& support() const noexcept { return support_; }
    double weight(double theta) const { return weight_(theta); }

private:
    Prior(PriorKind kind, std::string label, Interval support, std::function<double(double)> w);

    PriorKind kind_;
    std::string label_;
    Interval support_;
    std::function<double(double)> weight_;
};

// The "uninformative" prior the worked examples pair with each family: planar
// for the radius model, flat otherwise (cut to |theta| <= 10 sqrt(n) for the
// curvature model, whose untruncated flat posterior is improper).
Prior reference_prior(const ScalarModel& model);

/// Posterior c * pi(theta) * f(y0; theta) on the prior support intersected with
/// the parameter domain.
///
/// The support is truncated where the integrand falls below 1e-16 of its
/// largest sampled value. Construction throws NumericError when the product
/// does not decay (a diverging normalizer) and InvalidParameter on a negative
/// prior weight. Immutable once built.
class Posterior {
public:
    Posterior(ModelPtr model, Prior prior, double y0);

    double density(double theta) const;
    double survivor(double theta) const;  // posterior mass of (theta, inf)
    double quantile(double beta) const;   // solves survivor(theta) = beta

    double normalizer() const noexcept { return mass_; }
    double data() const noexcept { return y0_; }
    const Interval& support() const noexcept { return support_; }
    Interval effective_support() const noexcept { return {edges_.front(), edges_.back()}; }
    const Prior& prior() const noexcept { return prior_; }
    const ScalarModel& model() const noexcept { return *model_; }

private:
    double integrand(double theta) const;
    double panel_integral(double a, double b) const;

    ModelPtr model_;
    Prior prior_;
    double y0_;
    Interval support_;
    double peak_ = 0.0;
    std::vector<double> edges_;      // panel boundaries
    std::vector<double> tail_mass_;  // unnormalized mass above edges_[i]
    double mass_ = 0.0;
};

// Checked forms; theta must lie in the posterior support.
double posterior_density(const Posterior& post, double theta);
double posterior_survivor(const Posterior& post, double theta);
double posterior_quantile(const Posterior& post, double beta);

// Closed forms for the worked examples.
// Bounded mean with flat prior: s = Phi((y0 - theta)/sigma0) / Phi((y0 - theta0)/sigma0).
double bounded_flat_survivor(double y0, double theta, double theta0 = 0.0, double sigma0 = 1.0);
// y0 - sigma0 z_{beta Phi((y0 - theta0)/sigma0)}.
double bounded_flat_quantile(double y0, double beta, double theta0 = 0.0, double sigma0 = 1.0);
// Radius model, planar prior: s(rho) = 1 - H2(rho; r0).
double curved_survivor(double r0, double rho);
// chi_{1-beta}(r0).
double curved_flat_quantile(double r0, double beta);

/// Default prior -F_theta(y0; theta) / F_y(y0; theta).
///
/// Both partials are central differences with step 1e-5 (1 + |arg|) and one
/// Richardson level, taken on whichever tail of F is smaller so that neither
/// tail loses precision. Equals dy/dtheta along the contour F(y; theta) = F(y0; theta).
/// Throws DomainError when the y-derivative vanishes (zero density).
double default_prior(const ScalarModel& model, double y0, double theta);

// The sensitivity dy/dtheta at the data; identical to default_prior for a scalar model.
double sensitivity(const ScalarModel& model, double y0, double theta);

// Pivot form |z_theta| / |z_y|, differentiated independently of the CDF.
double sensitivity(const Pivot& pivot, double y0, double theta);

// Builds the posterior under the default prior and returns max over the grid of |s - p|.
double default_posterior_equals_confidence(ModelPtr model, double y0,
                                           std::span<const double> theta_grid);

// CSV columns: theta,density,survivor
void write_posterior_csv(std::ostream& os, const Posterior& post,
                         std::span<const double> theta_grid);

}  // namespace confdist
