#pragma once

// Scalar-parameter model families. Every engine (confidence, Bayes, coverage)
// consumes a model through the ScalarModel interface.

#include "confdist/numeric.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace confdist {

/// One-parameter continuous family F(y; theta), stochastically increasing in theta.
///
/// cdf/sf/pdf/quantile are raw formulas and do not check theta against
/// param_domain(); where the formula extends smoothly past the domain (the
/// bounded mean, rho < 0 for the radius model) it is evaluated as-is. Checked
/// entry points are p_value(), sample() and the engines.
class ScalarModel {
public:
    virtual ~ScalarModel() = default;

    virtual std::string name() const = 0;
    virtual double cdf(double y, double theta) const = 0;
    virtual double pdf(double y, double theta) const = 0;
    virtual double quantile(double u, double theta) const = 0;
    virtual Interval param_domain() const = 0;
    virtual Interval obs_domain() const = 0;

    // 1 - cdf; overridden where the upper tail can be computed without cancellation.
    virtual double sf(double y, double theta) const { return 1.0 - cdf(y, theta); }

    // Starting bracket for root searches over theta given data y0.
    virtual Interval theta_bracket(double y0) const;

    // count draws of Y | theta, reproducible from seed. The default inverts the
    // quantile function at portable uniforms.
    virtual std::vector<double> sample(double theta, std::size_t count, std::uint64_t seed) const;

    // Throws DomainError if theta is outside param_domain().
    void require_param(double theta) const;
};

using ModelPtr = std::shared_ptr<const ScalarModel>;

enum class Kernel { normal, extreme_value };

std::string to_string(Kernel k);

/// y = theta + sigma0 * e with e from the kernel: cdf K((y - theta) / sigma0).
class LocationModel : public ScalarModel {
public:
    LocationModel(Kernel kernel, double sigma0);

    Kernel kernel() const noexcept { return kernel_; }
    double sigma0() const noexcept { return sigma0_; }

    std::string name() const override;
    double cdf(double y, double theta) const override;
    double sf(double y, double theta) const override;
    double pdf(double y, double theta) const override;
    double quantile(double u, double theta) const override;
    Interval param_domain() const override { return {}; }
    Interval obs_domain() const override { return {}; }
    Interval theta_bracket(double y0) const override;

private:
    Kernel kernel_;
    double sigma0_;
};

/// Normal(theta, sigma0^2) with the mean known to satisfy theta >= theta0.
class BoundedMeanNormal : public ScalarModel {
public:
    explicit BoundedMeanNormal(double theta0 = 0.0, double sigma0 = 1.0);

    double lower_bound() const noexcept { return theta0_; }
    double sigma0() const noexcept { return sigma0_; }

    std::string name() const override;
    double cdf(double y, double theta) const override;
    double sf(double y, double theta) const override;
    double pdf(double y, double theta) const override;
    double quantile(double u, double theta) const override;
    Interval param_domain() const override { return {theta0_, kInf}; }
    Interval obs_domain() const override { return {}; }
    Interval theta_bracket(double y0) const override;

private:
    double theta0_;
    double sigma0_;
};

/// The radius r = |y| of a Normal(theta, I) pair in the plane, as a model for
/// rho = |theta|: r | rho is noncentral chi with 2 df. The polar angle is a
/// nuisance parameter that r does not depend on.
class CurvedRadiusModel : public ScalarModel {
public:
    // Reduces an observed pair (y1, y2) to its radius.
    static double reduce(double y1, double y2) noexcept;

    std::string name() const override { return "curved"; }
    double cdf(double r, double rho) const override;
    double sf(double r, double rho) const override;
    double pdf(double r, double rho) const override;
    double quantile(double u, double rho) const override;
    Interval param_domain() const override { return {0.0, kInf}; }
    Interval obs_domain() const override { return {0.0, kInf}; }
    Interval theta_bracket(double r0) const override;

    // Draws sqrt((z1 + rho)^2 + z2^2) directly, so Monte Carlo checks built on
    // these samples stay independent of the CDF series.
    std::vector<double> sample(double rho, std::size_t count, std::uint64_t seed) const override;
};

/// y ~ Normal(theta, sigma^2(theta)) with sigma^2(theta) = 1 + gamma theta^2 / 2n.
///
/// The exact sigma is used (no truncated expansion). The parameter domain is
/// the set where sigma^2 > 0; the moderate-deviation window |theta| <= sqrt(n)
/// is exposed separately for the expansion formulas.
class VarianceCurvatureNormal : public ScalarModel {
public:
    VarianceCurvatureNormal(double gamma, double n);

    double curvature() const noexcept { return gamma_; }
    double sample_size() const noexcept { return n_; }
    double sigma(double theta) const;
    Interval window() const noexcept;
    bool in_window(double theta) const noexcept { return window().contains(theta); }

    std::string name() const override;
    double cdf(double y, double theta) const override;
    double sf(double y, double theta) const override;
    double pdf(double y, double theta) const override;
    double quantile(double u, double theta) const override;
    Interval param_domain() const override;
    Interval obs_domain() const override { return {}; }
    Interval theta_bracket(double y0) const override;

private:
    double gamma_;
    double n_;
};

/// A pivot z(y, theta) with theta-free density g(z).
struct Pivot {
    std::function<double(double, double)> z;
    std::function<double(double)> density;
};

// z = (y - theta) / sigma(theta) with standard normal density.
Pivot standardizing_pivot(const VarianceCurvatureNormal& model);

// Model descriptors, as accepted on the command line:
//   location:normal[:sigma0]  location:extreme_value[:sigma0] (alias location:ev)
//   bounded[:theta0[:sigma0]] curved  curvature:gamma:n
struct LocationSpec {
    Kernel kernel = Kernel::normal;
    double sigma0 = 1.0;
};
struct BoundedSpec {
    double theta0 = 0.0;
    double sigma0 = 1.0;
};
struct CurvedSpec {};
struct CurvatureSpec {
    double gamma = 0.0;
    double n = 1.0;
};
using ModelDescriptor = std::variant<LocationSpec, BoundedSpec, CurvedSpec, CurvatureSpec>;

ModelDescriptor parse_model_descriptor(std::string_view text);  // throws InvalidParameter
ModelPtr make_model(const ModelDescriptor& spec);                // throws InvalidParameter

// Checked sampling: theta must lie in the model's parameter domain.
std::vector<double> sample(const ScalarModel& model, double theta, std::size_t count,
                           std::uint64_t seed);

}  // namespace confdist
