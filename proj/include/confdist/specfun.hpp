#pragma once

// Special functions used throughout: standard normal, extreme value (Gumbel),
// and the noncentral chi distribution with two degrees of freedom.

namespace confdist {

struct Tolerances {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_iter = 200;

    void validate() const;  // throws InvalidParameter
};

// CDFs saturate to exactly 0 or 1 once |z| > 38; the normal density likewise
// returns 0 there rather than a subnormal.
inline constexpr double kTailSaturation = 38.0;

double normal_cdf(double z) noexcept;
double normal_sf(double z) noexcept;  // 1 - normal_cdf(z) without cancellation
double normal_pdf(double z) noexcept;

// Inverse of normal_cdf on (0, 1). Throws DomainError outside.
double normal_quantile(double p);

// G(z) = exp(-exp(-z)) and its density g(z) = exp(-z) G(z).
double extreme_value_cdf(double z) noexcept;
double extreme_value_sf(double z) noexcept;
double extreme_value_pdf(double z) noexcept;
double extreme_value_quantile(double p);

// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P(a, x), a > 0, x >= 0.
struct GammaPQ {
    double p;
    double q;
};
GammaPQ regularized_gamma(double a, double x);

// Exponentially scaled modified Bessel function exp(-x) I0(x), x >= 0.
double bessel_i0_scaled(double x);

/// Distribution of sqrt((z1 + rho)^2 + z2^2) for independent standard normals.
///
/// The CDF H2(r; rho) is evaluated as a Poisson(rho^2/2) mixture of central
/// chi-square CDFs with 2 + 2j degrees of freedom, summed outward from the
/// modal index. Accurate to about 1e-15 absolute.
class NoncentralChi2df {
public:
    explicit NoncentralChi2df(double noncentrality);  // throws DomainError if < 0 or non-finite

    double noncentrality() const noexcept { return rho_; }
    double cdf(double r) const;
    double sf(double r) const;
    double pdf(double r) const;
    double quantile(double gamma, const Tolerances& tol = {}) const;

private:
    double rho_;
};

// Free-function forms; all throw DomainError for negative r or rho.
double noncentral_chi_cdf(double r, double rho);
double noncentral_chi_sf(double r, double rho);
double noncentral_chi_pdf(double r, double rho);
double noncentral_chi_quantile(double gamma, double rho, const Tolerances& tol = {});

}  // namespace confdist
