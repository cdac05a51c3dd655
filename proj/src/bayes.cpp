#include "confdist/bayes.hpp"

#include "confdist/confidence.hpp"
#include "confdist/csv.hpp"
#include "confdist/errors.hpp"
#include "confdist/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace confdist {

namespace {

constexpr double kTruncation = 1e-16;  // support cut, relative to the integrand peak
constexpr int kMaxScanSteps = 400;

[[noreturn]] void outside_support(const char* fn, double theta, const Interval& s) {
    std::ostringstream os;
    os << fn << ": theta " << theta << " outside posterior support " << s.str();
    throw DomainError(os.str());
}

// Central difference with one Richardson step: (4 D(h/2) - D(h)) / 3.
template <class F>
double richardson_derivative(F&& f, double x) {
    const double h = 1e-5 * (1.0 + std::abs(x));
    const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
    const double h2 = 0.5 * h;
    const double d2 = (f(x + h2) - f(x - h2)) / (2.0 * h2);
    return (4.0 * d2 - d1) / 3.0;
}

}  // namespace

// ---------------------------------------------------------------------------
// Prior

Prior::Prior(PriorKind kind, std::string label, Interval support, std::function<double(double)> w)
    : kind_(kind), label_(std::move(label)), support_(support), weight_(std::move(w)) {}

Prior Prior::flat(Interval support) {
    return Prior(PriorKind::flat, "flat", support, [](double) { return 1.0; });
}

Prior Prior::expansion(double a, double c, double n, TiltScale scale) {
    if (!(n > 0.0)) throw InvalidParameter("expansion prior: n must be > 0");
    const double tilt = scale == TiltScale::per_n ? a / n : a / std::sqrt(n);
    const double bend = c / (2.0 * n);
    std::ostringstream os;
    os << "expansion(a=" << a << ",c=" << c << ",n=" << n
       << (scale == TiltScale::per_n ? ",a/n" : ",a/sqrt(n)") << ')';
    return Prior(PriorKind::expansion, os.str(), {},
                 [tilt, bend](double t) { return std::exp(tilt * t + bend * t * t); });
}

Prior Prior::custom(std::function<double(double)> weight, Interval support, std::string label) {
    if (!weight) throw InvalidParameter("custom prior: empty weight function");
    return Prior(PriorKind::custom, std::move(label), support, std::move(weight));
}

Prior Prior::planar_radius() {
    return Prior(PriorKind::custom, "planar", {0.0, kInf}, [](double rho) { return rho; });
}

Prior Prior::default_for(ModelPtr model, double y0) {
    if (!model) throw InvalidParameter("default prior: null model");
    return Prior(PriorKind::data_dependent, "default", model->param_domain(),
                 [model, y0](double theta) {
                     return std::max(0.0, default_prior(*model, y0, theta));
                 });
}

Prior reference_prior(const ScalarModel& model) {
    if (dynamic_cast<const CurvedRadiusModel*>(&model)) return Prior::planar_radius();
    if (const auto* cm = dynamic_cast<const VarianceCurvatureNormal*>(&model)) {
        // The flat posterior is improper here (likelihood ~ 1/|theta|); cut it at
        // 10 sqrt(n), beyond which the omitted mass is below phi(sqrt(2n/gamma)).
        const double half = 10.0 * std::sqrt(cm->sample_size());
        return Prior::flat(Interval{-half, half}.intersect(cm->param_domain()));
    }
    return Prior::flat();
}

// ---------------------------------------------------------------------------
// Posterior

Posterior::Posterior(ModelPtr model, Prior prior, double y0)
    : model_(std::move(model)), prior_(std::move(prior)), y0_(y0) {
    if (!model_) throw InvalidParameter("Posterior: null model");
    support_ = prior_.support().intersect(model_->param_domain());
    if (support_.empty()) throw InvalidParameter("Posterior: prior support misses the parameter domain");

    const Interval bracket = model_->theta_bracket(y0_);
    const double scale = std::max((bracket.hi - bracket.lo) / 24.0, 1e-3);
    const double centre = support_.clamp(confidence_quantile(*model_, y0_, 0.5).value);

    peak_ = integrand(centre);
    // Walk outward with growing steps until the integrand is negligible or the
    // support ends; the visited points become the panel edges.
    auto scan = [&](double direction) {
        std::vector<double> pts;
        const double limit = direction > 0 ? support_.hi : support_.lo;
        double x = centre;
        double step = scale;
        double g_prev = 0.0;
        for (int k = 0; k < kMaxScanSteps; ++k) {
            if (x == limit) return pts;
            double next = x + direction * step;
            if ((direction > 0 && next >= limit) || (direction < 0 && next <= limit)) {
                if (std::isfinite(limit)) {
                    pts.push_back(limit);
                    return pts;
                }
            }
            const double g = integrand(next);
            pts.push_back(next);
            peak_ = std::max(peak_, g);
            if (g <= kTruncation * peak_ && peak_ > 0.0) {
                // A tail that only fell below the cut after a long power-law
                // walk decays like |theta|^-p; p <= 1 means the mass diverges.
                if (g > 0.0 && g_prev > 0.0 && x != centre) {
                    const double p =
                        std::log(g_prev / g) / std::log((next - centre) / (x - centre));
                    if (p <= 1.05) break;
                }
                return pts;
            }
            g_prev = g;
            x = next;
            step *= 1.5;
        }
        std::ostringstream os;
        os << "Posterior: prior x likelihood does not decay (not normalizable) for "
           << model_->name() << " with prior " << prior_.label();
        throw NumericError(os.str());
    };
    std::vector<double> down = scan(-1.0);
    std::vector<double> up = scan(+1.0);

    edges_.assign(down.rbegin(), down.rend());
    edges_.push_back(centre);
    edges_.insert(edges_.end(), up.begin(), up.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    if (edges_.size() < 2) throw NumericError("Posterior: degenerate support");

    tail_mass_.assign(edges_.size(), 0.0);
    for (std::size_t i = edges_.size() - 1; i-- > 0;)
        tail_mass_[i] = tail_mass_[i + 1] + panel_integral(edges_[i], edges_[i + 1]);
    mass_ = tail_mass_.front();
    if (!(mass_ > 0.0) || !std::isfinite(mass_))
        throw NumericError("Posterior: normalizer is zero or non-finite");
}

double Posterior::integrand(double theta) const {
    const double f = model_->pdf(y0_, theta);
    if (!(f > 1e-300)) return 0.0;
    const double w = prior_.weight(theta);
    if (!std::isfinite(w) || w < 0.0) {
        std::ostringstream os;
        os << "Posterior: prior " << prior_.label() << " has invalid weight " << w
           << " at theta = " << theta;
        throw InvalidParameter(os.str());
    }
    return w * f;
}

double Posterior::panel_integral(double a, double b) const {
    // A data-dependent prior is a finite difference carrying ~1e-11 relative
    // noise; asking for more than that only exhausts the subdivision budget.
    const bool noisy = prior_.kind() == PriorKind::data_dependent;
    const double abs_tol = (noisy ? 1e-12 : 1e-15) * std::max(peak_, 1e-300) * std::max(b - a, 1.0);
    return integrate([this](double t) { return integrand(t); }, a, b, abs_tol, noisy ? 1e-10 : 1e-13);
}

double Posterior::density(double theta) const {
    if (theta < edges_.front() || theta > edges_.back()) return 0.0;
    return integrand(theta) / mass_;
}

double Posterior::survivor(double theta) const {
    if (theta <= edges_.front()) return 1.0;
    if (theta >= edges_.back()) return 0.0;
    const auto it = std::upper_bound(edges_.begin(), edges_.end(), theta);
    const std::size_t i = static_cast<std::size_t>(it - edges_.begin());  // theta < edges_[i]
    const double above = panel_integral(theta, edges_[i]) + tail_mass_[i];
    return std::clamp(above / mass_, 0.0, 1.0);
}

double Posterior::quantile(double beta) const {
    if (!(beta > 0.0 && beta < 1.0)) {
        std::ostringstream os;
        os << "posterior quantile: beta must lie in (0, 1) (got " << beta << ')';
        throw DomainError(os.str());
    }
    const double target = beta * mass_;
    // tail_mass_ decreases along the edges; find the panel holding the target.
    std::size_t i = 0;
    while (i + 1 < edges_.size() && tail_mass_[i + 1] >= target) ++i;
    const std::size_t j = std::min(i + 1, edges_.size() - 1);
    auto f = [&](double t) { return survivor(t) - beta; };
    return solve_bracketed(f, edges_[i], edges_[j], f(edges_[i]), f(edges_[j]));
}

double posterior_density(const Posterior& post, double theta) {
    if (!post.support().contains(theta)) outside_support("posterior_density", theta, post.support());
    return post.density(theta);
}

double posterior_survivor(const Posterior& post, double theta) {
    if (!post.support().contains(theta)) outside_support("posterior_survivor", theta, post.support());
    return post.survivor(theta);
}

double posterior_quantile(const Posterior& post, double beta) { return post.quantile(beta); }

// ---------------------------------------------------------------------------
// Closed forms

double bounded_flat_survivor(double y0, double theta, double theta0, double sigma0) {
    if (theta < theta0) return 1.0;
    const double denom = normal_cdf((y0 - theta0) / sigma0);
    if (!(denom > 0.0)) throw NumericError("bounded_flat_survivor: Phi(y0 - theta0) underflows");
    return normal_cdf((y0 - theta) / sigma0) / denom;
}

double bounded_flat_quantile(double y0, double beta, double theta0, double sigma0) {
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("bounded_flat_quantile: beta must lie in (0, 1)");
    const double mass = normal_cdf((y0 - theta0) / sigma0);
    if (!(mass > 0.0)) {
        std::ostringstream os;
        os << "bounded_flat_quantile: Phi(y0 - theta0) underflows at y0 = " << y0;
        throw NumericError(os.str());
    }
    return y0 - sigma0 * normal_quantile(beta * mass);
}

double curved_survivor(double r0, double rho) {
    if (!(r0 >= 0.0) || !(rho >= 0.0)) throw DomainError("curved_survivor: arguments must be >= 0");
    return noncentral_chi_sf(rho, r0);
}

double curved_flat_quantile(double r0, double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("curved_flat_quantile: beta must lie in (0, 1)");
    return noncentral_chi_quantile(1.0 - beta, r0);
}

// ---------------------------------------------------------------------------
// Default prior

double default_prior(const ScalarModel& model, double y0, double theta) {
    // d(cdf) = -d(sf): difference whichever tail is below one half.
    const bool lower = model.cdf(y0, theta) <= 0.5;
    auto tail = [&](double y, double t) { return lower ? model.cdf(y, t) : -model.sf(y, t); };
    const double d_theta = richardson_derivative([&](double t) { return tail(y0, t); }, theta);
    const double d_y = richardson_derivative([&](double y) { return tail(y, theta); }, y0);
    if (!(d_y > 0.0) || !std::isfinite(d_theta)) {
        std::ostringstream os;
        os << "default_prior: undefined sensitivity for " << model.name() << " at y0 = " << y0
           << ", theta = " << theta << " (F_y = " << d_y << ')';
        throw DomainError(os.str());
    }
    return -d_theta / d_y;
}

double sensitivity(const ScalarModel& model, double y0, double theta) {
    return default_prior(model, y0, theta);
}

double sensitivity(const Pivot& pivot, double y0, double theta) {
    const double z_theta = richardson_derivative([&](double t) { return pivot.z(y0, t); }, theta);
    const double z_y = richardson_derivative([&](double y) { return pivot.z(y, theta); }, y0);
    if (z_y == 0.0 || !std::isfinite(z_theta)) throw DomainError("sensitivity: pivot not invertible in y");
    return std::abs(z_theta) / std::abs(z_y);
}

double default_posterior_equals_confidence(ModelPtr model, double y0,
                                           std::span<const double> theta_grid) {
    if (theta_grid.empty()) throw InvalidParameter("default_posterior_equals_confidence: empty grid");
    const Posterior post(model, Prior::default_for(model, y0), y0);
    double worst = 0.0;
    for (double theta : theta_grid)
        worst = std::max(worst, std::abs(post.survivor(theta) - p_value(*model, y0, theta)));
    return worst;
}

void write_posterior_csv(std::ostream& os, const Posterior& post,
                         std::span<const double> theta_grid) {
    os << "theta,density,survivor\n";
    for (double theta : theta_grid)
        os << csv_real(theta) << ',' << csv_real(posterior_density(post, theta)) << ','
           << csv_real(posterior_survivor(post, theta)) << '\n';
}

}  // namespace confdist
