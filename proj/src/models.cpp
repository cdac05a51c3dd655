#include "confdist/models.hpp"

#include "confdist/errors.hpp"
#include "confdist/specfun.hpp"

#include <cmath>
#include <sstream>

namespace confdist {

// ---------------------------------------------------------------------------
// ScalarModel defaults

Interval ScalarModel::theta_bracket(double y0) const {
    return Interval{y0 - 12.0, y0 + 12.0}.intersect(param_domain());
}

std::vector<double> ScalarModel::sample(double theta, std::size_t count,
                                        std::uint64_t seed) const {
    SeededUniform uniform(seed);
    std::vector<double> out(count);
    for (auto& y : out) y = quantile(uniform(), theta);
    return out;
}

void ScalarModel::require_param(double theta) const {
    const Interval dom = param_domain();
    if (!std::isfinite(theta) || !dom.contains(theta)) {
        std::ostringstream os;
        os << name() << ": parameter " << theta << " outside domain " << dom.str();
        throw DomainError(os.str());
    }
}

std::string to_string(Kernel k) {
    return k == Kernel::normal ? "normal" : "extreme_value";
}

// ---------------------------------------------------------------------------
// LocationModel

LocationModel::LocationModel(Kernel kernel, double sigma0) : kernel_(kernel), sigma0_(sigma0) {
    if (!(sigma0 > 0.0) || !std::isfinite(sigma0))
        throw InvalidParameter("location model: sigma0 must be finite and > 0");
}

std::string LocationModel::name() const { return "location:" + to_string(kernel_); }

double LocationModel::cdf(double y, double theta) const {
    const double z = (y - theta) / sigma0_;
    return kernel_ == Kernel::normal ? normal_cdf(z) : extreme_value_cdf(z);
}

double LocationModel::sf(double y, double theta) const {
    const double z = (y - theta) / sigma0_;
    return kernel_ == Kernel::normal ? normal_sf(z) : extreme_value_sf(z);
}

double LocationModel::pdf(double y, double theta) const {
    const double z = (y - theta) / sigma0_;
    return (kernel_ == Kernel::normal ? normal_pdf(z) : extreme_value_pdf(z)) / sigma0_;
}

double LocationModel::quantile(double u, double theta) const {
    const double z = kernel_ == Kernel::normal ? normal_quantile(u) : extreme_value_quantile(u);
    return theta + sigma0_ * z;
}

Interval LocationModel::theta_bracket(double y0) const {
    return {y0 - 12.0 * sigma0_, y0 + 12.0 * sigma0_};
}

// ---------------------------------------------------------------------------
// BoundedMeanNormal

BoundedMeanNormal::BoundedMeanNormal(double theta0, double sigma0)
    : theta0_(theta0), sigma0_(sigma0) {
    if (!std::isfinite(theta0)) throw InvalidParameter("bounded model: theta0 must be finite");
    if (!(sigma0 > 0.0) || !std::isfinite(sigma0))
        throw InvalidParameter("bounded model: sigma0 must be finite and > 0");
}

std::string BoundedMeanNormal::name() const {
    std::ostringstream os;
    os << "bounded:" << theta0_;
    return os.str();
}

double BoundedMeanNormal::cdf(double y, double theta) const {
    return normal_cdf((y - theta) / sigma0_);
}

double BoundedMeanNormal::sf(double y, double theta) const {
    return normal_sf((y - theta) / sigma0_);
}

double BoundedMeanNormal::pdf(double y, double theta) const {
    return normal_pdf((y - theta) / sigma0_) / sigma0_;
}

double BoundedMeanNormal::quantile(double u, double theta) const {
    return theta + sigma0_ * normal_quantile(u);
}

Interval BoundedMeanNormal::theta_bracket(double y0) const {
    return Interval{y0 - 12.0 * sigma0_, y0 + 12.0 * sigma0_}.intersect(param_domain());
}

// ---------------------------------------------------------------------------
// CurvedRadiusModel
//
// The law of r depends on rho only through |rho|, so negative rho is read as
// its absolute value; finite differences can then step across rho = 0.

double CurvedRadiusModel::reduce(double y1, double y2) noexcept { return std::hypot(y1, y2); }

double CurvedRadiusModel::cdf(double r, double rho) const {
    if (r <= 0.0) return 0.0;
    return noncentral_chi_cdf(r, std::abs(rho));
}

double CurvedRadiusModel::sf(double r, double rho) const {
    if (r <= 0.0) return 1.0;
    return noncentral_chi_sf(r, std::abs(rho));
}

double CurvedRadiusModel::pdf(double r, double rho) const {
    if (r <= 0.0) return 0.0;
    return noncentral_chi_pdf(r, std::abs(rho));
}

double CurvedRadiusModel::quantile(double u, double rho) const {
    return noncentral_chi_quantile(u, std::abs(rho));
}

Interval CurvedRadiusModel::theta_bracket(double r0) const {
    return Interval{r0 - 12.0, r0 + 12.0}.intersect(param_domain());
}

std::vector<double> CurvedRadiusModel::sample(double rho, std::size_t count,
                                              std::uint64_t seed) const {
    SeededUniform uniform(seed);
    std::vector<double> out(count);
    for (auto& r : out) {
        const double z1 = normal_quantile(uniform());
        const double z2 = normal_quantile(uniform());
        r = std::hypot(z1 + rho, z2);
    }
    return out;
}

// ---------------------------------------------------------------------------
// VarianceCurvatureNormal

VarianceCurvatureNormal::VarianceCurvatureNormal(double gamma, double n) : gamma_(gamma), n_(n) {
    if (!std::isfinite(gamma)) throw InvalidParameter("curvature model: gamma must be finite");
    if (!(n > 0.0) || !std::isfinite(n))
        throw InvalidParameter("curvature model: n must be finite and > 0");
    // sigma^2 at the window edge |theta| = sqrt(n) is 1 + gamma / 2.
    if (!(1.0 + 0.5 * gamma > 0.0))
        throw InvalidParameter("curvature model: sigma^2 must stay > 0 on |theta| <= sqrt(n) (need gamma > -2)");
}

std::string VarianceCurvatureNormal::name() const {
    std::ostringstream os;
    os << "curvature:" << gamma_ << ':' << n_;
    return os.str();
}

double VarianceCurvatureNormal::sigma(double theta) const {
    const double s2 = 1.0 + gamma_ * theta * theta / (2.0 * n_);
    if (!(s2 > 0.0)) {
        std::ostringstream os;
        os << name() << ": sigma^2 <= 0 at theta = " << theta;
        throw DomainError(os.str());
    }
    return std::sqrt(s2);
}

Interval VarianceCurvatureNormal::window() const noexcept {
    const double w = std::sqrt(n_);
    return {-w, w};
}

Interval VarianceCurvatureNormal::param_domain() const {
    if (gamma_ >= 0.0) return {};
    const double edge = std::sqrt(2.0 * n_ / -gamma_) * (1.0 - 1e-12);
    return {-edge, edge};
}

double VarianceCurvatureNormal::cdf(double y, double theta) const {
    return normal_cdf((y - theta) / sigma(theta));
}

double VarianceCurvatureNormal::sf(double y, double theta) const {
    return normal_sf((y - theta) / sigma(theta));
}

double VarianceCurvatureNormal::pdf(double y, double theta) const {
    const double s = sigma(theta);
    return normal_pdf((y - theta) / s) / s;
}

double VarianceCurvatureNormal::quantile(double u, double theta) const {
    return theta + sigma(theta) * normal_quantile(u);
}

Interval VarianceCurvatureNormal::theta_bracket(double y0) const {
    const Interval dom = param_domain();
    const double s = dom.contains(y0) ? sigma(y0) : 1.0;
    return Interval{y0 - 12.0 * s, y0 + 12.0 * s}.intersect(dom);
}

Pivot standardizing_pivot(const VarianceCurvatureNormal& model) {
    return Pivot{[model](double y, double theta) { return (y - theta) / model.sigma(theta); },
                 [](double z) { return normal_pdf(z); }};
}

// ---------------------------------------------------------------------------
// Descriptors

namespace {

double parse_number(std::string_view field, std::string_view whole) {
    std::string s(field);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v)) {
        std::ostringstream os;
        os << "model descriptor '" << whole << "': '" << field << "' is not a number";
        throw InvalidParameter(os.str());
    }
    return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

[[noreturn]] void bad_descriptor(std::string_view text, const char* why) {
    std::ostringstream os;
    os << "model descriptor '" << text << "': " << why;
    throw InvalidParameter(os.str());
}

}  // namespace

ModelDescriptor parse_model_descriptor(std::string_view text) {
    const auto parts = split(text, ':');
    const std::string_view family = parts[0];
    if (family == "location") {
        if (parts.size() < 2 || parts.size() > 3) bad_descriptor(text, "expected location:<kernel>[:sigma0]");
        LocationSpec spec;
        if (parts[1] == "normal") spec.kernel = Kernel::normal;
        else if (parts[1] == "extreme_value" || parts[1] == "ev") spec.kernel = Kernel::extreme_value;
        else bad_descriptor(text, "kernel must be normal or extreme_value");
        if (parts.size() == 3) spec.sigma0 = parse_number(parts[2], text);
        return spec;
    }
    if (family == "bounded") {
        if (parts.size() > 3) bad_descriptor(text, "expected bounded[:theta0[:sigma0]]");
        BoundedSpec spec;
        if (parts.size() >= 2) spec.theta0 = parse_number(parts[1], text);
        if (parts.size() == 3) spec.sigma0 = parse_number(parts[2], text);
        return spec;
    }
    if (family == "curved") {
        if (parts.size() != 1) bad_descriptor(text, "curved takes no parameters");
        return CurvedSpec{};
    }
    if (family == "curvature") {
        if (parts.size() != 3) bad_descriptor(text, "expected curvature:<gamma>:<n>");
        return CurvatureSpec{parse_number(parts[1], text), parse_number(parts[2], text)};
    }
    bad_descriptor(text, "unknown family (location, bounded, curved, curvature)");
}

ModelPtr make_model(const ModelDescriptor& spec) {
    struct Visitor {
        ModelPtr operator()(const LocationSpec& s) const {
            return std::make_shared<LocationModel>(s.kernel, s.sigma0);
        }
        ModelPtr operator()(const BoundedSpec& s) const {
            return std::make_shared<BoundedMeanNormal>(s.theta0, s.sigma0);
        }
        ModelPtr operator()(const CurvedSpec&) const {
            return std::make_shared<CurvedRadiusModel>();
        }
        ModelPtr operator()(const CurvatureSpec& s) const {
            return std::make_shared<VarianceCurvatureNormal>(s.gamma, s.n);
        }
    };
    return std::visit(Visitor{}, spec);
}

std::vector<double> sample(const ScalarModel& model, double theta, std::size_t count,
                           std::uint64_t seed) {
    model.require_param(theta);
    return model.sample(theta, count, seed);
}

}  // namespace confdist
