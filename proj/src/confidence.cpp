#include "confdist/confidence.hpp"

#include "confdist/csv.hpp"
#include "confdist/errors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace confdist {

double p_value(const ScalarModel& model, double y0, double theta) {
    model.require_param(theta);
    return model.cdf(y0, theta);
}

ConfidenceBound confidence_quantile(const ScalarModel& model, double y0, double beta) {
    if (!(beta > 0.0 && beta < 1.0)) {
        std::ostringstream os;
        os << "confidence_quantile: beta must lie in (0, 1) (got " << beta << ')';
        throw DomainError(os.str());
    }
    const Interval dom = model.param_domain();
    Interval br = model.theta_bracket(y0).intersect(dom);
    if (br.empty()) br = Interval{dom.clamp(y0), dom.clamp(y0)};

    // p is non-increasing in theta: the root has p > beta to its left.
    auto f = [&](double theta) { return model.cdf(y0, theta) - beta; };

    double lo = br.lo, hi = br.hi;
    double f_lo = f(lo);
    double width = std::max(hi - lo, 1.0);
    for (int i = 0; f_lo < 0.0; ++i) {
        if (lo <= dom.lo) return {dom.lo, true};
        if (i > 200) throw NumericError("confidence_quantile: lower bracket expansion failed");
        hi = lo;
        lo = std::max(dom.lo, lo - width);
        width *= 2.0;
        f_lo = f(lo);
    }
    double f_hi = f(hi);
    width = std::max(hi - lo, 1.0);
    for (int i = 0; f_hi > 0.0; ++i) {
        if (hi >= dom.hi) return {dom.hi, true};
        if (i > 200) throw NumericError("confidence_quantile: upper bracket expansion failed");
        lo = hi;
        f_lo = f_hi;
        hi = std::min(dom.hi, hi + width);
        width *= 2.0;
        f_hi = f(hi);
    }
    return {solve_bracketed(f, lo, hi, f_lo, f_hi), false};
}

double ConfidenceCurve::quantile(double beta) const {
    if (points.empty()) throw InvalidParameter("ConfidenceCurve::quantile: empty curve");
    if (beta >= points.front().p) return points.front().theta;
    for (std::size_t i = 1; i < points.size(); ++i) {
        const CurvePoint& a = points[i - 1];
        const CurvePoint& b = points[i];
        if (beta >= b.p) {
            if (a.p == b.p) return a.theta;
            const double w = (a.p - beta) / (a.p - b.p);
            return a.theta + w * (b.theta - a.theta);
        }
    }
    return points.back().theta;
}

ConfidenceCurve confidence_curve(const ScalarModel& model, double y0,
                                 std::span<const double> theta_grid) {
    if (theta_grid.empty()) throw InvalidParameter("confidence_curve: empty theta grid");
    ConfidenceCurve curve;
    curve.y0 = y0;
    curve.points.reserve(theta_grid.size());
    for (double theta : theta_grid) curve.points.push_back({theta, p_value(model, y0, theta)});
    return curve;
}

void write_csv(std::ostream& os, const ConfidenceCurve& curve) {
    os << "theta,p_value\n";
    for (const auto& pt : curve.points) os << csv_real(pt.theta) << ',' << csv_real(pt.p) << '\n';
}

}  // namespace confdist
