#pragma once

// Confidence p-value functions p(theta) = F(y0; theta) and lower confidence
// bounds obtained by inverting them.

#include "confdist/models.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace confdist {

// p(theta) = F(y0; theta). Throws DomainError if theta is outside the parameter domain.
double p_value(const ScalarModel& model, double y0, double theta);

struct ConfidenceBound {
    double value;
    // The unrestricted root lies outside the parameter domain and value is the domain edge.
    bool clamped;
};

/// Lower confidence bound: solves p(theta) = beta.
///
/// The search starts from model.theta_bracket(y0) and grows geometrically,
/// never leaving the parameter domain. If the root lies beyond a domain edge
/// the edge is returned with clamped = true (e.g. max(theta0, y0 - z_beta) for
/// the bounded mean). Throws DomainError unless 0 < beta < 1.
ConfidenceBound confidence_quantile(const ScalarModel& model, double y0, double beta);

struct CurvePoint {
    double theta;
    double p;
};

struct ConfidenceCurve {
    double y0 = 0.0;
    std::vector<CurvePoint> points;

    // Linear-interpolated inverse of the tabulated curve; clamps to the grid ends.
    double quantile(double beta) const;
};

// Tabulates p over theta_grid. Throws InvalidParameter on an empty grid.
ConfidenceCurve confidence_curve(const ScalarModel& model, double y0,
                                 std::span<const double> theta_grid);

// CSV columns: theta,p_value
void write_csv(std::ostream& os, const ConfidenceCurve& curve);

}  // namespace confdist
