#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "elastica/arcspline.hpp"
#include "elastica/polygon.hpp"

namespace elastica {

// Uniform view of an evaluable curve over [0, length]. Breakpoints delimit
// smoothness cells; the bounds are Lipschitz constants used to certify
// sampled suprema (curvature_bound bounds |tangent'|, curvature_deriv_bound
// bounds |curvature'| inside cells).
struct MetricCurve {
    double length = 0;
    std::vector<double> breaks;
    std::function<CurvePoint(double)> eval;
    double curvature_bound = 0;
    double curvature_deriv_bound = 0;
    bool has_curvature = true;
};

MetricCurve metric_curve(const ArcSpline& g);
MetricCurve metric_curve(const PolylineCurve& c);

// sup |a-b| + |a'-b'| over a union-refined grid, certified within 1% by
// per-cell Lipschitz inflation. Curves of unequal length are compared on the
// common normalized parameter.
double dist_w1inf(const MetricCurve& a, const MetricCurve& b);

// Adds the curvature term: sup |a-b| + |a'-b'| + |a''-b''|.
double dist_w2inf(const MetricCurve& a, const MetricCurve& b);

// (integral of |a-b|^p + |a'-b'|^p + |a''-b''|^p dt)^(1/p), p in [2, inf).
double dist_w2p(const MetricCurve& a, const MetricCurve& b, double p, int subdiv = 16);

using CurveMetric = std::function<double(const MetricCurve&, const MetricCurve&)>;
double hausdorff(const std::vector<MetricCurve>& A, const std::vector<MetricCurve>& B,
                 const CurveMetric& metric);

struct RateFit {
    double slope = 0;
    double intercept = 0;
    double r2 = 0;
};
// Least squares on (log h, log err) after discarding the `drop` coarsest
// samples; needs at least three remaining.
RateFit fit_rate(std::vector<std::pair<double, double>> samples, int drop);

struct ChordArcEntry {
    double a = 0, b = 0;
    double arc = 0;
    double chord = 0;
    double dev_chord = 0;  // |1 - chord/arc|
    double dev_arc = 0;    // |1 - arc/chord|
};
std::vector<ChordArcEntry> chord_arc_report(const MetricCurve& g,
                                            const std::vector<std::pair<double, double>>& pairs);

struct SecondDiffEntry {
    double t = 0;
    double err = 0;
};
// Chord-normalized second differences of f at interior vertices of T against
// the exact second derivative f.ddf.
std::vector<SecondDiffEntry> second_difference_report(const MetricCurve& g,
                                                      const CurveFunction& f, const Partition& T);

}  // namespace elastica
