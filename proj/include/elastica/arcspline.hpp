#pragma once

#include <functional>
#include <vector>

#include "elastica/polygon.hpp"
#include "elastica/vec.hpp"

namespace elastica {

// One constant-curvature piece: starts at `start` with unit tangent `t`,
// rotates towards unit normal `n` at rate c over arc length `len` (c = 0 and
// zero n for straight pieces).
struct ArcSegment {
    Vec start;
    Vec t;
    Vec n;
    double c = 0;
    double len = 0;
    double theta = 0;
    double s0 = 0;
};

// C^1 piecewise-circular unit-speed curve, encoded by a start point plus a
// tangent program at increasing arc-length breakpoints. Each segment is the
// great-circle interpolation of consecutive tangents.
struct ArcSpline {
    Vec x0;
    std::vector<double> breaks;
    std::vector<Vec> tangent;
    std::vector<ArcSegment> seg;

    double length() const { return breaks.back(); }
    int dim() const { return x0.n; }
    Index segments() const { return static_cast<Index>(seg.size()); }
};

ArcSpline make_arcspline(Vec x0, std::vector<double> breaks, std::vector<Vec> tangents);
ArcSpline reversed(const ArcSpline& g);
ArcSpline translated(const ArcSpline& g, const Vec& v);

struct CurvePoint {
    Vec position;
    Vec tangent;
    Vec curvature;
};
CurvePoint evaluate(const ArcSpline& g, double t);

// Exact closed form: half the sum of c^2 times segment length.
double bending_energy(const ArcSpline& g);

// Total variation of the curvature vector: within-arc rate c^2 per unit
// length plus the one-sided ambient curvature jumps at interior breakpoints.
double tv3_seminorm(const ArcSpline& g);

// (gamma(0)-p0, gamma(L)-pL, tau(0)-N0, tau(L)-NL, strain = 0). The spline
// is unit-speed, so its domain length must equal the prescribed length.
ConstraintValue smooth_constraint_map(const ArcSpline& g, const BoundaryData& bd);

// Theta weighting matrix of the smooth right inverse, assembled by
// per-segment Gauss-Legendre quadrature.
ThetaMatrix smooth_theta_matrix(const ArcSpline& g);

// Tangent-space data of the smooth constraint map: endpoint position and
// (orthogonal) tangent blocks plus the strain-rate function along the curve.
struct SmoothTangentData {
    Vec U0, U1, V0, V1;
    std::function<double(double)> lambda;
};

struct SampledField {
    std::vector<double> t;
    std::vector<Vec> u;
    std::vector<Vec> du;
    Vec V;
};

// Solve Theta V = b for the weighting vector of the right-inverse field.
Vec smooth_right_inverse_weight(const ArcSpline& g, const SmoothTangentData& w);
// Value and derivative of the constructed field at one parameter.
void smooth_right_inverse_eval(const ArcSpline& g, const SmoothTangentData& w, const Vec& V,
                               double t, Vec& u, Vec& du);
// Field sampled at breakpoints and segment interior quadrature nodes.
SampledField smooth_right_inverse_apply(const ArcSpline& g, const SmoothTangentData& w);

// A function along the curve with two derivatives in the arc parameter.
struct CurveFunction {
    std::function<Vec(double)> f, df, ddf;
};
struct NormPair {
    double weighted = 0;
    double unweighted = 0;
};
// W^{k,p} seminorm of u along g, once with the curve-induced metric (speed
// measured from the evaluated tangent) and once with the plain parameter
// metric; the two coincide for unit-speed curves.
NormPair norm_equivalence_check(const ArcSpline& g, const CurveFunction& u, int k, double p);

}  // namespace elastica
