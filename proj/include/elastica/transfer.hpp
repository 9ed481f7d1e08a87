#pragma once

#include <functional>

#include "elastica/arcspline.hpp"
#include "elastica/newton.hpp"
#include "elastica/polygon.hpp"

namespace elastica {

// C1 piecewise-circular interpolation of a discretely arc-length
// parameterized polygon: tangent tau_P(I) at each edge midpoint, a constant-
// curvature piece over each dual edge, boundary pieces extending the
// adjacent arcs at the same curvature, anchored at P(0). Exact energy
// identity: bending_energy(output) = bending_energy(P) plus the two
// boundary excess terms (alpha/dual)^2 * edge/4.
ArcSpline approx_reconstruct(const Polygon& P);

// Pointwise sampling at the partition vertices followed by stretching each
// edge to its reference length; sigma == 0 exactly, chord directions kept.
using PositionFn = std::function<Vec(double)>;
Polygon approx_sample(const PositionFn& gamma, const Partition& T, int dim);
Polygon approx_sample(const ArcSpline& g, const Partition& T);

struct DiscreteRestoreResult {
    Polygon polygon;
    NKReport nk;
    double violation_tv2 = 0;    // constraint norm of the input
    double proximity_tv3 = 0;    // full tv^3-type norm of the correction
    double energy_gap = 0;       // |E_T(out) - E_T(in)|
    double z0 = 0, z1 = 0;       // auxiliary log-scales at the solution
    bool precondition_ok = true; // violation within the admissible default
};
// Newton projection onto the feasible set Phi_T = 0, keeping the partition.
DiscreteRestoreResult restore_discrete(const Polygon& P, const BoundaryData& bd,
                                       double tol = 1e-12);

struct SmoothRestoreResult {
    ArcSpline curve;
    NKReport nk;
    double violation = 0;        // block norms of the input constraint value
    double proximity_w2inf = 0;  // distance from the input curve
    double z0 = 0, z1 = 0;
    bool precondition_ok = true;
};
// Newton projection of an arc spline onto the feasible set, iterating on the
// breakpoint tangent program with the start point pinned to bd.p0.
SmoothRestoreResult restore_smooth(const ArcSpline& g, const BoundaryData& bd,
                                   double tol = 1e-12);

struct ConsistencyReport {
    double h = 0;
    double energy_gap = 0;
    double w1inf_gap = 0;
    double curvature_gap = 0;
    double tv3 = 0;
    double feasibility_residual = 0;
};

struct ReconstructResult {
    ArcSpline curve;
    ConsistencyReport report;
};
// Exact reconstruction: approx_reconstruct then restore_smooth.
ReconstructResult reconstruct(const Polygon& P, const BoundaryData& bd, double tol = 1e-12);

struct SampleResult {
    Polygon polygon;
    ConsistencyReport report;
};
// Exact sampling: approx_sample then restore_discrete.
SampleResult sample(const ArcSpline& g, const BoundaryData& bd, const Partition& T,
                    double tol = 1e-12);

// W^{2,inf} distance between g and reconstruct(sample(g)).
double roundtrip_gap(const ArcSpline& g, const BoundaryData& bd, const Partition& T);

}  // namespace elastica
