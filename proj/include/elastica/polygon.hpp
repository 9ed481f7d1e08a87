#pragma once

#include <vector>

#include "elastica/fields.hpp"
#include "elastica/partition.hpp"
#include "elastica/vec.hpp"

namespace elastica {

// Discrete immersion: one position per partition vertex, successive vertices
// distinct. Ambient dimension 2 or 3.
struct Polygon {
    Partition part;
    std::vector<Vec> pos;

    int dim() const { return pos.empty() ? 0 : pos.front().n; }
    Index vertex_count() const { return part.vertex_count(); }
    Index edge_count() const { return part.edge_count(); }
    const Vec& at(Index i) const { return pos[static_cast<std::size_t>(i)]; }
    Vec& at(Index i) { return pos[static_cast<std::size_t>(i)]; }
};

Polygon make_polygon(Partition part, std::vector<Vec> positions);

// Clamped boundary conditions: endpoint positions, unit endpoint tangents,
// and the prescribed length. eta measures commensurability slack.
struct BoundaryData {
    Vec p0, pL;
    Vec N0, NL;
    double L = 0;

    double eta() const;
};

BoundaryData make_boundary_data(Vec p0, Vec pL, Vec N0, Vec NL, double L);

// Value (or directional derivative) of the constraint map: two endpoint
// position blocks, two endpoint tangent blocks, and a per-edge strain block.
struct ConstraintValue {
    Vec pos0, posL;
    Vec tan0, tanL;
    Field strain;
};

// Bounds defining the tame set: strain and tangent measured in the
// w^{k-1,p} norm induced by the polygon, plus the commensurability margin.
struct TameBounds {
    double strain_bound = 0;
    double tangent_bound = 0;
    double eta = 0;
    int k = 2;
    double p = 2;
};

struct TameReport {
    bool in_set = false;
    double strain_norm = 0;
    double tangent_norm = 0;
    double length_ratio = 0;
};

struct PriorBounds {
    double K1 = 0;
    double K2 = 0;
};

struct RegularitySeminorms {
    double w2inf = 0;
    double tv3 = 0;
    double w3inf = 0;
};

// Per-edge quantities.
std::vector<double> edge_lengths(const Polygon& P);
std::vector<Vec> tangents(const Polygon& P);
MetricWeights induced_weights(const Polygon& P);
double polygon_length(const Polygon& P);

// Per-edge log(l_P / l_0); zero iff the polygon realizes the reference
// lengths (discrete arc-length parameterization).
Field strain(const Polygon& P);

// Turning angle in [0, pi] at each interior vertex.
Field turning_angles(const Polygon& P);

// Curvature vector (tau+ - tau-)/dual length at each interior vertex;
// magnitude 2 sin(alpha/2)/dual length.
Field curvature(const Polygon& P);

// One half of the sum of alpha^2 / dual length over interior vertices.
double bending_energy(const Polygon& P);

// Exact position gradient of the bending energy. Requires every turning
// angle below pi - 1e-6 (the Euler-Lagrange form divides by sin alpha).
Field bending_energy_gradient(const Polygon& P);

ConstraintValue constraint_map(const Polygon& P, const BoundaryData& bd);
ConstraintValue constraint_jacobian_apply(const Polygon& P, const Field& u);
// Transpose action: the vertex field with <Ju, w> = <u, adjoint(w)> for all u.
Field constraint_jacobian_adjoint(const Polygon& P, const ConstraintValue& w);
ConstraintValue constraint_hessian_apply(const Polygon& P, const Field& u, const Field& v);

// Weighting matrix of the right inverse and its spectral condition number.
struct ThetaMatrix {
    std::vector<double> entries;  // row-major dim x dim
    int dim = 0;
    double condition = 0;
};
ThetaMatrix theta_matrix(const Polygon& P);

// Explicit right inverse of the constraint differential. Tangent blocks of w
// are interpreted in the orthogonal complement of the respective end tangent
// (components along it are projected away).
Field right_inverse_apply(const Polygon& P, const ConstraintValue& w);

// Spec of the scalar norm on constraint values: Euclidean block norms plus a
// full discrete norm of the strain block (sum of seminorm orders 0..k).
struct ConstraintNormSpec {
    int k = 2;
    double p = 1;  // tv^2 by default, matching the restoration estimates
};
double constraint_norm(const ConstraintValue& cv, const MetricWeights& w,
                       const ConstraintNormSpec& spec = {});

// Full discrete w^{k,p} norm: sum of seminorms of orders 0..k, skipping
// orders the mesh cannot support.
double field_full_norm(const Field& f, int k, double p, const MetricWeights& w);

TameReport tame_membership(const Polygon& P, const TameBounds& b);

RegularitySeminorms regularity_seminorms(const Polygon& P);

// Piecewise-linear interpolant: continuous, affine on each reference edge,
// with speed l_P / l_0 there.
struct PolylineCurve {
    Partition part;
    std::vector<Vec> pos;

    double length() const;
    Vec position(double t) const;
    // One-sided constant derivative on the edge containing t.
    Vec derivative(double t) const;
};
PolylineCurve piecewise_linear_interpolant(const Polygon& P);

}  // namespace elastica
