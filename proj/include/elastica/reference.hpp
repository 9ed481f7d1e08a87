#pragma once

#include <optional>
#include <vector>

#include "elastica/metrics.hpp"
#include "elastica/polygon.hpp"
#include "elastica/vec.hpp"

namespace elastica {

// Jacobi elliptic values at (u, k), absolute error <= 1e-12 for |u| <= 4K(k).
struct JacobiValues {
    double sn = 0, cn = 1, dn = 1;
};
JacobiValues jacobi_sn_cn_dn(double u, double k);

// Continuous Jacobi amplitude am(u, k): the antiderivative of dn vanishing
// at 0, quasi-linear in u (not folded into a principal branch).
double jacobi_am(double u, double k);

// Complete elliptic integral of the first kind via AGM; throws on k = 1.
double complete_K(double k);

// Closed curvature programs for planar clamped elasticae. Wavelike:
// kappa(s) = sign * 2 k w cn(w (s - s0); k). Orbitlike:
// kappa(s) = sign * 2 w dn(w (s - s0); k), which covers circular arcs at
// k = 0. The sign flag selects the traversal orientation; rotation and
// translation place the curve in the plane.
struct EllipticParams {
    enum class Family { wavelike, orbitlike };
    Family family = Family::wavelike;
    double k = 0;       // modulus in [0, 1]
    double omega = 1;   // frequency > 0
    double s0 = 0;      // phase shift
    double rotation = 0;
    Vec translation;    // planar offset, curve start
    int sign = 1;       // +1 or -1
};

// Tangent angle and signed curvature of the elliptic program at arclength s.
double elastica_theta(const EllipticParams& p, double s);
double elastica_kappa(const EllipticParams& p, double s);

// Unit-speed planar curve tabulated at uniformly spaced arclength samples,
// with cubic Hermite evaluation between them. Tangents at samples are exact
// for curves built from an elliptic program.
struct DenseCurve {
    std::vector<double> s;
    std::vector<Vec> pos;
    std::vector<Vec> tan;
    std::vector<double> kappa;  // signed scalar curvature at samples
    double length = 0;
    double energy = 0;  // half the integral of kappa^2
};

DenseCurve elastica_curve(const EllipticParams& p, double length, int npoints = 4096);
CurvePoint evaluate_dense(const DenseCurve& c, double t);
MetricCurve metric_curve(const DenseCurve& c);

// Max-norm residual of the unit-tangent ODE tau'' = mu - tau<tau, mu>
// - tau |tau'|^2 over five-point stencils; mu is fitted by least squares
// when not supplied.
struct OdeResidual {
    double residual = 0;
    Vec mu;
};
OdeResidual elastica_ode_residual(const DenseCurve& c, std::optional<Vec> mu = std::nullopt);

// Clamped planar elastica by multi-started Gauss-Newton shooting on
// (k, omega, s0, rotation, translation). Non-convergence is reported through
// the flag, not thrown; callers fall back to fine-mesh self-reference.
struct ShootingResult {
    DenseCurve curve;
    EllipticParams params;
    double boundary_residual = 0;
    bool converged = false;
};
ShootingResult shoot_clamped_elastica(const BoundaryData& bd, int npoints = 4096);

}  // namespace elastica
