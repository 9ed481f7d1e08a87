#include "elastica/arcspline.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "elastica/quadrature.hpp"

namespace elastica {

namespace {

// sin(x)/x and (1-cos(x))/x^2 with series near zero.
double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

double versine(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 0.5 - x2 / 24.0 + x2 * x2 / 720.0;
    }
    const double s = std::sin(0.5 * x);
    return 2.0 * s * s / (x * x);
}

Vec segment_position(const ArcSegment& s, double u) {
    return s.start + (u * sinc(s.c * u)) * s.t + (u * u * versine(s.c * u) * s.c) * s.n;
}

Vec segment_tangent(const ArcSegment& s, double u) {
    return std::cos(s.c * u) * s.t + std::sin(s.c * u) * s.n;
}

Vec segment_curvature(const ArcSegment& s, double u) {
    return (-s.c * std::sin(s.c * u)) * s.t + (s.c * std::cos(s.c * u)) * s.n;
}

Index locate_segment(const ArcSpline& g, double t) {
    if (t < 0.0 || t > g.length()) throw InvalidArgument("parameter outside [0, L]");
    auto it = std::upper_bound(g.breaks.begin(), g.breaks.end(), t);
    Index j = static_cast<Index>(it - g.breaks.begin()) - 1;
    return std::clamp<Index>(j, 0, g.segments() - 1);
}

// Visit Gauss-Legendre nodes of [a, b], split at segment boundaries and
// subdivided so each panel spans at most one radian of tangent rotation.
template <class F>
void visit_nodes(const ArcSpline& g, double a, double b, F&& fn) {
    double lo = a;
    while (lo < b - 1e-15 * g.length()) {
        const Index j = locate_segment(g, lo);
        const double seghi = g.breaks[static_cast<std::size_t>(j) + 1];
        const double hi = std::min(b, seghi);
        const auto& s = g.seg[static_cast<std::size_t>(j)];
        const int nsub = std::max(1, static_cast<int>(std::ceil(std::abs(s.c) * (hi - lo))));
        quad::visit(lo, hi, nsub, fn);
        lo = hi;
    }
}

}  // namespace

ArcSpline make_arcspline(Vec x0, std::vector<double> breaks, std::vector<Vec> tangents) {
    if (breaks.size() < 2) throw InvalidArgument("arc spline needs at least one segment");
    if (breaks.front() != 0.0) throw InvalidArgument("breakpoints must start at 0");
    const double L = breaks.back();
    if (!(L > 0)) throw InvalidArgument("arc spline length must be positive");
    for (std::size_t j = 0; j + 1 < breaks.size(); ++j)
        if (!(breaks[j + 1] - breaks[j] > 1e-12 * L))
            throw InvalidArgument("breakpoints must be strictly increasing");
    if (tangents.size() != breaks.size())
        throw InvalidArgument("tangent count must equal breakpoint count");
    const int m = x0.n;
    if (m < 2 || m > 3) throw UnsupportedDimension("ambient dimension must be 2 or 3");
    for (Vec& t : tangents) {
        if (t.n != m) throw InvalidArgument("mixed ambient dimensions");
        if (std::abs(norm(t) - 1.0) > 1e-12) throw InvalidArgument("tangents must be unit vectors");
        t = normalized(t);
    }

    ArcSpline g{x0, std::move(breaks), std::move(tangents), {}};
    g.seg.resize(g.breaks.size() - 1);
    Vec cur = x0;
    for (std::size_t j = 0; j + 1 < g.breaks.size(); ++j) {
        ArcSegment& s = g.seg[j];
        s.start = cur;
        s.t = g.tangent[j];
        s.len = g.breaks[j + 1] - g.breaks[j];
        s.s0 = g.breaks[j];
        s.theta = unit_angle(g.tangent[j], g.tangent[j + 1]);
        if (s.theta > std::acos(-1.0) - 1e-9)
            throw InvalidArgument("consecutive tangents may not be antipodal");
        if (s.theta <= 1e-14) {
            s.c = 0;
            s.n = Vec::zero(m);
        } else {
            s.c = s.theta / s.len;
            s.n = normalized(g.tangent[j + 1] - std::cos(s.theta) * g.tangent[j]);
        }
        cur = segment_position(s, s.len);
    }
    return g;
}

ArcSpline reversed(const ArcSpline& g) {
    const double L = g.length();
    std::vector<double> breaks(g.breaks.size());
    std::vector<Vec> tans(g.tangent.size());
    for (std::size_t j = 0; j < g.breaks.size(); ++j) {
        breaks[j] = L - g.breaks[g.breaks.size() - 1 - j];
        tans[j] = -g.tangent[g.tangent.size() - 1 - j];
    }
    breaks.front() = 0.0;
    return make_arcspline(evaluate(g, L).position, std::move(breaks), std::move(tans));
}

ArcSpline translated(const ArcSpline& g, const Vec& v) {
    return make_arcspline(g.x0 + v, g.breaks, g.tangent);
}

CurvePoint evaluate(const ArcSpline& g, double t) {
    const Index j = locate_segment(g, t);
    const auto& s = g.seg[static_cast<std::size_t>(j)];
    const double u = t - s.s0;
    return CurvePoint{segment_position(s, u), segment_tangent(s, u), segment_curvature(s, u)};
}

double bending_energy(const ArcSpline& g) {
    KahanSum e;
    for (const auto& s : g.seg) e.add(s.c * s.c * s.len);
    return 0.5 * e.value();
}

double tv3_seminorm(const ArcSpline& g) {
    KahanSum v;
    for (const auto& s : g.seg) v.add(s.c * s.c * s.len);
    for (std::size_t j = 1; j < g.seg.size(); ++j) {
        const auto& prev = g.seg[j - 1];
        Vec left = segment_curvature(prev, prev.len);
        Vec right = segment_curvature(g.seg[j], 0.0);
        v.add(norm(right - left));
    }
    return v.value();
}

ConstraintValue smooth_constraint_map(const ArcSpline& g, const BoundaryData& bd) {
    if (bd.p0.n != g.dim()) throw InvalidArgument("boundary data dimension mismatch");
    if (std::abs(g.length() - bd.L) > 1e-12 * std::max(1.0, bd.L))
        throw InvalidArgument("unit-speed curve length must equal the prescribed length");
    auto part = Partition::from_breakpoints(g.breaks);
    ConstraintValue cv{evaluate(g, 0).position - bd.p0,
                       evaluate(g, g.length()).position - bd.pL,
                       g.tangent.front() - bd.N0,
                       g.tangent.back() - bd.NL,
                       make_field(part, Support::Edge, 1)};
    return cv;
}

ThetaMatrix smooth_theta_matrix(const ArcSpline& g) {
    const int m = g.dim();
    const double L = g.length();
    Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(m, m);
    visit_nodes(g, 0.0, L, [&](double r, double w) {
        const double phi = r / L;
        Vec tau = evaluate(g, r).tangent;
        const double f = (1.0 - phi) * phi * w;
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                theta(a, b) += f * ((a == b ? 1.0 : 0.0) - tau[a] * tau[b]);
    });
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(theta);
    const double lmin = es.eigenvalues().minCoeff();
    const double lmax = es.eigenvalues().maxCoeff();
    ThetaMatrix out;
    out.dim = m;
    out.entries.assign(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0.0);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) out.entries[static_cast<std::size_t>(a * m + b)] = theta(a, b);
    out.condition = (lmin <= 0.0) ? std::numeric_limits<double>::infinity() : lmax / lmin;
    if (!(out.condition <= 1e12))
        throw SingularConfiguration("near-straight curve: theta matrix ill-conditioned");
    return out;
}

namespace {

double lambda_at(const SmoothTangentData& w, double r) {
    return w.lambda ? w.lambda(r) : 0.0;
}

// Integrand of the right-inverse field, excluding the V term (phase = 0) or
// only the V term's projector weight (phase = 1).
Vec base_integrand(const ArcSpline& g, const SmoothTangentData& w, const Vec& V0p,
                   const Vec& V1p, double r) {
    const double phi = r / g.length();
    Vec tau = evaluate(g, r).tangent;
    Vec v = (1.0 - phi) * (1.0 - phi) * V0p + phi * phi * V1p;
    return lambda_at(w, r) * tau + reject(v, tau);
}

}  // namespace

Vec smooth_right_inverse_weight(const ArcSpline& g, const SmoothTangentData& w) {
    auto theta = smooth_theta_matrix(g);
    const int m = g.dim();
    Vec V0p = reject(w.V0, g.tangent.front());
    Vec V1p = reject(w.V1, g.tangent.back());
    Vec b = w.U1 - w.U0;
    {
        std::array<KahanSum, 3> acc;
        visit_nodes(g, 0.0, g.length(), [&](double r, double wt) {
            Vec f = base_integrand(g, w, V0p, V1p, r);
            for (int a = 0; a < m; ++a) acc[static_cast<std::size_t>(a)].add(wt * f[a]);
        });
        for (int a = 0; a < m; ++a) b[a] -= acc[static_cast<std::size_t>(a)].value();
    }
    Eigen::MatrixXd Th(m, m);
    for (int a = 0; a < m; ++a)
        for (int c = 0; c < m; ++c) Th(a, c) = theta.entries[static_cast<std::size_t>(a * m + c)];
    Eigen::VectorXd rhs(m);
    for (int a = 0; a < m; ++a) rhs(a) = b[a];
    Eigen::VectorXd sol = Th.ldlt().solve(rhs);
    Vec V = Vec::zero(m);
    for (int a = 0; a < m; ++a) V[a] = sol(a);
    return V;
}

void smooth_right_inverse_eval(const ArcSpline& g, const SmoothTangentData& w, const Vec& V,
                               double t, Vec& u, Vec& du) {
    const int m = g.dim();
    const double L = g.length();
    Vec V0p = reject(w.V0, g.tangent.front());
    Vec V1p = reject(w.V1, g.tangent.back());
    auto integrand = [&](double r) {
        const double phi = r / L;
        Vec tau = evaluate(g, r).tangent;
        Vec v = (1.0 - phi) * (1.0 - phi) * V0p + (1.0 - phi) * phi * V + phi * phi * V1p;
        return lambda_at(w, r) * tau + reject(v, tau);
    };
    du = integrand(t);
    std::array<KahanSum, 3> acc;
    visit_nodes(g, 0.0, t, [&](double r, double wt) {
        Vec f = integrand(r);
        for (int a = 0; a < m; ++a) acc[static_cast<std::size_t>(a)].add(wt * f[a]);
    });
    u = w.U0;
    for (int a = 0; a < m; ++a) u[a] += acc[static_cast<std::size_t>(a)].value();
}

SampledField smooth_right_inverse_apply(const ArcSpline& g, const SmoothTangentData& w) {
    SampledField out;
    out.V = smooth_right_inverse_weight(g, w);
    std::vector<double> ts;
    for (double s : g.breaks) ts.push_back(s);
    for (const auto& s : g.seg)
        for (int q = 1; q < 4; ++q) ts.push_back(s.s0 + s.len * static_cast<double>(q) / 4.0);
    std::sort(ts.begin(), ts.end());
    for (double t : ts) {
        Vec u, du;
        smooth_right_inverse_eval(g, w, out.V, t, u, du);
        out.t.push_back(t);
        out.u.push_back(u);
        out.du.push_back(du);
    }
    return out;
}

NormPair norm_equivalence_check(const ArcSpline& g, const CurveFunction& u, int k, double p) {
    if (k < 0 || k > 2) throw InvalidArgument("derivative order must be 0, 1, or 2");
    if (!(p >= 1.0)) throw InvalidArgument("norm exponent must be at least 1");
    auto deriv = [&](double r) { return k == 0 ? u.f(r) : (k == 1 ? u.df(r) : u.ddf(r)); };
    auto speed = [&](double r) { return norm(evaluate(g, r).tangent); };
    NormPair out;
    if (std::isinf(p)) {
        double mw = 0, mu = 0;
        auto probe = [&](double r) {
            const double s = speed(r);
            mw = std::max(mw, norm(deriv(r)) / std::pow(s, k));
            mu = std::max(mu, norm(deriv(r)));
        };
        visit_nodes(g, 0.0, g.length(), [&](double r, double) { probe(r); });
        probe(0.0);
        probe(g.length());
        out.weighted = mw;
        out.unweighted = mu;
        return out;
    }
    KahanSum sw, su;
    visit_nodes(g, 0.0, g.length(), [&](double r, double wt) {
        const double s = speed(r);
        sw.add(wt * std::pow(norm(deriv(r)) / std::pow(s, k), p) * s);
        su.add(wt * std::pow(norm(deriv(r)), p));
    });
    out.weighted = std::pow(sw.value(), 1.0 / p);
    out.unweighted = std::pow(su.value(), 1.0 / p);
    return out;
}

}  // namespace elastica
