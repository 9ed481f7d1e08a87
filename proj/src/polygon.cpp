#include "elastica/polygon.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace elastica {

Polygon make_polygon(Partition part, std::vector<Vec> positions) {
    if (static_cast<Index>(positions.size()) != part.vertex_count())
        throw InvalidArgument("position count must equal vertex count");
    const int m = positions.front().n;
    if (m < 2 || m > 3) throw UnsupportedDimension("ambient dimension must be 2 or 3");
    for (const Vec& p : positions)
        if (p.n != m) throw InvalidArgument("mixed ambient dimensions");
    for (std::size_t i = 0; i + 1 < positions.size(); ++i)
        if (norm(positions[i + 1] - positions[i]) == 0.0)
            throw ImmersionViolation("successive vertices must be distinct");
    return Polygon{std::move(part), std::move(positions)};
}

double BoundaryData::eta() const {
    const double chord = norm(pL - p0);
    if (chord == 0.0) return std::numeric_limits<double>::infinity();
    return L / chord - 1.0;
}

BoundaryData make_boundary_data(Vec p0, Vec pL, Vec N0, Vec NL, double L) {
    const int m = p0.n;
    if (m < 2 || m > 3) throw UnsupportedDimension("ambient dimension must be 2 or 3");
    if (pL.n != m || N0.n != m || NL.n != m) throw InvalidArgument("mixed ambient dimensions");
    if (!(L > 0)) throw InvalidArgument("prescribed length must be positive");
    if (std::abs(norm(N0) - 1.0) > 1e-12 || std::abs(norm(NL) - 1.0) > 1e-12)
        throw InvalidArgument("end tangents must be unit vectors");
    BoundaryData bd{p0, pL, N0, NL, L};
    if (!(bd.eta() > 0)) throw InvalidArgument("length must exceed the endpoint distance");
    return bd;
}

std::vector<double> edge_lengths(const Polygon& P) {
    std::vector<double> l(static_cast<std::size_t>(P.edge_count()));
    for (Index I = 0; I < P.edge_count(); ++I) {
        l[static_cast<std::size_t>(I)] = norm(P.at(I + 1) - P.at(I));
        if (l[static_cast<std::size_t>(I)] == 0.0)
            throw ImmersionViolation("zero-length edge");
    }
    return l;
}

std::vector<Vec> tangents(const Polygon& P) {
    std::vector<Vec> t(static_cast<std::size_t>(P.edge_count()));
    for (Index I = 0; I < P.edge_count(); ++I) {
        Vec d = P.at(I + 1) - P.at(I);
        const double l = norm(d);
        if (l == 0.0) throw ImmersionViolation("zero-length edge");
        t[static_cast<std::size_t>(I)] = (1.0 / l) * d;
    }
    return t;
}

MetricWeights induced_weights(const Polygon& P) {
    return weights_from_edge_lengths(P.part, edge_lengths(P));
}

double polygon_length(const Polygon& P) {
    KahanSum s;
    for (double l : edge_lengths(P)) s.add(l);
    return s.value();
}

Field strain(const Polygon& P) {
    auto l = edge_lengths(P);
    Field s = make_field(P.part, Support::Edge, 1);
    for (Index I = 0; I < P.edge_count(); ++I)
        s.at(I) = std::log(l[static_cast<std::size_t>(I)] / P.part.edge_length(I));
    return s;
}

Field turning_angles(const Polygon& P) {
    if (P.part.interior_vertex_count() < 1)
        throw UndefinedRequest("turning angles need an interior vertex");
    auto t = tangents(P);
    Field a = make_field(P.part, Support::Vertex, 1, 1);
    for (Index i = 1; i < P.edge_count(); ++i)
        a.at(i) = unit_angle(t[static_cast<std::size_t>(i - 1)], t[static_cast<std::size_t>(i)]);
    return a;
}

Field curvature(const Polygon& P) {
    if (P.part.interior_vertex_count() < 1)
        throw UndefinedRequest("curvature needs an interior vertex");
    auto t = tangents(P);
    auto w = induced_weights(P);
    Field k = make_field(P.part, Support::Vertex, P.dim(), 1);
    for (Index i = 1; i < P.edge_count(); ++i) {
        Vec d = t[static_cast<std::size_t>(i)] - t[static_cast<std::size_t>(i - 1)];
        k.set_vec(i, (1.0 / w.dual[static_cast<std::size_t>(i)]) * d);
    }
    return k;
}

double bending_energy(const Polygon& P) {
    if (P.part.interior_vertex_count() < 1) return 0.0;
    auto a = turning_angles(P);
    auto w = induced_weights(P);
    KahanSum s;
    for (Index i = 1; i < P.edge_count(); ++i)
        s.add(a.at(i) * a.at(i) / w.dual[static_cast<std::size_t>(i)]);
    return 0.5 * s.value();
}

// alpha / sin(alpha), series near zero.
static double alpha_over_sin(double a) {
    if (a < 1e-4) {
        const double a2 = a * a;
        return 1.0 + a2 / 6.0 + 7.0 * a2 * a2 / 360.0;
    }
    return a / std::sin(a);
}

Field bending_energy_gradient(const Polygon& P) {
    auto t = tangents(P);
    auto l = edge_lengths(P);
    Field g = make_field(P.part, Support::Vertex, P.dim());
    for (Index i = 1; i < P.edge_count(); ++i) {
        const Vec& u = t[static_cast<std::size_t>(i - 1)];
        const Vec& v = t[static_cast<std::size_t>(i)];
        const double l1 = l[static_cast<std::size_t>(i - 1)];
        const double l2 = l[static_cast<std::size_t>(i)];
        const double lbar = 0.5 * (l1 + l2);
        const double alpha = unit_angle(u, v);
        if (alpha >= std::acos(-1.0) - 1e-6)
            throw SingularConfiguration("turning angle too close to pi for the energy gradient");
        const double c = dot(u, v);
        const double aos = alpha_over_sin(alpha);
        // alpha * d(alpha)/d(position)
        Vec ada = (aos / l1) * (v - c * u);
        Vec adc = (-aos / l2) * (u - c * v);
        Vec adb = -(ada + adc);
        // dual-length derivatives
        Vec dla = -0.5 * u;
        Vec dlb = 0.5 * (u - v);
        Vec dlc = 0.5 * v;
        const double q = alpha * alpha / (2.0 * lbar * lbar);
        g.set_vec(i - 1, g.vec_at(i - 1) + (1.0 / lbar) * ada - q * dla);
        g.set_vec(i, g.vec_at(i) + (1.0 / lbar) * adb - q * dlb);
        g.set_vec(i + 1, g.vec_at(i + 1) + (1.0 / lbar) * adc - q * dlc);
    }
    return g;
}

static void check_displacement(const Polygon& P, const Field& u) {
    if (!u.part.same_as(P.part) || u.support != Support::Vertex || u.margin != 0 ||
        u.dim != P.dim())
        throw InvalidArgument("displacement field does not match the polygon");
}

ConstraintValue constraint_map(const Polygon& P, const BoundaryData& bd) {
    if (bd.p0.n != P.dim()) throw InvalidArgument("boundary data dimension mismatch");
    auto t = tangents(P);
    ConstraintValue cv{P.at(0) - bd.p0, P.at(P.vertex_count() - 1) - bd.pL,
                       t.front() - bd.N0, t.back() - bd.NL, strain(P)};
    return cv;
}

ConstraintValue constraint_jacobian_apply(const Polygon& P, const Field& u) {
    check_displacement(P, u);
    auto t = tangents(P);
    auto l = edge_lengths(P);
    const Index n = P.edge_count();
    Field sdot = make_field(P.part, Support::Edge, 1);
    Vec d0, dn;
    for (Index I = 0; I < n; ++I) {
        Vec du = (1.0 / l[static_cast<std::size_t>(I)]) * (u.vec_at(I + 1) - u.vec_at(I));
        sdot.at(I) = dot(t[static_cast<std::size_t>(I)], du);
        if (I == 0) d0 = reject(du, t.front());
        if (I == n - 1) dn = reject(du, t.back());
    }
    return ConstraintValue{u.vec_at(0), u.vec_at(P.vertex_count() - 1), d0, dn, std::move(sdot)};
}

Field constraint_jacobian_adjoint(const Polygon& P, const ConstraintValue& w) {
    auto t = tangents(P);
    auto l = edge_lengths(P);
    const Index n = P.edge_count();
    Field out = make_field(P.part, Support::Vertex, P.dim());
    out.set_vec(0, w.pos0);
    out.set_vec(n, out.vec_at(n) + w.posL);
    const Vec r0 = (1.0 / l.front()) * reject(w.tan0, t.front());
    out.set_vec(0, out.vec_at(0) - r0);
    out.set_vec(1, out.vec_at(1) + r0);
    const Vec rn = (1.0 / l.back()) * reject(w.tanL, t.back());
    out.set_vec(n - 1, out.vec_at(n - 1) - rn);
    out.set_vec(n, out.vec_at(n) + rn);
    for (Index I = 0; I < n; ++I) {
        const Vec s = (w.strain.at(I) / l[static_cast<std::size_t>(I)]) * t[static_cast<std::size_t>(I)];
        out.set_vec(I, out.vec_at(I) - s);
        out.set_vec(I + 1, out.vec_at(I + 1) + s);
    }
    return out;
}

ConstraintValue constraint_hessian_apply(const Polygon& P, const Field& u, const Field& v) {
    check_displacement(P, u);
    check_displacement(P, v);
    auto t = tangents(P);
    auto l = edge_lengths(P);
    const Index n = P.edge_count();
    Field ydot = make_field(P.part, Support::Edge, 1);
    Vec w0 = Vec::zero(P.dim()), wn = Vec::zero(P.dim());
    for (Index I = 0; I < n; ++I) {
        const double li = l[static_cast<std::size_t>(I)];
        const Vec& tau = t[static_cast<std::size_t>(I)];
        Vec du = (1.0 / li) * (u.vec_at(I + 1) - u.vec_at(I));
        Vec dv = (1.0 / li) * (v.vec_at(I + 1) - v.vec_at(I));
        Vec pu = reject(du, tau);
        Vec pv = reject(dv, tau);
        ydot.at(I) = dot(du, dv) - 2.0 * dot(tau, du) * dot(tau, dv);
        if (I == 0 || I == n - 1) {
            Vec w = -dot(tau, dv) * pu - dot(tau, du) * pv - dot(pu, pv) * tau;
            if (I == 0) w0 = w;
            if (I == n - 1) wn = w;
        }
    }
    return ConstraintValue{Vec::zero(P.dim()), Vec::zero(P.dim()), w0, wn, std::move(ydot)};
}

// Normalized dual arc parameter per edge: s(I) = sum of dual lengths over
// interior vertices left of or at edge I, scaled so the last edge maps to 1.
static std::vector<double> normalized_profile(const Polygon& P, const std::vector<double>& l) {
    const Index n = P.edge_count();
    std::vector<double> s(static_cast<std::size_t>(n), 0.0);
    double acc = 0.0;
    for (Index I = 1; I < n; ++I) {
        acc += 0.5 * (l[static_cast<std::size_t>(I - 1)] + l[static_cast<std::size_t>(I)]);
        s[static_cast<std::size_t>(I)] = acc;
    }
    if (acc <= 0.0) throw UndefinedRequest("profile needs at least two edges");
    for (double& x : s) x /= acc;
    return s;
}

ThetaMatrix theta_matrix(const Polygon& P) {
    if (P.edge_count() < 2) throw UndefinedRequest("theta matrix needs at least two edges");
    auto t = tangents(P);
    auto l = edge_lengths(P);
    auto phi = normalized_profile(P, l);
    const int m = P.dim();
    Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(m, m);
    for (Index I = 0; I < P.edge_count(); ++I) {
        const double w = (1.0 - phi[static_cast<std::size_t>(I)]) * phi[static_cast<std::size_t>(I)] *
                         l[static_cast<std::size_t>(I)];
        if (w == 0.0) continue;
        const Vec& tau = t[static_cast<std::size_t>(I)];
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c)
                theta(r, c) += w * ((r == c ? 1.0 : 0.0) - tau[r] * tau[c]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(theta);
    const double lmin = es.eigenvalues().minCoeff();
    const double lmax = es.eigenvalues().maxCoeff();
    ThetaMatrix out;
    out.dim = m;
    out.entries.assign(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0.0);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
            out.entries[static_cast<std::size_t>(r * m + c)] = theta(r, c);
    out.condition = (lmin <= 0.0) ? std::numeric_limits<double>::infinity() : lmax / lmin;
    if (!(out.condition <= 1e12))
        throw SingularConfiguration("near-straight configuration: theta matrix ill-conditioned");
    return out;
}

Field right_inverse_apply(const Polygon& P, const ConstraintValue& w) {
    auto theta = theta_matrix(P);
    auto t = tangents(P);
    auto l = edge_lengths(P);
    auto phi = normalized_profile(P, l);
    const int m = P.dim();
    const Index n = P.edge_count();
    if (!w.strain.part.same_as(P.part) || w.strain.support != Support::Edge || w.strain.dim != 1)
        throw InvalidArgument("strain block does not match the polygon");

    const Vec U0 = w.pos0;
    const Vec U1 = w.posL;
    const Vec V0 = reject(w.tan0, t.front());
    const Vec V1 = reject(w.tanL, t.back());

    // b = U1 - U0 - sum of the V-independent edge increments.
    Vec b = U1 - U0;
    for (Index I = 0; I < n; ++I) {
        const double f = phi[static_cast<std::size_t>(I)];
        const Vec& tau = t[static_cast<std::size_t>(I)];
        Vec inc = w.strain.at(I) * tau +
                  reject((1.0 - f) * (1.0 - f) * V0 + f * f * V1, tau);
        b -= l[static_cast<std::size_t>(I)] * inc;
    }
    Eigen::MatrixXd Th(m, m);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) Th(r, c) = theta.entries[static_cast<std::size_t>(r * m + c)];
    Eigen::VectorXd rhs(m);
    for (int r = 0; r < m; ++r) rhs(r) = b[r];
    Eigen::VectorXd Vsol = Th.ldlt().solve(rhs);
    Vec V = Vec::zero(m);
    for (int r = 0; r < m; ++r) V[r] = Vsol(r);

    Field u = make_field(P.part, Support::Vertex, m);
    Vec cur = U0;
    u.set_vec(0, cur);
    for (Index I = 0; I < n; ++I) {
        const double f = phi[static_cast<std::size_t>(I)];
        const Vec& tau = t[static_cast<std::size_t>(I)];
        Vec inc = w.strain.at(I) * tau +
                  reject((1.0 - f) * (1.0 - f) * V0 + (1.0 - f) * f * V + f * f * V1, tau);
        cur += l[static_cast<std::size_t>(I)] * inc;
        u.set_vec(I + 1, cur);
    }
    return u;
}

double field_full_norm(const Field& f, int k, double p, const MetricWeights& w) {
    KahanSum s;
    for (int j = 0; j <= k; ++j) {
        try {
            s.add(discrete_norm(f, NormSpec::sobolev_semi(j, p), w));
        } catch (const UndefinedRequest&) {
            break;
        }
    }
    return s.value();
}

double constraint_norm(const ConstraintValue& cv, const MetricWeights& w,
                       const ConstraintNormSpec& spec) {
    double s = norm(cv.pos0) + norm(cv.posL) + norm(cv.tan0) + norm(cv.tanL);
    return s + field_full_norm(cv.strain, spec.k, spec.p, w);
}

TameReport tame_membership(const Polygon& P, const TameBounds& b) {
    auto w = induced_weights(P);
    TameReport rep;
    rep.strain_norm = field_full_norm(strain(P), b.k - 1, b.p, w);
    Field tau = make_field(P.part, Support::Edge, P.dim());
    auto t = tangents(P);
    for (Index I = 0; I < P.edge_count(); ++I) tau.set_vec(I, t[static_cast<std::size_t>(I)]);
    rep.tangent_norm = field_full_norm(tau, b.k - 1, b.p, w);
    const double chord = norm(P.at(P.vertex_count() - 1) - P.at(0));
    rep.length_ratio = chord == 0.0 ? std::numeric_limits<double>::infinity()
                                    : polygon_length(P) / chord;
    rep.in_set = rep.strain_norm <= b.strain_bound && rep.tangent_norm <= b.tangent_bound &&
                 rep.length_ratio >= 1.0 + b.eta;
    return rep;
}

RegularitySeminorms regularity_seminorms(const Polygon& P) {
    if (P.part.interior_vertex_count() < 1)
        throw UndefinedRequest("regularity seminorms need an interior vertex");
    auto w = induced_weights(P);
    Field kappa = curvature(P);
    RegularitySeminorms out;
    out.w2inf = discrete_norm(kappa, NormSpec::lp(std::numeric_limits<double>::infinity()), w);
    if (P.part.interior_vertex_count() < 2)
        throw UndefinedRequest("third-order seminorms need two interior vertices");
    Field dk = diff_v2e(kappa, w);
    KahanSum tv;
    for (Index I = dk.first(); I < dk.first() + dk.count(); ++I)
        tv.add(norm(dk.vec_at(I)) * w.edge[static_cast<std::size_t>(I)]);
    out.tv3 = tv.value();
    out.w3inf = discrete_norm(dk, NormSpec::lp(std::numeric_limits<double>::infinity()), w);
    return out;
}

double PolylineCurve::length() const {
    KahanSum s;
    for (std::size_t i = 0; i + 1 < pos.size(); ++i) s.add(norm(pos[i + 1] - pos[i]));
    return s.value();
}

static Index locate_edge(const Partition& part, double t) {
    if (t < 0.0 || t > part.length()) throw InvalidArgument("parameter outside [0, L]");
    const auto& v = part.vertices();
    auto it = std::upper_bound(v.begin(), v.end(), t);
    Index I = static_cast<Index>(it - v.begin()) - 1;
    return std::clamp<Index>(I, 0, part.edge_count() - 1);
}

Vec PolylineCurve::position(double t) const {
    const Index I = locate_edge(part, t);
    const double a = (t - part.vertex(I)) / part.edge_length(I);
    return (1.0 - a) * pos[static_cast<std::size_t>(I)] + a * pos[static_cast<std::size_t>(I + 1)];
}

Vec PolylineCurve::derivative(double t) const {
    const Index I = locate_edge(part, t);
    return (1.0 / part.edge_length(I)) *
           (pos[static_cast<std::size_t>(I + 1)] - pos[static_cast<std::size_t>(I)]);
}

PolylineCurve piecewise_linear_interpolant(const Polygon& P) {
    edge_lengths(P);  // immersion check
    return PolylineCurve{P.part, P.pos};
}

}  // namespace elastica
