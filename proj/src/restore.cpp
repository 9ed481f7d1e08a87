#include <cmath>
#include <memory>

#include <Eigen/Dense>

#include "elastica/metrics.hpp"
#include "elastica/transfer.hpp"

namespace elastica {

namespace {

void put_vec(Eigen::VectorXd& v, Eigen::Index at, const Vec& x) {
    for (int c = 0; c < x.n; ++c) v(at + c) = x[c];
}

Vec get_vec(const Eigen::VectorXd& v, Eigen::Index at, int m) {
    Vec x = Vec::zero(m);
    for (int c = 0; c < m; ++c) x[c] = v(at + c);
    return x;
}

}  // namespace

DiscreteRestoreResult restore_discrete(const Polygon& Pin, const BoundaryData& bd, double tol) {
    const int m = Pin.dim();
    if (m != bd.p0.n) throw InvalidArgument("boundary data dimension mismatch");
    const Index n = Pin.edge_count();
    const Partition part = Pin.part;
    const Eigen::Index dof = m * (n + 1) + 2;
    const Eigen::Index rng = 4 * m + n;

    auto unpack = [&](const Eigen::VectorXd& x) {
        std::vector<Vec> pos(static_cast<std::size_t>(n + 1));
        for (Index i = 0; i <= n; ++i) pos[static_cast<std::size_t>(i)] = get_vec(x, m * i, m);
        return make_polygon(part, std::move(pos));
    };
    auto unpack_field = [&](const Eigen::VectorXd& u) {
        Field f = make_field(part, Support::Vertex, m);
        for (Index i = 0; i <= n; ++i) f.set_vec(i, get_vec(u, m * i, m));
        return f;
    };

    NKProblem prob;
    prob.residual = [&, m, n](const Eigen::VectorXd& x) {
        Polygon P = unpack(x);
        const double z0 = x(dof - 2), z1 = x(dof - 1);
        auto tau = tangents(P);
        Field sig = strain(P);
        Eigen::VectorXd r(rng);
        put_vec(r, 0, P.at(0) - bd.p0);
        put_vec(r, m, P.at(n) - bd.pL);
        put_vec(r, 2 * m, std::exp(z0) * tau.front() - bd.N0);
        put_vec(r, 3 * m, std::exp(z1) * tau.back() - bd.NL);
        for (Index I = 0; I < n; ++I) r(4 * m + I) = sig.at(I, 0);
        return r;
    };
    prob.differential = [&, m, n](const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
        Polygon P = unpack(x);
        const double z0 = x(dof - 2), z1 = x(dof - 1);
        const double dz0 = u(dof - 2), dz1 = u(dof - 1);
        auto tau = tangents(P);
        auto cv = constraint_jacobian_apply(P, unpack_field(u));
        Eigen::VectorXd r(rng);
        put_vec(r, 0, cv.pos0);
        put_vec(r, m, cv.posL);
        put_vec(r, 2 * m, std::exp(z0) * (dz0 * tau.front() + cv.tan0));
        put_vec(r, 3 * m, std::exp(z1) * (dz1 * tau.back() + cv.tanL));
        for (Index I = 0; I < n; ++I) r(4 * m + I) = cv.strain.at(I, 0);
        return r;
    };
    prob.right_inverse = [&, m, n](const Eigen::VectorXd& x, const Eigen::VectorXd& w) {
        Polygon P = unpack(x);
        const double z0 = x(dof - 2), z1 = x(dof - 1);
        auto tau = tangents(P);
        Vec wt0 = get_vec(w, 2 * m, m);
        Vec wt1 = get_vec(w, 3 * m, m);
        ConstraintValue cv{get_vec(w, 0, m), get_vec(w, m, m), std::exp(-z0) * wt0,
                           std::exp(-z1) * wt1, make_field(part, Support::Edge, 1)};
        for (Index I = 0; I < n; ++I) cv.strain.at(I, 0) = w(4 * m + I);
        Field u = right_inverse_apply(P, cv);
        Eigen::VectorXd out(dof);
        for (Index i = 0; i <= n; ++i) put_vec(out, m * i, u.vec_at(i));
        out(dof - 2) = std::exp(-z0) * dot(tau.front(), wt0);
        out(dof - 1) = std::exp(-z1) * dot(tau.back(), wt1);
        return out;
    };

    DiscreteRestoreResult res{Pin, {}, 0, 0, 0, 0, 0, true};
    auto w = reference_weights(part);
    res.violation_tv2 = constraint_norm(constraint_map(Pin, bd), w);
    res.precondition_ok = res.violation_tv2 <= 0.1 * std::min(1.0, bd.eta());

    Eigen::VectorXd x0(dof);
    for (Index i = 0; i <= n; ++i) put_vec(x0, m * i, Pin.at(i));
    x0(dof - 2) = x0(dof - 1) = 0;
    auto [x, rep] = nk_solve(prob, x0, tol, 25);
    res.nk = rep;
    res.polygon = unpack(x);
    res.z0 = x(dof - 2);
    res.z1 = x(dof - 1);
    Field diff = make_field(part, Support::Vertex, m);
    for (Index i = 0; i <= n; ++i) diff.set_vec(i, res.polygon.at(i) - Pin.at(i));
    res.proximity_tv3 = field_full_norm(diff, 3, 1, w);
    res.energy_gap = std::abs(bending_energy(res.polygon) - bending_energy(Pin));
    return res;
}

SmoothRestoreResult restore_smooth(const ArcSpline& gin, const BoundaryData& bd, double tol) {
    const int m = gin.dim();
    if (m != bd.p0.n) throw InvalidArgument("boundary data dimension mismatch");
    if (std::abs(gin.length() - bd.L) > 1e-9 * std::max(1.0, bd.L))
        throw InvalidArgument("curve length must match the prescribed length");
    const std::vector<double> breaks = gin.breaks;
    const Index J = static_cast<Index>(breaks.size()) - 1;  // segments
    const Eigen::Index dof = m * (J + 1) + 2;
    const Eigen::Index rng = 3 * m;

    auto spline_of = [&](const Eigen::VectorXd& x) {
        std::vector<Vec> prog(static_cast<std::size_t>(J + 1));
        for (Index j = 0; j <= J; ++j) {
            Vec t = get_vec(x, m * j, m);
            prog[static_cast<std::size_t>(j)] = normalized(t);
        }
        return make_arcspline(bd.p0, breaks, std::move(prog));
    };
    auto residual_of = [&](const Eigen::VectorXd& x) {
        ArcSpline g = spline_of(x);
        const double z0 = x(dof - 2), z1 = x(dof - 1);
        Eigen::VectorXd r(rng);
        put_vec(r, 0, evaluate(g, g.length()).position - bd.pL);
        put_vec(r, m, std::exp(z0) * g.tangent.front() - bd.N0);
        put_vec(r, 2 * m, std::exp(z1) * g.tangent.back() - bd.NL);
        return r;
    };

    // Differential by a cached central-difference Jacobian of the boundary
    // blocks in the packed coordinates.
    struct Cache {
        Eigen::VectorXd x;
        Eigen::MatrixXd A;
        bool valid = false;
    };
    auto cache = std::make_shared<Cache>();
    auto jacobian_at = [&, cache](const Eigen::VectorXd& x) -> const Eigen::MatrixXd& {
        if (cache->valid && cache->x.size() == x.size() && cache->x == x) return cache->A;
        const double hstep = 1e-6;
        Eigen::MatrixXd A(rng, dof);
        Eigen::VectorXd xp = x, xm = x;
        for (Eigen::Index j = 0; j < dof; ++j) {
            xp(j) += hstep;
            xm(j) -= hstep;
            A.col(j) = (residual_of(xp) - residual_of(xm)) / (2 * hstep);
            xp(j) = x(j);
            xm(j) = x(j);
        }
        cache->x = x;
        cache->A = A;
        cache->valid = true;
        return cache->A;
    };

    NKProblem prob;
    prob.residual = residual_of;
    prob.differential = [jacobian_at](const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
        return Eigen::VectorXd(jacobian_at(x) * u);
    };
    prob.right_inverse = [&, m, jacobian_at](const Eigen::VectorXd& x,
                                             const Eigen::VectorXd& w) {
        const Eigen::MatrixXd& A = jacobian_at(x);
        // Preconditioner: the smooth right inverse evaluated at the current
        // spline, mapped to tangent-program coordinates.
        Eigen::VectorXd db = Eigen::VectorXd::Zero(dof);
        ArcSpline g = spline_of(x);
        const double z0 = x(dof - 2), z1 = x(dof - 1);
        Vec wt0 = get_vec(w, m, m);
        Vec wt1 = get_vec(w, 2 * m, m);
        try {
            SmoothTangentData data;
            data.U0 = Vec::zero(m);
            data.U1 = get_vec(w, 0, m);
            data.V0 = std::exp(-z0) * reject(wt0, g.tangent.front());
            data.V1 = std::exp(-z1) * reject(wt1, g.tangent.back());
            Vec V = smooth_right_inverse_weight(g, data);
            for (Index j = 0; j <= J; ++j) {
                Vec u, du;
                smooth_right_inverse_eval(g, data, V, breaks[static_cast<std::size_t>(j)], u, du);
                put_vec(db, m * j, reject(du, g.tangent[static_cast<std::size_t>(j)]));
            }
            db(dof - 2) = std::exp(-z0) * dot(g.tangent.front(), wt0);
            db(dof - 1) = std::exp(-z1) * dot(g.tangent.back(), wt1);
        } catch (const SingularConfiguration&) {
            db.setZero();  // fall back to the pure least-squares right inverse
        }
        Eigen::MatrixXd AAT = A * A.transpose();
        Eigen::LDLT<Eigen::MatrixXd> ldlt(AAT);
        if (ldlt.info() != Eigen::Success)
            throw SingularConfiguration("boundary sensitivity matrix is singular");
        Eigen::VectorXd corr = ldlt.solve(w - A * db);
        return Eigen::VectorXd(db + A.transpose() * corr);
    };
    prob.retract = [&, m](const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
        Eigen::VectorXd y = x + u;
        for (Index j = 0; j <= J; ++j) {
            Vec t = get_vec(y, m * j, m);
            put_vec(y, m * j, normalized(t));
        }
        return y;
    };

    // Violation of the original curve, endpoint anchored where it is.
    SmoothRestoreResult res{gin, {}, 0, 0, 0, 0, true};
    {
        Vec d0 = evaluate(gin, 0).position - bd.p0;
        Vec dL = evaluate(gin, gin.length()).position - bd.pL;
        res.violation = norm(d0) + norm(dL) + norm(gin.tangent.front() - bd.N0) +
                        norm(gin.tangent.back() - bd.NL);
        res.precondition_ok = res.violation <= 0.1;
    }

    Eigen::VectorXd x0(dof);
    for (Index j = 0; j <= J; ++j) put_vec(x0, m * j, gin.tangent[static_cast<std::size_t>(j)]);
    x0(dof - 2) = x0(dof - 1) = 0;
    auto [x, rep] = nk_solve(prob, x0, tol, 25);
    res.nk = rep;
    res.curve = spline_of(x);
    res.z0 = x(dof - 2);
    res.z1 = x(dof - 1);
    res.proximity_w2inf = dist_w2inf(metric_curve(gin), metric_curve(res.curve));
    return res;
}

}  // namespace elastica
