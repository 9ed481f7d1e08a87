#include "elastica/reference.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <memory>

#include "elastica/parallel.hpp"
#include "elastica/quadrature.hpp"

namespace elastica {

namespace {

const double kPi = std::acos(-1.0);

void check_modulus(double k) {
    if (!(k >= 0.0 && k <= 1.0)) throw InvalidArgument("elliptic modulus must lie in [0, 1]");
}

// Descending-Landen amplitude ladder. phi0 is the continuous amplitude
// am(u, k); phi1 feeds the dn ratio formula.
struct AmLadder {
    double phi0 = 0;
    double phi1 = 0;
    int levels = 0;
};

AmLadder landen_amplitude(double u, double k) {
    double a[20], c[20];
    double an = 1.0;
    double bn = std::sqrt((1.0 - k) * (1.0 + k));
    a[0] = an;
    c[0] = k;
    int N = 0;
    while (c[N] > 1e-16 && N < 18) {
        const double an1 = 0.5 * (an + bn);
        const double bn1 = std::sqrt(an * bn);
        ++N;
        c[N] = 0.5 * (an - bn);
        an = an1;
        bn = bn1;
        a[N] = an;
    }
    AmLadder out;
    out.levels = N;
    double phi = std::ldexp(an, N) * u;
    out.phi1 = phi;
    for (int n = N; n >= 1; --n) {
        const double t = std::clamp(c[n] / a[n] * std::sin(phi), -1.0, 1.0);
        const double prev = 0.5 * (phi + std::asin(t));
        if (n == 1) out.phi1 = phi;
        phi = prev;
    }
    out.phi0 = phi;
    return out;
}

double wrap_angle(double x) {
    return x - 2.0 * kPi * std::round(x / (2.0 * kPi));
}

}  // namespace

JacobiValues jacobi_sn_cn_dn(double u, double k) {
    check_modulus(k);
    if (!std::isfinite(u)) throw InvalidArgument("elliptic argument must be finite");
    if (k < 1e-12) return {std::sin(u), std::cos(u), 1.0};
    if (1.0 - k < 1e-12) {
        const double sech = 1.0 / std::cosh(u);
        return {std::tanh(u), sech, sech};
    }
    const AmLadder am = landen_amplitude(u, k);
    JacobiValues v;
    v.sn = std::sin(am.phi0);
    v.cn = std::cos(am.phi0);
    const double denom = std::cos(am.phi1 - am.phi0);
    v.dn = (am.levels >= 1 && std::abs(denom) > 1e-8)
               ? v.cn / denom
               : std::sqrt(std::max(0.0, 1.0 - k * k * v.sn * v.sn));
    return v;
}

double jacobi_am(double u, double k) {
    check_modulus(k);
    if (!std::isfinite(u)) throw InvalidArgument("elliptic argument must be finite");
    if (k < 1e-12) return u;
    if (1.0 - k < 1e-12) return std::asin(std::tanh(u));  // Gudermannian
    return landen_amplitude(u, k).phi0;
}

double complete_K(double k) {
    check_modulus(k);
    if (1.0 - k < 1e-15)
        throw InvalidArgument("complete elliptic integral diverges at modulus 1");
    double a = 1.0;
    double b = std::sqrt((1.0 - k) * (1.0 + k));
    for (int it = 0; it < 40 && a - b > 4e-16 * a; ++it) {
        const double a1 = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = a1;
    }
    return kPi / (2.0 * a);
}

namespace {

void check_params(const EllipticParams& p) {
    check_modulus(p.k);
    if (!(p.omega > 0)) throw InvalidArgument("elliptic frequency must be positive");
    if (p.sign != 1 && p.sign != -1) throw InvalidArgument("orientation sign must be +-1");
}

double theta_raw(const EllipticParams& p, double s) {
    const double u = p.omega * (s - p.s0);
    if (p.family == EllipticParams::Family::wavelike) {
        const double sn = jacobi_sn_cn_dn(u, p.k).sn;
        return p.rotation + p.sign * 2.0 * std::asin(std::clamp(p.k * sn, -1.0, 1.0));
    }
    return p.rotation + p.sign * 2.0 * jacobi_am(u, p.k);
}

double kappa_raw(const EllipticParams& p, double s) {
    const double u = p.omega * (s - p.s0);
    const JacobiValues j = jacobi_sn_cn_dn(u, p.k);
    if (p.family == EllipticParams::Family::wavelike) return p.sign * 2.0 * p.k * p.omega * j.cn;
    return p.sign * 2.0 * p.omega * j.dn;
}

}  // namespace

double elastica_theta(const EllipticParams& p, double s) {
    check_params(p);
    return theta_raw(p, s);
}

double elastica_kappa(const EllipticParams& p, double s) {
    check_params(p);
    return kappa_raw(p, s);
}

DenseCurve elastica_curve(const EllipticParams& p, double length, int npoints) {
    check_params(p);
    if (!(length > 0)) throw InvalidArgument("curve length must be positive");
    if (npoints < 2) throw InvalidArgument("dense curve needs at least two samples");
    const Vec start = p.translation.dim() == 2 ? p.translation : Vec(0, 0);

    DenseCurve c;
    c.length = length;
    const std::size_t n = static_cast<std::size_t>(npoints);
    c.s.resize(n);
    c.pos.resize(n);
    c.tan.resize(n);
    c.kappa.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        c.s[i] = length * static_cast<double>(i) / static_cast<double>(n - 1);

    par::for_each(static_cast<Index>(n), [&](Index i) {
        const std::size_t j = static_cast<std::size_t>(i);
        const double th = theta_raw(p, c.s[j]);
        c.tan[j] = Vec(std::cos(th), std::sin(th));
        c.kappa[j] = kappa_raw(p, c.s[j]);
    });

    // Cumulative positions: one Gauss panel per sample interval, summed in
    // order so the tabulation is deterministic.
    KahanSum x, y, en;
    c.pos[0] = start;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        quad::visit(c.s[i], c.s[i + 1], 1, [&](double t, double w) {
            const double th = theta_raw(p, t);
            x.add(w * std::cos(th));
            y.add(w * std::sin(th));
            const double ka = kappa_raw(p, t);
            en.add(0.5 * w * ka * ka);
        });
        c.pos[i + 1] = start + Vec(x.value(), y.value());
    }
    c.energy = en.value();
    return c;
}

CurvePoint evaluate_dense(const DenseCurve& c, double t) {
    const std::size_t n = c.s.size();
    if (n < 2) throw InvalidArgument("dense curve is empty");
    if (t < -1e-12 * c.length || t > c.length * (1.0 + 1e-12))
        throw InvalidArgument("evaluation parameter outside the curve domain");
    t = std::clamp(t, 0.0, c.length);
    const double dt = c.length / static_cast<double>(n - 1);
    std::size_t i = static_cast<std::size_t>(std::min<double>(
        std::floor(t / dt), static_cast<double>(n - 2)));
    const double u = (t - c.s[i]) / dt;
    const double u2 = u * u, u3 = u2 * u;
    const double h00 = 2 * u3 - 3 * u2 + 1, h10 = u3 - 2 * u2 + u;
    const double h01 = -2 * u3 + 3 * u2, h11 = u3 - u2;
    const double g00 = (6 * u2 - 6 * u) / dt, g10 = 3 * u2 - 4 * u + 1;
    const double g01 = (-6 * u2 + 6 * u) / dt, g11 = 3 * u2 - 2 * u;

    CurvePoint out;
    out.position = h00 * c.pos[i] + (h10 * dt) * c.tan[i] + h01 * c.pos[i + 1] +
                   (h11 * dt) * c.tan[i + 1];
    Vec vel = g00 * c.pos[i] + g10 * c.tan[i] + g01 * c.pos[i + 1] + g11 * c.tan[i + 1];
    const double vn = norm(vel);
    out.tangent = vn > 1e-14 ? (1.0 / vn) * vel : c.tan[i];
    const double ka = (1 - u) * c.kappa[i] + u * c.kappa[i + 1];
    out.curvature = ka * Vec(-out.tangent[1], out.tangent[0]);
    return out;
}

MetricCurve metric_curve(const DenseCurve& c) {
    auto held = std::make_shared<DenseCurve>(c);
    MetricCurve m;
    m.length = held->length;
    m.breaks = {0.0, held->length};
    m.eval = [held](double t) { return evaluate_dense(*held, t); };
    double kmax = 0, dkmax = 0;
    for (std::size_t i = 0; i < held->kappa.size(); ++i) {
        kmax = std::max(kmax, std::abs(held->kappa[i]));
        if (i + 1 < held->kappa.size()) {
            const double dt = held->s[i + 1] - held->s[i];
            dkmax = std::max(dkmax, std::abs(held->kappa[i + 1] - held->kappa[i]) / dt);
        }
    }
    m.curvature_bound = kmax;
    m.curvature_deriv_bound = 2.0 * dkmax + 1e-9;
    m.has_curvature = true;
    return m;
}

OdeResidual elastica_ode_residual(const DenseCurve& c, std::optional<Vec> mu) {
    const std::size_t n = c.s.size();
    if (n < 5) throw InvalidArgument("tangent ODE residual needs at least five samples");
    const double dt = c.s[1] - c.s[0];
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (std::abs((c.s[i + 1] - c.s[i]) - dt) > 1e-9 * std::max(1.0, c.length))
            throw InvalidArgument("tangent ODE residual expects uniform samples");
    const int m = c.tan[0].dim();

    std::vector<Vec> b(n);
    std::vector<Vec> tau(c.tan);
    // Projected stencil data at interior samples: b = tau'' + tau |tau'|^2.
    auto stencil = [&](std::size_t i) {
        const Vec& t2m = tau[i - 2];
        const Vec& t1m = tau[i - 1];
        const Vec& t0 = tau[i];
        const Vec& t1p = tau[i + 1];
        const Vec& t2p = tau[i + 2];
        Vec dd = (1.0 / (12 * dt * dt)) *
                 (-1.0 * t2m + 16.0 * t1m - 30.0 * t0 + 16.0 * t1p - 1.0 * t2p);
        Vec d1 = (1.0 / (12 * dt)) * (t2m - 8.0 * t1m + 8.0 * t1p - t2p);
        return dd + dot(d1, d1) * t0;
    };

    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (std::size_t i = 2; i + 2 < n; ++i) {
        b[i] = stencil(i);
        if (mu) continue;
        Eigen::VectorXd tv(m), bv(m);
        for (int d = 0; d < m; ++d) {
            tv(d) = tau[i][d];
            bv(d) = b[i][d];
        }
        const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m, m) - tv * tv.transpose();
        S += A;
        rhs += A * bv;
    }

    Vec fitted = Vec::zero(m);
    if (mu) {
        fitted = *mu;
    } else {
        // Projections can share a common kernel (straight lines), so solve
        // through the spectral pseudo-inverse.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
        const Eigen::VectorXd ev = es.eigenvalues();
        const double cut = 1e-12 * std::max(ev.cwiseAbs().maxCoeff(), 1.0);
        Eigen::VectorXd y = es.eigenvectors().transpose() * rhs;
        for (int d = 0; d < m; ++d) y(d) = std::abs(ev(d)) > cut ? y(d) / ev(d) : 0.0;
        const Eigen::VectorXd sol = es.eigenvectors() * y;
        for (int d = 0; d < m; ++d) fitted[d] = sol(d);
    }

    double worst = 0;
    for (std::size_t i = 2; i + 2 < n; ++i) {
        Vec res = b[i] - (fitted - dot(tau[i], fitted) * tau[i]);
        worst = std::max(worst, norm(res));
    }
    return {worst, fitted};
}

namespace {

// Boundary residual of an elliptic program against planar clamped data:
// start position, end position, and the two wrapped tangent angles.
struct ShotContext {
    Vec p0, pL;
    double ang0 = 0, angL = 0;
    double L = 0;
};

EllipticParams unpack_shot(const Eigen::VectorXd& x, EllipticParams::Family fam, int sign) {
    EllipticParams p;
    p.family = fam;
    p.sign = sign;
    p.k = std::clamp(x(0), 0.0, 0.999999);
    p.omega = std::clamp(x(1), 1e-8, 1e4);
    p.s0 = x(2);
    p.rotation = x(3);
    p.translation = Vec(x(4), x(5));
    return p;
}

double program_energy(const EllipticParams& p, double L) {
    const int panels = std::clamp(static_cast<int>(4.0 * p.omega * L), 96, 4096);
    return quad::composite(0.0, L, panels, [&](double t) {
        const double ka = kappa_raw(p, t);
        return 0.5 * ka * ka;
    });
}

Eigen::VectorXd shot_residual(const ShotContext& ctx, const EllipticParams& p) {
    const int panels =
        std::clamp(static_cast<int>(4.0 * p.omega * ctx.L), 128, 8192);
    KahanSum x, y;
    quad::visit(0.0, ctx.L, panels, [&](double t, double w) {
        const double th = theta_raw(p, t);
        x.add(w * std::cos(th));
        y.add(w * std::sin(th));
    });
    Eigen::VectorXd r(6);
    r(0) = p.translation[0] - ctx.p0[0];
    r(1) = p.translation[1] - ctx.p0[1];
    r(2) = p.translation[0] + x.value() - ctx.pL[0];
    r(3) = p.translation[1] + y.value() - ctx.pL[1];
    r(4) = wrap_angle(theta_raw(p, 0.0) - ctx.ang0);
    r(5) = wrap_angle(theta_raw(p, ctx.L) - ctx.angL);
    return r;
}

struct ShotCandidate {
    Eigen::VectorXd x;
    EllipticParams::Family family = EllipticParams::Family::wavelike;
    int sign = 1;
    double residual = 0;
    double energy = 0;
};

// Levenberg-damped Gauss-Newton on the six boundary equations.
void refine_candidate(const ShotContext& ctx, ShotCandidate& cand) {
    Eigen::VectorXd x = cand.x;
    auto eval = [&](const Eigen::VectorXd& v) {
        return shot_residual(ctx, unpack_shot(v, cand.family, cand.sign));
    };
    Eigen::VectorXd r = eval(x);
    double rn = r.norm();
    double lambda = 1e-3;
    for (int it = 0; it < 50 && rn > 1e-13; ++it) {
        Eigen::MatrixXd J(6, 6);
        for (int j = 0; j < 6; ++j) {
            const double h = 1e-6 * std::max(1.0, std::abs(x(j)));
            Eigen::VectorXd xp = x, xm = x;
            xp(j) += h;
            xm(j) -= h;
            J.col(j) = (eval(xp) - eval(xm)) / (2 * h);
        }
        const Eigen::MatrixXd JtJ = J.transpose() * J;
        const Eigen::VectorXd g = J.transpose() * r;
        bool stepped = false;
        for (int inner = 0; inner < 10; ++inner) {
            Eigen::MatrixXd M = JtJ + lambda * Eigen::MatrixXd::Identity(6, 6);
            Eigen::VectorXd d = M.ldlt().solve(-g);
            Eigen::VectorXd xt = x + d;
            Eigen::VectorXd rt = eval(xt);
            if (rt.norm() < rn) {
                x = xt;
                r = rt;
                rn = rt.norm();
                lambda = std::max(lambda / 3.0, 1e-12);
                stepped = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!stepped) break;
    }
    cand.x = x;
    cand.residual = rn;
}

std::vector<ShotCandidate> family_starts(const ShotContext& ctx, EllipticParams::Family fam) {
    std::vector<ShotCandidate> starts;
    const bool wave = fam == EllipticParams::Family::wavelike;
    const std::vector<double> ks =
        wave ? std::vector<double>{0.05, 0.15, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75, 0.85, 0.95}
             : std::vector<double>{0.0, 0.15, 0.3, 0.45, 0.6, 0.75, 0.9};
    const std::vector<double> cycles =
        wave ? std::vector<double>{0.25, 0.5, 0.75, 1.0, 1.5, 2.0}
             : std::vector<double>{0.125, 0.25, 0.5, 1.0, 1.5, 2.0};
    const std::vector<double> phases =
        wave ? std::vector<double>{0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875}
             : std::vector<double>{0.0, 0.25, 0.5, 0.75};
    const std::vector<int> signs = wave ? std::vector<int>{1} : std::vector<int>{1, -1};

    for (double k : ks)
        for (double cyc : cycles)
            for (double ph : phases)
                for (int sg : signs) {
                    const double K = complete_K(k);
                    const double period = (wave ? 4.0 : 2.0) * K;
                    const double omega = period * cyc / ctx.L;
                    const double s0 = ph * period / omega;
                    ShotCandidate c;
                    c.family = fam;
                    c.sign = sg;
                    c.x = Eigen::VectorXd(6);
                    c.x << k, omega, s0, 0.0, ctx.p0[0], ctx.p0[1];
                    // Align the start tangent exactly; the residual then
                    // measures only the far end.
                    EllipticParams p = unpack_shot(c.x, fam, sg);
                    c.x(3) = ctx.ang0 - wrap_angle(theta_raw(p, 0.0));
                    starts.push_back(std::move(c));
                }
    return starts;
}

ShotCandidate best_of_family(const ShotContext& ctx, EllipticParams::Family fam) {
    std::vector<ShotCandidate> starts = family_starts(ctx, fam);
    std::vector<double> score(starts.size());
    par::for_each(static_cast<Index>(starts.size()), [&](Index i) {
        const auto& c = starts[static_cast<std::size_t>(i)];
        score[static_cast<std::size_t>(i)] =
            shot_residual(ctx, unpack_shot(c.x, c.family, c.sign)).norm();
    });
    std::vector<std::size_t> order(starts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return score[a] != score[b] ? score[a] < score[b] : a < b;
    });
    const std::size_t keep = std::min<std::size_t>(8, order.size());
    std::vector<ShotCandidate> top;
    for (std::size_t i = 0; i < keep; ++i) top.push_back(starts[order[i]]);
    par::for_each(static_cast<Index>(top.size()), [&](Index i) {
        auto& cand = top[static_cast<std::size_t>(i)];
        refine_candidate(ctx, cand);
        cand.energy = program_energy(unpack_shot(cand.x, cand.family, cand.sign), ctx.L);
    });
    // Among converged branches prefer least bending energy; otherwise fall
    // back to least boundary residual.
    std::size_t best = 0;
    auto better = [](const ShotCandidate& a, const ShotCandidate& b) {
        const bool ca = a.residual <= 1e-8, cb = b.residual <= 1e-8;
        if (ca != cb) return ca;
        return ca ? a.energy < b.energy : a.residual < b.residual;
    };
    for (std::size_t i = 1; i < top.size(); ++i)
        if (better(top[i], top[best])) best = i;
    return top[best];
}

}  // namespace

ShootingResult shoot_clamped_elastica(const BoundaryData& bd, int npoints) {
    if (bd.p0.dim() != 2)
        throw UnsupportedDimension("analytic elastica shooting is planar only");
    ShotContext ctx;
    ctx.p0 = bd.p0;
    ctx.pL = bd.pL;
    ctx.ang0 = std::atan2(bd.N0[1], bd.N0[0]);
    ctx.angL = std::atan2(bd.NL[1], bd.NL[0]);
    ctx.L = bd.L;

    ShotCandidate best = best_of_family(ctx, EllipticParams::Family::wavelike);
    ShotCandidate orbit = best_of_family(ctx, EllipticParams::Family::orbitlike);
    const bool bc = best.residual <= 1e-8, oc = orbit.residual <= 1e-8;
    if ((oc && !bc) || (oc == bc && (oc ? orbit.energy < best.energy
                                        : orbit.residual < best.residual)))
        best = orbit;

    ShootingResult out;
    out.params = unpack_shot(best.x, best.family, best.sign);
    out.curve = elastica_curve(out.params, ctx.L, npoints);
    // Re-measure the boundary residual on the tabulated curve itself.
    Eigen::VectorXd r(6);
    r(0) = out.curve.pos.front()[0] - ctx.p0[0];
    r(1) = out.curve.pos.front()[1] - ctx.p0[1];
    r(2) = out.curve.pos.back()[0] - ctx.pL[0];
    r(3) = out.curve.pos.back()[1] - ctx.pL[1];
    r(4) = wrap_angle(theta_raw(out.params, 0.0) - ctx.ang0);
    r(5) = wrap_angle(theta_raw(out.params, ctx.L) - ctx.angL);
    out.boundary_residual = r.norm();
    out.converged = out.boundary_residual <= 1e-8;
    return out;
}

}  // namespace elastica
