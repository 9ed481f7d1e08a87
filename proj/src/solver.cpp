#include "elastica/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <random>

#include "elastica/quadrature.hpp"

namespace elastica {

namespace {

const double kPi = std::acos(-1.0);

double field_dot(const Field& a, const Field& b) {
    KahanSum s;
    for (std::size_t i = 0; i < a.data.size(); ++i) s.add(a.data[i] * b.data[i]);
    return s.value();
}

double field_max_vec(const Field& f) {
    double m = 0;
    for (Index i = f.first(); i < f.first() + f.count(); ++i) m = std::max(m, norm(f.vec_at(i)));
    return m;
}

double max_turning_angle(const Polygon& P) {
    if (P.edge_count() < 2) return 0.0;
    const Field alpha = turning_angles(P);
    double m = 0;
    for (double a : alpha.data) m = std::max(m, a);
    return m;
}

double feasibility_max(const Polygon& P, const BoundaryData& bd) {
    const ConstraintValue cv = constraint_map(P, bd);
    double m = std::max(std::max(norm(cv.pos0), norm(cv.posL)),
                        std::max(norm(cv.tan0), norm(cv.tanL)));
    for (double s : cv.strain.data) m = std::max(m, std::abs(s));
    return m;
}

// Kernel direction -(I - B_P DPhi) grad E built from the constraint right
// inverse. The complement range(B_P) is oblique, so this vector neither
// vanishes at minimizers nor is guaranteed downhill; callers pair it with the
// orthogonal kernel projection below.
Field oblique_direction(const Polygon& P, const Field& grad) {
    const ConstraintValue dphi = constraint_jacobian_apply(P, grad);
    const Field lifted = right_inverse_apply(P, dphi);
    Field d = grad;
    for (std::size_t i = 0; i < d.data.size(); ++i)
        d.data[i] = -(grad.data[i] - lifted.data[i]);
    return d;
}

Polygon displaced(const Polygon& P, const Field& d, double t) {
    std::vector<Vec> pos = P.pos;
    for (Index i = 0; i < P.vertex_count(); ++i) pos[static_cast<std::size_t>(i)] += t * d.vec_at(i);
    return make_polygon(P.part, std::move(pos));
}

Eigen::VectorXd flatten_positions(const Polygon& P) {
    const int m = P.dim();
    Eigen::VectorXd x(P.vertex_count() * m);
    for (Index i = 0; i < P.vertex_count(); ++i)
        for (int c = 0; c < m; ++c) x(i * m + c) = P.at(i)[c];
    return x;
}

Eigen::VectorXd flatten_field(const Field& f) {
    return Eigen::Map<const Eigen::VectorXd>(f.data.data(),
                                             static_cast<Eigen::Index>(f.data.size()));
}

// Constraint-target layout [pos0, posL, tan0, tanL, strain] used by the
// multiplier recovery.
Eigen::VectorXd flatten_cv(const ConstraintValue& cv, int m, Index n) {
    Eigen::VectorXd v(4 * m + n);
    for (int c = 0; c < m; ++c) {
        v(c) = cv.pos0[c];
        v(m + c) = cv.posL[c];
        v(2 * m + c) = cv.tan0[c];
        v(3 * m + c) = cv.tanL[c];
    }
    for (Index I = 0; I < n; ++I) v(4 * m + I) = cv.strain.at(I, 0);
    return v;
}

// Constraint jacobian as a dense matrix, one column per vertex coordinate.
Eigen::MatrixXd assemble_jacobian(const Polygon& P) {
    const int m = P.dim();
    const Index n = P.edge_count();
    const Index cols = (n + 1) * m;
    Eigen::MatrixXd J(4 * m + n, cols);
    Field e = make_field(P.part, Support::Vertex, m);
    for (Index col = 0; col < cols; ++col) {
        e.data[static_cast<std::size_t>(col)] = 1.0;
        J.col(col) = flatten_cv(constraint_jacobian_apply(P, e), m, n);
        e.data[static_cast<std::size_t>(col)] = 0.0;
    }
    return J;
}

// Orthogonal projection of grad E onto ker DPhi: the Riesz projected
// gradient. Zero exactly at constrained critical points, so it carries the
// stopping criterion.
Field orth_projected_gradient(const Field& grad, const Eigen::MatrixXd& J) {
    const Eigen::VectorXd g = flatten_field(grad);
    const Eigen::VectorXd eta = (J * J.transpose()).ldlt().solve(J * g);
    const Eigen::VectorXd pg = g - J.transpose() * eta;
    Field out = grad;
    for (std::size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = pg(static_cast<Eigen::Index>(i));
    return out;
}

// Damped Newton on the stationarity system [grad E + DPhi^T chi; Phi].
// The unit-tangent rows of DPhi only act perpendicular to the clamped
// directions, so those constraints are expressed in an orthonormal basis of
// N0-perp and NL-perp; that keeps the bordered matrix nonsingular. Used as an
// endgame once descent reaches the Newton basin, where first-order steps
// stall at the floating-point floor of the energy.
bool newton_kkt_polish(Polygon& P, const BoundaryData& bd, double tol, int max_iter) {
    const int m = P.dim();
    const Index n = P.edge_count();
    const Index N = (n + 1) * m;
    const Index R = 2 * m + 2 * (m - 1) + n;

    // orthonormal bases of the planes perpendicular to the clamped tangents
    const auto perp_basis = [m](const Vec& t) {
        std::vector<Vec> b;
        int weakest = 0;
        for (int c = 1; c < m; ++c)
            if (std::abs(t[c]) < std::abs(t[weakest])) weakest = c;
        Vec e = Vec::zero(m);
        e[weakest] = 1.0;
        Vec b1 = reject(e, t);
        b1 = (1.0 / norm(b1)) * b1;
        b.push_back(b1);
        if (m == 3)
            b.push_back(Vec(t[1] * b1[2] - t[2] * b1[1], t[2] * b1[0] - t[0] * b1[2],
                            t[0] * b1[1] - t[1] * b1[0]));
        return b;
    };
    const std::vector<Vec> b0 = perp_basis(bd.N0), bL = perp_basis(bd.NL);

    const auto reduce_cv = [&](const ConstraintValue& cv) {
        Eigen::VectorXd v(R);
        for (int c = 0; c < m; ++c) {
            v(c) = cv.pos0[c];
            v(m + c) = cv.posL[c];
        }
        for (int k = 0; k < m - 1; ++k) {
            v(2 * m + k) = dot(b0[static_cast<std::size_t>(k)], cv.tan0);
            v(2 * m + (m - 1) + k) = dot(bL[static_cast<std::size_t>(k)], cv.tanL);
        }
        for (Index I = 0; I < n; ++I) v(2 * m + 2 * (m - 1) + I) = cv.strain.at(I);
        return v;
    };
    const auto expand_chi = [&](const Eigen::VectorXd& chi, const Partition& part) {
        ConstraintValue cv{Vec::zero(m), Vec::zero(m), Vec::zero(m), Vec::zero(m),
                           make_field(part, Support::Edge, 1)};
        for (int c = 0; c < m; ++c) {
            cv.pos0[c] = chi(c);
            cv.posL[c] = chi(m + c);
        }
        for (int k = 0; k < m - 1; ++k) {
            cv.tan0 += chi(2 * m + k) * b0[static_cast<std::size_t>(k)];
            cv.tanL += chi(2 * m + (m - 1) + k) * bL[static_cast<std::size_t>(k)];
        }
        for (Index I = 0; I < n; ++I) cv.strain.at(I) = chi(2 * m + 2 * (m - 1) + I);
        return cv;
    };

    auto from_x = [&](const Eigen::VectorXd& xv) {
        std::vector<Vec> pos(static_cast<std::size_t>(n + 1), Vec(m));
        for (Index i = 0; i <= n; ++i)
            for (int c = 0; c < m; ++c) pos[static_cast<std::size_t>(i)][c] = xv(i * m + c);
        return make_polygon(P.part, std::move(pos));
    };
    auto top_block = [&](const Polygon& Q, const Eigen::VectorXd& chi) {
        const Field adj = constraint_jacobian_adjoint(Q, expand_chi(chi, Q.part));
        Eigen::VectorXd v = flatten_field(bending_energy_gradient(Q));
        for (std::size_t i = 0; i < adj.data.size(); ++i)
            v(static_cast<Eigen::Index>(i)) += adj.data[i];
        return v;
    };
    auto full_residual = [&](const Polygon& Q, const Eigen::VectorXd& chi) {
        Eigen::VectorXd F(N + R);
        F.head(N) = top_block(Q, chi);
        F.tail(R) = reduce_cv(constraint_map(Q, bd));
        return F;
    };
    auto reduced_jacobian = [&](const Polygon& Q) {
        Eigen::MatrixXd J(R, N);
        Field e = make_field(Q.part, Support::Vertex, m);
        for (Index col = 0; col < N; ++col) {
            e.data[static_cast<std::size_t>(col)] = 1.0;
            J.col(col) = reduce_cv(constraint_jacobian_apply(Q, e));
            e.data[static_cast<std::size_t>(col)] = 0.0;
        }
        return J;
    };

    Eigen::VectorXd x = flatten_positions(P);
    Eigen::MatrixXd J = reduced_jacobian(P);
    const Eigen::VectorXd g = flatten_field(bending_energy_gradient(P));
    Eigen::VectorXd chi = -(J * J.transpose()).ldlt().solve(J * g);

    Polygon Q = P;
    Eigen::VectorXd F = full_residual(Q, chi);
    double fn = F.lpNorm<Eigen::Infinity>();
    const bool dbg = std::getenv("ELASTICA_SOLVER_DEBUG") != nullptr;

    for (int iter = 0; iter < max_iter && fn > tol; ++iter) {
        Eigen::MatrixXd K = Eigen::MatrixXd::Zero(N + R, N + R);
        J = reduced_jacobian(Q);
        K.block(0, N, N, R) = J.transpose();
        K.block(N, 0, R, N) = J;
        const Eigen::VectorXd top0 = F.head(N);
        for (Index j = 0; j < N; ++j) {
            const double h = 1e-7 * (1.0 + std::abs(x(j)));
            Eigen::VectorXd xp = x;
            xp(j) += h;
            K.block(0, j, N, 1) = (top_block(from_x(xp), chi) - top0) / h;
        }
        const Eigen::VectorXd step = Eigen::PartialPivLU<Eigen::MatrixXd>(K).solve(-F);
        if (!step.allFinite()) return false;
        if (dbg)
            std::fprintf(stderr, "[polish] iter=%d fn=%.3e (top=%.2e phi=%.2e) step=%.3e\n", iter,
                         fn, F.head(N).lpNorm<Eigen::Infinity>(),
                         F.tail(R).lpNorm<Eigen::Infinity>(), step.norm());

        double lam = 1.0;
        bool ok = false;
        for (int k = 0; k < 25; ++k, lam *= 0.5) {
            try {
                const Eigen::VectorXd xt = x + lam * step.head(N);
                const Eigen::VectorXd ct = chi + lam * step.tail(R);
                Polygon Qt = from_x(xt);
                const Eigen::VectorXd Ft = full_residual(Qt, ct);
                const double fnt = Ft.lpNorm<Eigen::Infinity>();
                if (fnt < fn * (1.0 - 1e-4 * lam) || fnt <= tol) {
                    x = xt;
                    chi = ct;
                    Q = std::move(Qt);
                    F = Ft;
                    fn = fnt;
                    ok = true;
                    break;
                }
            } catch (const Error&) {
                // fold-backs or coincident vertices at full step: damp harder
            }
        }
        if (!ok) {
            if (dbg) std::fprintf(stderr, "[polish] damping failed at fn=%.3e\n", fn);
            return false;
        }
    }
    if (fn > tol) {
        if (dbg) std::fprintf(stderr, "[polish] out of iterations fn=%.3e tol=%.3e\n", fn, tol);
        return false;
    }
    P = std::move(Q);
    return true;
}




ConstraintValue basis_cv(const Partition& part, int m, Index j) {
    ConstraintValue cv{Vec::zero(m), Vec::zero(m), Vec::zero(m), Vec::zero(m),
                       make_field(part, Support::Edge, 1)};
    if (j < 4 * m) {
        const int block = static_cast<int>(j) / m;
        const int c = static_cast<int>(j) % m;
        if (block == 0) cv.pos0[c] = 1.0;
        else if (block == 1) cv.posL[c] = 1.0;
        else if (block == 2) cv.tan0[c] = 1.0;
        else cv.tanL[c] = 1.0;
    } else {
        cv.strain.at(j - 4 * m, 0) = 1.0;
    }
    return cv;
}

}  // namespace

KKTReport lagrange_multipliers(const Polygon& P, const BoundaryData& bd) {
    const int m = P.dim();
    const Index n = P.edge_count();
    const Index target = 4 * m + n;

    const Field grad = bending_energy_gradient(P);
    const Field pg = orth_projected_gradient(grad, assemble_jacobian(P));

    // chi = -(B_P)^T grad, one right-inverse column per target coordinate.
    Eigen::VectorXd chi(target);
    for (Index j = 0; j < target; ++j) {
        const Field u = right_inverse_apply(P, basis_cv(P.part, m, j));
        chi(j) = -field_dot(grad, u);
    }

    // Stationarity defect grad E + (DPhi)^T chi, assembled through the
    // jacobian columns over position basis vectors.
    double worst = 0;
    Field e = make_field(P.part, Support::Vertex, m);
    for (Index i = 0; i < P.vertex_count(); ++i)
        for (int c = 0; c < m; ++c) {
            e.at(i, c) = 1.0;
            const Eigen::VectorXd col = flatten_cv(constraint_jacobian_apply(P, e), m, n);
            worst = std::max(std::abs(grad.at(i, c) + col.dot(chi)), worst);
            e.at(i, c) = 0.0;
        }

    KKTReport rep;
    rep.lambda.resize(static_cast<std::size_t>(n));
    for (Index I = 0; I < n; ++I) rep.lambda[static_cast<std::size_t>(I)] = chi(4 * m + I);
    rep.mu00 = Vec::zero(m);
    rep.mu10 = Vec::zero(m);
    rep.mu01 = Vec::zero(m);
    rep.mu11 = Vec::zero(m);
    for (int c = 0; c < m; ++c) {
        rep.mu00[c] = chi(c);
        rep.mu10[c] = chi(m + c);
        rep.mu01[c] = chi(2 * m + c);
        rep.mu11[c] = chi(3 * m + c);
    }
    rep.projected_gradient = field_max_vec(pg);
    rep.energy = bending_energy(P);
    rep.feasibility = feasibility_max(P, bd);
    rep.kkt_residual = worst;
    return rep;
}

std::pair<Polygon, KKTReport> minimize(const Polygon& P0, const BoundaryData& bd,
                                       const SolveOptions& opts) {
    if (!(opts.kkt_tol > 0) || !(opts.feasibility_tol > 0))
        throw InvalidArgument("solver tolerances must be positive");
    if (std::abs(P0.part.length() - bd.L) > 1e-9 * std::max(1.0, bd.L))
        throw InvalidArgument("partition length must match the boundary data");

    Polygon P = P0;
    if (feasibility_max(P, bd) > opts.feasibility_tol)
        P = restore_discrete(P, bd).polygon;
    if (max_turning_angle(P) >= kPi - opts.barrier)
        throw InvalidArgument("starting polygon folds back beyond the barrier");

    double energy = bending_energy(P);
    Eigen::VectorXd x_prev, pg_prev;
    double t_next = 0;
    bool converged = false;
    int it = 0;
    int polish_budget = 10;
    double last_polish_pg = std::numeric_limits<double>::infinity();
    double stall_ref = energy;
    int stall_mark = 0;
    const Index ncols = (P.edge_count() + 1) * P.dim();
    const double polish_tol =
        std::max(1e-14, 0.01 * opts.kkt_tol / std::sqrt(static_cast<double>(ncols)));

    for (; it < opts.max_iterations; ++it) {
        const Field grad = bending_energy_gradient(P);
        const Field pg = orth_projected_gradient(grad, assemble_jacobian(P));
        const double pg_norm = field_max_vec(pg);
        const Eigen::VectorXd x_now = flatten_positions(P);
        const Eigen::VectorXd pg_now = flatten_field(pg);

        if (opts.trace)
            opts.trace({it, energy, pg_norm, feasibility_max(P, bd), t_next});
        if (pg_norm <= opts.kkt_tol) {
            converged = true;
            break;
        }
        // Switch to the Newton endgame near criticality, or when fifty
        // iterations of descent have gone essentially nowhere.
        bool stalled = false;
        if (it - stall_mark >= 50) {
            stalled = energy > stall_ref - 1e-6 * (std::abs(energy) + 1);
            stall_ref = energy;
            stall_mark = it;
        }
        const bool near_critical = pg_norm <= std::max(1e3 * opts.kkt_tol, 1e-4) &&
                                   pg_norm < 0.5 * last_polish_pg;
        if ((it == 0 || near_critical || stalled) && polish_budget > 0) {
            --polish_budget;
            if (near_critical) last_polish_pg = pg_norm;
            Polygon trial = P;
            if (newton_kkt_polish(trial, bd, polish_tol, 12) &&
                max_turning_angle(trial) < kPi - opts.barrier &&
                bending_energy(trial) <= energy + 1e-13) {
                P = std::move(trial);
                energy = bending_energy(P);
                x_prev.resize(0);
                pg_prev.resize(0);
                continue;
            }
        }

        // Prefer the right-inverse direction (possibly reversed); fall back
        // to steepest kernel descent when its slope is too shallow.
        Field d = oblique_direction(P, grad);
        double dirderiv = field_dot(grad, d);
        const double steepest = std::sqrt(field_dot(pg, pg));
        const double dnorm = std::sqrt(std::max(field_dot(d, d), 1e-300));
        if (dirderiv > 0) {
            for (double& v : d.data) v = -v;
            dirderiv = -dirderiv;
        }
        if (!(dirderiv < -0.01 * steepest * dnorm)) {
            for (std::size_t i = 0; i < d.data.size(); ++i) d.data[i] = -pg.data[i];
            dirderiv = -steepest * steepest;
        }
        if (!(dirderiv < 0))
            throw NonConvergence("no kernel descent direction at a nonstationary point");

        // Barzilai-Borwein trial step from the previous accepted move, with a
        // displacement cap on the first iteration.
        double t = 0;
        if (x_prev.size() == x_now.size()) {
            const Eigen::VectorXd s = x_now - x_prev;
            const Eigen::VectorXd y = pg_now - pg_prev;
            const double sy = s.dot(y), yy = y.dot(y);
            if (sy > 0 && yy > 0) t = std::clamp(sy / yy, 1e-12, 1e2);
        }
        if (t == 0) t = std::min(opts.initial_step, 0.5 * bd.L / std::max(pg_norm, 1e-12));

        bool accepted = false;
        for (int bt = 0; bt < opts.max_backtracks; ++bt, t *= opts.backtrack_factor) {
            try {
                Polygon trial = displaced(P, d, t);
                if (max_turning_angle(trial) >= kPi - opts.barrier) continue;
                Polygon retracted = restore_discrete(trial, bd).polygon;
                if (max_turning_angle(retracted) >= kPi - opts.barrier) continue;
                const double e_new = bending_energy(retracted);
                if (e_new <= energy + opts.armijo_c * t * dirderiv +
                                 4e-15 * (std::abs(energy) + 1.0)) {
                    P = std::move(retracted);
                    energy = e_new;
                    accepted = true;
                    t_next = t;
                    break;
                }
            } catch (const Error&) {
                // Fold-backs, coincident vertices, or failed restoration:
                // shrink and retry.
            }
        }
        if (!accepted) {
            if (polish_budget > 0) {
                --polish_budget;
                Polygon trial = P;
                if (newton_kkt_polish(trial, bd, polish_tol, 12) &&
                    max_turning_angle(trial) < kPi - opts.barrier) {
                    P = std::move(trial);
                    energy = bending_energy(P);
                    x_prev.resize(0);
                    pg_prev.resize(0);
                    continue;
                }
            }
            throw NonConvergence("line search failed to find a feasible decrease");
        }
        x_prev = x_now;
        pg_prev = pg_now;
    }

    if (!converged) throw NonConvergence("projected descent hit the iteration limit");

    KKTReport rep = lagrange_multipliers(P, bd);
    rep.iterations = it;
    rep.converged = true;
    return {P, rep};
}

namespace {

// Endpoint-clamped cubic with both tangent magnitudes set to mag.
Vec hermite_point(const BoundaryData& bd, double mag, double r) {
    const double r2 = r * r, r3 = r2 * r;
    const double h00 = 2 * r3 - 3 * r2 + 1, h10 = r3 - 2 * r2 + r;
    const double h01 = -2 * r3 + 3 * r2, h11 = r3 - r2;
    return h00 * bd.p0 + (h10 * mag) * bd.N0 + h01 * bd.pL + (h11 * mag) * bd.NL;
}

Vec hermite_velocity(const BoundaryData& bd, double mag, double r) {
    const double r2 = r * r;
    const double g00 = 6 * r2 - 6 * r, g10 = 3 * r2 - 4 * r + 1;
    const double g01 = -6 * r2 + 6 * r, g11 = 3 * r2 - 2 * r;
    return g00 * bd.p0 + (g10 * mag) * bd.N0 + g01 * bd.pL + (g11 * mag) * bd.NL;
}

double hermite_arclength(const BoundaryData& bd, double mag) {
    return quad::composite(0.0, 1.0, 64,
                           [&](double r) { return norm(hermite_velocity(bd, mag, r)); });
}

// Rough polygon from the tuned cubic, arclength-sampled; callers restore it.
Polygon cubic_guess(const BoundaryData& bd, const Partition& T, double scale,
                    double offset_amp, int offset_mode) {
    // Tune the tangent magnitude so the cubic's length matches bd.L.
    double lo = 1e-8, hi = std::max(bd.L, 1.0);
    while (hermite_arclength(bd, hi) < bd.L && hi < 1e8) hi *= 2;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (hermite_arclength(bd, mid) < bd.L ? lo : hi) = mid;
    }
    const double mag = 0.5 * (lo + hi) * scale;

    // Arclength table for the near-uniform reparameterization.
    const int table = 1024;
    std::vector<double> svals(table + 1, 0.0);
    for (int j = 0; j < table; ++j) {
        const double a = static_cast<double>(j) / table;
        const double b = static_cast<double>(j + 1) / table;
        svals[static_cast<std::size_t>(j + 1)] =
            svals[static_cast<std::size_t>(j)] +
            quad::composite(a, b, 1, [&](double r) { return norm(hermite_velocity(bd, mag, r)); });
    }
    const double total = svals.back();

    const Vec chord = bd.pL - bd.p0;
    Vec perp = Vec::zero(bd.p0.dim());
    if (bd.p0.dim() == 2) {
        const Vec u = normalized(chord);
        perp = Vec(-u[1], u[0]);
    } else {
        Vec u = normalized(chord);
        perp = norm(reject(Vec(0, 0, 1), u)) > 1e-6 ? normalized(reject(Vec(0, 0, 1), u))
                                                    : Vec(1, 0, 0);
    }

    auto fn = [&, total](double t) {
        const double s = std::clamp(t / T.length(), 0.0, 1.0) * total;
        const auto itv = std::upper_bound(svals.begin(), svals.end(), s);
        const std::size_t j = std::min<std::size_t>(
            svals.size() - 2, itv == svals.begin() ? 0 : static_cast<std::size_t>(itv - svals.begin() - 1));
        const double seg = svals[j + 1] - svals[j];
        const double frac = seg > 0 ? (s - svals[j]) / seg : 0.0;
        const double r = (static_cast<double>(j) + frac) / table;
        Vec p = hermite_point(bd, mag, r);
        if (offset_amp != 0.0)
            p += offset_amp * std::sin(offset_mode * kPi * std::clamp(t / T.length(), 0.0, 1.0)) * perp;
        return p;
    };
    return approx_sample(fn, T, bd.p0.dim());
}

bool same_polygon(const Polygon& a, const Polygon& b, double tol) {
    if (a.vertex_count() != b.vertex_count()) return false;
    for (Index i = 0; i < a.vertex_count(); ++i)
        if (norm(a.at(i) - b.at(i)) > tol) return false;
    return true;
}

bool lex_less(const Polygon& a, const Polygon& b) {
    for (Index i = 0; i < std::min(a.vertex_count(), b.vertex_count()); ++i)
        for (int c = 0; c < a.dim(); ++c) {
            if (a.at(i)[c] < b.at(i)[c]) return true;
            if (a.at(i)[c] > b.at(i)[c]) return false;
        }
    return a.vertex_count() < b.vertex_count();
}

}  // namespace

Polygon initial_guess(const BoundaryData& bd, const Partition& T) {
    if (std::abs(T.length() - bd.L) > 1e-9 * std::max(1.0, bd.L))
        throw InvalidArgument("partition length must match the boundary data");
    try {
        return restore_discrete(cubic_guess(bd, T, 1.0, 0.0, 1), bd).polygon;
    } catch (const Error&) {
        // Nearly collinear data degenerate the aligned cubic onto the chord,
        // where matching the length forces a fold. Bow the guess sideways so
        // the slack goes into a shallow arch instead.
        const double d = norm(bd.pL - bd.p0);
        const double amp =
            0.6 * std::sqrt(std::max(bd.L - d, 0.0) * std::max(d, 0.1 * bd.L));
        return restore_discrete(cubic_guess(bd, T, 1.0, amp, 1), bd).polygon;
    }
}

MinimizerSet delta_minimizer_set(const BoundaryData& bd, const Partition& T, double delta,
                                 const SolveOptions& opts) {
    if (delta < 0) throw InvalidArgument("delta must be nonnegative");
    const double h = T.mesh_size();

    MinimizerSet out;
    out.delta = delta;

    std::vector<Polygon> minimizers;
    std::vector<double> energies;
    for (int s = 0; s < std::max(1, opts.multistart); ++s) {
        try {
            std::mt19937_64 rng(derive_seed(opts.seed, static_cast<std::uint64_t>(s)));
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            const double scale = s == 0 ? 1.0 : 0.7 + 0.25 * ((s - 1) % 4);
            const double amp =
                s == 0 ? 0.0 : 0.25 * bd.eta() * bd.L * unit(rng) / std::max(1, s);
            const int mode = 1 + s % 3;
            Polygon start = restore_discrete(cubic_guess(bd, T, scale, amp, mode), bd).polygon;
            auto [P, rep] = minimize(start, bd, opts);
            minimizers.push_back(std::move(P));
            energies.push_back(rep.energy);
        } catch (const Error&) {
            ++out.failed_starts;
        }
    }
    if (minimizers.empty()) return out;

    // Deduplicate coincident minimizers, keeping the lower energy.
    std::vector<Polygon> distinct;
    std::vector<double> denergy;
    for (std::size_t i = 0; i < minimizers.size(); ++i) {
        bool dup = false;
        for (std::size_t j = 0; j < distinct.size(); ++j)
            if (same_polygon(minimizers[i], distinct[j], 1e-6 * bd.L)) {
                if (energies[i] < denergy[j]) {
                    distinct[j] = minimizers[i];
                    denergy[j] = energies[i];
                }
                dup = true;
                break;
            }
        if (!dup) {
            distinct.push_back(minimizers[i]);
            denergy.push_back(energies[i]);
        }
    }

    const double best = *std::min_element(denergy.begin(), denergy.end());
    out.best_energy = best;

    // Populate the delta-neighborhood with restored perturbations whose
    // energy stays within the band.
    std::vector<Polygon> members = distinct;
    std::vector<double> menergy = denergy;
    if (delta > 0) {
        for (const Polygon& M : distinct) {
            const Vec chord = bd.pL - bd.p0;
            Vec perp = Vec::zero(bd.p0.dim());
            if (bd.p0.dim() == 2) {
                const Vec u = normalized(chord);
                perp = Vec(-u[1], u[0]);
            } else {
                perp = Vec(0, 0, 1);
            }
            for (int j = 1; j <= 3; ++j) {
                const double amp = 0.2 * j * std::sqrt(delta * h * h * h);
                std::vector<Vec> pos = M.pos;
                for (Index i = 0; i < M.vertex_count(); ++i) {
                    const double r = T.vertex(i) / T.length();
                    pos[static_cast<std::size_t>(i)] += amp * std::sin(2 * kPi * r) * perp;
                }
                try {
                    Polygon Q = restore_discrete(make_polygon(T, std::move(pos)), bd).polygon;
                    members.push_back(std::move(Q));
                    menergy.push_back(bending_energy(members.back()));
                } catch (const Error&) {
                    // Perturbation left the restoration basin; drop it.
                }
            }
        }
    }

    // Energy band, feasibility, regularity priors, dedupe, deterministic order.
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (menergy[i] > best + delta + 1e-12 * std::max(1.0, std::abs(best))) continue;
        if (feasibility_max(members[i], bd) > 1e-10) continue;
        const RegularitySeminorms reg = regularity_seminorms(members[i]);
        if (reg.w2inf > opts.prior_K2 || reg.tv3 > opts.prior_K2) continue;
        bool dup = false;
        for (std::size_t j : keep)
            if (same_polygon(members[i], members[j], 1e-6 * bd.L)) {
                dup = true;
                break;
            }
        if (!dup) keep.push_back(i);
    }
    std::sort(keep.begin(), keep.end(), [&](std::size_t a, std::size_t b) {
        if (menergy[a] != menergy[b]) return menergy[a] < menergy[b];
        return lex_less(members[a], members[b]);
    });
    for (std::size_t i : keep) {
        out.members.push_back(members[i]);
        out.energies.push_back(menergy[i]);
    }
    return out;
}

RegularityReport regularity_report(const Polygon& P) {
    const RegularitySeminorms reg = regularity_seminorms(P);
    RegularityReport rep;
    rep.w2inf = reg.w2inf;
    rep.tv3 = reg.tv3;
    rep.w3inf = reg.w3inf;
    rep.almost_uniform_defect = P.part.almost_uniformity_defect();
    return rep;
}

}  // namespace elastica
