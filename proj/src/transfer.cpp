#include "elastica/transfer.hpp"

#include <cmath>

#include "elastica/metrics.hpp"

namespace elastica {

ArcSpline approx_reconstruct(const Polygon& P) {
    const Index n = P.edge_count();
    auto sig = strain(P);
    for (double s : sig.data)
        if (std::abs(s) > 1e-10)
            throw InvalidArgument("reconstruction needs the discrete arc-length "
                                  "parameterization (sigma == 0)");
    auto tau = tangents(P);
    if (n == 1) {
        return make_arcspline(P.at(0), {0.0, P.part.length()}, {tau[0], tau[0]});
    }
    auto alpha = turning_angles(P);  // throws on fold-back angles near pi
    for (double a : alpha.data)
        if (a >= std::acos(-1.0) - 1e-9)
            throw SingularConfiguration("fold-back turning angle");

    std::vector<double> breaks;
    std::vector<Vec> prog;
    breaks.push_back(0.0);
    for (Index I = 0; I < n; ++I) breaks.push_back(P.part.midpoint(I));
    breaks.push_back(P.part.length());

    // Boundary tangents continue the adjacent dual-edge arcs backward and
    // forward by half an edge at the same curvature.
    auto rotate_about = [](const Vec& t, const Vec& nrm, double psi) {
        return std::cos(psi) * t + std::sin(psi) * nrm;
    };
    Vec t_start = tau.front();
    {
        const double a1 = alpha.at(1, 0);  // first interior vertex
        if (a1 > 1e-14) {
            Vec nrm = normalized(tau[1] - std::cos(a1) * tau[0]);
            const double psi = (a1 / P.part.dual_length(1)) * (P.part.edge_length(0) / 2);
            t_start = rotate_about(tau[0], nrm, -psi);
        }
    }
    Vec t_end = tau.back();
    {
        const double am = alpha.at(n - 1, 0);  // last interior vertex
        if (am > 1e-14) {
            const auto& tp = tau[static_cast<std::size_t>(n - 2)];
            const auto& tq = tau[static_cast<std::size_t>(n - 1)];
            Vec nrm = normalized(tq - std::cos(am) * tp);
            // Normal transported to the end of the last dual-edge arc.
            Vec n_end = std::cos(am) * nrm - std::sin(am) * tp;
            const double psi =
                (am / P.part.dual_length(n - 1)) * (P.part.edge_length(n - 1) / 2);
            t_end = rotate_about(tq, n_end, psi);
        }
    }
    prog.push_back(t_start);
    for (const auto& t : tau) prog.push_back(t);
    prog.push_back(t_end);
    return make_arcspline(P.at(0), std::move(breaks), std::move(prog));
}

Polygon approx_sample(const PositionFn& gamma, const Partition& T, int dim) {
    std::vector<Vec> pos;
    pos.reserve(static_cast<std::size_t>(T.vertex_count()));
    Vec cur = gamma(0.0);
    if (cur.n != dim) throw InvalidArgument("sample dimension mismatch");
    pos.push_back(cur);
    Vec prev_q = cur;
    for (Index I = 0; I < T.edge_count(); ++I) {
        Vec q = gamma(T.vertex(I + 1));
        Vec chord = q - prev_q;
        const double cl = norm(chord);
        if (!(cl > 1e-14 * T.length()))
            throw ImmersionViolation("coincident samples at the partition scale");
        cur = cur + (T.edge_length(I) / cl) * chord;
        pos.push_back(cur);
        prev_q = q;
    }
    return make_polygon(T, std::move(pos));
}

Polygon approx_sample(const ArcSpline& g, const Partition& T) {
    if (std::abs(g.length() - T.length()) > 1e-9 * std::max(1.0, g.length()))
        throw InvalidArgument("partition does not cover the curve domain");
    return approx_sample([&g](double t) { return evaluate(g, t).position; }, T, g.dim());
}

ReconstructResult reconstruct(const Polygon& P, const BoundaryData& bd, double tol) {
    ArcSpline rough = approx_reconstruct(P);
    auto restored = restore_smooth(rough, bd, tol);
    ReconstructResult out{restored.curve, {}};
    out.report.h = P.part.mesh_size();
    out.report.energy_gap = std::abs(bending_energy(out.curve) - bending_energy(P));
    out.report.w1inf_gap =
        dist_w1inf(metric_curve(out.curve), metric_curve(piecewise_linear_interpolant(P)));
    // Curvature consistency over dual edges: arc curvature against the
    // discrete curvature magnitude at the interior vertices.
    double cgap = 0;
    if (P.edge_count() >= 2) {
        auto alpha = turning_angles(P);
        for (Index i = 1; i < P.edge_count(); ++i) {
            const double kp = alpha.at(i, 0) / P.part.dual_length(i);
            const double t = 0.5 * (P.part.midpoint(i - 1) + P.part.midpoint(i));
            const double kg = norm(evaluate(out.curve, t).curvature);
            cgap = std::max(cgap, std::abs(kg - kp));
        }
    }
    out.report.curvature_gap = cgap;
    out.report.tv3 = tv3_seminorm(out.curve);
    auto cv = smooth_constraint_map(out.curve, bd);
    out.report.feasibility_residual =
        norm(cv.pos0) + norm(cv.posL) + norm(cv.tan0) + norm(cv.tanL);
    return out;
}

SampleResult sample(const ArcSpline& g, const BoundaryData& bd, const Partition& T, double tol) {
    Polygon rough = approx_sample(g, T);
    auto restored = restore_discrete(rough, bd, tol);
    SampleResult out{restored.polygon, {}};
    out.report.h = T.mesh_size();
    out.report.energy_gap = std::abs(bending_energy(out.polygon) - bending_energy(g));
    out.report.w1inf_gap = dist_w1inf(metric_curve(g),
                                      metric_curve(piecewise_linear_interpolant(out.polygon)));
    double cgap = 0;
    if (T.edge_count() >= 2) {
        auto alpha = turning_angles(out.polygon);
        for (Index i = 1; i < T.edge_count(); ++i) {
            const double kp = alpha.at(i, 0) / T.dual_length(i);
            const double kg = norm(evaluate(g, T.vertex(i)).curvature);
            cgap = std::max(cgap, std::abs(kg - kp));
        }
    }
    out.report.curvature_gap = cgap;
    out.report.tv3 = regularity_seminorms(out.polygon).tv3;
    auto cv = constraint_map(out.polygon, bd);
    out.report.feasibility_residual = norm(cv.pos0) + norm(cv.posL) + norm(cv.tan0) +
                                      norm(cv.tanL) +
                                      discrete_norm(cv.strain, NormSpec::lp(
                                                        std::numeric_limits<double>::infinity()),
                                                    induced_weights(out.polygon));
    return out;
}

double roundtrip_gap(const ArcSpline& g, const BoundaryData& bd, const Partition& T) {
    auto sampled = sample(g, bd, T);
    auto rebuilt = reconstruct(sampled.polygon, bd);
    return dist_w2inf(metric_curve(g), metric_curve(rebuilt.curve));
}

}  // namespace elastica
