#include "elastica/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "elastica/quadrature.hpp"

namespace elastica {

MetricCurve metric_curve(const ArcSpline& g) {
    MetricCurve c;
    c.length = g.length();
    c.breaks = g.breaks;
    c.eval = [g](double t) { return evaluate(g, t); };
    for (const auto& s : g.seg) c.curvature_bound = std::max(c.curvature_bound, std::abs(s.c));
    c.curvature_deriv_bound = 0;  // constant curvature inside segments
    c.has_curvature = true;
    return c;
}

MetricCurve metric_curve(const PolylineCurve& pc) {
    MetricCurve c;
    c.length = pc.part.length();
    c.breaks = pc.part.vertices();
    c.eval = [pc](double t) {
        const int m = pc.pos.front().n;
        return CurvePoint{pc.position(t), pc.derivative(t), Vec::zero(m)};
    };
    c.curvature_bound = 0;  // piecewise-constant derivative inside cells
    c.has_curvature = false;
    return c;
}

namespace {

// Union cell decomposition of the common normalized parameter [0, 1].
std::vector<double> union_cells(const MetricCurve& a, const MetricCurve& b) {
    std::vector<double> u;
    for (double t : a.breaks) u.push_back(t / a.length);
    for (double t : b.breaks) u.push_back(t / b.length);
    u.push_back(0.0);
    u.push_back(1.0);
    std::sort(u.begin(), u.end());
    std::vector<double> out;
    for (double v : u) {
        v = std::clamp(v, 0.0, 1.0);
        if (out.empty() || v - out.back() > 1e-12) out.push_back(v);
    }
    if (out.back() != 1.0) out.back() = 1.0;
    return out;
}

void check_pair(const MetricCurve& a, const MetricCurve& b) {
    if (!(a.length > 0) || !(b.length > 0)) throw InvalidArgument("curves must have a domain");
    if (a.eval == nullptr || b.eval == nullptr) throw InvalidArgument("curves must be evaluable");
}

// Certified supremum of val over [0,1]: sampled maximum plus Lipschitz slack
// kept below max(1% of the maximum, 1e-13).
double certified_sup(const std::vector<double>& cells,
                     const std::function<double(double)>& val, double lip) {
    int ns = 16;
    double M = 0;
    for (int round = 0; round < 12; ++round) {
        M = 0;
        double maxgap = 0;
        for (std::size_t c = 0; c + 1 < cells.size(); ++c) {
            const double lo = cells[c], hi = cells[c + 1];
            for (int j = 0; j <= ns; ++j)
                M = std::max(M, val(lo + (hi - lo) * j / ns));
            maxgap = std::max(maxgap, (hi - lo) / ns);
        }
        const double slack = lip * maxgap / 2;
        if (slack <= std::max(0.01 * M, 1e-13)) break;
        ns *= 2;
    }
    return M;
}

double sup_distance(const MetricCurve& a, const MetricCurve& b, bool second_order) {
    check_pair(a, b);
    if (second_order && (!a.has_curvature || !b.has_curvature))
        throw InvalidArgument("operand provides no second derivative");
    auto cells = union_cells(a, b);
    auto val = [&](double u) {
        auto pa = a.eval(u * a.length);
        auto pb = b.eval(u * b.length);
        double v = norm(pa.position - pb.position) + norm(pa.tangent - pb.tangent);
        if (second_order) v += norm(pa.curvature - pb.curvature);
        return v;
    };
    // d/du bounds: positions are 1-Lipschitz in arc length, tangents kappa-
    // Lipschitz, curvatures kappa'-Lipschitz inside cells.
    double lip = a.length * (1 + a.curvature_bound) + b.length * (1 + b.curvature_bound);
    if (second_order)
        lip += a.length * a.curvature_deriv_bound + b.length * b.curvature_deriv_bound;
    return certified_sup(cells, val, lip);
}

}  // namespace

double dist_w1inf(const MetricCurve& a, const MetricCurve& b) {
    return sup_distance(a, b, false);
}

double dist_w2inf(const MetricCurve& a, const MetricCurve& b) {
    return sup_distance(a, b, true);
}

double dist_w2p(const MetricCurve& a, const MetricCurve& b, double p, int subdiv) {
    check_pair(a, b);
    if (!(p >= 2) || std::isinf(p)) throw InvalidArgument("exponent must lie in [2, inf)");
    if (!a.has_curvature || !b.has_curvature)
        throw InvalidArgument("operand provides no second derivative");
    if (subdiv < 1) throw InvalidArgument("subdivision count must be positive");
    auto cells = union_cells(a, b);
    const double scale = 0.5 * (a.length + b.length);
    KahanSum acc;
    for (std::size_t c = 0; c + 1 < cells.size(); ++c) {
        quad::visit(cells[c], cells[c + 1], subdiv, [&](double u, double w) {
            auto pa = a.eval(u * a.length);
            auto pb = b.eval(u * b.length);
            const double integrand = std::pow(norm(pa.position - pb.position), p) +
                                     std::pow(norm(pa.tangent - pb.tangent), p) +
                                     std::pow(norm(pa.curvature - pb.curvature), p);
            acc.add(w * scale * integrand);
        });
    }
    return std::pow(acc.value(), 1.0 / p);
}

double hausdorff(const std::vector<MetricCurve>& A, const std::vector<MetricCurve>& B,
                 const CurveMetric& metric) {
    if (A.empty() || B.empty()) throw InvalidArgument("hausdorff distance needs nonempty sets");
    auto directed = [&](const std::vector<MetricCurve>& from, const std::vector<MetricCurve>& to) {
        double sup = 0;
        for (const auto& f : from) {
            double inf = std::numeric_limits<double>::infinity();
            for (const auto& t : to) inf = std::min(inf, metric(f, t));
            sup = std::max(sup, inf);
        }
        return sup;
    };
    return std::max(directed(A, B), directed(B, A));
}

RateFit fit_rate(std::vector<std::pair<double, double>> samples, int drop) {
    if (drop < 0) throw InvalidArgument("drop count must be nonnegative");
    std::sort(samples.begin(), samples.end(),
              [](const auto& x, const auto& y) { return x.first > y.first; });
    if (samples.size() < static_cast<std::size_t>(drop) + 3)
        throw UndefinedRequest("rate fit needs at least three samples after dropping");
    samples.erase(samples.begin(), samples.begin() + drop);
    double sx = 0, sy = 0;
    for (const auto& [h, e] : samples) {
        if (!(h > 0) || !(e > 0)) throw InvalidArgument("rate fit needs positive samples");
        sx += std::log(h);
        sy += std::log(e);
    }
    const double n = static_cast<double>(samples.size());
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& [h, e] : samples) {
        const double dx = std::log(h) - mx, dy = std::log(e) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0)) throw InvalidArgument("rate fit needs distinct mesh sizes");
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = (syy > 0) ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

std::vector<ChordArcEntry> chord_arc_report(const MetricCurve& g,
                                            const std::vector<std::pair<double, double>>& pairs) {
    std::vector<ChordArcEntry> out;
    out.reserve(pairs.size());
    for (const auto& [a, b] : pairs) {
        if (a < 0 || b < 0 || a > g.length || b > g.length)
            throw InvalidArgument("pair outside the curve domain");
        if (a == b) throw InvalidArgument("degenerate parameter pair");
        ChordArcEntry e;
        e.a = a;
        e.b = b;
        e.arc = std::abs(b - a);
        e.chord = norm(g.eval(b).position - g.eval(a).position);
        e.dev_chord = std::abs(1.0 - e.chord / e.arc);
        e.dev_arc = (e.chord > 0) ? std::abs(1.0 - e.arc / e.chord)
                                  : std::numeric_limits<double>::infinity();
        out.push_back(e);
    }
    return out;
}

std::vector<SecondDiffEntry> second_difference_report(const MetricCurve& g,
                                                      const CurveFunction& f, const Partition& T) {
    if (std::abs(T.length() - g.length) > 1e-9 * std::max(1.0, g.length))
        throw InvalidArgument("partition does not cover the curve domain");
    if (!f.f || !f.ddf) throw InvalidArgument("needs the function and its second derivative");
    std::vector<SecondDiffEntry> out;
    for (Index i = 1; i + 1 < T.vertex_count(); ++i) {
        const double tm = T.vertex(i - 1), t0 = T.vertex(i), tp = T.vertex(i + 1);
        const double cm = norm(g.eval(t0).position - g.eval(tm).position);
        const double cp = norm(g.eval(tp).position - g.eval(t0).position);
        if (!(cm > 0) || !(cp > 0)) throw ImmersionViolation("coincident sample points");
        Vec dm = (1.0 / cm) * (f.f(t0) - f.f(tm));
        Vec dp = (1.0 / cp) * (f.f(tp) - f.f(t0));
        Vec second = (1.0 / (0.5 * (cm + cp))) * (dp - dm);
        SecondDiffEntry e;
        e.t = t0;
        e.err = norm(second - f.ddf(t0));
        out.push_back(e);
    }
    return out;
}

}  // namespace elastica
