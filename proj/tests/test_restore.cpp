#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "elastica/metrics.hpp"
#include "elastica/transfer.hpp"

using namespace elastica;

namespace {

const double kPi = std::acos(-1.0);

ArcSpline quarter_circle(int segments) {
    std::vector<double> breaks;
    std::vector<Vec> tans;
    const double L = kPi / 2;
    for (int j = 0; j <= segments; ++j) {
        const double t = L * j / segments;
        breaks.push_back(t);
        tans.push_back(Vec(std::cos(t), std::sin(t)));
    }
    return make_arcspline(Vec(0, 0), std::move(breaks), std::move(tans));
}

BoundaryData quarter_bd() {
    return make_boundary_data(Vec(0, 0), Vec(1, 1), Vec(1, 0), Vec(0, 1), kPi / 2);
}

Polygon feasible_quarter(Index n) {
    auto g = quarter_circle(64);
    return sample(g, quarter_bd(), Partition::uniform(kPi / 2, n)).polygon;
}

}  // namespace

TEST_CASE("feasible polygons are returned unchanged") {
    Polygon P = feasible_quarter(16);
    auto res = restore_discrete(P, quarter_bd());
    CHECK(res.nk.iterations == 0);
    for (Index i = 0; i < P.vertex_count(); ++i)
        CHECK(norm(res.polygon.at(i) - P.at(i)) == 0.0);
    CHECK(std::abs(res.z0) <= 1e-15);
    CHECK(std::abs(res.z1) <= 1e-15);
}

TEST_CASE("an endpoint violation is repaired to full precision") {
    Polygon P = feasible_quarter(16);
    auto bd = quarter_bd();
    Polygon Q = P;
    Q.at(Q.vertex_count() - 1) = Q.at(Q.vertex_count() - 1) + Vec(1e-3, 0);
    auto res = restore_discrete(Q, bd);
    CHECK(res.nk.iterations <= 10);
    auto cv = constraint_map(res.polygon, bd);
    double feas = norm(cv.pos0) + norm(cv.posL) + norm(cv.tan0) + norm(cv.tanL);
    for (double s : cv.strain.data) feas = std::max(feas, std::abs(s));
    CHECK(feas <= 1e-11);
    CHECK(std::abs(res.z0) <= 1e-10);
    CHECK(std::abs(res.z1) <= 1e-10);
}

TEST_CASE("restoration distance scales linearly with the violation") {
    Polygon P = feasible_quarter(16);
    auto bd = quarter_bd();
    std::vector<double> ratios;
    for (double eps : {1e-2, 1e-4, 1e-6}) {
        Polygon Q = P;
        Q.at(Q.vertex_count() - 1) = Q.at(Q.vertex_count() - 1) + Vec(eps, 0);
        auto res = restore_discrete(Q, bd);
        REQUIRE(res.violation_tv2 > 0.0);
        if (eps <= 1e-4) CHECK(res.precondition_ok);
        ratios.push_back(res.proximity_tv3 / res.violation_tv2);
    }
    const double lo = *std::min_element(ratios.begin(), ratios.end());
    const double hi = *std::max_element(ratios.begin(), ratios.end());
    CHECK(lo > 0.0);
    CHECK(hi <= 10.0 * lo);
}

TEST_CASE("a stretched edge is relaxed back to reference length") {
    Polygon P = feasible_quarter(12);
    auto bd = quarter_bd();
    Polygon Q = P;
    // Stretch edge 5 by moving every later vertex outward along the chord.
    Vec chord = Q.at(6) - Q.at(5);
    Vec shift = (std::exp(1e-3) - 1.0) * chord;
    for (Index i = 6; i < Q.vertex_count(); ++i) Q.at(i) = Q.at(i) + shift;
    auto res = restore_discrete(Q, bd);
    for (double s : strain(res.polygon).data) CHECK(std::abs(s) <= 1e-11);
    CHECK(std::abs(res.z0) <= 1e-10);
    CHECK(std::abs(res.z1) <= 1e-10);
    CHECK(res.nk.iterations <= 10);
    CHECK(res.energy_gap <= 1e-2);
}

TEST_CASE("feasible splines restore with zero Newton steps") {
    auto g = quarter_circle(8);
    auto res = restore_smooth(g, quarter_bd());
    CHECK(res.nk.iterations == 0);
    CHECK(res.proximity_w2inf <= 1e-12);
    CHECK(std::abs(res.z0) <= 1e-15);
    CHECK(std::abs(res.z1) <= 1e-15);
}

TEST_CASE("smooth restoration repairs a bent tangent program") {
    auto bd = quarter_bd();
    std::vector<double> ratios;
    for (double eps : {1e-3, 1e-4, 1e-5}) {
        auto g = quarter_circle(8);
        // Rotate the middle tangent: the endpoint and end tangent drift by O(eps).
        const std::size_t j = 4;
        const double th = std::atan2(g.tangent[j][1], g.tangent[j][0]) + eps;
        ArcSpline bent = make_arcspline(
            g.x0, g.breaks,
            [&] {
                auto t = g.tangent;
                t[j] = Vec(std::cos(th), std::sin(th));
                return t;
            }());
        auto res = restore_smooth(bent, bd);
        CHECK(res.precondition_ok);
        CHECK(res.nk.iterations <= 10);
        auto cv = smooth_constraint_map(res.curve, bd);
        const double feas =
            norm(cv.pos0) + norm(cv.posL) + norm(cv.tan0) + norm(cv.tanL);
        CHECK(feas <= 1e-11);
        CHECK(std::abs(res.z0) <= 1e-10);
        CHECK(std::abs(res.z1) <= 1e-10);
        REQUIRE(res.violation > 0.0);
        ratios.push_back(res.proximity_w2inf / res.violation);
    }
    const double lo = *std::min_element(ratios.begin(), ratios.end());
    const double hi = *std::max_element(ratios.begin(), ratios.end());
    CHECK(lo > 0.0);
    CHECK(hi <= 10.0 * lo);
}

TEST_CASE("restored tangents stay on the unit sphere") {
    auto bd = quarter_bd();
    auto g = quarter_circle(8);
    const double th = std::atan2(g.tangent[3][1], g.tangent[3][0]) + 5e-3;
    ArcSpline bent = make_arcspline(
        g.x0, g.breaks,
        [&] {
            auto t = g.tangent;
            t[3] = Vec(std::cos(th), std::sin(th));
            return t;
        }());
    auto res = restore_smooth(bent, bd);
    for (const Vec& t : res.curve.tangent)
        CHECK(std::abs(norm(t) - 1.0) <= 1e-12);
}
