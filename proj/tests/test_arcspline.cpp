#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "elastica/arcspline.hpp"

using namespace elastica;

namespace {

const double kPi = std::acos(-1.0);

ArcSpline quarter_circle() {
    return make_arcspline(Vec(0, 0), {0.0, kPi / 2}, {Vec(1, 0), Vec(0, 1)});
}

ArcSpline half_circle_two_arcs() {
    return make_arcspline(Vec(0, 0), {0.0, kPi / 2, kPi}, {Vec(1, 0), Vec(0, 1), Vec(-1, 0)});
}

// Sinusoidal tangent program with amplitude s; energy scales as s^2.
ArcSpline wiggle(double s, int n) {
    std::vector<double> breaks;
    std::vector<Vec> tans;
    for (int j = 0; j <= n; ++j) {
        breaks.push_back(static_cast<double>(j) / n);
        const double psi = s * std::sin(2 * kPi * j / n);
        tans.push_back(Vec(std::cos(psi), std::sin(psi)));
    }
    return make_arcspline(Vec(0, 0), std::move(breaks), std::move(tans));
}

// Composite Simpson oracle for scalar integrals, independent of the library
// quadrature path.
template <class F>
double simpson(double a, double b, int n, F&& f) {
    double acc = f(a) + f(b);
    const double h = (b - a) / (2 * n);
    for (int i = 1; i < 2 * n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return acc * h / 3.0;
}

}  // namespace

TEST_CASE("construction validates its inputs") {
    CHECK_THROWS_AS(make_arcspline(Vec(0, 0), {0.0}, {Vec(1, 0)}), InvalidArgument);
    CHECK_THROWS_AS(make_arcspline(Vec(0, 0), {0.1, 1.0}, {Vec(1, 0), Vec(1, 0)}),
                    InvalidArgument);
    CHECK_THROWS_AS(make_arcspline(Vec(0, 0), {0.0, 1.0}, {Vec(2, 0), Vec(1, 0)}),
                    InvalidArgument);
    CHECK_THROWS_AS(make_arcspline(Vec(0, 0), {0.0, 1.0}, {Vec(1, 0), Vec(-1, 0)}),
                    InvalidArgument);
    CHECK_THROWS_AS(make_arcspline(Vec(0, 0), {0.0, 1.0, 1.0}, {Vec(1, 0), Vec(0, 1), Vec(1, 0)}),
                    InvalidArgument);
    CHECK_THROWS_AS(make_arcspline(Vec(0, 0), {0.0, 1.0}, {Vec(1, 0), Vec(0, 0, 1)}),
                    InvalidArgument);
}

TEST_CASE("quarter circle evaluates to the exact arc") {
    auto g = quarter_circle();
    CHECK(g.length() == doctest::Approx(kPi / 2).epsilon(1e-15));
    auto end = evaluate(g, kPi / 2);
    CHECK(std::abs(end.position[0] - 1.0) <= 1e-14);
    CHECK(std::abs(end.position[1] - 1.0) <= 1e-14);
    CHECK(std::abs(end.tangent[0]) <= 1e-14);
    CHECK(std::abs(end.tangent[1] - 1.0) <= 1e-14);
    auto mid = evaluate(g, kPi / 4);
    CHECK(mid.position[0] == doctest::Approx(std::sin(kPi / 4)).epsilon(1e-14));
    CHECK(mid.position[1] == doctest::Approx(1 - std::cos(kPi / 4)).epsilon(1e-14));
    auto start = evaluate(g, 0.0);
    CHECK(std::abs(start.curvature[0]) <= 1e-14);
    CHECK(std::abs(start.curvature[1] - 1.0) <= 1e-14);
    CHECK_THROWS_AS(evaluate(g, -0.1), InvalidArgument);
    CHECK_THROWS_AS(evaluate(g, kPi), InvalidArgument);
}

TEST_CASE("straight segments are exact lines") {
    auto g = make_arcspline(Vec(1, 2), {0.0, 3.0}, {Vec(0, 1), Vec(0, 1)});
    auto p = evaluate(g, 2.0);
    CHECK(p.position[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.position[1] == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(norm(p.curvature) == 0.0);
    CHECK(bending_energy(g) == 0.0);
}

TEST_CASE("unit speed, normal curvature, and C1 junctions") {
    auto g = make_arcspline(Vec(0, 0, 0), {0.0, 1.0, 2.5, 3.0},
                            {Vec(1, 0, 0), Vec(0, 1, 0), Vec(0, 0, 1),
                             normalized(Vec(1, 1, 1))});
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.0, g.length());
    for (int i = 0; i < 1000; ++i) {
        auto p = evaluate(g, unif(rng));
        CHECK(std::abs(norm(p.tangent) - 1.0) <= 1e-12);
        CHECK(std::abs(dot(p.tangent, p.curvature)) <= 1e-10);
    }
    for (std::size_t j = 1; j + 1 < g.breaks.size(); ++j) {
        const double t = g.breaks[j];
        auto left = evaluate(g, t - 1e-13);
        auto right = evaluate(g, t + 1e-13);
        CHECK(norm(left.position - right.position) <= 1e-10);
        CHECK(norm(left.tangent - right.tangent) <= 1e-10);
    }
}

TEST_CASE("bending energy of circular arcs") {
    CHECK(bending_energy(quarter_circle()) == doctest::Approx(kPi / 4).epsilon(1e-14));
    CHECK(bending_energy(half_circle_two_arcs()) == doctest::Approx(kPi / 2).epsilon(1e-14));
}

TEST_CASE("third-order variation measures curvature jumps") {
    CHECK(tv3_seminorm(quarter_circle()) == doctest::Approx(kPi / 2).epsilon(1e-14));
    // Two arcs of the same circle: no jump at the junction.
    CHECK(tv3_seminorm(half_circle_two_arcs()) == doctest::Approx(kPi).epsilon(1e-14));
    // S-curve: curvature flips sign at the junction, jump of size 2.
    auto s = make_arcspline(Vec(0, 0), {0.0, kPi / 2, kPi}, {Vec(1, 0), Vec(0, 1), Vec(1, 0)});
    CHECK(tv3_seminorm(s) == doctest::Approx(kPi + 2.0).epsilon(1e-13));
}

TEST_CASE("constraint map vanishes on matching boundary data") {
    auto g = quarter_circle();
    auto bd = make_boundary_data(Vec(0, 0), Vec(1, 1), Vec(1, 0), Vec(0, 1), kPi / 2);
    auto cv = smooth_constraint_map(g, bd);
    CHECK(norm(cv.pos0) <= 1e-14);
    CHECK(norm(cv.posL) <= 1e-14);
    CHECK(norm(cv.tan0) <= 1e-14);
    CHECK(norm(cv.tanL) <= 1e-14);
    for (double v : cv.strain.data) CHECK(v == 0.0);

    auto shifted = translated(g, Vec(0.5, -0.25));
    auto cv2 = smooth_constraint_map(shifted, bd);
    CHECK(norm(cv2.pos0 - Vec(0.5, -0.25)) <= 1e-14);
    CHECK(norm(cv2.posL - Vec(0.5, -0.25)) <= 1e-14);

    auto bd_wrong = make_boundary_data(Vec(0, 0), Vec(1, 1), Vec(1, 0), Vec(0, 1), 2.0);
    CHECK_THROWS_AS(smooth_constraint_map(g, bd_wrong), InvalidArgument);
}

TEST_CASE("theta matrix matches a direct quadrature oracle") {
    auto g = quarter_circle();
    auto theta = smooth_theta_matrix(g);
    const double L = kPi / 2;
    auto entry = [&](int a, int b) {
        return simpson(0.0, L, 4096, [&](double r) {
            const double phi = r / L;
            const double ta = (a == 0) ? std::cos(r) : std::sin(r);
            const double tb = (b == 0) ? std::cos(r) : std::sin(r);
            return (1 - phi) * phi * ((a == b ? 1.0 : 0.0) - ta * tb);
        });
    };
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            CHECK(std::abs(theta.entries[static_cast<std::size_t>(2 * a + b)] - entry(a, b)) <=
                  1e-9);
    CHECK(theta.condition < 1e3);

    auto line = make_arcspline(Vec(0, 0), {0.0, 1.0}, {Vec(1, 0), Vec(1, 0)});
    CHECK_THROWS_AS(smooth_theta_matrix(line), SingularConfiguration);
}

TEST_CASE("right inverse hits all boundary blocks") {
    auto g = quarter_circle();
    SmoothTangentData w;
    w.U0 = Vec(0, 0);
    w.U1 = Vec(1e-3, 0);
    w.V0 = Vec(0, 0);
    w.V1 = Vec(0, 0);
    Vec V = smooth_right_inverse_weight(g, w);
    Vec u, du;
    smooth_right_inverse_eval(g, w, V, g.length(), u, du);
    CHECK(norm(u - w.U1) <= 1e-9);
    smooth_right_inverse_eval(g, w, V, 0.0, u, du);
    CHECK(norm(u - w.U0) <= 1e-15);

    // General data: tangential speed profile plus normal end velocities.
    w.U0 = Vec(0.2, -0.1);
    w.U1 = Vec(0.15, 0.05);
    w.V0 = Vec(0, 0.3);
    w.V1 = Vec(0.2, 0);
    w.lambda = [&](double r) { return 0.1 * std::cos(r); };
    V = smooth_right_inverse_weight(g, w);
    smooth_right_inverse_eval(g, w, V, g.length(), u, du);
    CHECK(norm(u - w.U1) <= 1e-9);
    Vec tauL = Vec(0, 1);
    CHECK(norm(reject(du, tauL) - w.V1) <= 1e-12);
    CHECK(std::abs(dot(du, tauL) - w.lambda(g.length())) <= 1e-12);
    smooth_right_inverse_eval(g, w, V, 0.0, u, du);
    Vec tau0 = Vec(1, 0);
    CHECK(norm(reject(du, tau0) - w.V0) <= 1e-12);
    CHECK(std::abs(dot(du, tau0) - w.lambda(0.0)) <= 1e-12);
    for (double t : {0.3, 0.9, 1.4}) {
        smooth_right_inverse_eval(g, w, V, t, u, du);
        auto tau = evaluate(g, t).tangent;
        CHECK(std::abs(dot(du, tau) - w.lambda(t)) <= 1e-12);
    }
}

TEST_CASE("right inverse works on a three-dimensional spline") {
    auto g = make_arcspline(Vec(0, 0, 0), {0.0, 1.0, 2.0},
                            {Vec(1, 0, 0), Vec(0, 1, 0), Vec(0, 0, 1)});
    SmoothTangentData w;
    w.U0 = Vec(0.1, 0.2, -0.3);
    w.U1 = Vec(-0.2, 0.0, 0.4);
    w.V0 = Vec(0, 0.5, 0.1);
    w.V1 = Vec(0.3, -0.2, 0);
    Vec V = smooth_right_inverse_weight(g, w);
    Vec u, du;
    smooth_right_inverse_eval(g, w, V, g.length(), u, du);
    CHECK(norm(u - w.U1) <= 1e-9);
    auto sampled = smooth_right_inverse_apply(g, w);
    CHECK(sampled.t.front() == 0.0);
    CHECK(sampled.t.back() == g.length());
    CHECK(norm(sampled.u.front() - w.U0) <= 1e-15);
    CHECK(norm(sampled.u.back() - w.U1) <= 1e-9);
}

TEST_CASE("parameter and arc-length norms coincide at unit speed") {
    auto g = quarter_circle();
    CurveFunction cf;
    cf.f = [&](double t) { return evaluate(g, t).position; };
    cf.df = [&](double t) { return evaluate(g, t).tangent; };
    cf.ddf = [&](double t) { return evaluate(g, t).curvature; };

    auto np = norm_equivalence_check(g, cf, 1, 2.0);
    CHECK(np.weighted == doctest::Approx(std::sqrt(kPi / 2)).epsilon(1e-12));
    CHECK(std::abs(np.weighted - np.unweighted) <= 1e-10 * (1 + np.unweighted));

    auto ncurv = norm_equivalence_check(g, cf, 2, 2.0);
    CHECK(ncurv.weighted == doctest::Approx(std::sqrt(kPi / 2)).epsilon(1e-12));

    auto nsup = norm_equivalence_check(g, cf, 1, std::numeric_limits<double>::infinity());
    CHECK(nsup.weighted == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(nsup.unweighted == doctest::Approx(1.0).epsilon(1e-12));

    CurveFunction c1;
    c1.f = [&](double) { return Vec(3, 4); };
    auto n0 = norm_equivalence_check(g, c1, 0, 2.0);
    CHECK(n0.weighted == doctest::Approx(5.0 * std::sqrt(kPi / 2)).epsilon(1e-12));
    CHECK(n0.weighted == doctest::Approx(n0.unweighted).epsilon(1e-12));

    CHECK_THROWS_AS(norm_equivalence_check(g, cf, 3, 2.0), InvalidArgument);
    CHECK_THROWS_AS(norm_equivalence_check(g, cf, 1, 0.5), InvalidArgument);
}

TEST_CASE("energy is invariant under reversal and translation") {
    auto g = make_arcspline(Vec(0.3, -0.2), {0.0, 0.7, 1.3, 2.1},
                            {normalized(Vec(1, 0.2)), normalized(Vec(0.4, 1)),
                             normalized(Vec(-0.3, 1)), normalized(Vec(-1, 0.3))});
    auto rev = reversed(g);
    CHECK(rev.length() == doctest::Approx(g.length()).epsilon(1e-14));
    CHECK(bending_energy(rev) == doctest::Approx(bending_energy(g)).epsilon(1e-12));
    CHECK(tv3_seminorm(rev) == doctest::Approx(tv3_seminorm(g)).epsilon(1e-12));
    for (double t : {0.0, 0.5, 1.1, 2.1}) {
        auto a = evaluate(rev, t).position;
        auto b = evaluate(g, g.length() - t).position;
        CHECK(norm(a - b) <= 1e-12);
    }
    auto shifted = translated(g, Vec(2, 3));
    auto p = evaluate(shifted, 1.0).position - evaluate(g, 1.0).position;
    CHECK(norm(p - Vec(2, 3)) <= 1e-13);
}

TEST_CASE("energy scales quadratically in the tangent amplitude") {
    const double base = bending_energy(wiggle(1e-1, 32)) / 1e-2;
    for (double s : {1e-2, 1e-3, 1e-4}) {
        const double ratio = bending_energy(wiggle(s, 32)) / (s * s);
        CHECK(ratio == doctest::Approx(base).epsilon(1e-2));
    }
}
