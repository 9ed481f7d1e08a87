#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "elastica/polygon.hpp"

using namespace elastica;

namespace {

const double kPi = std::acos(-1.0);

Polygon right_angle_polygon() {
    auto part = Partition::uniform(2.0, 2);
    return make_polygon(part, {Vec(0, 0), Vec(1, 0), Vec(1, 1)});
}

// Open polygon tracing a circular arc of radius r spanning `span` radians,
// n edges; reference lengths equal the chord lengths (zero strain).
Polygon arc_polygon(double r, double span, Index n, int dim = 2) {
    const double chord = 2.0 * r * std::sin(span / (2.0 * static_cast<double>(n)));
    auto part = Partition::uniform(chord * static_cast<double>(n), n);
    std::vector<Vec> pos;
    for (Index i = 0; i <= n; ++i) {
        const double th = span * static_cast<double>(i) / static_cast<double>(n);
        pos.push_back(dim == 2 ? Vec(r * std::cos(th), r * std::sin(th))
                               : Vec(r * std::cos(th), r * std::sin(th), 0.1 * th));
    }
    if (dim == 3) return make_polygon(part, pos);  // reference lengths only near chords
    return make_polygon(part, pos);
}

Polygon random_polygon(std::mt19937_64& rng, Index n, int dim) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    // random walk with bounded turning to stay away from alpha = pi
    std::vector<Vec> pos;
    Vec p = Vec::zero(dim);
    Vec dir = dim == 2 ? Vec(1, 0) : Vec(1, 0, 0);
    pos.push_back(p);
    for (Index i = 0; i < n; ++i) {
        Vec jitter = dim == 2 ? Vec(unit(rng), unit(rng)) : Vec(unit(rng), unit(rng), unit(rng));
        dir = normalized(dir + 0.45 * jitter);
        const double step = 0.5 + 0.3 * unit(rng);
        p += step * dir;
        pos.push_back(p);
    }
    return make_polygon(Partition::uniform(1.0, n), pos);
}

Field random_displacement(std::mt19937_64& rng, const Polygon& P) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Field u = make_field(P.part, Support::Vertex, P.dim());
    for (Index i = 0; i < P.vertex_count(); ++i)
        for (int c = 0; c < P.dim(); ++c) u.at(i, c) = unit(rng);
    return u;
}

double cv_max(const ConstraintValue& a) {
    double m = std::max(std::max(norm(a.pos0), norm(a.posL)), std::max(norm(a.tan0), norm(a.tanL)));
    for (Index I = 0; I < a.strain.count(); ++I) m = std::max(m, std::abs(a.strain.at(I)));
    return m;
}

ConstraintValue cv_sub(const ConstraintValue& a, const ConstraintValue& b) {
    ConstraintValue d{a.pos0 - b.pos0, a.posL - b.posL, a.tan0 - b.tan0, a.tanL - b.tanL, a.strain};
    for (Index I = 0; I < a.strain.count(); ++I) d.strain.at(I) = a.strain.at(I) - b.strain.at(I);
    return d;
}

Polygon displaced(const Polygon& P, const Field& u, double eps) {
    std::vector<Vec> pos = P.pos;
    for (Index i = 0; i < P.vertex_count(); ++i)
        pos[static_cast<std::size_t>(i)] += eps * u.vec_at(i);
    return make_polygon(P.part, pos);
}

}  // namespace

TEST_CASE("immersion validation") {
    auto part = Partition::uniform(2.0, 2);
    CHECK_THROWS_AS(make_polygon(part, {Vec(0, 0), Vec(0, 0), Vec(1, 1)}), ImmersionViolation);
    CHECK_THROWS_AS(make_polygon(part, {Vec(0, 0), Vec(1, 0)}), InvalidArgument);
    CHECK_THROWS_AS(make_polygon(part, {Vec(0, 0), Vec(1, 0), Vec(1, 1, 1)}), InvalidArgument);
}

TEST_CASE("strain values") {
    auto part = Partition::uniform(2.0, 2);
    auto P = make_polygon(part, {Vec(0, 0), Vec(1, 0), Vec(1 + std::exp(1.0), 0)});
    auto s = strain(P);
    CHECK(s.at(0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(s.at(1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("turning angles and curvature on the right angle") {
    auto P = right_angle_polygon();
    auto a = turning_angles(P);
    CHECK(a.at(1) == doctest::Approx(kPi / 2).epsilon(1e-14));
    auto k = curvature(P);
    CHECK(norm(k.vec_at(1)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(bending_energy(P) == doctest::Approx(kPi * kPi / 8).epsilon(1e-14));
}

TEST_CASE("collinear polygon has zero angles and energy") {
    auto part = Partition::uniform(3.0, 3);
    auto P = make_polygon(part, {Vec(0, 0), Vec(1, 0), Vec(2, 0), Vec(3, 0)});
    auto a = turning_angles(P);
    for (Index i = 1; i <= 2; ++i) CHECK(a.at(i) == 0.0);
    CHECK(bending_energy(P) == 0.0);
    auto g = bending_energy_gradient(P);
    for (Index i = 0; i < 4; ++i) CHECK(norm(g.vec_at(i)) == 0.0);
}

TEST_CASE("regular n-gon turning angles") {
    const Index n = 12;
    auto P = arc_polygon(1.0, 2 * kPi * static_cast<double>(n - 1) / static_cast<double>(n), n - 1);
    auto a = turning_angles(P);
    for (Index i = 1; i < n - 1; ++i) CHECK(a.at(i) == doctest::Approx(2 * kPi / n).epsilon(1e-12));
}

TEST_CASE("closed regular polygon energy matches the circle for every n") {
    const double L = 2 * kPi;
    for (Index n : {8, 64, 512}) {
        const double c = L / static_cast<double>(n);
        const double r = c / (2.0 * std::sin(kPi / static_cast<double>(n)));
        auto part = Partition::uniform(c * static_cast<double>(n + 1), n + 1);
        std::vector<Vec> pos;
        for (Index i = 0; i <= n + 1; ++i) {
            const double th = 2 * kPi * static_cast<double>(i) / static_cast<double>(n);
            pos.push_back(Vec(r * std::cos(th), r * std::sin(th)));
        }
        auto P = make_polygon(part, pos);
        const double E = bending_energy(P);
        CHECK(std::abs(E - 2 * kPi * kPi / L) / (2 * kPi * kPi / L) <= 1e-12);
    }
}

TEST_CASE("curvature magnitude closed form on random polygons") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 10; ++rep) {
        auto P = random_polygon(rng, 8, rep % 2 ? 3 : 2);
        auto k = curvature(P);
        auto a = turning_angles(P);
        auto w = induced_weights(P);
        for (Index i = 1; i < P.edge_count(); ++i) {
            const double closed = 2.0 * std::sin(a.at(i) / 2) / w.dual[static_cast<std::size_t>(i)];
            CHECK(norm(k.vec_at(i)) == doctest::Approx(closed).epsilon(1e-12));
        }
    }
}

TEST_CASE("energy gradient matches central differences") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 12; ++rep) {
        auto P = random_polygon(rng, 5, rep % 2 ? 3 : 2);
        auto g = bending_energy_gradient(P);
        double diam = 0;
        for (const Vec& p : P.pos) diam = std::max(diam, norm(p - P.pos.front()));
        const double eps = 1e-5 * diam;
        double scale = 0, err = 0;
        for (Index i = 0; i < P.vertex_count(); ++i)
            for (int c = 0; c < P.dim(); ++c) {
                auto Pp = P, Pm = P;
                Pp.at(i)[c] += eps;
                Pm.at(i)[c] -= eps;
                const double fd = (bending_energy(Pp) - bending_energy(Pm)) / (2 * eps);
                err = std::max(err, std::abs(fd - g.at(i, c)));
                scale = std::max(scale, std::abs(fd));
            }
        CHECK(err <= 1e-6 * std::max(1.0, scale));
    }
}

TEST_CASE("gradient vanishes along rigid translations") {
    std::mt19937_64 rng(3);
    auto P = random_polygon(rng, 7, 2);
    auto g = bending_energy_gradient(P);
    Vec s = Vec::zero(2);
    for (Index i = 0; i < P.vertex_count(); ++i) s += g.vec_at(i);
    CHECK(norm(s) <= 1e-12);
}

TEST_CASE("rigid motion invariance and scaling of the energy") {
    std::mt19937_64 rng(19);
    auto P = random_polygon(rng, 9, 3);
    const double E = bending_energy(P);

    Eigen::Matrix3d A;
    A << 0.3, -1.2, 0.4, 0.8, 0.2, -0.5, -0.1, 0.9, 1.1;
    Eigen::Matrix3d Q = Eigen::HouseholderQR<Eigen::Matrix3d>(A).householderQ();
    std::vector<Vec> moved;
    for (const Vec& p : P.pos) {
        Eigen::Vector3d x(p[0], p[1], p[2]);
        Eigen::Vector3d y = Q * x;
        moved.push_back(Vec(y(0) + 2.5, y(1) - 1.0, y(2) + 0.25));
    }
    auto PR = make_polygon(P.part, moved);
    CHECK(bending_energy(PR) == doctest::Approx(E).epsilon(1e-10));

    const double s = 2.75;
    std::vector<Vec> scaled;
    for (const Vec& p : P.pos) scaled.push_back(s * p);
    auto PS = make_polygon(P.part, scaled);
    CHECK(bending_energy(PS) == doctest::Approx(E / s).epsilon(1e-10));
}

TEST_CASE("constraint map blocks") {
    auto P = arc_polygon(1.0, kPi / 2, 16);
    auto t = tangents(P);
    auto bd = make_boundary_data(P.at(0), P.at(16), t.front(), t.back(), kPi / 2);
    auto cv = constraint_map(P, bd);
    CHECK(norm(cv.pos0) == 0.0);
    CHECK(norm(cv.posL) == 0.0);
    CHECK(norm(cv.tan0) == 0.0);
    CHECK(norm(cv.tanL) == 0.0);

    Vec v(0.3, -0.2);
    std::vector<Vec> shifted;
    for (const Vec& p : P.pos) shifted.push_back(p + v);
    auto cv2 = constraint_map(make_polygon(P.part, shifted), bd);
    CHECK(norm(cv2.pos0 - v) <= 1e-14);
    CHECK(norm(cv2.posL - v) <= 1e-14);
    CHECK(norm(cv2.tan0) <= 1e-14);
    for (Index I = 0; I < 16; ++I)
        CHECK(cv2.strain.at(I) == doctest::Approx(cv.strain.at(I)).epsilon(1e-12));

    std::vector<Vec> grown;
    for (const Vec& p : P.pos) grown.push_back(std::exp(1.0) * p);
    auto cv3 = constraint_map(make_polygon(P.part, grown), bd);
    for (Index I = 0; I < 16; ++I)
        CHECK(cv3.strain.at(I) == doctest::Approx(cv.strain.at(I) + 1.0).epsilon(1e-12));
}

TEST_CASE("constraint jacobian matches central differences") {
    std::mt19937_64 rng(23);
    for (int rep = 0; rep < 8; ++rep) {
        auto P = random_polygon(rng, 6, rep % 2 ? 3 : 2);
        auto u = random_displacement(rng, P);
        auto bd = make_boundary_data(Vec::zero(P.dim()),
                                     P.at(P.vertex_count() - 1) - P.at(0) * 0.0,
                                     tangents(P).front(), tangents(P).back(),
                                     polygon_length(P) * 1.5);
        auto jac = constraint_jacobian_apply(P, u);
        const double eps = 1e-6;
        auto cp = constraint_map(displaced(P, u, eps), bd);
        auto cm = constraint_map(displaced(P, u, -eps), bd);
        auto fd = cv_sub(cp, cm);
        fd.pos0 *= 1.0 / (2 * eps);
        fd.posL *= 1.0 / (2 * eps);
        fd.tan0 *= 1.0 / (2 * eps);
        fd.tanL *= 1.0 / (2 * eps);
        for (Index I = 0; I < fd.strain.count(); ++I) fd.strain.at(I) /= 2 * eps;
        CHECK(cv_max(cv_sub(fd, jac)) <= 1e-6 * std::max(1.0, cv_max(jac)));
    }
}

TEST_CASE("constraint jacobian adjoint satisfies the duality identity") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int rep = 0; rep < 8; ++rep) {
        const int dim = rep % 2 ? 3 : 2;
        auto P = random_polygon(rng, 7, dim);
        auto u = random_displacement(rng, P);
        ConstraintValue w{Vec::zero(dim), Vec::zero(dim), Vec::zero(dim), Vec::zero(dim),
                          make_field(P.part, Support::Edge, 1)};
        for (int c = 0; c < dim; ++c) {
            w.pos0[c] = unit(rng);
            w.posL[c] = unit(rng);
            w.tan0[c] = unit(rng);
            w.tanL[c] = unit(rng);
        }
        for (Index I = 0; I < w.strain.count(); ++I) w.strain.at(I) = unit(rng);

        const ConstraintValue ju = constraint_jacobian_apply(P, u);
        const Field jtw = constraint_jacobian_adjoint(P, w);
        double lhs = dot(ju.pos0, w.pos0) + dot(ju.posL, w.posL) + dot(ju.tan0, w.tan0) +
                     dot(ju.tanL, w.tanL);
        for (Index I = 0; I < ju.strain.count(); ++I) lhs += ju.strain.at(I) * w.strain.at(I);
        double rhs = 0;
        for (std::size_t i = 0; i < u.data.size(); ++i) rhs += u.data[i] * jtw.data[i];
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("constraint jacobian on special directions") {
    std::mt19937_64 rng(29);
    auto P = random_polygon(rng, 6, 2);
    Field u = make_field(P.part, Support::Vertex, 2);
    for (Index i = 0; i < P.vertex_count(); ++i) u.set_vec(i, Vec(0.4, -1.1));
    auto jc = constraint_jacobian_apply(P, u);
    CHECK(norm(jc.pos0 - Vec(0.4, -1.1)) <= 1e-15);
    CHECK(norm(jc.posL - Vec(0.4, -1.1)) <= 1e-15);
    CHECK(norm(jc.tan0) <= 1e-15);
    CHECK(norm(jc.tanL) <= 1e-15);
    for (Index I = 0; I < jc.strain.count(); ++I) CHECK(std::abs(jc.strain.at(I)) <= 1e-15);

    // u growing along tangents: strain block equals the per-edge rate.
    auto t = tangents(P);
    auto l = edge_lengths(P);
    Field v = make_field(P.part, Support::Vertex, 2);
    Vec acc = Vec::zero(2);
    std::vector<double> rates{0.3, -0.2, 0.7, 0.1, -0.5, 0.9};
    v.set_vec(0, acc);
    for (Index I = 0; I < P.edge_count(); ++I) {
        acc += rates[static_cast<std::size_t>(I)] * l[static_cast<std::size_t>(I)] *
               t[static_cast<std::size_t>(I)];
        v.set_vec(I + 1, acc);
    }
    auto jv = constraint_jacobian_apply(P, v);
    for (Index I = 0; I < P.edge_count(); ++I)
        CHECK(jv.strain.at(I) == doctest::Approx(rates[static_cast<std::size_t>(I)]).epsilon(1e-12));
}

TEST_CASE("constraint hessian is symmetric and matches differences of the jacobian") {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 6; ++rep) {
        auto P = random_polygon(rng, 6, rep % 2 ? 3 : 2);
        auto u = random_displacement(rng, P);
        auto v = random_displacement(rng, P);
        auto huv = constraint_hessian_apply(P, u, v);
        auto hvu = constraint_hessian_apply(P, v, u);
        CHECK(cv_max(cv_sub(huv, hvu)) <= 1e-12 * std::max(1.0, cv_max(huv)));

        const double eps = 1e-6;
        auto jp = constraint_jacobian_apply(displaced(P, v, eps), u);
        auto jm = constraint_jacobian_apply(displaced(P, v, -eps), u);
        auto fd = cv_sub(jp, jm);
        fd.pos0 *= 1.0 / (2 * eps);
        fd.posL *= 1.0 / (2 * eps);
        fd.tan0 *= 1.0 / (2 * eps);
        fd.tanL *= 1.0 / (2 * eps);
        for (Index I = 0; I < fd.strain.count(); ++I) fd.strain.at(I) /= 2 * eps;
        CHECK(cv_max(cv_sub(fd, huv)) <= 1e-5 * std::max(1.0, cv_max(huv)));

        auto zero = constraint_hessian_apply(
            P, u, [&] {
                Field w = make_field(P.part, Support::Vertex, P.dim());
                for (Index i = 0; i < P.vertex_count(); ++i)
                    w.set_vec(i, P.dim() == 2 ? Vec(1.0, 2.0) : Vec(1.0, 2.0, -1.0));
                return w;
            }());
        CHECK(cv_max(zero) <= 1e-14);
    }
}

TEST_CASE("theta matrix properties") {
    auto P = arc_polygon(1.0, kPi / 2, 16);
    auto th = theta_matrix(P);
    CHECK(th.dim == 2);
    CHECK(th.entries[1] == doctest::Approx(th.entries[2]).epsilon(1e-14));
    CHECK(th.condition < 1e3);

    auto straight = make_polygon(Partition::uniform(3.0, 3),
                                 {Vec(0, 0), Vec(1, 0), Vec(2, 0), Vec(3, 0)});
    CHECK_THROWS_AS(theta_matrix(straight), SingularConfiguration);
}

TEST_CASE("theta condition stays bounded under refinement") {
    auto base = theta_matrix(arc_polygon(1.0, kPi / 2, 16)).condition;
    for (Index n : {32, 64, 128}) {
        auto c = theta_matrix(arc_polygon(1.0, kPi / 2, n)).condition;
        CHECK(c <= 10.0 * base);
    }
}

TEST_CASE("right inverse identity") {
    std::mt19937_64 rng(37);
    for (int rep = 0; rep < 25; ++rep) {
        const int dim = rep % 2 ? 3 : 2;
        auto P = random_polygon(rng, 8, dim);
        auto t = tangents(P);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        ConstraintValue w{Vec::zero(dim), Vec::zero(dim), Vec::zero(dim), Vec::zero(dim),
                          make_field(P.part, Support::Edge, 1)};
        for (int c = 0; c < dim; ++c) {
            w.pos0[c] = unit(rng);
            w.posL[c] = unit(rng);
            w.tan0[c] = unit(rng);
            w.tanL[c] = unit(rng);
        }
        w.tan0 = reject(w.tan0, t.front());
        w.tanL = reject(w.tanL, t.back());
        for (Index I = 0; I < P.edge_count(); ++I) w.strain.at(I) = unit(rng);

        auto u = right_inverse_apply(P, w);
        auto back = constraint_jacobian_apply(P, u);
        CHECK(cv_max(cv_sub(back, w)) <= 1e-10 * std::max(1.0, cv_max(w)));
    }
}

TEST_CASE("right inverse of zero and of pure translations") {
    auto P = arc_polygon(1.0, kPi / 2, 12);
    ConstraintValue w{Vec::zero(2), Vec::zero(2), Vec::zero(2), Vec::zero(2),
                      make_field(P.part, Support::Edge, 1)};
    auto u0 = right_inverse_apply(P, w);
    for (Index i = 0; i < P.vertex_count(); ++i) CHECK(norm(u0.vec_at(i)) == 0.0);

    Vec v(0.7, -0.4);
    w.pos0 = v;
    w.posL = v;
    auto ut = right_inverse_apply(P, w);
    for (Index i = 0; i < P.vertex_count(); ++i) CHECK(norm(ut.vec_at(i) - v) <= 1e-13);
}

TEST_CASE("tame membership") {
    auto straight = make_polygon(Partition::uniform(3.0, 3),
                                 {Vec(0, 0), Vec(1, 0), Vec(2, 0), Vec(3, 0)});
    auto rep = tame_membership(straight, TameBounds{100.0, 100.0, 0.01, 2, 2});
    CHECK(!rep.in_set);
    CHECK(rep.length_ratio == doctest::Approx(1.0).epsilon(1e-14));

    auto P = arc_polygon(1.0, kPi / 2, 32);
    auto r2 = tame_membership(P, TameBounds{1.0, 100.0, 0.1, 2, 2});
    CHECK(r2.length_ratio == doctest::Approx(kPi / (2 * std::sqrt(2.0))).epsilon(1e-3));
    CHECK(r2.in_set);
    auto r3 = tame_membership(P, TameBounds{1.0, 100.0, 0.12, 2, 2});
    CHECK(!r3.in_set);

    // monotone: enlarging bounds never leaves the set
    auto r4 = tame_membership(P, TameBounds{2.0, 200.0, 0.1, 2, 2});
    CHECK(r4.in_set);
}

TEST_CASE("regularity seminorms") {
    auto straight = make_polygon(Partition::uniform(4.0, 4),
                                 {Vec(0, 0), Vec(1, 0), Vec(2, 0), Vec(3, 0), Vec(4, 0)});
    auto r = regularity_seminorms(straight);
    CHECK(r.w2inf == 0.0);
    CHECK(r.tv3 == 0.0);
    CHECK(r.w3inf == 0.0);

    // Unit-circle sample: curvature vectors have magnitude exactly one and
    // rotate by alpha per vertex, so the third-difference magnitudes are
    // exactly 2 sin(alpha/2) per interior edge and w3inf is exactly 1.
    auto C = arc_polygon(1.0, 2 * kPi * 63.0 / 64.0, 63);
    auto rc = regularity_seminorms(C);
    CHECK(std::abs(rc.w2inf - 1.0) <= 1e-12);
    CHECK(rc.tv3 == doctest::Approx(61.0 * 2.0 * std::sin(kPi / 64)).epsilon(1e-12));
    CHECK(rc.w3inf == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("piecewise linear interpolant") {
    auto P = right_angle_polygon();
    auto c = piecewise_linear_interpolant(P);
    CHECK(norm(c.position(0.0) - Vec(0, 0)) == 0.0);
    CHECK(norm(c.position(1.0) - Vec(1, 0)) == 0.0);
    CHECK(norm(c.position(0.5) - Vec(0.5, 0)) <= 1e-15);
    CHECK(norm(c.derivative(1.5) - Vec(0, 1)) <= 1e-15);
    CHECK(c.length() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(c.position(2.5), InvalidArgument);

    // speed is l_P / l_0 when reference lengths differ
    auto part = Partition::from_breakpoints({0, 0.5, 1.0});
    auto Q = make_polygon(part, {Vec(0, 0), Vec(1, 0), Vec(2, 0)});
    auto cq = piecewise_linear_interpolant(Q);
    CHECK(norm(cq.derivative(0.25) - Vec(2, 0)) <= 1e-15);
}
