#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/ellint_2.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "fracwill/errors.hpp"
#include "fracwill/geometry.hpp"

using namespace fracwill;
constexpr double pi = std::numbers::pi;

namespace {

// Nearest boundary point by dense sampling, then bisection on the sign of (Y(t) - x) . Y'(t).
std::pair<double, double> dense_nearest(const PlanarCurve& c, Point x) {
    auto d2 = [&](double t) {
        Point p = c.point(t) - x;
        return dot(p, p);
    };
    auto slope = [&](double t) { return dot(c.point(t) - x, c.point(t + 1e-7) - c.point(t - 1e-7)); };
    const int m = 20000;
    int best = 0;
    for (int i = 1; i < m; ++i)
        if (d2(2 * pi * i / m) < d2(2 * pi * best / m)) best = i;
    double lo = 2 * pi * (best - 1) / m, hi = 2 * pi * (best + 1) / m;
    for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
        double mid = 0.5 * (lo + hi);
        (slope(mid) < 0 ? lo : hi) = mid;
    }
    double t = 0.5 * (lo + hi);
    double d = std::sqrt(d2(t));
    return {t, c.inside(x) ? d : -d};
}

// Curvature as d(tangent angle)/ds, from positions only.
double angle_curvature(const PlanarCurve& c, double t) {
    const double h = 1e-4;
    auto angle = [&](double u) {
        Point d = (1 / (2e-6)) * (c.point(u + 1e-6) - c.point(u - 1e-6));
        return std::atan2(d.y, d.x);
    };
    double dtheta = std::remainder(angle(t + h) - angle(t - h), 2 * pi) / (2 * h);
    double speed = norm((1 / (2e-6)) * (c.point(t + 1e-6) - c.point(t - 1e-6)));
    return dtheta / speed;
}

double wrap_diff(double a, double b) { return std::abs(std::remainder(a - b, 2 * pi)); }

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("curve specs") {
    auto c = PlanarCurve::parse("circle:1");
    CHECK(c.kind() == CurveKind::Circle);
    CHECK(c.a() == 1.0);
    auto e = PlanarCurve::parse("ellipse:2,1@0.5,-1");
    CHECK(e.kind() == CurveKind::Ellipse);
    CHECK(e.a() == 2.0);
    CHECK(e.b() == 1.0);
    CHECK(e.center().x == 0.5);
    CHECK(e.center().y == -1.0);
    CHECK(e.reach() == doctest::Approx(0.5));
    for (const char* bad : {"circle", "square:1", "circle:-1", "ellipse:1,2", "ellipse:2", "circle:1@3", "circle:x"})
        CHECK_THROWS_AS(PlanarCurve::parse(bad), ConfigError);
}

TEST_CASE("signed distance examples") {
    auto c = PlanarCurve::circle(1);
    CHECK(signed_distance(c, {0, 0}) == doctest::Approx(1.0));
    CHECK(signed_distance(c, {2, 0}) == doctest::Approx(-1.0));
    CHECK(signed_distance(c, {0, -std::sqrt(2.0)}) == doctest::Approx(1 - std::sqrt(2.0)));
    auto e = PlanarCurve::ellipse(2, 1);
    CHECK(signed_distance(e, {3, 0}) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(signed_distance(e, {0, 0}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ellipse distance and projection against the dense oracle") {
    auto e = PlanarCurve::ellipse(2, 1, {0.3, -0.2});
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ux(-3.5, 3.5), uy(-2.5, 2.5);
    for (int i = 0; i < 60; ++i) {
        Point x{ux(rng), uy(rng)};
        auto [t, d] = dense_nearest(e, x);
        INFO("x = (" << x.x << ", " << x.y << ")");
        CHECK(signed_distance(e, x) == doctest::Approx(d).epsilon(1e-10));
        if (std::abs(d) < 0.9 * e.reach()) {
            Point p = project_to_boundary(e, x);
            CHECK(norm(p - e.point(t)) < 1e-8);
        }
    }
}

TEST_CASE("projection") {
    auto c = PlanarCurve::circle(1.5, {1, 2});
    Point x{1 + 0.3, 2 + 1.2};
    Point p = project_to_boundary(c, x);
    Point r = x - c.center();
    CHECK(norm(p - (c.center() + (1.5 / norm(r)) * r)) < 1e-14);
    auto e = PlanarCurve::ellipse(2, 1);
    for (double t : {0.0, 0.4, 1.3, 2.9, 4.4}) {
        Point y = e.point(t);
        CHECK(norm(project_to_boundary(e, y) - y) < 1e-12);
        Point x2 = y + 0.3 * e.normal(t);
        Point q = project_to_boundary(e, x2);
        double d = signed_distance(e, x2);
        CHECK(d == doctest::Approx(0.3).epsilon(1e-10));
        CHECK(norm(q + d * e.normal(e.param_of(q)) - x2) < 1e-10);
    }
    CHECK_THROWS_AS(project_to_boundary(e, {0.0, 0.0}), NonUniqueProjectionError);
    CHECK_THROWS_AS(project_to_boundary(PlanarCurve::circle(1), {0.0, 0.0}), NonUniqueProjectionError);
}

TEST_CASE("distance gradient equals the normal at the projection") {
    auto e = PlanarCurve::ellipse(2, 1);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> ut(0, 2 * pi), uz(-0.45, 0.45);
    const double h = 1e-6;
    for (int i = 0; i < 100; ++i) {
        double t = ut(rng), z = uz(rng);
        Point x = e.point(t) + z * e.normal(t);
        Point fd{(signed_distance(e, x + Point{h, 0}) - signed_distance(e, x - Point{h, 0})) / (2 * h),
                 (signed_distance(e, x + Point{0, h}) - signed_distance(e, x - Point{0, h})) / (2 * h)};
        Point n = e.normal(e.param_of(project_to_boundary(e, x)));
        CHECK(norm(fd - n) < 1e-5);
        CHECK(norm(distance_gradient(e, x) - n) < 1e-12);
    }
}

TEST_CASE("distance is 1-Lipschitz") {
    auto e = PlanarCurve::ellipse(2, 1);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 200; ++i) {
        Point x{u(rng), u(rng)}, y{u(rng), u(rng)};
        CHECK(std::abs(signed_distance(e, x) - signed_distance(e, y)) <= norm(x - y) * (1 + 1e-12));
    }
}

TEST_CASE("curvature") {
    auto c = PlanarCurve::circle(2);
    for (double t : {0.0, 1.0, 3.0}) CHECK(curvature(c, c.point(t)) == doctest::Approx(0.5));
    auto e = PlanarCurve::ellipse(2, 1);
    CHECK(curvature(e, {2, 0}) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(angle_curvature(e, 0.0) == doctest::Approx(2.0).epsilon(1e-6));
    for (double t : {0.3, 1.1, 2.0, 5.0}) {
        double closed = 2.0 / std::pow(4 * std::sin(t) * std::sin(t) + std::cos(t) * std::cos(t), 1.5);
        CHECK(e.curvature(t) == doctest::Approx(closed).epsilon(1e-12));
        CHECK(e.curvature(t) == doctest::Approx(angle_curvature(e, t)).epsilon(1e-6));
    }
}

TEST_CASE("local graph of the circle") {
    auto c = PlanarCurve::circle(1);
    FermiChart ch(c, 0.7);
    for (double y : {0.0, 0.1, 0.3}) {
        auto [g, dg] = ch.graph(y);
        CHECK(g == doctest::Approx(1 - std::sqrt(1 - y * y)).epsilon(1e-12));
        CHECK(dg == doctest::Approx(y / std::sqrt(1 - y * y)).epsilon(1e-10));
    }
    // k = g'' / (1 + g'^2)^{3/2} at y = 0 from the graph slope
    const double h = 1e-5;
    double g2 = (ch.graph(h).second - ch.graph(-h).second) / (2 * h);
    CHECK(g2 == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("perimeter and Willmore energy") {
    auto [p1, w1] = perimeter_and_willmore(PlanarCurve::circle(1));
    CHECK(p1 == doctest::Approx(2 * pi).epsilon(1e-14));
    CHECK(w1 == doctest::Approx(2 * pi).epsilon(1e-14));
    auto [p2, w2] = perimeter_and_willmore(PlanarCurve::circle(2));
    CHECK(p2 == doctest::Approx(4 * pi).epsilon(1e-14));
    CHECK(w2 == doctest::Approx(pi).epsilon(1e-14));
    auto e = PlanarCurve::ellipse(2, 1);
    auto [pe, we] = perimeter_and_willmore(e);
    auto [pe2, we2] = perimeter_and_willmore(e, 8192);
    CHECK(std::abs(pe - pe2) < 1e-8);
    CHECK(std::abs(we - we2) < 1e-8);
    double per = 4 * 2 * boost::math::ellint_2(std::sqrt(1 - 0.25));
    CHECK(pe == doctest::Approx(per).epsilon(1e-10));
    double will = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [](double t) { return 4.0 / std::pow(4 * std::sin(t) * std::sin(t) + std::cos(t) * std::cos(t), 2.5); }, 0.0,
        2 * pi, 15, 1e-13);
    CHECK(we == doctest::Approx(will).epsilon(1e-10));
}

TEST_CASE("smoothed distance") {
    auto c = PlanarCurve::circle(1);
    double delta = SmoothedDistance::default_delta(c);
    CHECK(delta == doctest::Approx(0.19));
    CHECK(5 * SmoothedDistance::default_delta(PlanarCurve::ellipse(2, 1)) < 0.5);
    SmoothedDistance sd(c, delta);
    Point n = c.normal(0.3);
    Point y = c.point(0.3);
    CHECK(sd.value(y + 2 * delta * n) == doctest::Approx(2 * delta).epsilon(1e-14));
    CHECK(sd.value(y - 2 * delta * n) == doctest::Approx(-2 * delta).epsilon(1e-14));
    CHECK(sd.value({0, 0}) == 1.0);  // dist = 1 > 5 delta
    CHECK(sd.value({3, 0}) == -1.0);
    SmoothedDistance small(PlanarCurve::circle(3), 0.05);
    CHECK(small.value({0, 0}) == 1.0);  // dist = 3 = 60 delta
    for (int i = 0; i <= 50; ++i) {
        double d = 4 * delta + delta * i / 50.0;
        double b = sd.ramp(d);
        CHECK(b >= 4 * delta - 1e-14);
        CHECK(b <= 1 + 1e-14);
        CHECK(sd.ramp(-d) == -b);
    }
    // second derivative continuous across the band edges: one-sided differences of the slope
    const double h = 1e-8;
    for (double edge : {4 * delta, 5 * delta, -4 * delta, -5 * delta}) {
        double left = (sd.ramp_d1(edge) - sd.ramp_d1(edge - h)) / h;
        double right = (sd.ramp_d1(edge + h) - sd.ramp_d1(edge)) / h;
        CHECK(std::abs(left - right) < 1e-4);
        double l1 = (sd.ramp(edge) - sd.ramp(edge - h)) / h, r1 = (sd.ramp(edge + h) - sd.ramp(edge)) / h;
        CHECK(std::abs(l1 - r1) < 1e-6);
    }
    // closed-form gradient and Hessian against differences in the plane
    const double hh = 1e-5;
    for (double d : {0.1, 4.3 * delta, 4.8 * delta, -4.5 * delta}) {
        Point x = y + d * n;
        Point g = sd.gradient(x);
        CHECK(g.x == doctest::Approx((sd.value(x + Point{hh, 0}) - sd.value(x - Point{hh, 0})) / (2 * hh)).epsilon(1e-6));
        CHECK(g.y == doctest::Approx((sd.value(x + Point{0, hh}) - sd.value(x - Point{0, hh})) / (2 * hh)).epsilon(1e-6));
        Hessian2 H = sd.hessian(x);
        Point gx = (1 / (2 * hh)) * (sd.gradient(x + Point{hh, 0}) - sd.gradient(x - Point{hh, 0}));
        Point gy = (1 / (2 * hh)) * (sd.gradient(x + Point{0, hh}) - sd.gradient(x - Point{0, hh}));
        CHECK(std::abs(H.xx - gx.x) < 1e-5);
        CHECK(std::abs(H.xy - gx.y) < 1e-5);
        CHECK(std::abs(H.yy - gy.y) < 1e-5);
    }
}

TEST_CASE("Fermi map") {
    auto c = PlanarCurve::circle(1);
    FermiChart ch(c, 0.0);
    for (double z : {-0.3, 0.1, 0.5}) CHECK(signed_distance(c, ch.map(0, z)) == doctest::Approx(z).epsilon(1e-14));
    CHECK(ch.jacobian(0, 0.2) == doctest::Approx(0.8).epsilon(1e-14));
    // determinant against differences of the map
    auto e = PlanarCurve::ellipse(2, 1);
    FermiChart ce(e, 0.9);
    const double h = 1e-6;
    for (auto [y, z] : {std::pair{0.0, 0.1}, {0.2, -0.3}, {-0.4, 0.2}}) {
        Point dy = (1 / (2 * h)) * (ce.map(y + h, z) - ce.map(y - h, z));
        Point dz = (1 / (2 * h)) * (ce.map(y, z + h) - ce.map(y, z - h));
        CHECK(std::abs(dy.x * dz.y - dy.y * dz.x) == doctest::Approx(ce.jacobian(y, z)).epsilon(1e-7));
        auto [yi, zi] = ce.inverse(ce.map(y, z));
        CHECK(yi == doctest::Approx(y).epsilon(1e-10));
        CHECK(zi == doctest::Approx(z).epsilon(1e-10));
    }
    // det minus the product term shrinks at least linearly in |y|
    double prev = 0.0;
    for (double y : {0.2, 0.1, 0.05, 0.025}) {
        double r = std::abs(ch.jacobian(y, 0.3) - (1 - 0.3));
        if (prev > 0.0) CHECK(r <= 0.5 * prev * (1 + 1e-6));
        prev = r;
    }
    CHECK_THROWS_AS(ce.map(0.0, 0.5), FoldError);
    CHECK_THROWS_AS(ce.map(0.0, -0.6), FoldError);
    CHECK_NOTHROW(ce.map(0.0, 0.49));
    CHECK_THROWS_AS(ch.map(0.0, 1.0), FoldError);
}

TEST_CASE("tangential distance expansion") {
    auto e = PlanarCurve::ellipse(2, 1);
    FermiChart ch(e, 0.6);
    for (double z0 : {0.0, 0.05, -0.1}) {
        double r1 = std::abs(ch.tangential_residual(0.02, z0));
        double r2 = std::abs(ch.tangential_residual(0.01, z0));
        INFO("z0 = " << z0);
        // O(|z0| |y|^3 + |y|^4): at least cubic
        CHECK(std::log(r1 / r2) / std::log(2.0) > 2.8);
    }
}

TEST_CASE("inner ball maps inside the chart box") {
    auto c = PlanarCurve::circle(1);
    double delta = SmoothedDistance::default_delta(c), Lambda = 20;
    double rad = delta / (10 * Lambda);
    FermiChart ch(c, 0.4);
    Point x0 = ch.map(0.0, delta / (20 * Lambda));
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-rad, rad);
    int inside = 0;
    while (inside < 500) {
        Point d{u(rng), u(rng)};
        if (norm(d) >= rad) continue;
        ++inside;
        auto [y, z] = ch.inverse(x0 + d);
        CHECK(std::hypot(y, z) < delta / Lambda);
    }
}

TEST_CASE("translation") {
    auto e = PlanarCurve::ellipse(2, 1);
    auto f = e.translated({1.5, -0.5});
    for (Point x : {Point{0.3, 0.2}, Point{2.5, 0.1}, Point{-1, 1}})
        CHECK(signed_distance(f, x + Point{1.5, -0.5}) == doctest::Approx(signed_distance(e, x)).epsilon(1e-12));
}

}  // TEST_SUITE
