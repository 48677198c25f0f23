#pragma once

#include <string>
#include <utility>

namespace fracwill {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double c, Point a) { return {c * a.x, c * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
double norm(Point a);

enum class CurveKind { Circle, Ellipse };

// Closed convex curve, counterclockwise parameter t in [0, 2 pi):
// Y(t) = center + (a cos t, b sin t); the circle has a = b = R.
class PlanarCurve {
public:
    static PlanarCurve circle(double R, Point center = {});
    static PlanarCurve ellipse(double a, double b, Point center = {});
    // "circle:R" or "ellipse:a,b", optionally followed by "@cx,cy".
    static PlanarCurve parse(const std::string& spec);

    CurveKind kind() const { return kind_; }
    double a() const { return a_; }
    double b() const { return b_; }
    Point center() const { return c_; }
    PlanarCurve translated(Point shift) const;

    double reach() const { return b_ * b_ / a_; }
    double outer_radius() const { return a_; }
    bool inside(Point x) const;  // open interior E

    Point point(double t) const;
    double speed(double t) const;     // |Y'(t)|
    Point tangent(double t) const;    // unit, counterclockwise
    Point normal(double t) const;     // unit inner normal N
    double curvature(double t) const; // positive on convex curves
    double param_of(Point on_curve) const;

    std::string describe() const;

private:
    CurveKind kind_ = CurveKind::Circle;
    double a_ = 1.0, b_ = 1.0;
    Point c_{};
};

struct Projection {
    double t = 0.0;       // parameter of the nearest point
    Point point;          // nearest point on the curve
    double distance = 0;  // signed: positive inside
};

// Nearest point and signed distance; no reach restriction.
Projection nearest_point(const PlanarCurve& c, Point x);

// Positive inside E, negative outside.
double signed_distance(const PlanarCurve& c, Point x);

// Requires |dist| < reach; NonUniqueProjectionError otherwise.
Point project_to_boundary(const PlanarCurve& c, Point x);

// Gradient of the signed distance, N(pi(x)); requires |dist| < reach.
Point distance_gradient(const PlanarCurve& c, Point x);

// Curvature at a point of the curve.
double curvature(const PlanarCurve& c, Point on_curve);

// (perimeter, int curvature^2 ds); trapezoid rule with `nodes` points for ellipses.
std::pair<double, double> perimeter_and_willmore(const PlanarCurve& c, int nodes = 4096);

struct Hessian2 {
    double xx = 0.0, xy = 0.0, yy = 0.0;
};

// C2 version of the signed distance: dist on the 4 delta tube, sgn(dist) beyond 5 delta,
// quintic ramp in between.
class SmoothedDistance {
public:
    SmoothedDistance(PlanarCurve curve, double delta);
    // 0.95 min(reach, 1) / 5, so that 5 delta stays inside the tube of unique projection.
    static double default_delta(const PlanarCurve& c);

    const PlanarCurve& curve() const { return curve_; }
    double delta() const { return delta_; }

    // Profile of beta as a function of the signed distance, with first and second derivatives.
    double ramp(double d) const;
    double ramp_d1(double d) const;
    double ramp_d2(double d) const;

    double value(Point x) const;
    Point gradient(Point x) const;
    Hessian2 hessian(Point x) const;

private:
    PlanarCurve curve_;
    double delta_;
};

// Fermi chart centred at Y(t0): the curve near Y(t0) as a graph y -> Y0 + y T0 + g(y) N0,
// and Phi(y, z) = Y(y) + z N(y).
class FermiChart {
public:
    FermiChart(PlanarCurve curve, double t0);

    const PlanarCurve& curve() const { return curve_; }
    double base() const { return t0_; }

    double param(double y) const;              // curve parameter of the graph point at y
    std::pair<double, double> graph(double y) const;  // (g(y), g'(y))
    Point map(double y, double z) const;       // FoldError when |z| >= reach
    double jacobian(double y, double z) const; // (1 - z k(y)) sqrt(1 + g'^2)
    // (y, z) with map(y, z) = x.
    std::pair<double, double> inverse(Point x) const;

    // |(Y(y) - z0 N0)_tau|^2 - y^2 (1 - k z0)^2 with tau the unit tangent at Y(y).
    double tangential_residual(double y, double z0) const;

private:
    PlanarCurve curve_;
    double t0_;
    Point Y0_, T0_, N0_;
};

}  // namespace fracwill
