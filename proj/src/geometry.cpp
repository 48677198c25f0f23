#include "fracwill/geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "fracwill/errors.hpp"

namespace fracwill {

namespace {

constexpr double kPi = std::numbers::pi;

double sgn(double v) { return (v > 0.0) - (v < 0.0); }

// Nearest point of the axis-aligned ellipse (a >= b) to (y0, y1) with y0, y1 >= 0.
Point ellipse_nearest_quadrant(double a, double b, double y0, double y1) {
    if (y1 > 0.0) {
        if (y0 > 0.0) {
            // F(tau) = (a y0/(tau+a^2))^2 + (b y1/(tau+b^2))^2 - 1 is decreasing and convex
            // on the bracket; Newton steps, bisection when a step leaves it.
            double lo = -b * b + b * y1, hi = -b * b + std::hypot(a * y0, b * y1);
            double tau = lo;
            for (int it = 0; it < 200; ++it) {
                double r0 = a * y0 / (tau + a * a), r1 = b * y1 / (tau + b * b);
                double F = r0 * r0 + r1 * r1 - 1.0;
                if (F > 0.0) lo = tau;
                else hi = tau;
                if (F == 0.0 || !(hi > lo)) break;
                double dF = -2.0 * (r0 * r0 / (tau + a * a) + r1 * r1 / (tau + b * b));
                double next = tau - F / dF;
                if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
                if (std::abs(next - tau) <= 1e-16 * std::max(1.0, std::abs(tau))) {
                    tau = next;
                    break;
                }
                tau = next;
            }
            return {a * a * y0 / (tau + a * a), b * b * y1 / (tau + b * b)};
        }
        return {0.0, b};
    }
    double num = a * a - b * b;
    if (a * y0 < num) {
        double x0 = a * a * y0 / num;
        double r = x0 / a;
        return {x0, b * std::sqrt(std::max(0.0, 1.0 - r * r))};
    }
    return {a, 0.0};
}

double h0(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }
double h0_d1(double u) { return 30.0 * u * u * (1.0 - u) * (1.0 - u); }
double h0_d2(double u) { return 60.0 * u * (1.0 - u) * (1.0 - 2.0 * u); }
// u (1-u)^3 (1+3u) = u - 6u^3 + 8u^4 - 3u^5
double h1(double u) { return u * (1.0 + u * u * (-6.0 + u * (8.0 - 3.0 * u))); }
double h1_d1(double u) { return 1.0 + u * u * (-18.0 + u * (32.0 - 15.0 * u)); }
double h1_d2(double u) { return u * (-36.0 + u * (96.0 - 60.0 * u)); }

}  // namespace

double norm(Point a) { return std::hypot(a.x, a.y); }

PlanarCurve PlanarCurve::circle(double R, Point center) {
    if (!(R > 0.0)) throw DomainError("circle: radius must be positive");
    PlanarCurve c;
    c.kind_ = CurveKind::Circle;
    c.a_ = c.b_ = R;
    c.c_ = center;
    return c;
}

PlanarCurve PlanarCurve::ellipse(double a, double b, Point center) {
    if (!(b > 0.0) || !(a >= b)) throw DomainError("ellipse: need a >= b > 0");
    PlanarCurve c;
    c.kind_ = a == b ? CurveKind::Circle : CurveKind::Ellipse;
    c.a_ = a;
    c.b_ = b;
    c.c_ = center;
    return c;
}

PlanarCurve PlanarCurve::parse(const std::string& spec) {
    std::string body = spec, at;
    if (auto p = spec.find('@'); p != std::string::npos) {
        body = spec.substr(0, p);
        at = spec.substr(p + 1);
    }
    auto colon = body.find(':');
    if (colon == std::string::npos) throw ConfigError("curve spec '" + spec + "' lacks ':'");
    std::string kind = body.substr(0, colon), args = body.substr(colon + 1);
    auto nums = [&](const std::string& s) {
        std::vector<double> v;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            std::size_t used = 0;
            double x = 0.0;
            try {
                x = std::stod(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != tok.size()) throw ConfigError("curve spec '" + spec + "': bad number '" + tok + "'");
            v.push_back(x);
        }
        return v;
    };
    Point center{};
    if (!at.empty()) {
        auto c = nums(at);
        if (c.size() != 2) throw ConfigError("curve spec '" + spec + "': center needs two numbers");
        center = {c[0], c[1]};
    }
    auto v = nums(args);
    try {
        if (kind == "circle" && v.size() == 1) return circle(v[0], center);
        if (kind == "ellipse" && v.size() == 2) return ellipse(v[0], v[1], center);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("curve spec: ") + e.what());
    }
    throw ConfigError("curve spec '" + spec + "' not understood");
}

PlanarCurve PlanarCurve::translated(Point shift) const {
    PlanarCurve c = *this;
    c.c_ = c_ + shift;
    return c;
}

bool PlanarCurve::inside(Point x) const {
    double u = (x.x - c_.x) / a_, v = (x.y - c_.y) / b_;
    return u * u + v * v < 1.0;
}

Point PlanarCurve::point(double t) const { return {c_.x + a_ * std::cos(t), c_.y + b_ * std::sin(t)}; }

double PlanarCurve::speed(double t) const { return std::hypot(a_ * std::sin(t), b_ * std::cos(t)); }

Point PlanarCurve::tangent(double t) const {
    double sp = speed(t);
    return {-a_ * std::sin(t) / sp, b_ * std::cos(t) / sp};
}

Point PlanarCurve::normal(double t) const {
    Point T = tangent(t);
    return {-T.y, T.x};
}

double PlanarCurve::curvature(double t) const {
    double sp = speed(t);
    return a_ * b_ / (sp * sp * sp);
}

double PlanarCurve::param_of(Point p) const { return std::atan2((p.y - c_.y) / b_, (p.x - c_.x) / a_); }

std::string PlanarCurve::describe() const {
    std::ostringstream os;
    os.precision(17);
    if (kind_ == CurveKind::Circle) os << "circle:" << a_;
    else os << "ellipse:" << a_ << "," << b_;
    if (c_.x != 0.0 || c_.y != 0.0) os << "@" << c_.x << "," << c_.y;
    return os.str();
}

Projection nearest_point(const PlanarCurve& c, Point x) {
    Point p = x - c.center();
    Projection out;
    if (c.kind() == CurveKind::Circle) {
        double r = norm(p), R = c.a();
        out.t = r > 0.0 ? std::atan2(p.y, p.x) : 0.0;
        out.point = c.point(out.t);
        out.distance = R - r;
        return out;
    }
    Point q = ellipse_nearest_quadrant(c.a(), c.b(), std::abs(p.x), std::abs(p.y));
    q.x = std::copysign(q.x, p.x);
    q.y = std::copysign(q.y, p.y);
    out.t = std::atan2(q.y / c.b(), q.x / c.a());
    out.point = c.center() + q;
    double d = norm(p - q);
    out.distance = c.inside(x) ? d : -d;
    return out;
}

double signed_distance(const PlanarCurve& c, Point x) { return nearest_point(c, x).distance; }

Point project_to_boundary(const PlanarCurve& c, Point x) {
    Projection p = nearest_point(c, x);
    if (!(std::abs(p.distance) < c.reach()))
        throw NonUniqueProjectionError("project_to_boundary: point is beyond the reach of the curve");
    return p.point;
}

Point distance_gradient(const PlanarCurve& c, Point x) {
    Projection p = nearest_point(c, x);
    if (!(std::abs(p.distance) < c.reach()))
        throw NonUniqueProjectionError("distance_gradient: point is beyond the reach of the curve");
    return c.normal(p.t);
}

double curvature(const PlanarCurve& c, Point on_curve) { return c.curvature(c.param_of(on_curve)); }

std::pair<double, double> perimeter_and_willmore(const PlanarCurve& c, int nodes) {
    if (c.kind() == CurveKind::Circle) return {2.0 * kPi * c.a(), 2.0 * kPi / c.a()};
    if (nodes < 8) throw ConfigError("perimeter_and_willmore: need at least 8 nodes");
    double per = 0.0, will = 0.0, dt = 2.0 * kPi / nodes;
    for (int i = 0; i < nodes; ++i) {
        double t = i * dt, sp = c.speed(t), k = c.curvature(t);
        per += sp;
        will += k * k * sp;
    }
    return {per * dt, will * dt};
}

SmoothedDistance::SmoothedDistance(PlanarCurve curve, double delta) : curve_(curve), delta_(delta) {
    if (!(delta > 0.0 && delta < 0.2)) throw DomainError("SmoothedDistance: delta must lie in (0, 1/5)");
    if (!(5.0 * delta < curve.reach())) throw DomainError("SmoothedDistance: 5 delta must stay below the reach");
}

double SmoothedDistance::default_delta(const PlanarCurve& c) { return 0.95 * std::min(c.reach(), 1.0) / 5.0; }

double SmoothedDistance::ramp(double d) const {
    double ad = std::abs(d);
    if (ad <= 4.0 * delta_) return d;
    if (ad >= 5.0 * delta_) return sgn(d);
    double u = (ad - 4.0 * delta_) / delta_;
    return sgn(d) * (4.0 * delta_ + (1.0 - 4.0 * delta_) * h0(u) + delta_ * h1(u));
}

double SmoothedDistance::ramp_d1(double d) const {
    double ad = std::abs(d);
    if (ad <= 4.0 * delta_) return 1.0;
    if (ad >= 5.0 * delta_) return 0.0;
    double u = (ad - 4.0 * delta_) / delta_;
    return ((1.0 - 4.0 * delta_) * h0_d1(u) + delta_ * h1_d1(u)) / delta_;
}

double SmoothedDistance::ramp_d2(double d) const {
    double ad = std::abs(d);
    if (ad <= 4.0 * delta_ || ad >= 5.0 * delta_) return 0.0;
    double u = (ad - 4.0 * delta_) / delta_;
    return sgn(d) * ((1.0 - 4.0 * delta_) * h0_d2(u) + delta_ * h1_d2(u)) / (delta_ * delta_);
}

double SmoothedDistance::value(Point x) const { return ramp(signed_distance(curve_, x)); }

Point SmoothedDistance::gradient(Point x) const {
    Projection p = nearest_point(curve_, x);
    if (std::abs(p.distance) >= 5.0 * delta_) return {};
    return ramp_d1(p.distance) * curve_.normal(p.t);
}

Hessian2 SmoothedDistance::hessian(Point x) const {
    Projection p = nearest_point(curve_, x);
    double d = p.distance;
    if (std::abs(d) >= 5.0 * delta_) return {};
    Point N = curve_.normal(p.t), T = curve_.tangent(p.t);
    double k = curve_.curvature(p.t);
    double a = ramp_d2(d), b = -ramp_d1(d) * k / (1.0 - d * k);
    return {a * N.x * N.x + b * T.x * T.x, a * N.x * N.y + b * T.x * T.y, a * N.y * N.y + b * T.y * T.y};
}

FermiChart::FermiChart(PlanarCurve curve, double t0) : curve_(curve), t0_(t0) {
    Y0_ = curve_.point(t0);
    T0_ = curve_.tangent(t0);
    N0_ = curve_.normal(t0);
}

double FermiChart::param(double y) const {
    // X(t) = (Y(t) - Y0).T0 is increasing between the two points whose tangent is normal to T0.
    double a = curve_.a(), b = curve_.b();
    double theta = std::atan2(a * a * std::sin(t0_), b * b * std::cos(t0_));
    double off = std::remainder(t0_ - theta, 2.0 * kPi);
    double lo = t0_ - off - 0.5 * kPi, hi = t0_ - off + 0.5 * kPi;
    auto X = [&](double t) { return dot(curve_.point(t) - Y0_, T0_); };
    if (!(y > X(lo) && y < X(hi))) throw RangeError("FermiChart: y outside the graph domain");
    double t = t0_;
    for (int it = 0; it < 200; ++it) {
        double F = X(t) - y;
        if (F > 0.0) hi = t;
        else lo = t;
        if (F == 0.0) break;
        double dX = curve_.speed(t) * dot(curve_.tangent(t), T0_);
        double next = dX > 0.0 ? t - F / dX : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - t) <= 1e-16 * std::max(1.0, std::abs(t))) return next;
        t = next;
    }
    return t;
}

std::pair<double, double> FermiChart::graph(double y) const {
    double t = param(y);
    Point d = curve_.tangent(t);
    return {dot(curve_.point(t) - Y0_, N0_), dot(d, N0_) / dot(d, T0_)};
}

Point FermiChart::map(double y, double z) const {
    if (!(std::abs(z) < curve_.reach())) throw FoldError("fermi_map: |z| must stay below the reach");
    double t = param(y);
    return curve_.point(t) + z * curve_.normal(t);
}

double FermiChart::jacobian(double y, double z) const {
    if (!(std::abs(z) < curve_.reach())) throw FoldError("fermi_map: |z| must stay below the reach");
    double t = param(y);
    double gp = graph(y).second;
    return (1.0 - z * curve_.curvature(t)) * std::sqrt(1.0 + gp * gp);
}

std::pair<double, double> FermiChart::inverse(Point x) const {
    Projection p = nearest_point(curve_, x);
    if (!(std::abs(p.distance) < curve_.reach()))
        throw NonUniqueProjectionError("FermiChart::inverse: point is beyond the reach");
    return {dot(p.point - Y0_, T0_), p.distance};
}

double FermiChart::tangential_residual(double y, double z0) const {
    double t = param(y);
    Point v = curve_.point(t) - Y0_ - z0 * N0_;
    double vt = dot(v, curve_.tangent(t));
    double f = 1.0 - curve_.curvature(t0_) * z0;
    return vt * vt - y * y * f * f;
}

}  // namespace fracwill
