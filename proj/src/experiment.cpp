#include "fracwill/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <tuple>

#include "fracwill/constants.hpp"
#include "fracwill/core_math.hpp"
#include "fracwill/errors.hpp"
#include "fracwill/fraclap1d.hpp"
#include "fracwill/parallel.hpp"
#include "fracwill/quadrature.hpp"

namespace fracwill {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kPairCells = 64;  // width of the paired zone around r, in core radii

using Interval = std::pair<double, double>;

double series_2f1(double a, double b, double c, double z) {
    double term = 1.0, sum = 1.0;
    for (int n = 0; n < 2000; ++n) {
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

void check_s(double s) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("fractional order s must lie in (0,1)");
}

// Splits [a, b] until each piece is no wider than cap(a, b).
void refine(double a, double b, const std::function<double(double, double)>& cap, std::vector<Interval>& out,
            int depth = 0) {
    if (!(b > a)) return;
    if (b - a <= cap(a, b) || depth > 60) {
        out.emplace_back(a, b);
        return;
    }
    double m = 0.5 * (a + b);
    refine(a, m, cap, out, depth + 1);
    refine(m, b, cap, out, depth + 1);
}

// Sorted, deduplicated breaks restricted to [a, b], endpoints included.
std::vector<double> clip_breaks(double a, double b, std::vector<double> br) {
    br.push_back(a);
    br.push_back(b);
    std::vector<double> out;
    for (double x : br)
        if (x >= a && x <= b) out.push_back(x);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double gl_sum(const std::function<double(double)>& g, const std::vector<Interval>& panels, int order) {
    const GaussRule& rule = gauss_rule(order);
    double sum = 0.0;
    for (const auto& [a, b] : panels) sum += integrate_gauss(g, a, b, rule);
    return sum;
}

// Pieces of [a, b] split at the field breaks and refined against the width cap and the
// distance to the singular radius r.
std::vector<Interval> radial_panels(const RadialField& f, double r, double a, double b, double floor_width,
                                    const std::vector<double>& extra = {}) {
    std::vector<double> br = f.breaks;
    br.push_back(f.rho_in);
    br.push_back(f.rho_out);
    br.insert(br.end(), extra.begin(), extra.end());
    br = clip_breaks(a, b, br);
    auto cap = [&](double lo, double hi) {
        double m = 0.5 * (lo + hi);
        double c = f.width ? f.width(m) : std::numeric_limits<double>::infinity();
        double dist = r <= lo ? lo - r : (r >= hi ? r - hi : 0.0);
        return std::min(c, std::max(0.5 * dist, floor_width));
    };
    std::vector<Interval> out;
    for (std::size_t i = 0; i + 1 < br.size(); ++i) refine(br[i], br[i + 1], cap, out);
    return out;
}

// int_{rho0}^inf K(r, rho) rho d rho for r < rho0.
double outer_kernel_mass(const RingKernel& K, const RadialField& f, double r, double rho0) {
    const double s = K.s();
    double rho1 = 2.0 * std::max(rho0, r);
    auto panels = radial_panels(f, r, rho0, rho1, 1e-300);
    double near = gl_sum([&](double rho) { return K(r, rho) * rho; }, panels, 10);
    // rho = rho1 / x: the tail becomes x^{2s-1} times a smooth function of x.
    auto g = [&](double x) {
        double rho = rho1 / x;
        return K(r, rho) * rho * (rho1 / (x * x)) / std::pow(x, 2.0 * s - 1.0);
    };
    AdaptiveOptions ao;
    ao.abs_tol = 0.0;
    ao.rel_tol = 1e-13;
    ao.max_panels = 200;
    double far = integrate_power_weight(g, 1.0, 2.0 * s - 1.0, ao).value;
    return near + far;
}

}  // namespace

RingKernel::RingKernel(double s) : s_(s) {
    check_s(s);
    if (std::abs(s - 0.5) < 1e-9) throw DomainError("RingKernel: s = 1/2 needs the logarithmic connection formula");
    const double sp = std::sqrt(kPi);
    A_ = std::tgamma(-s - 0.5) / (std::tgamma(-s) * sp);
    B_ = std::tgamma(s + 0.5) / (std::tgamma(1.0 + s) * sp);
}

double RingKernel::eval(double sum, double q) const {
    const double s = s_, w = q * q;  // w = 1 - z without cancellation
    double F;
    if (w >= 0.5) {
        F = series_2f1(1.0 + s, 0.5, 1.0, 1.0 - w);
    } else {
        F = A_ * series_2f1(1.0 + s, 0.5, 1.5 + s, w) + B_ * std::pow(w, -s - 0.5) * series_2f1(-s, 0.5, 0.5 - s, w);
    }
    return 2.0 * kPi * std::pow(sum, -2.0 - 2.0 * s) * F;
}

double RingKernel::operator()(double r, double rho) const {
    const double sum = r + rho;
    return eval(sum, (r - rho) / sum);
}

double RingKernel::offset(double r, double t) const {
    const double sum = 2.0 * r + t;
    return eval(sum, -t / sum);
}

double flap2d_radial(const RadialField& f, double r, double s) {
    check_s(s);
    if (!(r >= 0.0)) throw DomainError("flap2d_radial: radius must be nonnegative");
    const RingKernel K(s);
    const double gam = gamma_ds(2, s);
    auto U = [&](double rho) {
        if (rho <= f.rho_in) return f.u_in;
        if (rho >= f.rho_out) return f.u_out;
        return f.U(rho);
    };
    const double Ur = U(r);
    auto integrand = [&](double rho) { return (Ur - U(rho)) * K(r, rho) * rho; };
    const bool active = r > f.rho_in && r < f.rho_out;
    const double p1 = 1.0 - 2.0 * s;
    double tc = f.core;
    double total = 0.0;

    if (active) {
        double Tp = std::min(0.5 * r, kPairCells * tc);
        if (Tp < 2.0 * tc) {
            tc = 0.25 * r;
            Tp = 0.5 * r;
        }
        auto pair = [&](double t) { return integrand(r + t) + integrand(r - t); };
        // Core [0, tc]: Taylor model of U from 5-point differences with step tc/2, exact kernel.
        const double hs = 0.5 * tc;
        // differences taken against U(r) so that a locally constant U gives exact zeros
        const double um2 = U(r - 2.0 * hs) - Ur, um1 = U(r - hs) - Ur, up1 = U(r + hs) - Ur,
                     up2 = U(r + 2.0 * hs) - Ur;
        const double d1 = (um2 - 8.0 * um1 + 8.0 * up1 - up2) / (12.0 * hs);
        const double d2 = (-um2 + 16.0 * um1 + 16.0 * up1 - up2) / (12.0 * hs * hs);
        const double d3 = (-um2 + 2.0 * um1 - 2.0 * up1 + up2) / (2.0 * hs * hs * hs);
        const double d4 = (um2 - 4.0 * um1 - 4.0 * up1 + up2) / (hs * hs * hs * hs);
        auto core = [&](double t) {
            t = std::max(t, 1e-8 * tc);  // g is bounded at 0; keeps r + t distinct from r
            double kp = K.offset(r, t) * (r + t), km = K.offset(r, -t) * (r - t);
            double even = -(d2 + d4 * t * t / 12.0) * 0.5 * (kp + km) * t * t;
            double odd = -(2.0 * d1 + d3 * t * t / 3.0) * 0.5 * (kp - km) * t;
            return (even + odd) / std::pow(t, p1);
        };
        AdaptiveOptions ao;
        ao.abs_tol = 0.0;
        ao.rel_tol = 1e-11;
        ao.max_panels = 200;
        total += integrate_power_weight(core, tc, p1, ao).value;

        std::vector<double> tb;
        if (f.kinks) {
            std::vector<double> ks;
            f.kinks(r - Tp, r + Tp, ks);
            for (double k : ks) tb.push_back(std::abs(k - r));
        }
        for (double b : f.breaks) tb.push_back(std::abs(b - r));
        tb = clip_breaks(tc, Tp, tb);
        auto cap = [&](double lo, double hi) {
            double m = 0.5 * (lo + hi);
            double c = f.width ? std::min(f.width(r + m), f.width(r - m)) : std::numeric_limits<double>::infinity();
            return std::min(c, 0.5 * lo);
        };
        std::vector<Interval> tp;
        for (std::size_t i = 0; i + 1 < tb.size(); ++i) refine(tb[i], tb[i + 1], cap, tp);
        total += gl_sum(pair, tp, 10);

        double lo_start = r > f.rho_in ? 0.0 : f.rho_in;
        total += gl_sum(integrand, radial_panels(f, r, lo_start, r - Tp, tc), 10);
        total += gl_sum(integrand, radial_panels(f, r, r + Tp, f.rho_out, tc), 10);
        total += (Ur - f.u_out) * outer_kernel_mass(K, f, r, f.rho_out);
    } else {
        // U is locally constant at r: one-sided local models of width tc on each side.
        double lo = r <= f.rho_in ? f.rho_in : 0.0;
        double hi = f.rho_out;
        if (r - tc > lo) total += gl_sum(integrand, radial_panels(f, r, lo, r - tc, tc), 10);
        if (r + tc < hi) total += gl_sum(integrand, radial_panels(f, r, std::max(lo, r + tc), hi, tc), 10);
        if (r - tc >= 0.0 && r - tc > lo) total += integrand(r - tc) * tc / (2.0 - 2.0 * s);
        if (r + tc < hi) total += integrand(r + tc) * tc / (2.0 - 2.0 * s);
        if (r < f.rho_out) total += (Ur - f.u_out) * outer_kernel_mass(K, f, r, f.rho_out);
    }
    return gam * total;
}

double flap2d_polar(const Field2D& f, Point x, double s, const PolarOptions& opt) {
    check_s(s);
    const double gam = gamma_ds(2, s);
    const double ux = f.u(x);
    const double rho_far = norm(x - f.center) + f.extent;
    const double rc = f.core;

    // S(rho) = int_0^{2 pi} (2u(x) - u(x + rho e) - u(x - rho e)) dtheta, trapezoid in theta.
    bool settled = true;
    auto S = [&](double rho) {
        auto term = [&](double th) {
            Point e{std::cos(th), std::sin(th)};
            return 2.0 * ux - f.u(x + rho * e) - f.u(x - rho * e);
        };
        int n = opt.angles;
        double sum = 0.0, mag = 0.0;
        for (int i = 0; i < n; ++i) {
            double v = term(kPi * i / n);
            sum += v;
            mag += std::abs(v);
        }
        double prev = 2.0 * kPi * sum / n;
        while (true) {
            for (int i = 0; i < n; ++i) {
                double v = term(kPi * (i + 0.5) / n);
                sum += v;
                mag += std::abs(v);
            }
            n *= 2;
            double cur = 2.0 * kPi * sum / n;
            // tolerance relative to the integral of |term|
            if (std::abs(cur - prev) <= opt.angle_tol * 2.0 * kPi * mag / n + 1e-300) return cur;
            if (n >= opt.max_angles) {
                settled = false;
                return cur;
            }
            prev = cur;
        }
    };

    // S(rho) = rho^2 (a + b rho^2) near 0.
    double A1 = S(rc) / (rc * rc), A2 = S(0.5 * rc) / (0.25 * rc * rc);
    double b = (A1 - A2) / (0.75 * rc * rc), a = A1 - b * rc * rc;
    double core = a * std::pow(rc, 2.0 - 2.0 * s) / (2.0 - 2.0 * s) + b * std::pow(rc, 4.0 - 2.0 * s) / (4.0 - 2.0 * s);

    auto g = [&](double rho) { return std::pow(rho, -1.0 - 2.0 * s) * S(rho); };
    std::vector<double> br = geometric_breaks(rc, rho_far, opt.ratio);
    double mid = integrate_panels(g, br, gauss_rule(10));
    double check = integrate_panels(g, br, gauss_rule(7));
    double tail = 4.0 * kPi * (ux - f.u_out) * std::pow(rho_far, -2.0 * s) / (2.0 * s);
    double value = 0.5 * gam * (core + mid + tail);
    double gap = 0.5 * gam * std::abs(mid - check);
    if (!settled || gap > opt.check_tol * std::abs(value))
        throw AccuracyError("flap2d_polar: quadrature did not settle", gap);
    return value;
}

RecoveryField::RecoveryField(const PlanarCurve& curve, const SampledProfile& profile, double epsilon, double delta)
    : sd_(curve, delta > 0.0 ? delta : SmoothedDistance::default_delta(curve)), w_(&profile), eps_(epsilon) {
    if (!(epsilon > 0.0)) throw ConfigError("recovery_field: epsilon must be positive");
    if (!(epsilon < sd_.delta())) throw ConfigError("recovery_field: epsilon must be smaller than delta");
    u_in_ = profile.value(1.0 / epsilon);
    u_out_ = profile.value(-1.0 / epsilon);
}

double RecoveryField::of_distance(double d) const { return w_->value(sd_.ramp(d) / eps_); }

double RecoveryField::value(Point x) const { return of_distance(signed_distance(sd_.curve(), x)); }

RadialField RecoveryField::radial() const {
    const PlanarCurve& c = sd_.curve();
    if (c.kind() != CurveKind::Circle) throw ConfigError("radial path needs a circle");
    const double R = c.a(), dl = sd_.delta(), eps = eps_;
    RadialField f;
    f.U = [this, R](double rho) { return of_distance(R - rho); };
    f.rho_in = R - 5.0 * dl;
    f.u_in = u_in_;
    f.rho_out = R + 5.0 * dl;
    f.u_out = u_out_;
    f.breaks = {R - 4.0 * dl, R, R + 4.0 * dl};
    f.width = [R, dl, eps](double rho) {
        double d = std::abs(R - rho);
        return std::min(std::max(0.25 * eps, 0.25 * d), 0.25 * dl);
    };
    const TailedFunction1D* tf = &w_->f;
    f.kinks = [tf, R, dl, eps](double lo, double hi, std::vector<double>& out) {
        double zmax = std::min(tf->L(), 4.0 * dl / eps);
        double zlo = std::max(-zmax, (R - hi) / eps), zhi = std::min(zmax, (R - lo) / eps);
        if (!(zhi >= zlo)) return;
        long i0 = static_cast<long>(std::ceil((zlo + tf->L()) / tf->h()));
        long i1 = static_cast<long>(std::floor((zhi + tf->L()) / tf->h()));
        for (long i = i0; i <= i1; ++i) out.push_back(R - eps * tf->z(static_cast<int>(i)));
    };
    f.core = 2.0 * w_->f.h() * eps;
    return f;
}

Field2D RecoveryField::field() const {
    Field2D f;
    f.u = [this](Point x) { return value(x); };
    f.center = sd_.curve().center();
    f.extent = sd_.curve().outer_radius() + 5.0 * sd_.delta();
    f.u_out = u_out_;
    f.core = 2.0 * w_->f.h() * eps_;
    return f;
}

double flap2d(const RecoveryField& field, Point x, Flap2dPath path) {
    const PlanarCurve& c = field.curve();
    if (path == Flap2dPath::Auto) path = c.kind() == CurveKind::Circle ? Flap2dPath::Radial : Flap2dPath::Polar;
    if (path == Flap2dPath::Radial) return flap2d_radial(field.radial(), norm(x - c.center()), field.s());
    return flap2d_polar(field.field(), x, field.s());
}

ExpansionTerms fermi_expansion_residual(const RecoveryField& field, Point x0, double Lambda) {
    const double s = field.s(), eps = field.epsilon(), dl = field.smoothed().delta();
    if (!(s > 0.5 && s < 1.0)) throw DomainError("fermi_expansion_residual: s must lie in (1/2, 1)");
    if (!(Lambda >= 1.0)) throw DomainError("fermi_expansion_residual: Lambda must be >= 1");
    Projection p = nearest_point(field.curve(), x0);
    if (!(std::abs(p.distance) <= dl / (10.0 * Lambda)))
        throw RangeError("fermi_expansion_residual: x0 outside the tube of width delta/(10 Lambda)");
    ExpansionTerms t;
    t.z0 = p.distance;
    t.flap2d = flap2d(field, x0);
    t.leading = std::pow(eps, -2.0 * s) * flap_pointwise(field.profile().f, t.z0 / eps, s);
    EtaSpec spec{eps, dl / Lambda, &field.profile()};
    double H = field.curve().curvature(p.t);
    t.curvature = gamma_ds(1, s) / (2.0 * (2.0 * s - 1.0)) * H * eta(spec, t.z0);
    t.residual = std::abs(t.flap2d - t.leading - t.curvature);
    return t;
}

double omega_radius(const RecoveryField& field, const EnergyConfig& cfg) {
    return field.curve().outer_radius() + 5.0 * field.smoothed().delta() + cfg.omega_margin;
}

namespace {

// Radial panels for integrals over r in [0, R_Omega] on a circle field.
std::vector<Interval> energy_panels(const RadialField& f, double R, double delta, double r_max) {
    std::vector<double> br = {0.0, f.rho_in, R - delta, R, R + delta, f.rho_out, r_max};
    br.insert(br.end(), f.breaks.begin(), f.breaks.end());
    br = clip_breaks(0.0, r_max, br);
    auto cap = [&](double lo, double hi) { return f.width(0.5 * (lo + hi)); };
    std::vector<Interval> out;
    for (std::size_t i = 0; i + 1 < br.size(); ++i) refine(br[i], br[i + 1], cap, out);
    return out;
}

struct Nodes {
    std::vector<double> x, w;
};

Nodes panel_nodes(const std::vector<Interval>& panels, int order) {
    const GaussRule& rule = gauss_rule(order);
    Nodes n;
    for (const auto& [a, b] : panels) {
        double c = 0.5 * (a + b), h = 0.5 * (b - a);
        for (std::size_t q = 0; q < rule.x.size(); ++q) {
            n.x.push_back(c + h * rule.x[q]);
            n.w.push_back(h * rule.w[q]);
        }
    }
    return n;
}

// int_0^inf (U(r) - U(rho))^2 K(r, rho) rho d rho.
double pair_energy_density(const RadialField& f, const RingKernel& K, double r) {
    const double s = K.s();
    auto U = [&](double rho) {
        if (rho <= f.rho_in) return f.u_in;
        if (rho >= f.rho_out) return f.u_out;
        return f.U(rho);
    };
    const double Ur = U(r), tc = f.core;
    auto g = [&](double rho) {
        double d = Ur - U(rho);
        return d * d * K(r, rho) * rho;
    };
    double total = 0.0;
    double lo = r <= f.rho_in ? f.rho_in : 0.0;
    double hi = f.rho_out;
    if (r - tc > lo) {
        total += gl_sum(g, radial_panels(f, r, lo, r - tc, tc), 10);
        total += g(r - tc) * tc / (2.0 - 2.0 * s);
    }
    if (r + tc < hi) {
        total += gl_sum(g, radial_panels(f, r, std::max(lo, r + tc), hi, tc), 10);
        total += g(r + tc) * tc / (2.0 - 2.0 * s);
    }
    if (r < f.rho_out) {
        double d = Ur - f.u_out;
        total += d * d * outer_kernel_mass(K, f, r, f.rho_out);
    }
    return total;
}

double log_normalization(double s, double eps) { return std::abs(s - 0.75) < 1e-12 ? std::abs(std::log(eps)) : 1.0; }

}  // namespace

double energy_F(const RecoveryField& field, const EnergyConfig& cfg, const DoubleWell& W) {
    const double s = field.s(), eps = field.epsilon();
    if (!(s > 0.5 && s < 1.0)) throw DomainError("energy_F: s must lie in (1/2, 1)");
    if (field.curve().kind() != CurveKind::Circle) throw ConfigError("energy_F: only circles are supported");
    RadialField f = field.radial();
    const RingKernel K(s);
    const double R = field.curve().a(), dl = field.smoothed().delta();
    const double R_om = omega_radius(field, cfg);
    const double r_big = 2.0 * f.rho_out;

    Nodes n = panel_nodes(energy_panels(f, R, dl, r_big), 10);
    std::vector<double> E(n.x.size());
    parallel_for(n.x.size(), [&](std::size_t i) { E[i] = pair_energy_density(f, K, n.x[i]); });
    double inner = 0.0;
    for (std::size_t i = 0; i < n.x.size(); ++i) inner += n.w[i] * E[i] * n.x[i];
    // r = r_big / x on the far part: E(r) r dr ~ x^{2s-1} dx.
    auto g = [&](double x) {
        double r = r_big / x;
        return pair_energy_density(f, K, r) * r * (r_big / (x * x)) / std::pow(x, 2.0 * s - 1.0);
    };
    AdaptiveOptions ao;
    ao.abs_tol = 0.0;
    ao.rel_tol = 1e-10;
    ao.max_panels = 100;
    double far = integrate_power_weight(g, 1.0, 2.0 * s - 1.0, ao).value;
    double nonlocal = std::pow(eps, 2.0 * s - 1.0) * gamma_ds(2, s) / 4.0 * 2.0 * kPi * (inner + far);

    Nodes m = panel_nodes(energy_panels(f, R, dl, R_om), 10);
    double local = 0.0;
    for (std::size_t i = 0; i < m.x.size(); ++i) {
        double r = m.x[i];
        double u = r <= f.rho_in ? f.u_in : (r >= f.rho_out ? f.u_out : f.U(r));
        local += m.w[i] * W.W(u) * r;
    }
    local *= 2.0 * kPi / eps;
    return nonlocal + local;
}

EnergyG energy_G(const RecoveryField& field, const EnergyConfig& cfg, const DoubleWell& W) {
    const double s = field.s(), eps = field.epsilon(), dl = field.smoothed().delta();
    if (!(s >= 0.75 && s < 1.0)) throw DomainError("energy_G: s must lie in [3/4, 1)");
    const double R_om = omega_radius(field, cfg);
    const double pre = std::pow(eps, 2.0 * s - 1.0);
    EnergyG out;
    const PlanarCurve& c = field.curve();

    if (c.kind() == CurveKind::Circle) {
        RadialField f = field.radial();
        const double R = c.a();
        Nodes n = panel_nodes(energy_panels(f, R, dl, R_om), 10);
        std::vector<double> I(n.x.size());
        parallel_for(n.x.size(), [&](std::size_t i) {
            double r = n.x[i];
            double u = r <= f.rho_in ? f.u_in : (r >= f.rho_out ? f.u_out : f.U(r));
            I[i] = pre * flap2d_radial(f, r, s) + W.dW(u) / eps;
        });
        for (std::size_t i = 0; i < n.x.size(); ++i) {
            double v = 2.0 * kPi * n.w[i] * I[i] * I[i] * n.x[i] / eps;
            if (std::abs(n.x[i] - R) < dl) out.tube += v;
            else out.far += v;
        }
    } else {
        // Polar coordinates about the centre; quarter plane by the symmetry of the ellipse.
        const int n_phi = 16;
        const double a = c.a(), b = c.b();
        Field2D f = field.field();
        RadialField shape;
        shape.width = [eps, dl](double d) { return std::min(std::max(0.25 * eps, 0.25 * std::abs(d)), 0.25 * dl); };
        for (int j = 0; j < n_phi; ++j) {
            double phi = (j + 0.5) * 0.5 * kPi / n_phi;
            double cp = std::cos(phi), sp = std::sin(phi);
            double rs = 1.0 / std::sqrt(cp * cp / (a * a) + sp * sp / (b * b));
            std::vector<double> br = {0.0, rs - 5.0 * dl, rs - 4.0 * dl, rs - dl, rs, rs + dl, rs + 4.0 * dl,
                                      rs + 5.0 * dl, R_om};
            br = clip_breaks(0.0, R_om, br);
            auto cap = [&](double lo, double hi) { return shape.width(0.5 * (lo + hi) - rs); };
            std::vector<Interval> panels;
            for (std::size_t i = 0; i + 1 < br.size(); ++i) refine(br[i], br[i + 1], cap, panels);
            Nodes n = panel_nodes(panels, 10);
            std::vector<double> I(n.x.size()), d(n.x.size());
            parallel_for(n.x.size(), [&](std::size_t i) {
                Point x = c.center() + Point{n.x[i] * cp, n.x[i] * sp};
                d[i] = signed_distance(c, x);
                I[i] = pre * flap2d_polar(f, x, s) + W.dW(field.of_distance(d[i])) / eps;
            });
            for (std::size_t i = 0; i < n.x.size(); ++i) {
                double v = 4.0 * (0.5 * kPi / n_phi) * n.w[i] * I[i] * I[i] * n.x[i] / eps;
                if (std::abs(d[i]) < dl) out.tube += v;
                else out.far += v;
            }
        }
    }
    double norm_log = log_normalization(s, eps);
    out.tube /= norm_log;
    out.far /= norm_log;
    out.total = out.tube + out.far;
    return out;
}

double tube_cancellation(const RecoveryField& field, const DoubleWell& W, const std::vector<double>& distances) {
    const double s = field.s(), eps = field.epsilon();
    const auto& w = field.profile();
    double worst = 0.0;
    for (double d : distances) {
        double z = d / eps;
        if (std::abs(z) > 0.5 * w.L() || std::abs(d) > 4.0 * field.smoothed().delta()) continue;
        double v = std::pow(eps, 2.0 * s - 1.0) * std::pow(eps, -2.0 * s) * flap_pointwise(w.f, z, s) +
                   W.dW(w.value(z)) / eps;
        worst = std::max(worst, std::abs(v) * eps);
    }
    return worst;
}

double extrapolate_linear(double e1, double v1, double e2, double v2) { return (e1 * v2 - e2 * v1) / (e1 - e2); }

double extrapolate_power(double e1, double v1, double e2, double v2, double p) {
    double a = std::pow(e1, p), b = std::pow(e2, p);
    return (a * v2 - b * v1) / (a - b);
}

bool ExperimentReport::complete() const {
    for (const auto& r : rows)
        if (!r.ok) return false;
    return true;
}

ExperimentReport run_limsup_experiment(const EnergyConfig& cfg, const PlanarCurve& curve, const SampledProfile& profile,
                                       const DoubleWell& W, double kappa) {
    if (cfg.ladder.empty()) throw ConfigError("run_limsup_experiment: empty epsilon ladder");
    for (std::size_t i = 1; i < cfg.ladder.size(); ++i)
        if (!(cfg.ladder[i] < cfg.ladder[i - 1])) throw ConfigError("run_limsup_experiment: ladder must decrease");
    ExperimentReport rep;
    rep.curve = curve.describe();
    rep.s = profile.s;
    rep.kappa_star = kappa;
    std::tie(rep.perimeter, rep.willmore) = perimeter_and_willmore(curve);
    const bool circle = curve.kind() == CurveKind::Circle;
    for (double eps : cfg.ladder) {
        ExperimentRow row;
        row.epsilon = eps;
        auto t0 = std::chrono::steady_clock::now();
        try {
            RecoveryField field(curve, profile, eps, cfg.delta);
            row.F = circle ? energy_F(field, cfg, W) : std::numeric_limits<double>::quiet_NaN();
            EnergyG g = energy_G(field, cfg, W);
            row.G = g.total;
            row.F_per_ratio = row.F / rep.perimeter;
            row.G_kappaW_ratio = row.G / (kappa * rep.willmore);
            row.tube_share = g.tube_share();
        } catch (const Error& e) {
            row.ok = false;
            row.error = std::string(error_kind_name(e.kind())) + ": " + e.what();
        }
        row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rep.rows.push_back(row);
    }
    std::vector<const ExperimentRow*> good;
    for (const auto& r : rep.rows)
        if (r.ok) good.push_back(&r);
    if (good.size() >= 2) {
        const ExperimentRow& a = *good[good.size() - 2];
        const ExperimentRow& b = *good.back();
        rep.G_limit_linear = extrapolate_linear(a.epsilon, a.G, b.epsilon, b.G);
        double p = 4.0 * rep.s - 3.0;
        rep.G_limit_power = p > 0.0 ? extrapolate_power(a.epsilon, a.G, b.epsilon, b.G, p)
                                    : std::numeric_limits<double>::quiet_NaN();
        rep.F_limit_linear = extrapolate_linear(a.epsilon, a.F, b.epsilon, b.F);
    }
    return rep;
}

namespace {
std::string num(double v) {
    if (std::isnan(v)) return "na";
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}
}  // namespace

void write_experiment_csv(std::ostream& os, const ExperimentReport& rep, bool with_runtime) {
    os << "epsilon,F,G,F_per_ratio,G_kappaW_ratio,tube_share,runtime_s\n";
    for (const auto& r : rep.rows) {
        if (!r.ok) {
            os << num(r.epsilon) << ",error,error,error,error,error," << (with_runtime ? num(r.runtime_s) : "na")
               << "\n";
            continue;
        }
        os << num(r.epsilon) << "," << num(r.F) << "," << num(r.G) << "," << num(r.F_per_ratio) << ","
           << num(r.G_kappaW_ratio) << "," << num(r.tube_share) << "," << (with_runtime ? num(r.runtime_s) : "na")
           << "\n";
    }
    os << "# kappa_star=" << num(rep.kappa_star) << " perimeter=" << num(rep.perimeter)
       << " willmore=" << num(rep.willmore) << "\n";
    os << "# extrapolated G_linear=" << num(rep.G_limit_linear) << " G_power=" << num(rep.G_limit_power)
       << " F_linear=" << num(rep.F_limit_linear) << "\n";
    for (const auto& r : rep.rows)
        if (!r.ok) os << "# row epsilon=" << num(r.epsilon) << " failed: " << r.error << "\n";
}

}  // namespace fracwill
