#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "fracwill/geometry.hpp"
#include "fracwill/profile.hpp"

namespace fracwill {

// int_0^{2 pi} |x - y|^{-2-2s} dtheta over the circle |y| = rho, |x| = r:
// 2 pi (r+rho)^{-2-2s} 2F1(1+s, 1/2; 1; 4 r rho/(r+rho)^2); s in (0,1), s != 1/2.
class RingKernel {
public:
    explicit RingKernel(double s);
    double operator()(double r, double rho) const;
    // K(r, r + t), exact in t when t is small against r.
    double offset(double r, double t) const;
    double s() const { return s_; }

private:
    double eval(double sum, double q) const;
    double s_, A_, B_;
};

// Radial function on R^2 for the ring-kernel path.
struct RadialField {
    std::function<double(double)> U;
    double rho_in = 0.0, u_in = 0.0;    // U == u_in on [0, rho_in]
    double rho_out = 1.0, u_out = 0.0;  // U == u_out on [rho_out, inf)
    std::vector<double> breaks;         // radii of reduced smoothness
    std::function<double(double)> width;  // panel width cap at a radius
    std::function<void(double, double, std::vector<double>&)> kinks;  // interpolation nodes in [lo, hi]
    double core = 1e-4;                 // radius of the local model around the evaluation point
};

struct Field2D {
    std::function<double(Point)> u;
    Point center;
    double extent = 1.0;  // u == u_out for |x - center| >= extent
    double u_out = 0.0;
    double core = 1e-4;
};

struct PolarOptions {
    int angles = 64;          // initial trapezoid nodes on [0, pi)
    int max_angles = 1024;    // doubled until two successive sums agree to angle_tol
    double angle_tol = 1e-7;  // relative to the integral of |2u(x) - u(x+y) - u(x-y)|
    double ratio = 1.25;      // geometric radial panels, 10-point Gauss each
    double check_tol = 1e-3;  // relative gap to the embedded 7-point sum; AccuracyError above
};

// (gamma_{2,s}/2) int (2u(x) - u(x+y) - u(x-y)) |y|^{-2-2s} dy by the ring kernel.
double flap2d_radial(const RadialField& f, double r, double s);
// The same operator by polar quadrature centred at x; AccuracyError when it fails to settle.
double flap2d_polar(const Field2D& f, Point x, double s, const PolarOptions& opt = {});

// u_eps(x) = w(beta(x) / eps).
class RecoveryField {
public:
    RecoveryField(const PlanarCurve& curve, const SampledProfile& profile, double epsilon, double delta = 0.0);

    const PlanarCurve& curve() const { return sd_.curve(); }
    const SmoothedDistance& smoothed() const { return sd_; }
    const SampledProfile& profile() const { return *w_; }
    double epsilon() const { return eps_; }
    double s() const { return w_->s; }
    double u_in() const { return u_in_; }
    double u_out() const { return u_out_; }

    double value(Point x) const;
    double of_distance(double d) const;  // u as a function of the signed distance

    RadialField radial() const;  // circles only
    Field2D field() const;

private:
    SmoothedDistance sd_;
    const SampledProfile* w_;
    double eps_;
    double u_in_, u_out_;
};

enum class Flap2dPath { Auto, Radial, Polar };

double flap2d(const RecoveryField& field, Point x, Flap2dPath path = Flap2dPath::Auto);

struct ExpansionTerms {
    double z0 = 0.0;
    double flap2d = 0.0;
    double leading = 0.0;    // eps^{-2s} (flap w)(z0/eps)
    double curvature = 0.0;  // gamma_{1,s}/(2(2s-1)) H eta_{eps, delta/Lambda}(z0)
    double residual = 0.0;
};

// x0 must lie within delta/(10 Lambda) of the curve.
ExpansionTerms fermi_expansion_residual(const RecoveryField& field, Point x0, double Lambda);

struct EnergyConfig {
    double s = 0.8;
    double omega_margin = 1.0;  // R_Omega = outer radius + 5 delta + margin
    double delta = 0.0;         // tube width; 0 selects the default
    std::vector<double> ladder{0.08, 0.04, 0.02};
};

double omega_radius(const RecoveryField& field, const EnergyConfig& cfg);

struct EnergyG {
    double total = 0.0;  // divided by |log eps| when s = 3/4
    double tube = 0.0;   // part over |dist| < delta
    double far = 0.0;
    double tube_share() const { return far > 0.0 ? tube / far : 0.0; }
};

double energy_F(const RecoveryField& field, const EnergyConfig& cfg, const DoubleWell& W);
EnergyG energy_G(const RecoveryField& field, const EnergyConfig& cfg, const DoubleWell& W);

// max over the given distances (|d| <= eps L/2) of |eps^{2s-1} flap1d(w_eps) + W'(w_eps)/eps| * eps.
double tube_cancellation(const RecoveryField& field, const DoubleWell& W, const std::vector<double>& distances);

struct ExperimentRow {
    double epsilon = 0.0;
    double F = 0.0, G = 0.0;
    double F_per_ratio = 0.0, G_kappaW_ratio = 0.0, tube_share = 0.0;
    double runtime_s = 0.0;
    bool ok = true;
    std::string error;
};

struct ExperimentReport {
    std::string curve;
    double s = 0.0;
    double kappa_star = 0.0;
    double perimeter = 0.0, willmore = 0.0;
    std::vector<ExperimentRow> rows;
    double G_limit_linear = 0.0, G_limit_power = 0.0;
    double F_limit_linear = 0.0;
    bool complete() const;
};

ExperimentReport run_limsup_experiment(const EnergyConfig& cfg, const PlanarCurve& curve,
                                       const SampledProfile& profile, const DoubleWell& W, double kappa);

// Fixed header epsilon,F,G,F_per_ratio,G_kappaW_ratio,tube_share,runtime_s; runtime is written
// only when with_runtime is set, "na" otherwise.
void write_experiment_csv(std::ostream& os, const ExperimentReport& rep, bool with_runtime);

// Two-point limits: linear in eps, and in eps^p.
double extrapolate_linear(double e1, double v1, double e2, double v2);
double extrapolate_power(double e1, double v1, double e2, double v2, double p);

}  // namespace fracwill
