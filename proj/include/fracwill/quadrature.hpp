#pragma once

#include <functional>
#include <vector>

namespace fracwill {

using Fn = std::function<double(double)>;

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

// Supported orders: 7, 10, 15, 20, 30.
const GaussRule& gauss_rule(int n);

double integrate_gauss(const Fn& f, double a, double b, const GaussRule& rule);

// Fixed rule on each consecutive pair of breakpoints.
double integrate_panels(const Fn& f, const std::vector<double>& breaks, const GaussRule& rule);

struct AdaptiveResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

struct AdaptiveOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_panels = 4000;
};

// Global adaptive Gauss-Kronrod (21 point) bisection.
AdaptiveResult integrate_adaptive(const Fn& f, double a, double b, const AdaptiveOptions& opt = {});

// Adaptive integration over consecutive breakpoints, the tolerance shared across pieces.
AdaptiveResult integrate_adaptive(const Fn& f, const std::vector<double>& breaks,
                                  const AdaptiveOptions& opt = {});

// int_0^a f(z) z^p dz for p > -1 via z = a u^{1/(1+p)}; the weight is absorbed exactly.
AdaptiveResult integrate_power_weight(const Fn& f, double a, double p, const AdaptiveOptions& opt = {});

// Breakpoints a, a*r, a*r^2, ... capped at b (geometric grading away from a > 0).
std::vector<double> geometric_breaks(double a, double b, double ratio);

}  // namespace fracwill
