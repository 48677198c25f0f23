#include "fracwill/core_math.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fracwill/errors.hpp"

namespace fracwill {

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Domain: return "domain";
        case ErrorKind::Range: return "range";
        case ErrorKind::Configuration: return "configuration";
        case ErrorKind::Convergence: return "convergence";
        case ErrorKind::SingularPoint: return "singular_point";
        case ErrorKind::NonUniqueProjection: return "non_unique_projection";
        case ErrorKind::Fold: return "fold";
        case ErrorKind::Accuracy: return "accuracy";
    }
    return "unknown";
}

double gamma_fn(double x) {
    if (!(x > 0.0)) throw DomainError("gamma_fn: argument must be positive, got " + std::to_string(x));
    return std::tgamma(x);
}

double beta_fn(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta_fn: arguments must be positive");
    if (a + b < 170.0) return std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b);
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

double gamma_ds(int d, double s) {
    if (d < 1) throw DomainError("gamma_ds: dimension must be >= 1");
    if (!(s > 0.0 && s < 1.0)) throw DomainError("gamma_ds: s must lie in (0,1)");
    return s * std::pow(2.0, 2.0 * s) * std::pow(std::numbers::pi, -0.5 * d) *
           std::tgamma(0.5 * (d + 2.0 * s)) / std::tgamma(1.0 - s);
}

double radial_moment(double a, double b) {
    if (!(a > -1.0) || !(b > a + 1.0))
        throw DomainError("radial_moment: need a > -1 and b > a + 1");
    return std::tgamma(0.5 * (a + 1.0)) * std::tgamma(0.5 * (b - a - 1.0)) / std::tgamma(0.5 * b);
}

SpecialValue radial_moment_value(double a, double b) {
    double v = radial_moment(a, b);
    return {v, 8.0 * std::numeric_limits<double>::epsilon() * std::abs(v)};
}

double sphere_area(int n) {
    if (n < 1) throw DomainError("sphere_area: dimension must be >= 1");
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double kernel_reduction_constant(int d, double s, double alpha, double beta) {
    if (d < 2) throw DomainError("kernel_reduction_constant: d must be >= 2");
    if (!(s > 0.0 && s < 1.0)) throw DomainError("kernel_reduction_constant: s must lie in (0,1)");
    if (alpha < 0.0 || beta < 0.0) throw DomainError("kernel_reduction_constant: alpha, beta >= 0");
    if (!(2.0 * s + beta + 1.0 > alpha))
        throw DomainError("kernel_reduction_constant: integrability needs 2s + beta + 1 > alpha");
    return 0.5 * sphere_area(d - 1) * radial_moment(alpha + d - 2.0, d + 2.0 * s + beta);
}

SpecialValue kernel_reduction_value(int d, double s, double alpha, double beta) {
    double v = kernel_reduction_constant(d, s, alpha, beta);
    return {v, 16.0 * std::numeric_limits<double>::epsilon() * std::abs(v)};
}

namespace {

double hyp2f1_series(double a, double b, double c, double z) {
    double term = 1.0, sum = 1.0;
    for (int n = 0; n < 4000; ++n) {
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) return sum;
    }
    throw AccuracyError("hyp2f1: series did not converge", std::abs(term));
}

}  // namespace

double hyp2f1(double a, double b, double c, double z) {
    if (!(z >= 0.0 && z < 1.0)) throw DomainError("hyp2f1: z must lie in [0,1)");
    if (z <= 0.5) return hyp2f1_series(a, b, c, z);
    double g = c - a - b;
    if (std::abs(g - std::round(g)) < 1e-8)
        throw DomainError("hyp2f1: c - a - b is an integer, connection formula unavailable");
    double w = 1.0 - z;
    double t1 = std::tgamma(c) * std::tgamma(g) / (std::tgamma(c - a) * std::tgamma(c - b)) *
                hyp2f1_series(a, b, 1.0 - g, w);
    double t2 = std::pow(w, g) * std::tgamma(c) * std::tgamma(-g) / (std::tgamma(a) * std::tgamma(b)) *
                hyp2f1_series(c - a, c - b, 1.0 + g, w);
    return t1 + t2;
}

}  // namespace fracwill
