#include "fracwill/heat_kernel.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include "fracwill/errors.hpp"
#include "fracwill/quadrature.hpp"

namespace fracwill {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLogTol = 32.3;     // e^{-32.3} < 1e-14
constexpr double kFarSwitch = 60.0;  // |y| beyond which the far-field series replaces quadrature
constexpr int kGradedPanels = 60;

void check_s(double s) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("heat kernel: s must lie in (0,1)");
}

double cutoff(double t, double s) { return std::pow(kLogTol / t, 1.0 / (2.0 * s)) / (2.0 * kPi); }

// int_0^cut g: geometric panels toward the |xi|^{2s} corner at 0, then panels no wider
// than a quarter period of the oscillation at frequency x.
double osc_integral(const std::function<double(double)>& g, double x, double cut, int* nodes) {
    const double quarter = std::abs(x) > 0.0 ? 0.25 / std::abs(x) : cut;
    const double width = std::min(quarter, cut / 16.0);
    const GaussRule& g15 = gauss_rule(15);
    const GaussRule& g10 = gauss_rule(10);
    double sum = 0.0;
    int count = 0;
    double hi = width;
    for (int j = 0; j < kGradedPanels; ++j) {
        double lo = 0.5 * hi;
        sum += integrate_gauss(g, lo, hi, g15);
        count += 15;
        hi = lo;
    }
    sum += integrate_gauss(g, 0.0, hi, g15);
    count += 15;
    const int panels = static_cast<int>(std::ceil((cut - width) / width));
    for (int i = 0; i < panels; ++i) {
        double a = width + i * width, b = std::min(cut, a + width);
        if (b > a) {
            sum += integrate_gauss(g, a, b, g10);
            count += 10;
        }
    }
    if (nodes) *nodes = count;
    return sum;
}

double p1(double y, double s) {
    if (std::abs(y) > kFarSwitch) return heat_kernel_far(y, s);
    return heat_kernel(1.0, y, s);
}

}  // namespace

KernelEval kernel_eval_plan(double t, double x, double s) {
    check_s(s);
    if (!(t > 0.0)) throw DomainError("heat_kernel: t must be positive");
    KernelEval k;
    k.s = s;
    k.fourier_cutoff = cutoff(t, s);
    osc_integral([](double) { return 0.0; }, x, k.fourier_cutoff, &k.node_count);
    return k;
}

double heat_kernel(double t, double x, double s) {
    check_s(s);
    if (!(t > 0.0)) throw DomainError("heat_kernel: t must be positive");
    const double cut = cutoff(t, s);
    auto g = [&](double xi) {
        return std::exp(-t * std::pow(2.0 * kPi * xi, 2.0 * s)) * std::cos(2.0 * kPi * x * xi);
    };
    return 2.0 * osc_integral(g, x, cut, nullptr);
}

double heat_kernel_deriv(int k, double x, double s) {
    check_s(s);
    if (k < 0 || k > 4) throw ConfigError("heat_kernel_deriv: k must lie in 0..4");
    const double cut = cutoff(1.0, s);
    auto g = [&](double xi) {
        double w = 2.0 * kPi * xi;
        double th = w * x;
        double trig = 0.0;
        switch (k) {
            case 0: trig = std::cos(th); break;
            case 1: trig = -std::sin(th); break;
            case 2: trig = -std::cos(th); break;
            case 3: trig = std::sin(th); break;
            default: trig = std::cos(th); break;
        }
        return std::pow(w, k) * std::exp(-std::pow(w, 2.0 * s)) * trig;
    };
    return 2.0 * osc_integral(g, x, cut, nullptr);
}

double heat_kernel_radial(int d, double r, double s) {
    check_s(s);
    if (d < 1) throw DomainError("heat_kernel_radial: d must be >= 1");
    if (!(r > 0.0)) throw DomainError("heat_kernel_radial: r must be positive");
    const double nu = 0.5 * d - 1.0;
    const double cut = cutoff(1.0, s);
    auto g = [&](double rho) {
        if (rho == 0.0) return 0.0;
        double z = 2.0 * kPi * r * rho;
        // std::cyl_bessel_j rejects negative order; J_{-1/2}(z) = sqrt(2 / (pi z)) cos z
        double j = d == 1 ? std::sqrt(2.0 / (kPi * z)) * std::cos(z) : std::cyl_bessel_j(nu, z);
        return std::exp(-std::pow(2.0 * kPi * rho, 2.0 * s)) * j * std::pow(rho, 0.5 * d);
    };
    return 2.0 * kPi * std::pow(r, 1.0 - 0.5 * d) * osc_integral(g, r, cut, nullptr);
}

double heat_kernel_far(double x, double s, int terms) {
    check_s(s);
    const double a = 2.0 * s, ax = std::abs(x);
    if (!(ax > 0.0)) throw SingularPointError("heat_kernel_far: x must be nonzero");
    double sum = 0.0, fact = 1.0;
    for (int j = 1; j <= terms; ++j) {
        fact *= j;
        double sign = (j % 2 == 1) ? 1.0 : -1.0;
        sum += sign * std::tgamma(a * j + 1.0) / fact * std::sin(kPi * s * j) * std::pow(ax, -a * j - 1.0);
    }
    return sum / kPi;
}

double fundamental_solution(double lambda, double x, double s) {
    check_s(s);
    if (!(lambda > 0.0)) throw DomainError("fundamental_solution: lambda must be positive");
    if (x == 0.0) throw SingularPointError("fundamental_solution: x = 0 is excluded");
    const int nodes = 400;
    const double u0 = -30.0, u1 = 30.0, hu = (u1 - u0) / (nodes - 1);
    const double inv = 1.0 / (2.0 * s);
    double sum = 0.0;
    for (int i = 0; i < nodes; ++i) {
        double u = u0 + i * hu;
        double t = std::exp(u);
        if (lambda * t > 60.0) break;
        double sc = std::pow(t, -inv);
        double w = (i == 0 || i == nodes - 1) ? 0.5 : 1.0;
        sum += w * std::exp(-lambda * t) * t * sc * p1(x * sc, s);
    }
    return sum * hu;
}

double fundamental_solution_mass(double lambda, double s) {
    check_s(s);
    const double a = 2.0 * s, X = 100.0;
    auto G = [&](double x) { return fundamental_solution(lambda, x, s); };
    std::vector<double> br = geometric_breaks(1e-10, 1.0, 2.0);
    std::vector<double> outer = geometric_breaks(1.0, X, 1.25);
    br.insert(br.end(), outer.begin() + 1, outer.end());
    double inner = integrate_panels(G, br, gauss_rule(10));
    // Far field: G ~ sum_j c_j j! / lambda^{j+1} x^{-aj-1}.
    double tail = 0.0, fact = 1.0;
    for (int j = 1; j <= 8; ++j) {
        fact *= j;
        double sign = (j % 2 == 1) ? 1.0 : -1.0;
        double cj = sign * std::tgamma(a * j + 1.0) / fact * std::sin(kPi * s * j) / kPi;
        tail += cj * fact / std::pow(lambda, j + 1.0) * std::pow(X, -a * j) / (a * j);
    }
    return 2.0 * (inner + tail);
}

}  // namespace fracwill
