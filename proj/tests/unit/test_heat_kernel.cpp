#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "fracwill/core_math.hpp"
#include "fracwill/errors.hpp"
#include "fracwill/heat_kernel.hpp"

using namespace fracwill;
constexpr double pi = std::numbers::pi;

namespace {

double poisson(double t, double x) { return t / (pi * (t * t + x * x)); }

template <class F>
double loglog_slope(F f, double a, double b, int m = 24) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < m; ++i) {
        double x = a * std::pow(b / a, i / (m - 1.0));
        double X = std::log(x), Y = std::log(std::abs(f(x)));
        sx += X, sy += Y, sxx += X * X, sxy += X * Y;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

// 2 int_0^inf f on geometric Gauss panels; past X the remainder of sum_j c_j x^{-1-2sj}.
template <class F>
double half_line_mass(F f, double s, const std::vector<double>& c) {
    static const double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                 0.9061798459386640};
    static const double gw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                                 0.2369268850561891};
    const double X = 400.0;
    double sum = 0.0, a = 1e-7;
    while (a < X) {
        double b = std::min(a * 1.3, X), m = 0.5 * (a + b), r = 0.5 * (b - a);
        for (int q = 0; q < 5; ++q) sum += gw[q] * r * f(m + r * gx[q]);
        a = b;
    }
    for (std::size_t j = 0; j < c.size(); ++j) sum += c[j] * std::pow(X, -2 * s * (j + 1)) / (2 * s * (j + 1));
    return 2 * sum;
}

// far-field coefficients of P(1, x), and of G_1 = int e^{-t} P(t, x) dt (a factor Gamma(j + 1) each)
std::vector<double> tail_constants(double s, bool subordinated) {
    std::vector<double> c;
    double fact = 1.0;
    for (int j = 1; j <= 4; ++j) {
        fact *= j;
        double a = std::tgamma(2 * s * j + 1) / fact * std::sin(pi * s * j) / pi * (j % 2 ? 1 : -1);
        c.push_back(subordinated ? a * std::tgamma(j + 1.0) : a);
    }
    return c;
}

}  // namespace

TEST_SUITE("heat-kernel") {

TEST_CASE("Poisson kernel at s = 1/2") {
    CHECK(heat_kernel(1, 0, 0.5) == doctest::Approx(1 / pi).epsilon(1e-7));
    for (double x : {0.0, 0.5, 1.0, 3.0, 10.0}) {
        INFO("x = " << x);
        CHECK(std::abs(heat_kernel(1, x, 0.5) / poisson(1, x) - 1) < 1e-5);
        CHECK(std::abs(heat_kernel(0.3, x, 0.5) / poisson(0.3, x) - 1) < 1e-5);
    }
    CHECK(heat_kernel_deriv(1, 1.0, 0.5) == doctest::Approx(-1 / (2 * pi)).epsilon(1e-6));
}

TEST_CASE("cutoff plan") {
    for (double s : {0.3, 0.5, 0.75, 0.9}) {
        auto plan = kernel_eval_plan(1, 2.0, s);
        CHECK(std::exp(-std::pow(2 * pi * plan.fourier_cutoff, 2 * s)) < 1e-14);
        CHECK(plan.node_count > 0);
    }
}

TEST_CASE("positivity at random points") {
    std::mt19937 rng(20261016);
    std::uniform_real_distribution<double> ut(-2.0, 2.0), ux(-100.0, 100.0), us(0.3, 0.95);
    for (int i = 0; i < 200; ++i) {
        double t = std::exp(ut(rng)), x = ux(rng), s = us(rng);
        INFO("t = " << t << " x = " << x << " s = " << s);
        CHECK(heat_kernel(t, x, s) > 0.0);
    }
}

TEST_CASE("two-sided decay band") {
    for (double s : {0.6, 0.75, 0.9})
        for (int i = 0; i <= 40; ++i) {
            double x = i == 0 ? 0.0 : 100.0 * std::pow(1e-3, (40 - i) / 40.0);
            double r = heat_kernel(1, x, s) * (1 + std::pow(x, 1 + 2 * s));
            CHECK(r > 0.05);
            CHECK(r < 20.0);
        }
}

TEST_CASE("unit mass and scaling") {
    for (double s : {0.4, 0.75}) {
        double m = half_line_mass([s](double x) { return heat_kernel(1, x, s); }, s, tail_constants(s, false));
        CHECK(std::abs(m - 1) < 1e-6);
    }
    for (double s : {0.6, 0.75, 0.9})
        for (double x : {0.0, 0.7, 3.0, 25.0}) {
            double c = std::pow(2.0, -1 / (2 * s));
            CHECK(std::abs(heat_kernel(2, x, s) / (c * heat_kernel(1, x * c, s)) - 1) < 1e-8);
        }
    CHECK_THROWS_AS(heat_kernel(0, 1, 0.5), DomainError);
    CHECK_THROWS_AS(heat_kernel(-1, 1, 0.5), DomainError);
}

TEST_CASE("derivatives") {
    for (double s : {0.5, 0.75}) CHECK(std::abs(heat_kernel_deriv(1, 0, s)) < 1e-12);
    CHECK(std::abs(loglog_slope([](double x) { return heat_kernel_deriv(1, x, 0.75); }, 10, 100) + 3.5) < 0.2);
    for (int k = 1; k <= 4; ++k) {
        INFO("k = " << k);
        CHECK(std::abs(loglog_slope([k](double x) { return heat_kernel_deriv(k, x, 0.75); }, 10, 100) + (k + 2.5)) <
              0.2);
    }
    // finite differences of P(1, .)
    for (double x : {0.3, 2.0}) {
        double hh = 1e-3;
        double fd = (heat_kernel(1, x + hh, 0.75) - heat_kernel(1, x - hh, 0.75)) / (2 * hh);
        CHECK(heat_kernel_deriv(1, x, 0.75) == doctest::Approx(fd).epsilon(1e-5));
        double fd2 = (heat_kernel_deriv(1, x + hh, 0.75) - heat_kernel_deriv(1, x - hh, 0.75)) / (2 * hh);
        CHECK(heat_kernel_deriv(2, x, 0.75) == doctest::Approx(fd2).epsilon(1e-5));
    }
    CHECK(heat_kernel_deriv(0, 1.3, 0.75) == doctest::Approx(heat_kernel(1, 1.3, 0.75)).epsilon(1e-10));
    CHECK_THROWS_AS(heat_kernel_deriv(5, 1, 0.75), ConfigError);
}

TEST_CASE("Bochner relation with the three-dimensional kernel") {
    for (double s : {0.5, 0.75})
        for (double x : {0.5, 1.0, 4.0}) {
            INFO("s = " << s << " x = " << x);
            CHECK(heat_kernel_deriv(1, x, s) == doctest::Approx(-2 * pi * x * heat_kernel_radial(3, x, s)).epsilon(1e-6));
        }
    CHECK(heat_kernel_radial(1, 0.8, 0.75) == doctest::Approx(heat_kernel(1, 0.8, 0.75)).epsilon(1e-8));
}

TEST_CASE("far-field series") {
    for (double x : {30.0, 80.0}) CHECK(heat_kernel_far(x, 0.75) == doctest::Approx(heat_kernel(1, x, 0.75)).epsilon(1e-6));
}

TEST_CASE("fundamental solution") {
    for (double s : {0.6, 0.75, 0.9})
        for (double lambda : {0.5, 1.0, 2.0}) {
            INFO("s = " << s << " lambda = " << lambda);
            CHECK(std::abs(fundamental_solution_mass(lambda, s) * lambda - 1) < 1e-5);
        }
    CHECK(std::abs(half_line_mass([](double x) { return fundamental_solution(1, x, 0.75); }, 0.75,
                                  tail_constants(0.75, true)) - 1) < 1e-5);
    for (double x : {1e-3, 0.1, 1.0, 10.0, 100.0, -5.0}) CHECK(fundamental_solution(1, x, 0.75) > 0);
    CHECK(std::abs(loglog_slope([](double x) { return fundamental_solution(1, x, 0.75); }, 10, 100) + 2.5) < 0.2);
    // G_lambda(x) = lambda^{1/2s - 1} G_1(lambda^{1/2s} x)
    double s = 0.75, lam = 3.0, a = std::pow(lam, 1 / (2 * s));
    CHECK(fundamental_solution(lam, 0.9, s) ==
          doctest::Approx(a / lam * fundamental_solution(1, a * 0.9, s)).epsilon(1e-7));
    CHECK_THROWS_AS(fundamental_solution(1, 0.0, 0.75), SingularPointError);
    CHECK_THROWS_AS(fundamental_solution(0, 1.0, 0.75), DomainError);
}

}  // TEST_SUITE
