#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fracwill/errors.hpp"
#include "fracwill/fraclap1d.hpp"
#include "fracwill/profile.hpp"
#include "test_support.hpp"

using namespace fracwill;
constexpr double pi = std::numbers::pi;

namespace {

TailedFunction1D arctan_layer(double L, int n) {
    std::vector<double> v(n + 1);
    double h = 2 * L / n;
    for (int i = 0; i <= n; ++i) v[i] = 2 / pi * std::atan(-L + i * h);
    return TailedFunction1D(L, v, -1.0, 1.0, 1.0, 2 / pi, 2 / pi);
}

TailedFunction1D bump(double L, int n) {
    std::vector<double> v(n + 1);
    double h = 2 * L / n;
    for (int i = 0; i <= n; ++i) {
        double z = -L + i * h;
        v[i] = 1.0 / (1.0 + z * z);
    }
    return TailedFunction1D(L, v, 0.0, 0.0, 2.0, 1.0, -1.0);
}

// cos(2 pi z) + 0.5 cos(4 pi z + 0.3) + 0.25 sin(6 pi z) and its exact image under the symbol.
double modes(double z) { return std::cos(2 * pi * z) + 0.5 * std::cos(4 * pi * z + 0.3) + 0.25 * std::sin(6 * pi * z); }
double modes_flap(double z, double s) {
    auto m = [s](int k) { return std::pow(2 * pi * k, 2 * s); };
    return m(1) * std::cos(2 * pi * z) + 0.5 * m(2) * std::cos(4 * pi * z + 0.3) + 0.25 * m(3) * std::sin(6 * pi * z);
}

}  // namespace

TEST_SUITE("fraclap-1d") {

TEST_CASE("constant function maps to zero") {
    std::vector<double> v(1025, 0.7);
    TailedFunction1D f(20.0, v, 0.7, 0.7, 1.5, 0.0, 0.0);
    for (double x : {-10.0, -1.3, 0.0, 2.2, 9.9}) CHECK(std::abs(flap_pointwise(f, x, 0.75)) < 1e-12);
    CHECK(flap_bound_check(f, 0.6, -5, 5) < 1e-12);
}

TEST_CASE("arctan layer at s = 1/2") {
    auto f = arctan_layer(100.0, 8192);
    // (-Delta)^{1/2} w = sin(pi w) / pi for w = (2/pi) arctan
    CHECK(std::abs(flap_pointwise(f, 1.0, 0.5) - 1 / pi) < 1e-5);
    for (double x : {-20.0, -3.0, 0.4, 7.5})
        CHECK(std::abs(flap_pointwise(f, x, 0.5) - std::sin(pi * f.value(x)) / pi) < 1e-5);
    CHECK(flap_bound_check(f, 0.5, -5, 5) <= 1 / pi + 1e-3);
}

TEST_CASE("grid doubling on the arctan layer") {
    auto f = arctan_layer(100.0, 8192);
    auto g = arctan_layer(100.0, 16384);
    for (double s : {0.5, 0.75})
        for (double x : {-4.0, -0.6, 0.3, 2.0, 9.0}) CHECK(std::abs(flap_pointwise(f, x, s) - flap_pointwise(g, x, s)) < 1e-4);
}

TEST_CASE("parity") {
    auto odd = arctan_layer(60.0, 4096);
    auto even = bump(60.0, 4096);
    for (double s : {0.3, 0.75})
        for (double x : {0.37, 1.9, 11.0}) {
            CHECK(std::abs(flap_pointwise(odd, x, s) + flap_pointwise(odd, -x, s)) < 1e-8);
            CHECK(std::abs(flap_pointwise(even, x, s) - flap_pointwise(even, -x, s)) < 1e-8);
        }
}

TEST_CASE("pointwise and spectral agree on three cosine modes") {
    const int n = 512;
    std::vector<double> per(n), grid(n);
    for (int j = 0; j < n; ++j) per[j] = modes(static_cast<double>(j) / n);
    for (int i = 0; i < n; ++i) grid[i] = modes(-0.5 + static_cast<double>(i) / n);
    auto f = TailedFunction1D::periodic(0.5, grid);
    for (double s : {0.6, 0.75, 0.9}) {
        auto spec = flap_spectral(per, 1.0, s);
        double worst = 0.0, scale = 0.0;
        for (int j = 0; j < n; ++j) {
            double z = static_cast<double>(j) / n;
            double zz = z > 0.5 ? z - 1.0 : z;
            if (std::abs(zz) > 0.25) continue;
            worst = std::max(worst, std::abs(flap_pointwise(f, zz, s) - spec[j]));
            scale = std::max(scale, std::abs(spec[j]));
            CHECK(std::abs(spec[j] - modes_flap(z, s)) < 1e-9 * std::abs(modes_flap(0.0, s)) + 1e-9);
        }
        CHECK(worst / scale < 1e-3);
    }
}

TEST_CASE("spectral symbol, constants, linearity, size") {
    const int n = 256;
    std::vector<double> c(n), f(n), g(n), mix(n), k(n, 3.0);
    for (int j = 0; j < n; ++j) {
        double z = static_cast<double>(j) / n;
        c[j] = std::cos(2 * pi * z);
        f[j] = modes(z);
        g[j] = std::exp(std::sin(2 * pi * z));
        mix[j] = 2.0 * f[j] - 0.5 * g[j];
    }
    auto out = flap_spectral(c, 1.0, 0.7);
    for (int j = 0; j < n; ++j) CHECK(std::abs(out[j] - std::pow(2 * pi, 1.4) * c[j]) < 1e-11);
    for (double v : flap_spectral(k, 1.0, 0.7)) CHECK(std::abs(v) < 1e-12);
    auto a = flap_spectral(f, 1.0, 0.4), b = flap_spectral(g, 1.0, 0.4), m = flap_spectral(mix, 1.0, 0.4);
    for (int j = 0; j < n; ++j) CHECK(std::abs(m[j] - (2.0 * a[j] - 0.5 * b[j])) < 1e-12);
    CHECK_THROWS_AS(flap_spectral(std::vector<double>(100, 1.0), 1.0, 0.5), ConfigError);
}

TEST_CASE("errors") {
    auto f = arctan_layer(20.0, 1024);
    CHECK_THROWS_AS(flap_pointwise(f, 10.5, 0.5), RangeError);
    CHECK_THROWS_AS(flap_pointwise(f, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(flap_pointwise(f, 0.0, 0.0), DomainError);
}

TEST_CASE("tail model consistency") {
    CHECK(arctan_layer(50.0, 2048).tail_consistent());
    auto w = testsupport::profile(0.75);
    CHECK(w.f.tail_consistent());
    CHECK(w.f.left_limit() == -1.0);
    CHECK(w.f.right_limit() == 1.0);
    CHECK(w.f.tail_exponent() == doctest::Approx(1.5));
}

TEST_CASE("bound check on the solved profile") {
    auto w = testsupport::profile(0.75);
    auto W = DoubleWell::quartic();
    double sup_dW = 0.0;
    for (int i = 0; i <= w.f.n(); ++i) {
        double z = w.f.z(i);
        if (std::abs(z) <= 5.0) sup_dW = std::max(sup_dW, std::abs(W.dW(w.f.samples()[i])));
    }
    CHECK(std::abs(flap_bound_check(w.f, 0.75, -5, 5) - sup_dW) < 2e-3);
}

}  // TEST_SUITE
