#pragma once

#include <functional>
#include <iosfwd>
#include <string>

#include "fracwill/fraclap1d.hpp"

namespace fracwill {

struct DoubleWell {
    std::string name;
    std::function<double(double)> W, dW, d2W, d3W;
    double lambda = 0.0;    // W''(+-1)
    double sup_d2W = 0.0;   // sup of |W''| on [-1, 1]

    static DoubleWell quartic();  // (1 - u^2)^2
    static DoubleWell cosine();   // (1 + cos(pi u)) / pi^2
    static DoubleWell by_name(const std::string& name);

    // W >= 0, W(+-1) = 0, W even and W''(+-1) = lambda on a sample grid.
    bool check_structure() const;
};

struct SampledProfile {
    TailedFunction1D f;
    double s = 0.5;
    double residual_sup = 0.0;
    int iterations = 0;

    double value(double z) const { return f.value(z); }
    double derivative(double z) const { return f.derivative(z); }
    double L() const { return f.L(); }
    double tail_coefficient() const { return f.c_plus(); }
};

struct SolveOptions {
    double tol = 1e-3;           // sup of the discrete residual
    int max_iterations = 50000;  // fixed-point budget
    int refit_every = 100;
    bool newton_polish = false;  // finish with Newton steps once the fixed point has settled
    int max_newton = 30;
};

SampledProfile solve_profile(const DoubleWell& W, double s, double L, int n, const SolveOptions& opt = {});

// Least-squares fit of c in 1 - w(z) = c z^{-p} over the outer 10% of the grid.
double fit_tail_coefficient(const TailedFunction1D& f);

// sup over grid nodes in [a, b] of |flap_pointwise(w) + W'(w)|; [a, b] inside [-L/2, L/2].
double profile_residual(const SampledProfile& w, const DoubleWell& W, double a, double b);

// Log-log slope of |w - sgn|, |w'| or |w''| (k = 0, 1, 2) over grid nodes in [z_lo, z_hi].
double decay_fit(const SampledProfile& w, int k, double z_lo, double z_hi);

void write_profile(std::ostream& os, const SampledProfile& w);
SampledProfile read_profile(std::istream& is);
void save_profile(const std::string& path, const SampledProfile& w);
SampledProfile load_profile(const std::string& path);

}  // namespace fracwill
