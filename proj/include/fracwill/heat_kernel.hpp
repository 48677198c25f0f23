#pragma once

namespace fracwill {

struct KernelEval {
    double s = 0.5;
    double fourier_cutoff = 0.0;  // exp(-(2 pi cutoff)^{2s}) < 1e-14 at t = 1
    int node_count = 0;
};

// Cutoff and node count the oscillatory quadrature uses at (t, x).
KernelEval kernel_eval_plan(double t, double x, double s);

// 2 int_0^inf exp(-t (2 pi xi)^{2s}) cos(2 pi x xi) d xi.
double heat_kernel(double t, double x, double s);

// d^k/dx^k P(1, x), k = 0..4, by Fourier quadrature of (2 pi i xi)^k exp(-(2 pi xi)^{2s}).
double heat_kernel_deriv(int k, double x, double s);

// Radial kernel P_d(1, r) in R^d through the Hankel form with J_{d/2-1}.
double heat_kernel_radial(int d, double r, double s);

// Large-|x| series (1/pi) sum_j (-1)^{j+1} Gamma(2sj+1)/j! sin(pi s j) |x|^{-2sj-1} for P(1, x).
double heat_kernel_far(double x, double s, int terms = 8);

// int_0^inf e^{-lambda t} P(t, x) dt via t = e^u, u in [-30, 30], 400 nodes.
double fundamental_solution(double lambda, double x, double s);

// int_R G over the real line: graded quadrature plus the far-field series.
double fundamental_solution_mass(double lambda, double s);

}  // namespace fracwill
