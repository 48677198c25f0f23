#pragma once

namespace fracwill {

struct SpecialValue {
    double value = 0.0;
    double abs_error_bound = 0.0;
};

double gamma_fn(double x);
double beta_fn(double a, double b);

// Normalizing constant of (-Delta)^s in R^d (symbol |2 pi xi|^{2s}).
double gamma_ds(int d, double s);

// Gamma((a+1)/2) Gamma((b-a-1)/2) / Gamma(b/2) = 2 int_0^inf r^a (r^2+1)^{-b/2} dr.
double radial_moment(double a, double b);
SpecialValue radial_moment_value(double a, double b);

// Surface measure of the unit sphere S^{n-1} in R^n.
double sphere_area(int n);

// int_{R^{d-1}} |y|^alpha (1+|y|^2)^{-(d+2s+beta)/2} dy.
double kernel_reduction_constant(int d, double s, double alpha, double beta);
SpecialValue kernel_reduction_value(int d, double s, double alpha, double beta);

// Gauss hypergeometric 2F1(a, b; c; z) for real 0 <= z < 1.
double hyp2f1(double a, double b, double c, double z);

}  // namespace fracwill
