#pragma once

#include <vector>

namespace fracwill {

enum class Extension { PowerTail, Periodic };

// Affine functional of the samples and tail coefficients:
// sum coeff[i] f_i + c_minus * c_- + c_plus * c_+ + constant.
struct AffineRow {
    std::vector<double> coeff;
    double c_minus = 0.0;
    double c_plus = 0.0;
    double constant = 0.0;
};

// Samples on the uniform grid z_i = -L + i h, h = 2L/n, i = 0..n, with a model for |z| > L.
// PowerTail: f = right_limit - c_plus z^{-p} (z > L), f = left_limit + c_minus |z|^{-p} (z < -L),
// plus a (L/|z|)^{2p} term matching the edge samples. Periodic: period 2L, samples[n] == samples[0].
class TailedFunction1D {
public:
    TailedFunction1D() = default;
    TailedFunction1D(double L, std::vector<double> samples, double left_limit, double right_limit,
                     double tail_exponent, double c_minus, double c_plus);
    static TailedFunction1D periodic(double L, std::vector<double> samples);

    double L() const { return L_; }
    int n() const { return static_cast<int>(samples_.size()) - 1; }
    double h() const { return h_; }
    double z(int i) const { return -L_ + i * h_; }
    const std::vector<double>& samples() const { return samples_; }
    std::vector<double>& samples() { return samples_; }
    double left_limit() const { return left_; }
    double right_limit() const { return right_; }
    double tail_exponent() const { return p_; }
    double c_minus() const { return cm_; }
    double c_plus() const { return cp_; }
    Extension extension() const { return ext_; }

    void set_tail_coefficients(double c_minus, double c_plus);

    double value(double z) const;
    double derivative(double z) const;
    // Adds w * value(z) to row as an affine functional.
    void distribute(double z, double w, AffineRow& row) const;
    // True when |value(+-L) - limit| <= 1.5 |c| L^{-p}.
    bool tail_consistent() const;

private:
    double interp(double z, bool deriv) const;
    double tail(double z, bool deriv) const;
    double sample(long i) const;

    double L_ = 1.0, h_ = 1.0;
    std::vector<double> samples_;
    double left_ = 0.0, right_ = 0.0, p_ = 1.0, cm_ = 0.0, cp_ = 0.0;
    double mm_ = 0.0, mp_ = 0.0;
    Extension ext_ = Extension::PowerTail;
};

// (gamma_{1,s}/2) int (2f(x) - f(x+y) - f(x-y)) / |y|^{1+2s} dy.
double flap_pointwise(const TailedFunction1D& f, double x, double s);

// The same quadrature as flap_pointwise at node z_i, as an affine functional; edge nodes allowed.
AffineRow flap_row(const TailedFunction1D& f, int i, double s);

// Evaluates at every grid node z_i with |z_i| <= max_abs (all nodes when periodic).
std::vector<double> flap_on_grid(const TailedFunction1D& f, double s, double max_abs);

// Periodic samples (length a power of two) over one period; symbol |2 pi xi|^{2s}.
std::vector<double> flap_spectral(const std::vector<double>& samples, double period, double s);

// sup of |flap_pointwise| over the grid nodes in [a, b].
double flap_bound_check(const TailedFunction1D& f, double s, double a, double b);

}  // namespace fracwill
