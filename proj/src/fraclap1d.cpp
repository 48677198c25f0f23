#include "fracwill/fraclap1d.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>

#include "fracwill/core_math.hpp"
#include "fracwill/errors.hpp"
#include "fracwill/parallel.hpp"
#include "fracwill/quadrature.hpp"

namespace fracwill {

namespace {

constexpr double kTailFar = 1e6;
constexpr int kPeriodsPerSide = 32;

// 4-point Gauss-Legendre on [-1, 1].
const double kG4x[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
const double kG4w[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};

void check_s(double s) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("fractional order s must lie in (0,1)");
}

}  // namespace

TailedFunction1D::TailedFunction1D(double L, std::vector<double> samples, double left_limit,
                                   double right_limit, double tail_exponent, double c_minus, double c_plus)
    : L_(L), samples_(std::move(samples)), left_(left_limit), right_(right_limit), p_(tail_exponent) {
    if (!(L > 0.0) || samples_.size() < 5) throw ConfigError("TailedFunction1D: need L > 0 and at least 5 samples");
    h_ = 2.0 * L_ / n();
    set_tail_coefficients(c_minus, c_plus);
}

TailedFunction1D TailedFunction1D::periodic(double L, std::vector<double> samples) {
    TailedFunction1D f;
    if (!(L > 0.0) || samples.size() < 4) throw ConfigError("TailedFunction1D: need L > 0 and at least 4 samples");
    f.L_ = L;
    samples.push_back(samples.front());
    f.samples_ = std::move(samples);
    f.h_ = 2.0 * L / f.n();
    f.ext_ = Extension::Periodic;
    return f;
}

void TailedFunction1D::set_tail_coefficients(double c_minus, double c_plus) {
    cm_ = c_minus;
    cp_ = c_plus;
    double Lp = std::pow(L_, -p_);
    mp_ = samples_.back() - (right_ - cp_ * Lp);
    mm_ = samples_.front() - (left_ + cm_ * Lp);
}

bool TailedFunction1D::tail_consistent() const {
    double Lp = std::pow(L_, -p_);
    return std::abs(samples_.back() - right_) <= 1.5 * std::abs(cp_) * Lp &&
           std::abs(samples_.front() - left_) <= 1.5 * std::abs(cm_) * Lp;
}

double TailedFunction1D::sample(long i) const {
    if (ext_ == Extension::Periodic) {
        long n = this->n();
        i %= n;
        if (i < 0) i += n;
    }
    return samples_[static_cast<std::size_t>(i)];
}

double TailedFunction1D::interp(double z, bool deriv) const {
    double t = (z + L_) / h_;
    long j = static_cast<long>(std::floor(t));
    long k0 = j - 1;
    if (ext_ == Extension::PowerTail) {
        long n = this->n();
        if (k0 < 0) k0 = 0;
        if (k0 + 3 > n) k0 = n - 3;
    }
    double u = t - static_cast<double>(k0);
    double f0 = sample(k0), f1 = sample(k0 + 1), f2 = sample(k0 + 2), f3 = sample(k0 + 3);
    if (!deriv) {
        double a = u - 1.0, b = u - 2.0, c = u - 3.0;
        return -f0 * a * b * c / 6.0 + f1 * u * b * c / 2.0 - f2 * u * a * c / 2.0 + f3 * u * a * b / 6.0;
    }
    double d0 = -(3.0 * u * u - 12.0 * u + 11.0) / 6.0;
    double d1 = (3.0 * u * u - 10.0 * u + 6.0) / 2.0;
    double d2 = -(3.0 * u * u - 8.0 * u + 3.0) / 2.0;
    double d3 = (3.0 * u * u - 6.0 * u + 2.0) / 6.0;
    return (f0 * d0 + f1 * d1 + f2 * d2 + f3 * d3) / h_;
}

double TailedFunction1D::tail(double z, bool deriv) const {
    if (z > 0.0) {
        double r = std::pow(L_ / z, p_);
        if (!deriv) return right_ - cp_ * std::pow(z, -p_) + mp_ * r * r;
        return (cp_ * p_ * std::pow(z, -p_) - 2.0 * p_ * mp_ * r * r) / z;
    }
    double a = -z;
    double r = std::pow(L_ / a, p_);
    if (!deriv) return left_ + cm_ * std::pow(a, -p_) + mm_ * r * r;
    return (cm_ * p_ * std::pow(a, -p_) + 2.0 * p_ * mm_ * r * r) / a;
}

void TailedFunction1D::distribute(double z, double w, AffineRow& row) const {
    if (ext_ == Extension::PowerTail && std::abs(z) > L_) {
        if (z > 0.0) {
            double r = std::pow(L_ / z, 2.0 * p_);
            row.coeff.back() += w * r;
            row.c_plus += w * (std::pow(L_, -p_) * r - std::pow(z, -p_));
            row.constant += w * right_ * (1.0 - r);
        } else {
            double a = -z;
            double r = std::pow(L_ / a, 2.0 * p_);
            row.coeff.front() += w * r;
            row.c_minus += w * (std::pow(a, -p_) - std::pow(L_, -p_) * r);
            row.constant += w * left_ * (1.0 - r);
        }
        return;
    }
    double t = (z + L_) / h_;
    long k0 = static_cast<long>(std::floor(t)) - 1;
    long n = this->n();
    if (ext_ == Extension::PowerTail) {
        if (k0 < 0) k0 = 0;
        if (k0 + 3 > n) k0 = n - 3;
    }
    double u = t - static_cast<double>(k0);
    double a = u - 1.0, b = u - 2.0, c = u - 3.0;
    double l[4] = {-a * b * c / 6.0, u * b * c / 2.0, -u * a * c / 2.0, u * a * b / 6.0};
    for (int q = 0; q < 4; ++q) {
        long k = k0 + q;
        if (ext_ == Extension::Periodic) {
            k %= n;
            if (k < 0) k += n;
        }
        row.coeff[static_cast<std::size_t>(k)] += w * l[q];
    }
}

double TailedFunction1D::value(double z) const {
    if (ext_ == Extension::PowerTail && std::abs(z) > L_) return tail(z, false);
    return interp(z, false);
}

double TailedFunction1D::derivative(double z) const {
    if (ext_ == Extension::PowerTail && std::abs(z) > L_) return tail(z, true);
    return interp(z, true);
}

namespace {

// Shared evaluation skeleton: every term is acc.val(z, weight) (weight times f(z)) or acc.cst(c).
template <class Acc>
void flap_terms(const TailedFunction1D& f, double x, double s, Acc& acc) {
    const double L = f.L(), h = f.h();
    const bool periodic = f.extension() == Extension::Periodic;
    const double g = gamma_ds(1, s);
    const double e = 1.0 + 2.0 * s;
    const double a = 2.0 * h;

    // Quartic Taylor model on |y| <= 2h from five-point differences.
    const double k2 = -g * std::pow(a, 2.0 - 2.0 * s) / (2.0 - 2.0 * s) / (12.0 * h * h);
    const double k4 = -g * std::pow(a, 4.0 - 2.0 * s) / (4.0 - 2.0 * s) / (12.0 * h * h * h * h);
    acc.val(x + 2.0 * h, -k2 + k4);
    acc.val(x + h, 16.0 * k2 - 4.0 * k4);
    acc.val(x, -30.0 * k2 + 6.0 * k4);
    acc.val(x - h, 16.0 * k2 - 4.0 * k4);
    acc.val(x - 2.0 * h, -k2 + k4);

    double mean = 0.0;
    if (periodic) {
        for (int i = 0; i < f.n(); ++i) mean += f.samples()[i];
        mean /= f.n();
    }
    const double span = periodic ? kPeriodsPerSide * 2.0 * L : 0.0;
    for (int sigma : {1, -1}) {
        double yend = periodic ? span : (sigma > 0 ? L - x : x + L);
        yend = std::max(yend, a);
        // Cells in y follow the grid nodes of f(x + sigma y).
        double y0 = a;
        long j = sigma > 0 ? static_cast<long>(std::floor((x + a + L) / h)) + 1
                           : static_cast<long>(std::ceil((x - a + L) / h)) - 1;
        double self = 0.0;
        while (y0 < yend) {
            double y1 = sigma > 0 ? (-L + j * h) - x : x - (-L + j * h);
            j += sigma;
            if (y1 <= y0 + 1e-9 * h) continue;
            if (y1 > yend) y1 = yend;
            double c = 0.5 * (y0 + y1), r = 0.5 * (y1 - y0);
            for (int q = 0; q < 4; ++q) {
                double y = c + r * kG4x[q];
                double wq = g * kG4w[q] * r * std::pow(y, -e);
                self += wq;
                acc.val(x + sigma * y, -wq);
            }
            y0 = y1;
        }
        const double far = g * std::pow(yend, -2.0 * s) / (2.0 * s);
        acc.val(x, self + far);
        if (periodic) {
            acc.cst(-mean * far);
            continue;
        }
        const double lim = sigma > 0 ? f.right_limit() : f.left_limit();
        const double coef = sigma > 0 ? -f.c_plus() : f.c_minus();
        const double p = f.tail_exponent();
        acc.cst(-lim * far);
        // 40 log-spaced nodes out to kTailFar, then the power-law remainder.
        if (yend < kTailFar) {
            const GaussRule& gr = gauss_rule(10);
            double tmax = std::log(kTailFar / yend);
            for (int panel = 0; panel < 4; ++panel) {
                double t0 = tmax * panel / 4.0, t1 = tmax * (panel + 1) / 4.0;
                double tc = 0.5 * (t0 + t1), tr = 0.5 * (t1 - t0);
                for (std::size_t q = 0; q < gr.x.size(); ++q) {
                    double y = yend * std::exp(tc + tr * gr.x[q]);
                    double wq = g * gr.w[q] * tr * std::pow(y, -2.0 * s);
                    acc.val(x + sigma * y, -wq);
                    acc.cst(wq * lim);
                }
            }
        }
        double yfar = std::max(yend, kTailFar);
        acc.cst(-g * coef * std::pow(yfar, -p - 2.0 * s) / (p + 2.0 * s));
    }
}

struct ValueAcc {
    const TailedFunction1D& f;
    double sum = 0.0;
    void val(double z, double w) { sum += w * f.value(z); }
    void cst(double c) { sum += c; }
};

struct RowAcc {
    const TailedFunction1D& f;
    AffineRow& row;
    void val(double z, double w) { f.distribute(z, w, row); }
    void cst(double c) { row.constant += c; }
};

}  // namespace

double flap_pointwise(const TailedFunction1D& f, double x, double s) {
    check_s(s);
    if (f.extension() == Extension::PowerTail && std::abs(x) > 0.5 * f.L() * (1.0 + 1e-12))
        throw RangeError("flap_pointwise: |x| must not exceed L/2");
    ValueAcc acc{f};
    flap_terms(f, x, s, acc);
    return acc.sum;
}

AffineRow flap_row(const TailedFunction1D& f, int i, double s) {
    check_s(s);
    AffineRow row;
    row.coeff.assign(f.samples().size(), 0.0);
    RowAcc acc{f, row};
    flap_terms(f, f.z(i), s, acc);
    return row;
}

std::vector<double> flap_on_grid(const TailedFunction1D& f, double s, double max_abs) {
    std::vector<int> idx;
    for (int i = 0; i <= f.n(); ++i)
        if (f.extension() == Extension::Periodic ? i < f.n() : std::abs(f.z(i)) <= max_abs * (1.0 + 1e-12))
            idx.push_back(i);
    std::vector<double> out(idx.size());
    parallel_for(idx.size(), [&](std::size_t k) { out[k] = flap_pointwise(f, f.z(idx[k]), s); });
    return out;
}

std::vector<double> flap_spectral(const std::vector<double>& samples, double period, double s) {
    check_s(s);
    const std::size_t n = samples.size();
    if (n < 2 || (n & (n - 1)) != 0) throw ConfigError("flap_spectral: length must be a power of two");
    std::vector<double> in(samples);
    std::vector<fftw_complex> spec(n / 2 + 1);
    fftw_plan fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), spec.data(), FFTW_ESTIMATE);
    fftw_execute(fwd);
    fftw_destroy_plan(fwd);
    for (std::size_t k = 0; k <= n / 2; ++k) {
        double m = std::pow(2.0 * std::numbers::pi * k / period, 2.0 * s) / static_cast<double>(n);
        spec[k][0] *= m;
        spec[k][1] *= m;
    }
    std::vector<double> out(n);
    fftw_plan bwd = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec.data(), out.data(), FFTW_ESTIMATE);
    fftw_execute(bwd);
    fftw_destroy_plan(bwd);
    return out;
}

double flap_bound_check(const TailedFunction1D& f, double s, double a, double b) {
    std::vector<double> zs;
    for (int i = 0; i <= f.n(); ++i)
        if (f.z(i) >= a - 1e-12 && f.z(i) <= b + 1e-12) zs.push_back(f.z(i));
    std::vector<double> v(zs.size());
    parallel_for(zs.size(), [&](std::size_t k) { v[k] = std::abs(flap_pointwise(f, zs[k], s)); });
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

}  // namespace fracwill
