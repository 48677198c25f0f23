#include "fracwill/constants.hpp"

#include <algorithm>
#include <cmath>

#include "fracwill/core_math.hpp"
#include "fracwill/errors.hpp"
#include "fracwill/parallel.hpp"
#include "fracwill/quadrature.hpp"

namespace fracwill {

namespace {

constexpr double kTailRatio = 1.25;

void check_spec(const EtaSpec& spec) {
    if (!spec.profile) throw ConfigError("eta: profile missing");
    double s = spec.profile->s;
    if (!(s > 0.5 && s < 1.0)) throw DomainError("eta: s must lie in (1/2, 1)");
    if (!(spec.epsilon > 0.0) || !(spec.ell > 0.0)) throw DomainError("eta: epsilon and ell must be positive");
}

// Breaks in z in (lo, hi) where a = z0 + sign*z (scaled by 1/eps) meets a grid node or a
// tail panel edge.
void add_breaks(const TailedFunction1D& f, double eps, double z0, double sign, double lo, double hi,
                std::vector<double>& br) {
    const double L = f.L(), h = f.h();
    auto push = [&](double y) {
        double z = sign * (eps * y - z0);
        if (z > lo && z < hi) br.push_back(z);
    };
    double ya = (z0 + sign * lo) / eps, yb = (z0 + sign * hi) / eps;
    double ymin = std::min(ya, yb), ymax = std::max(ya, yb);
    long i0 = std::max(0L, static_cast<long>(std::floor((std::max(ymin, -L) + L) / h)));
    long i1 = std::min(static_cast<long>(f.n()), static_cast<long>(std::ceil((std::min(ymax, L) + L) / h)));
    for (long i = i0; i <= i1; ++i) push(f.z(static_cast<int>(i)));
    for (double y = L * kTailRatio; y < ymax; y *= kTailRatio) push(y);
    for (double y = -L * kTailRatio; y > ymin; y *= kTailRatio) push(y);
}

// int_0^ell g(z) z^{1-2s} dz with g smooth between the scaled grid crossings of z0 +- z.
double weighted_integral(const EtaSpec& spec, double z0, const EtaOptions& opt, const Fn& g) {
    const TailedFunction1D& f = spec.profile->f;
    const double s = spec.profile->s, eps = spec.epsilon, ell = spec.ell;
    const double pw = 1.0 - 2.0 * s;
    double sigma = opt.singular_width > 0.0 ? opt.singular_width : 0.5 * f.h() * eps;
    sigma = std::min(sigma, 0.5 * ell);

    AdaptiveOptions ao;
    ao.abs_tol = 1e-13;
    ao.rel_tol = 1e-13;
    double sum = integrate_power_weight(g, sigma, pw, ao).value;

    std::vector<double> br{sigma, ell};
    for (double b = 2.0 * sigma; b < std::min(ell, 8.0 * f.h() * eps); b *= 2.0) br.push_back(b);
    add_breaks(f, eps, z0, 1.0, sigma, ell, br);
    add_breaks(f, eps, z0, -1.0, sigma, ell, br);
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    auto gw = [&](double z) { return g(z) * std::pow(z, pw); };
    return sum + integrate_panels(gw, br, gauss_rule(7));
}

double wv(const EtaSpec& spec, double x) { return spec.profile->value(x / spec.epsilon); }
double wd(const EtaSpec& spec, double x) { return spec.profile->derivative(x / spec.epsilon) / spec.epsilon; }

}  // namespace

double eta(const EtaSpec& spec, double z0, const EtaOptions& opt) {
    check_spec(spec);
    auto g = [&](double z) { return wd(spec, z0 + z) + wd(spec, z0 - z); };
    return weighted_integral(spec, z0, opt, g);
}

double ibp_lhs(const EtaSpec& spec, double z0, const EtaOptions& opt) {
    check_spec(spec);
    const double near = 1e-3 * spec.profile->f.h() * spec.epsilon;
    const GaussRule& r7 = gauss_rule(7);
    auto g = [&](double z) {
        if (z > near) return (wv(spec, z0 + z) - wv(spec, z0 - z)) / z;
        // mean slope over [z0 - z, z0 + z]; the difference quotient cancels here
        double m = 0.0;
        for (std::size_t q = 0; q < r7.x.size(); ++q) m += r7.w[q] * wd(spec, z0 + z * r7.x[q]);
        return m;
    };
    return weighted_integral(spec, z0, opt, g);
}

double ibp_rhs(const EtaSpec& spec, double z0, const EtaOptions& opt) {
    check_spec(spec);
    const double s = spec.profile->s, ell = spec.ell;
    double boundary = std::pow(ell, 1.0 - 2.0 * s) / (1.0 - 2.0 * s) * (wv(spec, ell + z0) - wv(spec, z0 - ell));
    return boundary + eta(spec, z0, opt) / (2.0 * s - 1.0);
}

double ibp_identity_residual(const EtaSpec& spec, double z0, const EtaOptions& opt) {
    return std::abs(ibp_lhs(spec, z0, opt) - ibp_rhs(spec, z0, opt));
}

double eta_square_integral(const SampledProfile& w, double ell, double ell_prime) {
    if (!(ell > 0.0) || !(ell_prime > 0.0)) throw DomainError("eta_square_integral: cutoffs must be positive");
    EtaSpec spec{1.0, ell, &w};
    check_spec(spec);
    std::vector<double> br;
    for (double z = 0.0; z < std::min(8.0, ell_prime); z += 0.5) br.push_back(z);
    for (double z = 8.0; z < ell_prime; z *= 1.2) br.push_back(z);
    // eta_{1,ell} bends where the window edges z +- ell cross the core of the profile.
    for (double c : {ell - 4.0, ell - 1.0, ell, ell + 1.0, ell + 4.0})
        if (c > 0.0 && c < ell_prime) br.push_back(c);
    br.push_back(ell_prime);
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());

    const GaussRule& rule = gauss_rule(10);
    const std::size_t m = rule.x.size(), panels = br.size() - 1;
    std::vector<double> vals(panels * m);
    parallel_for(panels * m, [&](std::size_t k) {
        std::size_t p = k / m, q = k % m;
        double a = br[p], b = br[p + 1];
        double z = 0.5 * (a + b) + 0.5 * (b - a) * rule.x[q];
        double e = eta(spec, z);
        vals[k] = e * e;
    });
    double sum = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
        double part = 0.0;
        for (std::size_t q = 0; q < m; ++q) part += rule.w[q] * vals[p * m + q];
        sum += 0.5 * (br[p + 1] - br[p]) * part;
    }
    return 2.0 * sum;
}

std::vector<double> default_cutoff_ladder() { return {25.0, 50.0, 100.0, 200.0, 400.0}; }

MuLadder mu_w(const SampledProfile& w, double s, const std::vector<double>& cutoffs) {
    if (!(s > 0.75 && s < 1.0)) throw DomainError("mu_w: s must lie in (3/4, 1)");
    if (cutoffs.size() < 3) throw ConfigError("mu_w: ladder needs at least three cutoffs");
    for (std::size_t i = 1; i < cutoffs.size(); ++i)
        if (!(cutoffs[i] > cutoffs[i - 1])) throw ConfigError("mu_w: ladder must be increasing");
    MuLadder out;
    out.cutoffs = cutoffs;
    for (double T : cutoffs) out.raw.push_back(eta_square_integral(w, T, T));
    const double q = 3.0 - 4.0 * s;
    for (std::size_t i = 1; i < cutoffs.size(); ++i) {
        double r = std::pow(cutoffs[i] / cutoffs[i - 1], q);
        out.extrapolated.push_back((out.raw[i] - r * out.raw[i - 1]) / (1.0 - r));
    }
    double top = out.extrapolated.back(), prev = out.extrapolated[out.extrapolated.size() - 2];
    out.value = top;
    if (!(top > 0.0) || !std::isfinite(top) || std::abs(top - prev) >= 0.01 * std::abs(top))
        throw ConvergenceError("mu_w: ladder did not stabilize", std::abs(top - prev), out.extrapolated);
    return out;
}

std::vector<double> mu_log_rate(const SampledProfile& w, const std::vector<double>& cutoffs) {
    if (std::abs(w.s - 0.75) > 1e-12) throw DomainError("mu_log_rate: needs an s = 3/4 profile");
    std::vector<double> out;
    for (double T : cutoffs) {
        if (!(T > 1.0)) throw ConfigError("mu_log_rate: cutoffs must exceed 1");
        out.push_back(eta_square_integral(w, T, T) / std::log(T));
    }
    return out;
}

double kappa_star(double s, double mu) {
    if (!(s >= 0.75 && s < 1.0)) throw DomainError("kappa_star: s must lie in [3/4, 1)");
    double g = gamma_ds(1, s);
    if (s == 0.75) return 8.0 * g * g;
    if (!(mu > 0.0)) throw DomainError("kappa_star: mu must be positive for s > 3/4");
    return g * g / (4.0 * (2.0 * s - 1.0) * (2.0 * s - 1.0)) * mu;
}

}  // namespace fracwill
