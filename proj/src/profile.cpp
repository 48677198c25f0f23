#include "fracwill/profile.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "fracwill/errors.hpp"

namespace fracwill {

namespace {
constexpr double kPi = std::numbers::pi;
}

DoubleWell DoubleWell::quartic() {
    DoubleWell d;
    d.name = "quartic";
    d.W = [](double u) { return (1.0 - u * u) * (1.0 - u * u); };
    d.dW = [](double u) { return -4.0 * u * (1.0 - u * u); };
    d.d2W = [](double u) { return 12.0 * u * u - 4.0; };
    d.d3W = [](double u) { return 24.0 * u; };
    d.lambda = 8.0;
    d.sup_d2W = 8.0;
    return d;
}

DoubleWell DoubleWell::cosine() {
    DoubleWell d;
    d.name = "cosine";
    d.W = [](double u) { return (1.0 + std::cos(kPi * u)) / (kPi * kPi); };
    d.dW = [](double u) { return -std::sin(kPi * u) / kPi; };
    d.d2W = [](double u) { return -std::cos(kPi * u); };
    d.d3W = [](double u) { return kPi * std::sin(kPi * u); };
    d.lambda = 1.0;
    d.sup_d2W = 1.0;
    return d;
}

DoubleWell DoubleWell::by_name(const std::string& name) {
    if (name == "quartic") return quartic();
    if (name == "cosine") return cosine();
    throw ConfigError("unknown potential '" + name + "'");
}

bool DoubleWell::check_structure() const {
    if (std::abs(W(1.0)) > 1e-14 || std::abs(W(-1.0)) > 1e-14) return false;
    if (std::abs(d2W(1.0) - lambda) > 1e-12 || std::abs(d2W(-1.0) - lambda) > 1e-12 || !(lambda > 0.0))
        return false;
    for (int i = 0; i <= 400; ++i) {
        double u = -2.0 + 4.0 * i / 400.0;
        if (W(u) < -1e-15 || std::abs(W(u) - W(-u)) > 1e-14) return false;
    }
    return true;
}

double fit_tail_coefficient(const TailedFunction1D& f) {
    double num = 0.0, den = 0.0, p = f.tail_exponent();
    int n = f.n();
    for (int i = n - n / 20; i <= n; ++i) {
        double z = f.z(i), q = std::pow(z, -p);
        num += (f.right_limit() - f.samples()[i]) * q;
        den += q * q;
    }
    return num / den;
}

SampledProfile solve_profile(const DoubleWell& W, double s, double L, int n, const SolveOptions& opt) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("solve_profile: s must lie in (0,1)");
    if (n < 1024 || n % 2 != 0) throw ConfigError("solve_profile: n must be even and >= 1024");
    if (!(L >= 20.0)) throw ConfigError("solve_profile: L must be >= 20");

    const int c = n / 2, K = n / 2;
    const double p = 2.0 * s;
    std::vector<double> init(n + 1);
    for (int i = 0; i <= n; ++i) init[i] = std::tanh(-L + i * 2.0 * L / n);
    init[c] = 0.0;
    TailedFunction1D f(L, init, -1.0, 1.0, p, 0.0, 0.0);
    double coef = fit_tail_coefficient(f);

    // Odd reduction: unknowns v_k = w(z_{c+k}), k = 1..K; w(z_{c-k}) = -v_k.
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> A(K, K);
    Eigen::VectorXd b0(K), bc(K);
    for (int k = 1; k <= K; ++k) {
        AffineRow row = flap_row(f, c + k, s);
        for (int q = 1; q <= K; ++q) A(k - 1, q - 1) = row.coeff[c + q] - row.coeff[c - q];
        b0(k - 1) = row.constant;
        bc(k - 1) = row.c_minus + row.c_plus;
    }
    double sym_max = 0.0;
    for (int k = 0; k < K; ++k) sym_max = std::max(sym_max, A.row(k).cwiseAbs().sum());
    const double tau = 0.5 / (sym_max + W.sup_d2W);

    Eigen::VectorXd v(K), F(K);
    for (int k = 1; k <= K; ++k) v(k - 1) = init[c + k];

    auto sync = [&](const Eigen::VectorXd& vv) {
        auto& smp = f.samples();
        smp[c] = 0.0;
        for (int k = 1; k <= K; ++k) {
            smp[c + k] = vv(k - 1);
            smp[c - k] = -vv(k - 1);
        }
    };
    auto residual = [&](const Eigen::VectorXd& vv, Eigen::VectorXd& out) {
        out.noalias() = A * vv;
        out += b0 + coef * bc;
        for (int k = 0; k < K; ++k) out(k) += W.dW(vv(k));
        return out.cwiseAbs().maxCoeff();
    };

    int it = 0;
    double res = residual(v, F);
    const double switch_tol = opt.newton_polish ? std::max(opt.tol, 1e-2) : opt.tol;
    while (res >= switch_tol) {
        if (it >= opt.max_iterations)
            throw ConvergenceError("solve_profile: no convergence within the iteration budget", res);
        v -= tau * F;
        ++it;
        if (it % opt.refit_every == 0) {
            sync(v);
            coef = fit_tail_coefficient(f);
        }
        res = residual(v, F);
    }

    if (opt.newton_polish) {
        int steps = 0;
        double prev_coef = coef;
        for (;;) {
            sync(v);
            coef = fit_tail_coefficient(f);
            res = residual(v, F);
            if (res < opt.tol && std::abs(coef - prev_coef) < opt.tol) break;
            if (steps >= opt.max_newton)
                throw ConvergenceError("solve_profile: Newton polish did not settle", res);
            prev_coef = coef;
            Eigen::MatrixXd J = A;
            for (int k = 0; k < K; ++k) J(k, k) += W.d2W(v(k));
            Eigen::VectorXd dv = J.partialPivLu().solve(-F);
            double step = 1.0;
            for (int tries = 0; tries < 20; ++tries) {
                Eigen::VectorXd trial = v + step * dv, Ft(K);
                double rt = residual(trial, Ft);
                if (rt < res || tries == 19) {
                    v = trial;
                    break;
                }
                step *= 0.5;
            }
            ++steps;
            ++it;
        }
    }

    sync(v);
    f.set_tail_coefficients(coef, coef);
    SampledProfile out;
    out.f = f;
    out.s = s;
    out.iterations = it;
    out.residual_sup = profile_residual(out, W, -0.5 * L, 0.5 * L);
    return out;
}

double profile_residual(const SampledProfile& w, const DoubleWell& W, double a, double b) {
    const double half = 0.5 * w.L() * (1.0 + 1e-12);
    if (a < -half || b > half || a > b) throw RangeError("profile_residual: region must lie in [-L/2, L/2]");
    const auto& f = w.f;
    std::vector<int> idx;
    for (int i = 0; i <= f.n(); ++i)
        if (f.z(i) >= a - 1e-12 && f.z(i) <= b + 1e-12) idx.push_back(i);
    std::vector<double> r(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        double z = f.z(idx[k]);
        r[k] = std::abs(flap_pointwise(f, z, w.s) + W.dW(f.samples()[idx[k]]));
    }
    double m = 0.0;
    for (double x : r) m = std::max(m, x);
    return m;
}

double decay_fit(const SampledProfile& w, int k, double z_lo, double z_hi) {
    if (k < 0 || k > 2) throw ConfigError("decay_fit: k must be 0, 1 or 2");
    const auto& f = w.f;
    if (!(z_lo >= 10.0 - 1e-12) || z_hi > 0.5 * f.L() * (1.0 + 1e-12) || !(z_hi > z_lo))
        throw RangeError("decay_fit: window must lie inside [10, L/2]");
    const auto& v = f.samples();
    const double h = f.h();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int i = 1; i < f.n(); ++i) {
        double z = f.z(i);
        if (z < z_lo - 1e-12 || z > z_hi + 1e-12) continue;
        double q;
        if (k == 0) q = v[i] - 1.0;
        else if (k == 1) q = (v[i + 1] - v[i - 1]) / (2.0 * h);
        else q = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
        double X = std::log(z), Y = std::log(std::abs(q));
        sx += X;
        sy += Y;
        sxx += X * X;
        sxy += X * Y;
        ++m;
    }
    if (m < 2) throw RangeError("decay_fit: window contains fewer than two grid nodes");
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

void write_profile(std::ostream& os, const SampledProfile& w) {
    const auto& f = w.f;
    os << std::setprecision(17);
    os << "# s=" << w.s << " L=" << f.L() << " n=" << f.n() << " c_minus=" << f.c_minus()
       << " c_plus=" << f.c_plus() << " residual_sup=" << w.residual_sup << "\n";
    for (int i = 0; i <= f.n(); ++i) os << f.z(i) << " " << f.samples()[i] << "\n";
}

SampledProfile read_profile(std::istream& is) {
    std::string header;
    if (!std::getline(is, header) || header.rfind("#", 0) != 0)
        throw ConfigError("read_profile: missing header line");
    double s = 0, L = 0, cm = 0, cp = 0, res = 0;
    long n = 0;
    std::istringstream hs(header.substr(1));
    std::string tok;
    while (hs >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "s") s = std::strtod(val.c_str(), nullptr);
        else if (key == "L") L = std::strtod(val.c_str(), nullptr);
        else if (key == "n") n = std::strtol(val.c_str(), nullptr, 10);
        else if (key == "c_minus") cm = std::strtod(val.c_str(), nullptr);
        else if (key == "c_plus") cp = std::strtod(val.c_str(), nullptr);
        else if (key == "residual_sup") res = std::strtod(val.c_str(), nullptr);
    }
    if (n < 4 || !(L > 0.0)) throw ConfigError("read_profile: malformed header");
    std::vector<double> v(static_cast<std::size_t>(n) + 1);
    std::string line;
    for (long i = 0; i <= n; ++i) {
        if (!std::getline(is, line)) throw ConfigError("read_profile: truncated table");
        std::istringstream ls(line);
        std::string zs, ws;
        ls >> zs >> ws;
        v[static_cast<std::size_t>(i)] = std::strtod(ws.c_str(), nullptr);
    }
    SampledProfile w;
    w.f = TailedFunction1D(L, std::move(v), -1.0, 1.0, 2.0 * s, cm, cp);
    w.s = s;
    w.residual_sup = res;
    return w;
}

void save_profile(const std::string& path, const SampledProfile& w) {
    std::ofstream os(path);
    if (!os) throw ConfigError("save_profile: cannot open " + path);
    write_profile(os, w);
}

SampledProfile load_profile(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("load_profile: cannot open " + path);
    return read_profile(is);
}

}  // namespace fracwill
