#include "fracwill/reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "fracwill/constants.hpp"
#include "fracwill/core_math.hpp"
#include "fracwill/errors.hpp"
#include "fracwill/experiment.hpp"
#include "fracwill/geometry.hpp"
#include "fracwill/heat_kernel.hpp"

namespace fracwill {

namespace {

std::string num(double v) {
    if (std::isnan(v)) return "na";
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

std::string row_error(const Error& e) { return std::string(error_kind_name(e.kind())) + ": " + e.what(); }

// Least-squares slope of log|y| against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(std::abs(y[i]) > 0.0) || !std::isfinite(y[i])) continue;
        double X = std::log(x[i]), Y = std::log(std::abs(y[i]));
        sx += X;
        sy += Y;
        sxx += X * X;
        sxy += X * Y;
        ++m;
    }
    if (m < 2) return std::numeric_limits<double>::quiet_NaN();
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

void profile_csv(const RunConfig& cfg, std::ostream& os, RunOutcome&) {
    DoubleWell W = DoubleWell::by_name(cfg.potential);
    SampledProfile w = obtain_profile(cfg);
    double half = 0.5 * cfg.L;
    double res = profile_residual(w, W, -half, half);
    double lo = 10.0, hi = cfg.L / 2.0;
    os << "s,potential,L,n,residual_sup,iterations,tail_coefficient,slope_w,slope_dw,slope_d2w\n";
    os << num(cfg.s) << "," << cfg.potential << "," << num(cfg.L) << "," << cfg.n << "," << num(res) << ","
       << w.iterations << "," << num(w.tail_coefficient()) << "," << num(decay_fit(w, 0, lo, hi)) << ","
       << num(decay_fit(w, 1, lo, hi)) << "," << num(decay_fit(w, 2, lo, hi)) << "\n";
}

void kernel_csv(const RunConfig& cfg, std::ostream& os, RunOutcome& out) {
    const double s = cfg.s, t = cfg.t, sc = std::pow(t, -1.0 / (2.0 * s));
    os << "x,heat_kernel,heat_kernel_dx,fundamental_solution\n";
    for (double x : cfg.points) {
        os << num(x);
        try {
            double p = heat_kernel(t, x, s);
            double dp = sc * sc * heat_kernel_deriv(1, x * sc, s);
            double g = fundamental_solution(cfg.lambda, x, s);
            os << "," << num(p) << "," << num(dp) << "," << num(g) << "\n";
        } catch (const Error& e) {
            os << ",error,error,error\n";
            os << "# row x=" << num(x) << " failed: " << row_error(e) << "\n";
            ++out.failed_rows;
        }
    }
    os << "# t=" << num(t) << " lambda=" << num(cfg.lambda)
       << " fundamental_solution_mass=" << num(fundamental_solution_mass(cfg.lambda, s)) << "\n";
}

void constants_csv(const RunConfig& cfg, std::ostream& os, RunOutcome& out) {
    SampledProfile w = obtain_profile(cfg);
    const double s = cfg.s;
    nlohmann::json j;
    std::vector<double> cutoffs = cfg.cutoffs.empty() ? default_cutoff_ladder() : cfg.cutoffs;
    j["cutoffs"] = cutoffs;
    double mu = std::numeric_limits<double>::quiet_NaN(), kappa = mu;
    std::string err;
    if (std::abs(s - 0.75) < 1e-12) {
        j["log_rate"] = mu_log_rate(w, cutoffs);
        kappa = kappa_star(0.75);
    } else {
        try {
            MuLadder m = mu_w(w, s, cutoffs);
            j["raw"] = m.raw;
            j["extrapolated"] = m.extrapolated;
            mu = m.value;
            kappa = kappa_star(s, mu);
        } catch (const ConvergenceError& e) {
            j["extrapolated"] = e.sequence;
            err = row_error(e);
            ++out.failed_rows;
        }
    }
    os << "s,gamma_1s,mu_w_or_na,kappa_star,ladder_json\n";
    os << num(s) << "," << num(gamma_ds(1, s)) << "," << num(mu) << "," << num(kappa) << "," << csv_quote(j.dump())
       << "\n";
    if (!err.empty()) os << "# row failed: " << err << "\n";
}

void expansion_csv(const RunConfig& cfg, std::ostream& os, RunOutcome& out) {
    SampledProfile w = obtain_profile(cfg);
    PlanarCurve curve = PlanarCurve::parse(cfg.curve);
    double delta = cfg.delta > 0.0 ? cfg.delta : SmoothedDistance::default_delta(curve);
    double offset = cfg.offset != 0.0 ? cfg.offset : delta / (20.0 * cfg.Lambda);
    Point x0 = FermiChart(curve, cfg.t0).map(0.0, offset);
    os << "epsilon,z0,flap2d,leading,curvature,residual\n";
    std::vector<double> eps_ok, lead, res;
    for (double eps : cfg.effective_ladder()) {
        try {
            RecoveryField field(curve, w, eps, delta);
            ExpansionTerms t = fermi_expansion_residual(field, x0, cfg.Lambda);
            os << num(eps) << "," << num(t.z0) << "," << num(t.flap2d) << "," << num(t.leading) << ","
               << num(t.curvature) << "," << num(t.residual) << "\n";
            eps_ok.push_back(eps);
            lead.push_back(t.leading);
            res.push_back(t.residual);
        } catch (const Error& e) {
            os << num(eps) << ",error,error,error,error,error\n";
            os << "# row epsilon=" << num(eps) << " failed: " << row_error(e) << "\n";
            ++out.failed_rows;
        }
    }
    double ratio = std::numeric_limits<double>::quiet_NaN();
    if (!res.empty()) {
        auto [mn, mx] = std::minmax_element(res.begin(), res.end());
        ratio = *mx / *mn;
    }
    os << "# x0=" << num(x0.x) << "," << num(x0.y) << " Lambda=" << num(cfg.Lambda) << " residual_ratio=" << num(ratio)
       << " leading_slope=" << num(loglog_slope(eps_ok, lead)) << "\n";
}

void gamma_csv(const RunConfig& cfg, std::ostream& os, RunOutcome& out) {
    SampledProfile w = obtain_profile(cfg);
    DoubleWell W = DoubleWell::by_name(cfg.potential);
    PlanarCurve curve = PlanarCurve::parse(cfg.curve);
    double kappa;
    if (std::abs(cfg.s - 0.75) < 1e-12) {
        kappa = kappa_star(0.75);
    } else {
        std::vector<double> cutoffs = cfg.cutoffs.empty() ? default_cutoff_ladder() : cfg.cutoffs;
        kappa = kappa_star(cfg.s, mu_w(w, cfg.s, cutoffs).value);
    }
    EnergyConfig ec;
    ec.s = cfg.s;
    ec.omega_margin = cfg.omega_margin;
    ec.delta = cfg.delta;
    ec.ladder = cfg.effective_ladder();
    ExperimentReport rep = run_limsup_experiment(ec, curve, w, W, kappa);
    for (const auto& r : rep.rows)
        if (!r.ok) ++out.failed_rows;
    write_experiment_csv(os, rep, cfg.timing);
}

}  // namespace

SampledProfile obtain_profile(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    if (!cfg.profile_cache.empty() && fs::exists(cfg.profile_cache)) {
        try {
            SampledProfile w = load_profile(cfg.profile_cache);
            if (w.s == cfg.s && w.L() == cfg.L && w.f.n() == cfg.n) return w;
        } catch (const ConfigError&) {
            // unreadable cache: solve again and overwrite
        }
    }
    SolveOptions opt;
    opt.tol = cfg.tol;
    opt.newton_polish = cfg.newton;
    SampledProfile w = solve_profile(DoubleWell::by_name(cfg.potential), cfg.s, cfg.L, cfg.n, opt);
    if (!cfg.profile_cache.empty()) {
        std::string tmp = cfg.profile_cache + ".tmp";
        save_profile(tmp, w);
        fs::rename(tmp, cfg.profile_cache);
    }
    return w;
}

RunOutcome run_report(const RunConfig& cfg) {
    RunOutcome out;
    std::ostringstream os;
    os << "# " << cfg.describe() << "\n";
    switch (cfg.subcommand) {
    case Subcommand::Profile: profile_csv(cfg, os, out); break;
    case Subcommand::Kernel: kernel_csv(cfg, os, out); break;
    case Subcommand::Constants: constants_csv(cfg, os, out); break;
    case Subcommand::Expansion: expansion_csv(cfg, os, out); break;
    case Subcommand::Gamma: gamma_csv(cfg, os, out); break;
    }
    out.csv = os.str();
    return out;
}

int execute(const RunConfig& cfg, std::ostream& err) {
    auto fail = [&](const std::string& kind, const std::string& msg) {
        err << "error kind=" << kind << " subcommand=" << subcommand_name(cfg.subcommand) << " message=" << msg
            << "\n";
        return 2;
    };
    RunOutcome out;
    try {
        out = run_report(cfg);
    } catch (const Error& e) {
        return fail(error_kind_name(e.kind()), e.what());
    } catch (const std::exception& e) {
        return fail("internal", e.what());
    }
    if (cfg.output == "-") {
        std::fwrite(out.csv.data(), 1, out.csv.size(), stdout);
        std::fflush(stdout);
    } else {
        std::string tmp = cfg.output + ".tmp";
        {
            std::ofstream f(tmp, std::ios::binary);
            if (!f) return fail("configuration", "output path not writable: " + cfg.output);
            f << out.csv;
        }
        std::error_code ec;
        std::filesystem::rename(tmp, cfg.output, ec);
        if (ec) return fail("configuration", "output path not writable: " + cfg.output);
    }
    if (out.failed_rows > 0) {
        err << "error kind=rows subcommand=" << subcommand_name(cfg.subcommand)
            << " message=" << out.failed_rows << " row(s) failed\n";
        return 1;
    }
    return 0;
}

}  // namespace fracwill
