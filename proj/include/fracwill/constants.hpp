#pragma once

#include <vector>

#include "fracwill/profile.hpp"

namespace fracwill {

struct EtaSpec {
    double epsilon = 1.0;
    double ell = 1.0;
    const SampledProfile* profile = nullptr;
};

// Width of the panel at z = 0 treated by the power-weight substitution; <= 0 selects half a
// scaled grid cell.
struct EtaOptions {
    double singular_width = 0.0;
};

// int_{-ell}^{ell} w_eps'(z0 + z) |z|^{1-2s} dz with w_eps(z) = w(z/eps); s in (1/2, 1).
double eta(const EtaSpec& spec, double z0, const EtaOptions& opt = {});

// int_{-ell}^{ell} (w_eps(z0+z) - w_eps(z0)) z |z|^{-2s-1} dz.
double ibp_lhs(const EtaSpec& spec, double z0, const EtaOptions& opt = {});
// ell^{1-2s}/(1-2s) (w_eps(ell+z0) - w_eps(z0-ell)) + eta/(2s-1).
double ibp_rhs(const EtaSpec& spec, double z0, const EtaOptions& opt = {});
double ibp_identity_residual(const EtaSpec& spec, double z0, const EtaOptions& opt = {});

// int_{-ell'}^{ell'} eta_{1,ell}(z)^2 dz.
double eta_square_integral(const SampledProfile& w, double ell, double ell_prime);

struct MuLadder {
    std::vector<double> cutoffs;
    std::vector<double> raw;           // eta_square_integral(w, T, T)
    std::vector<double> extrapolated;  // pairwise Richardson with tail power 3 - 4s
    double value = 0.0;                // last extrapolated entry
};

std::vector<double> default_cutoff_ladder();

// s in (3/4, 1); throws ConvergenceError when the top two extrapolated entries differ by >= 1%.
MuLadder mu_w(const SampledProfile& w, double s, const std::vector<double>& cutoffs);

// (1/log T) eta_square_integral(w, T, T) along the ladder, eps = 1/T; s = 3/4.
std::vector<double> mu_log_rate(const SampledProfile& w, const std::vector<double>& cutoffs);

// s = 3/4: 8 gamma_{1,s}^2.  s > 3/4: gamma_{1,s}^2 / (4 (2s-1)^2) mu.
double kappa_star(double s, double mu = 0.0);

}  // namespace fracwill
