#pragma once

#include <string>
#include <vector>

namespace fracwill {

enum class Subcommand { Profile, Kernel, Constants, Expansion, Gamma };

const char* subcommand_name(Subcommand c);

struct RunConfig {
    Subcommand subcommand = Subcommand::Gamma;
    double s = 0.8;
    std::string potential = "quartic";
    std::string curve = "circle:1";
    std::vector<double> ladder;  // empty: the subcommand default
    std::string output = "-";    // "-" writes to stdout

    // profile solve
    double L = 40.0;
    int n = 4096;
    double tol = 1e-8;
    bool newton = true;
    std::string profile_cache;  // reused when present and matching, written otherwise

    // kernel
    double t = 1.0;
    double lambda = 1.0;
    std::vector<double> points{0.25, 0.5, 1.0, 2.0, 4.0, 8.0};

    // constants
    std::vector<double> cutoffs;  // empty: default ladder

    // expansion
    double Lambda = 20.0;
    double t0 = 0.4;       // curve parameter of the foot point
    double offset = 0.0;   // signed distance of x0; 0 selects delta / (20 Lambda)

    // gamma
    double delta = 0.0;  // 0 selects the default tube width
    double omega_margin = 1.0;
    bool timing = false;  // runtime_s column; off keeps reruns byte-identical

    std::vector<double> effective_ladder() const;
    // One line, every key with its resolved value.
    std::string describe() const;
};

// key=value lines, '#' comments; ConfigError naming the line on bad input.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace fracwill
