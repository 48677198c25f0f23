#include "fracwill/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "fracwill/errors.hpp"
#include "fracwill/geometry.hpp"
#include "fracwill/profile.hpp"

namespace fracwill {

namespace {

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& v) {
    double x = 0.0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError("unparsable number '" + v + "'");
    return x;
}

int to_int(const std::string& v) {
    int x = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError("unparsable integer '" + v + "'");
    return x;
}

bool to_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("unparsable boolean '" + v + "'");
}

std::vector<double> to_list(const std::string& v) {
    std::vector<double> out;
    if (v.empty()) return out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item)));
    return out;
}

Subcommand to_subcommand(const std::string& v) {
    for (auto c : {Subcommand::Profile, Subcommand::Kernel, Subcommand::Constants, Subcommand::Expansion,
                   Subcommand::Gamma})
        if (v == subcommand_name(c)) return c;
    throw ConfigError("unknown subcommand '" + v + "'");
}

// shortest form that reads back to the same double
std::string fmt(double x) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

std::string fmt(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + fmt(xs[i]);
    return out;
}

using LineOf = std::function<std::string(const std::string&)>;

void validate(const RunConfig& c, const LineOf& at) {
    auto fail = [&](const std::string& key, const std::string& msg) { throw ConfigError(at(key) + msg); };
    if (!(c.s > 0.0 && c.s < 1.0)) fail("s", "s must lie in (0, 1)");
    if ((c.subcommand == Subcommand::Gamma || c.subcommand == Subcommand::Constants) && !(c.s >= 0.75))
        fail("s", "s must be >= 3/4 for " + std::string(subcommand_name(c.subcommand)));
    if (c.subcommand == Subcommand::Expansion && !(c.s > 0.5)) fail("s", "s must exceed 1/2 for expansion");
    try {
        DoubleWell::by_name(c.potential);
    } catch (const ConfigError& e) {
        fail("potential", e.what());
    }
    try {
        PlanarCurve::parse(c.curve);
    } catch (const ConfigError& e) {
        fail("curve", e.what());
    }
    auto lad = c.effective_ladder();
    for (std::size_t i = 0; i < lad.size(); ++i) {
        if (!(lad[i] > 0.0)) fail("ladder", "ladder entries must be positive");
        if (i > 0 && !(lad[i] < lad[i - 1])) fail("ladder", "ladder must be strictly decreasing");
    }
    if (!(c.L > 0.0)) fail("L", "L must be positive");
    if (c.n < 16) fail("n", "n must be >= 16");
    if (!(c.tol > 0.0)) fail("tol", "tol must be positive");
    if (!(c.t > 0.0)) fail("t", "t must be positive");
    if (!(c.lambda > 0.0)) fail("lambda", "lambda must be positive");
    if (!(c.Lambda >= 1.0)) fail("Lambda", "Lambda must be >= 1");
    if (c.delta < 0.0) fail("delta", "delta must be >= 0");
    if (c.omega_margin < 1.0) fail("omega_margin", "omega_margin must be >= 1");
    for (double T : c.cutoffs)
        if (!(T > 0.0)) fail("cutoffs", "cutoffs must be positive");
}

}  // namespace

const char* subcommand_name(Subcommand c) {
    switch (c) {
    case Subcommand::Profile: return "profile";
    case Subcommand::Kernel: return "kernel";
    case Subcommand::Constants: return "constants";
    case Subcommand::Expansion: return "expansion";
    case Subcommand::Gamma: return "gamma";
    }
    return "?";
}

std::vector<double> RunConfig::effective_ladder() const {
    if (!ladder.empty()) return ladder;
    if (subcommand == Subcommand::Expansion) return {0.05, 0.025, 0.0125};
    if (subcommand == Subcommand::Gamma) return {0.08, 0.04, 0.02};
    return {};
}

std::string RunConfig::describe() const {
    std::ostringstream os;
    os << "subcommand=" << subcommand_name(subcommand) << " s=" << fmt(s) << " potential=" << potential
       << " curve=" << curve << " ladder=" << fmt(effective_ladder()) << " output=" << output << " L=" << fmt(L)
       << " n=" << n << " tol=" << fmt(tol) << " newton=" << (newton ? "true" : "false")
       << " profile_cache=" << profile_cache << " t=" << fmt(t) << " lambda=" << fmt(lambda)
       << " points=" << fmt(points) << " cutoffs=" << fmt(cutoffs) << " Lambda=" << fmt(Lambda)
       << " t0=" << fmt(t0) << " offset=" << fmt(offset) << " delta=" << fmt(delta)
       << " omega_margin=" << fmt(omega_margin) << " timing=" << (timing ? "true" : "false");
    return os.str();
}

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::istringstream is(text);
    std::string raw;
    int lineno = 0;
    std::map<std::string, int> seen;
    while (std::getline(is, raw)) {
        ++lineno;
        auto hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        auto eq = line.find('=');
        std::string where = "line " + std::to_string(lineno) + ": ";
        if (eq == std::string::npos) throw ConfigError(where + "expected key=value");
        std::string key = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
        if (seen.count(key)) throw ConfigError(where + "duplicate key '" + key + "'");
        seen[key] = lineno;
        try {
            if (key == "subcommand") c.subcommand = to_subcommand(v);
            else if (key == "s") c.s = to_double(v);
            else if (key == "potential") c.potential = v;
            else if (key == "curve") c.curve = v;
            else if (key == "ladder") c.ladder = to_list(v);
            else if (key == "output") c.output = v;
            else if (key == "L") c.L = to_double(v);
            else if (key == "n") c.n = to_int(v);
            else if (key == "tol") c.tol = to_double(v);
            else if (key == "newton") c.newton = to_bool(v);
            else if (key == "profile_cache") c.profile_cache = v;
            else if (key == "t") c.t = to_double(v);
            else if (key == "lambda") c.lambda = to_double(v);
            else if (key == "points") c.points = to_list(v);
            else if (key == "cutoffs") c.cutoffs = to_list(v);
            else if (key == "Lambda") c.Lambda = to_double(v);
            else if (key == "t0") c.t0 = to_double(v);
            else if (key == "offset") c.offset = to_double(v);
            else if (key == "delta") c.delta = to_double(v);
            else if (key == "omega_margin") c.omega_margin = to_double(v);
            else if (key == "timing") c.timing = to_bool(v);
            else throw ConfigError("unknown key '" + key + "'");
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
    validate(c, [&](const std::string& k) {
        auto it = seen.find(k);
        return it == seen.end() ? std::string() : "line " + std::to_string(it->second) + ": ";
    });
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace fracwill
