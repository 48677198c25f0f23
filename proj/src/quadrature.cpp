#include "fracwill/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <queue>

#include "fracwill/errors.hpp"

namespace fracwill {

namespace {

template <int N>
GaussRule build_rule() {
    using G = boost::math::quadrature::gauss<double, N>;
    const auto& ax = G::abscissa();
    const auto& wt = G::weights();
    GaussRule r;
    for (std::size_t i = ax.size(); i-- > 0;) {
        if (ax[i] == 0.0) continue;
        r.x.push_back(-ax[i]);
        r.w.push_back(wt[i]);
    }
    for (std::size_t i = 0; i < ax.size(); ++i) {
        r.x.push_back(ax[i]);
        r.w.push_back(wt[i]);
    }
    return r;
}

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk_panel(const Fn& f, double a, double b) {
    double err = 0.0;
    double v = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, 0, 0.0, &err);
    return {a, b, v, err};
}

}  // namespace

const GaussRule& gauss_rule(int n) {
    static const GaussRule r7 = build_rule<7>();
    static const GaussRule r10 = build_rule<10>();
    static const GaussRule r15 = build_rule<15>();
    static const GaussRule r20 = build_rule<20>();
    static const GaussRule r30 = build_rule<30>();
    switch (n) {
        case 7: return r7;
        case 10: return r10;
        case 15: return r15;
        case 20: return r20;
        case 30: return r30;
        default: throw ConfigError("gauss_rule: unsupported order " + std::to_string(n));
    }
}

double integrate_gauss(const Fn& f, double a, double b, const GaussRule& rule) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a), sum = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) sum += rule.w[i] * f(c + h * rule.x[i]);
    return sum * h;
}

double integrate_panels(const Fn& f, const std::vector<double>& breaks, const GaussRule& rule) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        if (breaks[i + 1] > breaks[i]) sum += integrate_gauss(f, breaks[i], breaks[i + 1], rule);
    return sum;
}

AdaptiveResult integrate_adaptive(const Fn& f, const std::vector<double>& breaks,
                                  const AdaptiveOptions& opt) {
    std::priority_queue<Panel> heap;
    double total = 0.0, err = 0.0;
    int evals = 0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i + 1] > breaks[i])) continue;
        Panel p = gk_panel(f, breaks[i], breaks[i + 1]);
        evals += 21;
        total += p.value;
        err += p.error;
        heap.push(p);
    }
    int panels = static_cast<int>(heap.size());
    while (!heap.empty() && err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) &&
           panels < opt.max_panels) {
        Panel p = heap.top();
        heap.pop();
        double m = 0.5 * (p.a + p.b);
        if (!(m > p.a && m < p.b)) {
            err -= p.error;
            continue;
        }
        Panel l = gk_panel(f, p.a, m), r = gk_panel(f, m, p.b);
        evals += 42;
        ++panels;
        total += l.value + r.value - p.value;
        err += l.error + r.error - p.error;
        heap.push(l);
        heap.push(r);
    }
    // Re-sum from the leaves for a deterministic, drift-free total.
    double sum = 0.0, esum = 0.0;
    std::vector<Panel> leaves;
    leaves.reserve(heap.size());
    while (!heap.empty()) {
        leaves.push_back(heap.top());
        heap.pop();
    }
    std::sort(leaves.begin(), leaves.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    for (const auto& p : leaves) {
        sum += p.value;
        esum += p.error;
    }
    AdaptiveResult res;
    res.value = sum;
    res.error = esum;
    res.evaluations = evals;
    res.converged = esum <= std::max(opt.abs_tol, opt.rel_tol * std::abs(sum));
    return res;
}

AdaptiveResult integrate_adaptive(const Fn& f, double a, double b, const AdaptiveOptions& opt) {
    return integrate_adaptive(f, std::vector<double>{a, b}, opt);
}

AdaptiveResult integrate_power_weight(const Fn& f, double a, double p, const AdaptiveOptions& opt) {
    if (!(p > -1.0)) throw DomainError("integrate_power_weight: exponent must exceed -1");
    double q = 1.0 / (1.0 + p);
    auto g = [&](double u) { return f(a * std::pow(u, q)); };
    AdaptiveResult r = integrate_adaptive(g, 0.0, 1.0, opt);
    double scale = std::pow(a, 1.0 + p) * q;
    r.value *= scale;
    r.error *= std::abs(scale);
    return r;
}

std::vector<double> geometric_breaks(double a, double b, double ratio) {
    std::vector<double> br{a};
    double x = a;
    while (x * ratio < b) {
        x *= ratio;
        br.push_back(x);
    }
    br.push_back(b);
    return br;
}

}  // namespace fracwill
