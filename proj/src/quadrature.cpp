#include "flexwing/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace flexwing {

namespace {

GaussRule build_rule(int n) {
    if (n == 1) return {{0.0}, {2.0}};
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton iteration on P_n, started from the Tricomi approximation.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs at least one point");
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
    return it->second;
}

double quadrature(const std::function<double(double)>& f, double a, double b, QuadratureSpec spec) {
    if (b < a) throw std::invalid_argument("quadrature: b < a");
    if (spec.panels < 1) throw std::invalid_argument("quadrature: need at least one panel");
    const GaussRule& rule = gauss_legendre(spec.points);
    const double h = (b - a) / spec.panels;
    double sum = 0.0;
    for (int p = 0; p < spec.panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        double panel = 0.0;
        for (int q = 0; q < rule.size(); ++q) panel += rule.weights[q] * f(mid + 0.5 * h * rule.nodes[q]);
        sum += 0.5 * h * panel;
    }
    return sum;
}

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> integrand, double span, QuadratureSpec spec)
    : f_(std::move(integrand)), span_(span), spec_(spec) {
    if (spec.panels < 1) throw std::invalid_argument("CumulativeIntegral: need at least one panel");
    edges_.assign(spec.panels + 1, 0.0);
    const double h = span_ / spec.panels;
    for (int p = 0; p < spec.panels; ++p)
        edges_[p + 1] = edges_[p] + quadrature(f_, p * h, (p + 1) * h, {1, spec.points});
}

double CumulativeIntegral::operator()(double y) const {
    if (y <= 0.0) return 0.0;
    if (y >= span_) return total();
    const double h = span_ / spec_.panels;
    const int p = std::min(static_cast<int>(y / h), spec_.panels - 1);
    const double a = p * h;
    if (y == a) return edges_[p];
    return edges_[p] + quadrature(f_, a, y, {1, spec_.points});
}

}  // namespace flexwing
