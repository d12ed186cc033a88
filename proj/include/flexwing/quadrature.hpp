#pragma once

#include <functional>
#include <vector>

namespace flexwing {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int size() const { return static_cast<int>(nodes.size()); }
};

// Cached n-point rule, n >= 1. Exact for polynomials of degree 2n - 1.
const GaussRule& gauss_legendre(int n);

// Composite quadrature layout: `panels` equal panels with `points` Gauss points each.
struct QuadratureSpec {
    int panels = 64;
    int points = 4;
};

double quadrature(const std::function<double(double)>& f, double a, double b, QuadratureSpec spec = {});

// y -> integral_0^y f, tabulated at panel edges so each evaluation costs one
// partial-panel Gauss sum.
class CumulativeIntegral {
public:
    CumulativeIntegral() = default;
    CumulativeIntegral(std::function<double(double)> integrand, double span, QuadratureSpec spec);

    double operator()(double y) const;
    double total() const { return edges_.empty() ? 0.0 : edges_.back(); }
    double integrand(double y) const { return f_(y); }

private:
    std::function<double(double)> f_;
    double span_ = 0.0;
    QuadratureSpec spec_;
    std::vector<double> edges_;
};

}  // namespace flexwing
