#pragma once

#include <initializer_list>
#include <vector>

namespace flexwing {

// Real polynomial in power basis, coefficients in ascending order.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs);
    Polynomial(std::initializer_list<double> coeffs);

    static Polynomial constant(double c) { return Polynomial({c}); }

    double operator()(double y) const;
    // k-th derivative evaluated at y.
    double derivative(double y, int k = 1) const;

    Polynomial derivative_poly() const;
    Polynomial antiderivative() const;

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    bool is_zero() const;

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(double s, const Polynomial& a);

private:
    void trim();
    std::vector<double> coeffs_{0.0};
};

// Real roots of p in [a, b], ascending. Found by recursive bracketing between
// critical points followed by bisection, so no root of odd multiplicity is lost.
std::vector<double> real_roots_in(const Polynomial& p, double a, double b);

// Minimum and maximum of p over [a, b] (endpoints and interior critical points).
struct Extrema {
    double min;
    double max;
};
Extrema extrema_on(const Polynomial& p, double a, double b);

}  // namespace flexwing
