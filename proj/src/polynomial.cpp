#include "flexwing/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace flexwing {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
    trim();
}

Polynomial::Polynomial(std::initializer_list<double> coeffs) : Polynomial(std::vector<double>(coeffs)) {}

void Polynomial::trim() {
    while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
}

bool Polynomial::is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }

double Polynomial::operator()(double y) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * y + *it;
    return acc;
}

double Polynomial::derivative(double y, int k) const {
    Polynomial d = *this;
    for (int i = 0; i < k; ++i) d = d.derivative_poly();
    return d(y);
}

Polynomial Polynomial::derivative_poly() const {
    if (coeffs_.size() <= 1) return Polynomial::constant(0.0);
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs_[i];
    return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative() const {
    std::vector<double> a(coeffs_.size() + 1, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) a[i + 1] = coeffs_[i] / static_cast<double>(i + 1);
    return Polynomial(std::move(a));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Polynomial(std::move(c));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
    return Polynomial(std::move(c));
}

Polynomial operator*(double s, const Polynomial& a) {
    std::vector<double> c = a.coeffs_;
    for (double& v : c) v *= s;
    return Polynomial(std::move(c));
}

namespace {

double bisect(const Polynomial& p, double lo, double hi) {
    double flo = p(lo);
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = p(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> real_roots_in(const Polynomial& p, double a, double b) {
    std::vector<double> roots;
    if (p.degree() <= 0) return roots;
    if (p.degree() == 1) {
        const double r = -p.coeffs()[0] / p.coeffs()[1];
        if (r >= a && r <= b) roots.push_back(r);
        return roots;
    }
    // p is monotone between consecutive critical points.
    std::vector<double> knots{a};
    for (double c : real_roots_in(p.derivative_poly(), a, b))
        if (c > knots.back()) knots.push_back(c);
    if (b > knots.back()) knots.push_back(b);

    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double lo = knots[i], hi = knots[i + 1];
        const double flo = p(lo), fhi = p(hi);
        if (flo == 0.0) {
            if (roots.empty() || roots.back() != lo) roots.push_back(lo);
            continue;
        }
        if (fhi == 0.0) {
            roots.push_back(hi);
            continue;
        }
        if ((flo < 0.0) != (fhi < 0.0)) roots.push_back(bisect(p, lo, hi));
    }
    return roots;
}

Extrema extrema_on(const Polynomial& p, double a, double b) {
    Extrema e{std::min(p(a), p(b)), std::max(p(a), p(b))};
    for (double c : real_roots_in(p.derivative_poly(), a, b)) {
        const double v = p(c);
        e.min = std::min(e.min, v);
        e.max = std::max(e.max, v);
    }
    return e;
}

}  // namespace flexwing
