#pragma once

#include "flexwing/polynomial.hpp"

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace flexwing {

// Essential infimum/supremum of a coefficient over [0, l]. `exact` is false when
// the values come from dense sampling of a closed-form profile.
struct EssentialBounds {
    double inf = 0.0;
    double sup = 0.0;
    bool exact = true;

    // ess sup |p|
    double abs_sup() const;
};

// Number of samples used for bounds of non-polynomial profiles.
inline constexpr int kDenseSamples = 10000;

// Spatially varying coefficient on [0, l]. Constant, polynomial and
// piecewise-linear profiles are stored as piecewise polynomials, which makes
// their essential bounds (and those of their products) exact.
class SpatialProfile {
public:
    enum class Kind { Constant, Polynomial, PiecewiseLinear, Custom };

    static SpatialProfile constant(double value, double span);
    static SpatialProfile polynomial(Polynomial p, double span);
    // Linear interpolation between (y, value) samples; y must start at 0,
    // end at span and be strictly increasing.
    static SpatialProfile piecewise_linear(std::vector<std::pair<double, double>> samples, double span);
    // Arbitrary closed form. `derivative` is optional (central differences are used otherwise).
    static SpatialProfile custom(std::function<double(double)> f, double span, std::string description,
                                 std::function<double(double)> derivative = {});

    SpatialProfile() = default;

    Kind kind() const { return kind_; }
    double span() const { return span_; }

    // Throws std::out_of_range outside [0, l].
    double operator()(double y) const;
    double derivative(double y) const;

    EssentialBounds bounds() const;
    SpatialProfile scaled(double factor) const;

    std::string describe() const;

    friend EssentialBounds product_bounds(const SpatialProfile& p, const SpatialProfile& q);

private:
    struct Piece {
        double a;
        double b;
        Polynomial poly;
    };
    std::size_t piece_index(double y) const;
    void check_domain(double y) const;

    Kind kind_ = Kind::Constant;
    double span_ = 1.0;
    std::vector<Piece> pieces_;
    std::shared_ptr<const std::function<double(double)>> fn_;
    std::shared_ptr<const std::function<double(double)>> dfn_;
    std::string description_;
    std::vector<std::pair<double, double>> samples_;
};

inline double evaluate_profile(const SpatialProfile& p, double y) { return p(y); }
inline EssentialBounds essential_bounds(const SpatialProfile& p) { return p.bounds(); }

// Essential bounds of y -> p(y) q(y). Exact when both operands are piecewise
// polynomial, otherwise dense sampling.
EssentialBounds product_bounds(const SpatialProfile& p, const SpatialProfile& q);

}  // namespace flexwing
