#include "flexwing/profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace flexwing {

double EssentialBounds::abs_sup() const { return std::max(std::abs(inf), std::abs(sup)); }

namespace {

constexpr double kDomainSlack = 1e-12;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

EssentialBounds sampled_bounds(const std::function<double(double)>& f, double span) {
    EssentialBounds b{f(0.0), f(0.0), false};
    for (int i = 1; i <= kDenseSamples; ++i) {
        const double v = f(span * static_cast<double>(i) / kDenseSamples);
        b.inf = std::min(b.inf, v);
        b.sup = std::max(b.sup, v);
    }
    return b;
}

}  // namespace

SpatialProfile SpatialProfile::constant(double value, double span) {
    if (!(span > 0.0)) throw std::invalid_argument("profile span must be positive");
    SpatialProfile p;
    p.kind_ = Kind::Constant;
    p.span_ = span;
    p.pieces_.push_back({0.0, span, Polynomial::constant(value)});
    return p;
}

SpatialProfile SpatialProfile::polynomial(Polynomial poly, double span) {
    if (!(span > 0.0)) throw std::invalid_argument("profile span must be positive");
    SpatialProfile p;
    p.kind_ = Kind::Polynomial;
    p.span_ = span;
    p.pieces_.push_back({0.0, span, std::move(poly)});
    return p;
}

SpatialProfile SpatialProfile::piecewise_linear(std::vector<std::pair<double, double>> samples, double span) {
    if (!(span > 0.0)) throw std::invalid_argument("profile span must be positive");
    if (samples.size() < 2) throw std::invalid_argument("piecewise-linear profile needs at least two samples");
    if (std::abs(samples.front().first) > kDomainSlack * span ||
        std::abs(samples.back().first - span) > kDomainSlack * span)
        throw std::invalid_argument("piecewise-linear samples must cover [0, " + fmt(span) + "]");
    SpatialProfile p;
    p.kind_ = Kind::PiecewiseLinear;
    p.span_ = span;
    samples.front().first = 0.0;
    samples.back().first = span;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        const auto [y0, v0] = samples[i];
        const auto [y1, v1] = samples[i + 1];
        if (!(y1 > y0)) throw std::invalid_argument("piecewise-linear sample positions must increase strictly");
        const double slope = (v1 - v0) / (y1 - y0);
        p.pieces_.push_back({y0, y1, Polynomial({v0 - slope * y0, slope})});
    }
    p.samples_ = std::move(samples);
    return p;
}

SpatialProfile SpatialProfile::custom(std::function<double(double)> f, double span, std::string description,
                                      std::function<double(double)> derivative) {
    if (!(span > 0.0)) throw std::invalid_argument("profile span must be positive");
    if (!f) throw std::invalid_argument("custom profile needs a callable");
    SpatialProfile p;
    p.kind_ = Kind::Custom;
    p.span_ = span;
    p.fn_ = std::make_shared<const std::function<double(double)>>(std::move(f));
    if (derivative) p.dfn_ = std::make_shared<const std::function<double(double)>>(std::move(derivative));
    p.description_ = std::move(description);
    return p;
}

void SpatialProfile::check_domain(double y) const {
    if (!(y >= -kDomainSlack * span_ && y <= span_ * (1.0 + kDomainSlack)))
        throw std::out_of_range("profile evaluated at y=" + fmt(y) + " outside [0, " + fmt(span_) + "]");
}

std::size_t SpatialProfile::piece_index(double y) const {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), y,
                               [](double v, const Piece& piece) { return v < piece.b; });
    if (it == pieces_.end()) return pieces_.size() - 1;
    return static_cast<std::size_t>(it - pieces_.begin());
}

double SpatialProfile::operator()(double y) const {
    check_domain(y);
    if (kind_ == Kind::Custom) return (*fn_)(std::clamp(y, 0.0, span_));
    return pieces_[piece_index(y)].poly(y);
}

double SpatialProfile::derivative(double y) const {
    check_domain(y);
    if (kind_ == Kind::Custom) {
        if (dfn_) return (*dfn_)(y);
        const double h = 1e-5 * span_;
        const double lo = std::max(0.0, y - h), hi = std::min(span_, y + h);
        return ((*fn_)(hi) - (*fn_)(lo)) / (hi - lo);
    }
    // One-sided (left) derivative at interior breakpoints and at the tip.
    std::size_t i = piece_index(y);
    if (i > 0 && y <= pieces_[i].a) --i;
    return pieces_[i].poly.derivative(y);
}

EssentialBounds SpatialProfile::bounds() const {
    if (kind_ == Kind::Custom) return sampled_bounds(*fn_, span_);
    EssentialBounds b{pieces_[0].poly(0.0), pieces_[0].poly(0.0), true};
    for (const auto& piece : pieces_) {
        const auto e = extrema_on(piece.poly, piece.a, piece.b);
        b.inf = std::min(b.inf, e.min);
        b.sup = std::max(b.sup, e.max);
    }
    return b;
}

SpatialProfile SpatialProfile::scaled(double factor) const {
    SpatialProfile p = *this;
    if (kind_ == Kind::Custom) {
        auto f = fn_;
        p.fn_ = std::make_shared<const std::function<double(double)>>([f, factor](double y) { return factor * (*f)(y); });
        if (dfn_) {
            auto d = dfn_;
            p.dfn_ = std::make_shared<const std::function<double(double)>>([d, factor](double y) { return factor * (*d)(y); });
        }
        p.description_ = fmt(factor) + " * (" + description_ + ")";
        return p;
    }
    for (auto& piece : p.pieces_) piece.poly = factor * piece.poly;
    for (auto& s : p.samples_) s.second *= factor;
    return p;
}

std::string SpatialProfile::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
        case Kind::Constant:
            os << "constant " << pieces_[0].poly(0.0);
            break;
        case Kind::Polynomial:
            os << "poly";
            for (double c : pieces_[0].poly.coeffs()) os << ' ' << c;
            break;
        case Kind::PiecewiseLinear:
            os << "samples";
            for (const auto& [y, v] : samples_) os << ' ' << y << ':' << v;
            break;
        case Kind::Custom:
            os << "custom " << description_;
            break;
    }
    return os.str();
}

EssentialBounds product_bounds(const SpatialProfile& p, const SpatialProfile& q) {
    if (std::abs(p.span_ - q.span_) > kDomainSlack * p.span_)
        throw std::invalid_argument("product_bounds: profiles defined on different spans");
    if (p.kind_ == SpatialProfile::Kind::Custom || q.kind_ == SpatialProfile::Kind::Custom)
        return sampled_bounds([&](double y) { return p(y) * q(y); }, p.span_);

    // Merge breakpoints; on each sub-interval both factors are single polynomials.
    std::vector<double> knots;
    for (const auto& piece : p.pieces_) knots.push_back(piece.a);
    for (const auto& piece : q.pieces_) knots.push_back(piece.a);
    knots.push_back(p.span_);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    EssentialBounds b{p(0.0) * q(0.0), p(0.0) * q(0.0), true};
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double a = knots[i], c = knots[i + 1];
        const double mid = 0.5 * (a + c);
        const Polynomial prod = p.pieces_[p.piece_index(mid)].poly * q.pieces_[q.piece_index(mid)].poly;
        const auto e = extrema_on(prod, a, c);
        b.inf = std::min(b.inf, e.min);
        b.sup = std::max(b.sup, e.max);
    }
    return b;
}

}  // namespace flexwing
