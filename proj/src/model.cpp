#include "flexwing/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace flexwing {

namespace {

using std::numbers::pi;

void require_span(const SpatialProfile& p, double span, const char* name) {
    if (std::abs(p.span() - span) > 1e-12 * span)
        throw std::invalid_argument(std::string("profile ") + name + " is not defined on [0, l]");
}

void require_positive(const SpatialProfile& p, const char* name) {
    const auto b = p.bounds();
    if (!(b.inf > 0.0)) {
        std::ostringstream os;
        os << "profile " << name << " has nonpositive essential infimum " << b.inf;
        throw std::invalid_argument(os.str());
    }
}

Vec2 modulated_value(double a1, double a2, double t) {
    const double w0 = 0.2 * pi, w1 = pi, w2 = 3.0 * pi;
    return {a1 * std::cos(w0 * t) * std::sin(w1 * t) * std::cos(w2 * t),
            a2 * std::sin(w0 * t) * std::cos(w1 * t) * std::sin(w2 * t)};
}

Vec2 modulated_rate(double a1, double a2, double t) {
    const double w0 = 0.2 * pi, w1 = pi, w2 = 3.0 * pi;
    const double c0 = std::cos(w0 * t), s0 = std::sin(w0 * t);
    const double c1 = std::cos(w1 * t), s1 = std::sin(w1 * t);
    const double c2 = std::cos(w2 * t), s2 = std::sin(w2 * t);
    return {a1 * (-w0 * s0 * s1 * c2 + w1 * c0 * c1 * c2 - w2 * c0 * s1 * s2),
            a2 * (w0 * c0 * c1 * s2 - w1 * s0 * s1 * s2 + w2 * s0 * c1 * c2)};
}

// |d/dt| of a product of three unit harmonics is at most the sum of their frequencies.
constexpr double kModulationFrequencySum = 4.2 * pi;

}  // namespace

void validate(const WingModel& m) {
    if (!(m.span > 0.0)) throw std::invalid_argument("span must be positive");
    const std::pair<const SpatialProfile*, const char*> all[] = {
        {&m.rho, "rho"},         {&m.Iw, "Iw"},           {&m.EI, "EI"},           {&m.GJ, "GJ"},
        {&m.eta_w, "eta_w"},     {&m.eta_phi, "eta_phi"}, {&m.alpha_w, "alpha_w"}, {&m.beta_w, "beta_w"},
        {&m.gamma_w, "gamma_w"}, {&m.alpha_phi, "alpha_phi"}, {&m.beta_phi, "beta_phi"},
        {&m.gamma_phi, "gamma_phi"}};
    for (const auto& [p, name] : all) require_span(*p, m.span, name);
    for (int i = 0; i < 6; ++i) require_positive(*all[i].first, all[i].second);
    if (!(m.store_mass > 0.0)) throw std::invalid_argument("store mass m_s must be positive");
    if (!(m.store_inertia > 0.0)) throw std::invalid_argument("store inertia J_s must be positive");
}

WingModel default_wing_model() {
    WingModel m;
    const double l = 2.0;
    m.span = l;
    m.rho = SpatialProfile::polynomial({10.0, -3.0 / l}, l);
    m.Iw = SpatialProfile::polynomial({0.5, -0.15 / l}, l);
    m.EI = SpatialProfile::polynomial({150.0, -75.0 / l}, l);
    m.GJ = SpatialProfile::polynomial({100.0, -50.0 / l}, l);
    m.eta_w = SpatialProfile::constant(0.02, l);
    m.eta_phi = SpatialProfile::constant(0.02, l);
    m.store_mass = 1.0;
    m.store_inertia = 0.1;
    return with_constant_aero(std::move(m), 0.1, 0.01, 0.01, 0.1, 0.01, 0.01);
}

WingModel with_constant_aero(WingModel m, double alpha_w, double beta_w, double gamma_w, double alpha_phi,
                             double beta_phi, double gamma_phi) {
    const double l = m.span;
    m.alpha_w = SpatialProfile::constant(alpha_w, l);
    m.beta_w = SpatialProfile::constant(beta_w, l);
    m.gamma_w = SpatialProfile::constant(gamma_w, l);
    m.alpha_phi = SpatialProfile::constant(alpha_phi, l);
    m.beta_phi = SpatialProfile::constant(beta_phi, l);
    m.gamma_phi = SpatialProfile::constant(gamma_phi, l);
    return m;
}

WingModel with_scaled_stiffness(WingModel m, double factor) {
    m.EI = m.EI.scaled(factor);
    m.GJ = m.GJ.scaled(factor);
    return m;
}

void validate(const ControlLaw& law) {
    if (!(law.k1 >= 0.0) || !(law.k2 >= 0.0)) throw std::invalid_argument("gains k1, k2 must be nonnegative");
    if (!(law.eps1 > 0.0) || !(law.eps2 > 0.0)) throw std::invalid_argument("eps1, eps2 must be positive");
}

Disturbance Disturbance::zero() {
    Disturbance d;
    d.kind_ = Kind::Zero;
    d.value_ = [](double) { return Vec2::Zero().eval(); };
    d.rate_ = d.value_;
    d.description_ = "zero";
    return d;
}

Disturbance Disturbance::modulated(double a1, double a2) {
    Disturbance d;
    d.kind_ = Kind::Modulated;
    d.value_ = [a1, a2](double t) { return modulated_value(a1, a2, t); };
    d.rate_ = [a1, a2](double t) { return modulated_rate(a1, a2, t); };
    d.amplitude_ = std::hypot(a1, a2);
    d.rate_bound_ = kModulationFrequencySum * std::hypot(a1, a2);
    std::ostringstream os;
    os << "modulated a1=" << a1 << " a2=" << a2;
    d.description_ = os.str();
    return d;
}

Disturbance Disturbance::exponentially_vanishing(double a1, double a2, double decay) {
    if (!(decay > 0.0)) throw std::invalid_argument("vanishing disturbance needs a positive decay rate");
    Disturbance d;
    d.kind_ = Kind::ExponentiallyVanishing;
    d.value_ = [a1, a2, decay](double t) { return (std::exp(-decay * t) * modulated_value(a1, a2, t)).eval(); };
    d.rate_ = [a1, a2, decay](double t) {
        return (std::exp(-decay * t) * (modulated_rate(a1, a2, t) - decay * modulated_value(a1, a2, t))).eval();
    };
    d.amplitude_ = std::hypot(a1, a2);
    d.rate_bound_ = (kModulationFrequencySum + decay) * std::hypot(a1, a2);
    std::ostringstream os;
    os << "exponentially-vanishing a1=" << a1 << " a2=" << a2 << " decay=" << decay;
    d.description_ = os.str();
    return d;
}

Disturbance Disturbance::constant(double u1, double u2) {
    Disturbance d;
    d.kind_ = Kind::Constant;
    d.value_ = [u1, u2](double) { return Vec2(u1, u2); };
    d.rate_ = [](double) { return Vec2::Zero().eval(); };
    d.amplitude_ = std::hypot(u1, u2);
    std::ostringstream os;
    os << "constant u1=" << u1 << " u2=" << u2;
    d.description_ = os.str();
    return d;
}

Disturbance Disturbance::custom(std::function<Vec2(double)> value, std::function<Vec2(double)> rate, double amplitude,
                                double rate_bound, std::string description) {
    Disturbance d;
    d.kind_ = Kind::Custom;
    d.value_ = std::move(value);
    d.rate_ = std::move(rate);
    d.amplitude_ = amplitude;
    d.rate_bound_ = rate_bound;
    d.description_ = std::move(description);
    return d;
}

InitialCondition zero_initial_condition() { return {}; }

InitialCondition reference_initial_condition(double l) {
    InitialCondition ic;
    const double s = 1.0 / (40.0 * l * l);
    ic.w0 = Polynomial({0.0, 0.0, -3.0 * l * s, s});
    ic.phi0 = Polynomial({0.0, 0.0, 2.0 * pi / (45.0 * l * l)});
    return ic;
}

void check_root_constraints(const InitialCondition& ic, double tol) {
    const auto bad = [tol](double v) { return std::abs(v) > tol; };
    if (bad(ic.w0(0.0)) || bad(ic.w0.derivative(0.0)) || bad(ic.phi0(0.0)))
        throw std::invalid_argument("initial condition violates the clamped root: need w(0) = w'(0) = phi(0) = 0");
    if (bad(ic.wt0(0.0)) || bad(ic.wt0.derivative(0.0)) || bad(ic.phit0(0.0)))
        throw std::invalid_argument("initial velocity violates the clamped root constraints");
}

}  // namespace flexwing
