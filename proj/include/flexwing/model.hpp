#pragma once

#include "flexwing/polynomial.hpp"
#include "flexwing/profile.hpp"

#include <Eigen/Core>

#include <functional>
#include <string>

namespace flexwing {

// Coupled bending/torsion wing clamped at y = 0 with a store at y = l.
struct WingModel {
    double span = 2.0;  // l [m]

    SpatialProfile rho;      // mass per unit span
    SpatialProfile Iw;       // torsional inertia per unit span
    SpatialProfile EI;       // bending stiffness
    SpatialProfile GJ;       // torsional stiffness
    SpatialProfile eta_w;    // bending Kelvin-Voigt coefficient
    SpatialProfile eta_phi;  // torsional Kelvin-Voigt coefficient

    // Aerodynamic coefficients; may change sign.
    SpatialProfile alpha_w, beta_w, gamma_w;
    SpatialProfile alpha_phi, beta_phi, gamma_phi;

    double store_mass = 1.0;     // m_s
    double store_inertia = 0.1;  // J_s
};

// Throws std::invalid_argument unless every profile lives on [0, l], the six
// physical profiles have a positive essential infimum and m_s, J_s > 0.
void validate(const WingModel& model);

// Tapered reference wing: l = 2, rho = 10(1 - 0.3y/l), Iw = 0.5(1 - 0.3y/l),
// EI = 150(1 - 0.5y/l), GJ = 100(1 - 0.5y/l), eta = 0.02, m_s = 1, J_s = 0.1 and
// small constant aerodynamic coefficients for which a stability certificate exists.
WingModel default_wing_model();

// Replace the six aerodynamic coefficients by constants.
WingModel with_constant_aero(WingModel model, double alpha_w, double beta_w, double gamma_w, double alpha_phi,
                             double beta_phi, double gamma_phi);

// Multiply EI and GJ by `factor`.
WingModel with_scaled_stiffness(WingModel model, double factor);

struct ControlLaw {
    double k1 = 10.0;
    double k2 = 4.0;
    double eps1 = 0.01;
    double eps2 = 0.01;
};

// k1, k2 >= 0 and eps1, eps2 > 0.
void validate(const ControlLaw& law);

using Vec2 = Eigen::Vector2d;

// Tip input disturbance U = (u1, u2) with analytic time derivative.
class Disturbance {
public:
    enum class Kind { Zero, Modulated, ExponentiallyVanishing, Constant, Custom };

    static Disturbance zero();
    // u1 = a1 cos(0.2 pi t) sin(pi t) cos(3 pi t), u2 = a2 sin(0.2 pi t) cos(pi t) sin(3 pi t)
    static Disturbance modulated(double a1 = 3.0, double a2 = 1.0);
    // Modulated signals multiplied by exp(-decay t).
    static Disturbance exponentially_vanishing(double a1, double a2, double decay);
    static Disturbance constant(double u1, double u2);
    // `amplitude` and `rate` are upper bounds of sup |U|_2 and sup |dU/dt|_2.
    static Disturbance custom(std::function<Vec2(double)> value, std::function<Vec2(double)> rate, double amplitude,
                              double rate_bound, std::string description);

    Vec2 operator()(double t) const { return value_(t); }
    Vec2 rate(double t) const { return rate_(t); }

    Kind kind() const { return kind_; }
    // Analytic upper bounds over t >= 0.
    double amplitude_bound() const { return amplitude_; }
    double rate_bound() const { return rate_bound_; }
    const std::string& description() const { return description_; }

private:
    Kind kind_ = Kind::Zero;
    std::function<Vec2(double)> value_;
    std::function<Vec2(double)> rate_;
    double amplitude_ = 0.0;
    double rate_bound_ = 0.0;
    std::string description_;
};

// Initial fields on [0, l]; polynomials so that boundary traces and
// derivatives are exact.
struct InitialCondition {
    Polynomial w0, wt0, phi0, phit0;
};

InitialCondition zero_initial_condition();
// w0 = y^2 (y - 3l) / (40 l^2), phi0 = 2 pi y^2 / (45 l^2), zero velocities.
InitialCondition reference_initial_condition(double span);

// Throws std::invalid_argument if w(0), w'(0) or phi(0) (or the velocity
// counterparts) are nonzero.
void check_root_constraints(const InitialCondition& ic, double tol = 1e-12);

}  // namespace flexwing
