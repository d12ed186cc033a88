#pragma once

#include "flexwing/model.hpp"

namespace flexwing::test {

// Every structural profile equal to `value`, constant aerodynamic coefficients `aero`.
inline WingModel uniform_model(double span, double value = 1.0, double aero = 0.0) {
    WingModel m;
    m.span = span;
    auto c = [&](double v) { return SpatialProfile::constant(v, span); };
    m.rho = c(value);
    m.Iw = c(value);
    m.EI = c(value);
    m.GJ = c(value);
    m.eta_w = c(value);
    m.eta_phi = c(value);
    m.store_mass = 1.0;
    m.store_inertia = 0.1;
    return with_constant_aero(m, aero, aero, aero, aero, aero, aero);
}

}  // namespace flexwing::test
