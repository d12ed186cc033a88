#pragma once

#include "flexwing/certificates.hpp"
#include "flexwing/fem.hpp"
#include "flexwing/model.hpp"
#include "flexwing/quadrature.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace flexwing {

// Scalar field on [0, l] with derivatives: eval(y, k) returns the k-th derivative.
class Field {
public:
    Field();
    explicit Field(std::function<double(double, int)> eval, int max_order = 3);
    static Field zero();
    static Field from_polynomial(const Polynomial& p);

    double operator()(double y, int k = 0) const;
    int max_order() const { return max_order_; }

private:
    std::function<double(double, int)> eval_;
    int max_order_ = 3;
};

// (f, g, h, z): bending displacement/velocity and torsion displacement/velocity.
struct LiftedState {
    Field f, g, h, z;
};

// Throws std::invalid_argument unless f(0) = f'(0) = h(0) = 0 within tol.
void check_space_membership(const LiftedState& x, double tol = 1e-12);

inline constexpr QuadratureSpec kVerifyQuadrature{64, 4};

// B U = (f_u, 0, h_u, 0).
LiftedState build_B_lift(const WingModel& model, const ControlLaw& law, const Vec2& U,
                         QuadratureSpec q = kVerifyQuadrature);

// (u1, u2) = B X: shear-side and torque-side boundary functionals at y = l.
Vec2 boundary_operator(const WingModel& model, const ControlLaw& law, const LiftedState& x);
// Bending moment (EI f'' + eta_w EI g'')(l); zero on the domain of the generator.
double tip_moment(const WingModel& model, const LiftedState& x);

double norm_H1(const WingModel& model, const LiftedState& x, QuadratureSpec q = kVerifyQuadrature);

// <A1 X, X> in the first inner product after integration by parts.
double dissipation_form_H1(const WingModel& model, const ControlLaw& law, const LiftedState& x,
                           QuadratureSpec q = kVerifyQuadrature);
// <A1 X, X> in the second inner product.
double dissipation_form_H2(const WingModel& model, const ControlLaw& law, const LiftedState& x,
                           QuadratureSpec q = kVerifyQuadrature);

struct Witness {
    LiftedState state;
    double I1 = 0, I2 = 0, I3 = 0;
    double kappa1 = 0, kappa2 = 0, kappa3 = 0;
};
// X = (0, 0, h, z) with <A1 X, X>_{H,1} = 1. Requires k2 eps2 > 0.
Witness nondissipativity_witness(const WingModel& model, const ControlLaw& law, QuadratureSpec q = kVerifyQuadrature);

// Reference rule used to evaluate forms independently of the witness construction.
inline constexpr QuadratureSpec kReferenceQuadrature{512, 8};
// Dissipation form of the witness built with `q`, evaluated with the reference rule.
double witness_value(const WingModel& model, const ControlLaw& law, QuadratureSpec q = kVerifyQuadrature);

// X = A1^{-1} T by the integral formulas (root constraints on T are required).
LiftedState apply_A1_inverse(const WingModel& model, const ControlLaw& law, const LiftedState& target,
                             QuadratureSpec q = kVerifyQuadrature);

// Relative weak residual of A1 X = T tested against the FE basis of `mesh`
// (dual norm induced by the mass matrix), combined with the tip moment residual.
double galerkin_A1_residual(const WingModel& model, const ControlLaw& law, const LiftedState& x,
                            const LiftedState& target, const Mesh& mesh, QuadratureSpec q = kVerifyQuadrature);

// Random polynomial target of degree <= 5 satisfying the root constraints.
LiftedState random_polynomial_target(std::uint64_t seed, double span);

struct Spectrum {
    std::vector<std::complex<double>> eigenvalues;
    double max_real = 0.0;
};
// Full spectrum of the first-order generator; meshes up to kExpmMaxElements.
Spectrum discrete_generator_spectrum(const DiscreteSystem& sys);

// max |B U|_{H,1} over unit U sampled at `directions` angles plus the two axes.
double sampled_norm_B(const WingModel& model, const ControlLaw& law, int directions = 16,
                      QuadratureSpec q = kVerifyQuadrature);
// Same for A_d B with (EI f'')'' and (GJ h')' taken by central differences.
double sampled_norm_AdB(const WingModel& model, const ControlLaw& law, int directions = 16,
                        QuadratureSpec q = kVerifyQuadrature);

enum class CheckStatus { Pass, Fail, Skipped };

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::Pass;
    double residual = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct VerifyOptions {
    QuadratureSpec quadrature = kVerifyQuadrature;
    std::uint64_t seed = 1;
    int lift_samples = 100;
    int inverse_targets = 20;
    int random_states = 1000;
    int spectrum_elements = 16;
    int norm_elements = 16;
};

struct VerificationReport {
    std::vector<CheckResult> checks;
    bool all_passed() const;
};

VerificationReport run_verification_suite(const WingModel& model, const ControlLaw& law,
                                          const VerifyOptions& opts = {});

// One "check.<name> = PASS|FAIL|SKIPPED residual=... tolerance=..." line per check.
void write_verification_report(std::ostream& os, const VerificationReport& r);

}  // namespace flexwing
