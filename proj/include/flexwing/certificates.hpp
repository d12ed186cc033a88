#pragma once

#include "flexwing/model.hpp"
#include "flexwing/profile.hpp"
#include "flexwing/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace flexwing {

// Raised when a certificate routine is called outside its admissible range.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Every essential bound the closed-form constants depend on.
struct ModelBounds {
    double span = 0.0;
    EssentialBounds rho, Iw, EI, GJ, eta_w, eta_phi;
    EssentialBounds eta_EI, eta_GJ;  // products eta_w EI and eta_phi GJ
    // ess sup of the absolute value of each aerodynamic coefficient
    double alpha_w = 0.0, beta_w = 0.0, gamma_w = 0.0;
    double alpha_phi = 0.0, beta_phi = 0.0, gamma_phi = 0.0;

    bool exact() const;
};

ModelBounds model_bounds(const WingModel& model);

double compute_Km(const ModelBounds& b);
double compute_Km(const WingModel& model);

struct EpsStars {
    double eps1 = 0.0;
    double eps2 = 0.0;
};
EpsStars compute_eps_stars(const ModelBounds& b);
EpsStars compute_eps_stars(const WingModel& model);

struct CertificateParameters {
    std::array<double, 8> r{1, 1, 1, 1, 1, 1, 1, 1};
    double eps1 = 0.01;
    double eps2 = 0.01;
};

struct Lambdas {
    std::array<double, 6> lambda{};  // lambda_1 .. lambda_6
    double c2 = 0.0;                  // pi^4 inf(eta_w EI) lambda_3 / (16 l^4 sup rho) - lambda_2
    double c5 = 0.0;                  // pi^2 inf(eta_phi GJ) lambda_6 / (4 l^2 sup Iw) - lambda_5
};

Lambdas compute_lambdas(const ModelBounds& b, const CertificateParameters& p);

// Strict inequalities are tested against this margin.
inline constexpr double kStrictMargin = 1e-12;

// mu_m = 2 min(lambda_1, c2, lambda_4, c5)
double compute_mu(const Lambdas& l);
// Lambda = mu_m / (1 + eps_m K_m)
double compute_decay_rate(double mu, double eps_m, double Km);
// K_E = sqrt((1 + K_m eps_m) / (1 - K_m eps_m)); requires K_m eps_m < 1.
double compute_KE(double eps_m, double Km);

// Throws PreconditionError unless every r_i > 0 and 0 < eps_i < min(eps_i*, 1/K_m).
void check_certificate_preconditions(const ModelBounds& b, const CertificateParameters& p);

// True iff lambda_1, lambda_3, lambda_4, lambda_6, c2, c5 exceed kStrictMargin.
// lambda_2 and lambda_5 are sums of nonnegative terms and vanish identically
// without aerodynamic coupling, so they are only required to be >= 0.
bool check_assumption2(const ModelBounds& b, const CertificateParameters& p);
bool check_assumption2(const WingModel& model, const CertificateParameters& p);

struct SearchOptions {
    int starts = 16;
    int iterations = 200;
    double shrink = 0.5;
    double initial_step = 1.0;  // in log space
    double min_step = 1e-9;
    int refine_iterations = 2000;
    std::uint64_t seed = 20240607;
    double r_lo = 1e-3, r_hi = 1e3;
    double eps_lo = 1e-6;
    double eps_margin = 1e-6;  // upper eps bound is min(eps*, 1/Km)(1 - margin)
    // When set, eps1/eps2 are held fixed and only r is searched.
    std::optional<double> fixed_eps1, fixed_eps2;
};

struct UltimateBounds {
    double state = 0.0;       // limsup |X|_{H,1}
    double f_inf = 0.0;       // limsup sup_y |omega|
    double fprime_inf = 0.0;  // limsup sup_y |omega_y|
    double h_inf = 0.0;       // limsup sup_y |phi|
};

// Agmon/Poincare prefactors mapping |X|_{H,1} to displacement sup-norms.
struct SupNormFactors {
    double f = 0.0;
    double fprime = 0.0;
    double h = 0.0;
};
SupNormFactors sup_norm_factors(const ModelBounds& b);

struct CertificateReport {
    ModelBounds bounds;
    double k1 = 0.0, k2 = 0.0;
    double Km = 0.0;
    EpsStars eps_star;
    bool feasible = false;
    CertificateParameters params;  // best point found (witness when feasible)
    Lambdas lambdas;
    double mu_m = 0.0;
    double Lambda = 0.0;
    double K_E = 0.0;
    double norm_B = 0.0;
    double norm_AdB = 0.0;
    double sup_U = 0.0, sup_Udot = 0.0;
    std::optional<UltimateBounds> ultimate;
    SearchOptions search;
    std::string note;

    double eps_m() const { return std::max(params.eps1, params.eps2); }
    ControlLaw control_law() const { return {k1, k2, params.eps1, params.eps2}; }
};

// Maximizes Lambda over (r, eps) with a multistart log-space coordinate search
// followed by a refinement pass from the best point. k1, k2 only enter the
// reported norms of B and A_d B.
CertificateReport feasibility_search(const WingModel& model, double k1, double k2, const SearchOptions& opts = {});

// Fills every constant for given parameters without searching.
CertificateReport evaluate_certificate(const WingModel& model, double k1, double k2, const CertificateParameters& p);

// b1 = 1 + k1 eps1 int (l - y)^2 / EI, b2 = 1 + k2 eps2 int 1 / GJ
struct LiftDenominators {
    double b1 = 1.0;
    double b2 = 1.0;
};
inline constexpr QuadratureSpec kNormQuadrature{256, 6};
LiftDenominators lift_denominators(const WingModel& model, const ControlLaw& law, QuadratureSpec q = kNormQuadrature);
double compute_norm_B(const WingModel& model, const ControlLaw& law, QuadratureSpec q = kNormQuadrature);
double compute_norm_AdB(const WingModel& model, const ControlLaw& law, QuadratureSpec q = kNormQuadrature);

// limsup bounds for a bounded disturbance. Throws PreconditionError when the
// report is infeasible or the sup values are negative.
UltimateBounds ultimate_bounds(const CertificateReport& report, double sup_U, double sup_Udot);

// Pointwise-in-time state bound K_E |X0 - B U(0)| e^{-Lambda t / 2} + ultimate.state.
double state_bound_at(const CertificateReport& report, double initial_offset_norm, double t, double sup_U,
                      double sup_Udot);

// Key/value text serialization. Reals are written with 17 significant digits.
void write_report(std::ostream& os, const CertificateReport& r);
std::map<std::string, std::string> parse_key_values(std::istream& is);
CertificateReport read_report(std::istream& is);

}  // namespace flexwing
