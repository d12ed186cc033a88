#include "flexwing/certificates.hpp"
#include "flexwing/quadrature.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace flexwing;
using flexwing::test::uniform_model;

namespace {
const double pi = M_PI;
}

TEST_CASE("compute_Km") {
    CHECK(compute_Km(uniform_model(1.0)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(compute_Km(uniform_model(2.0)) == doctest::Approx(256.0 / std::pow(pi, 4)).epsilon(1e-14));
    CHECK(compute_Km(uniform_model(2.0)) == doctest::Approx(2.62809).epsilon(1e-5));

    // term 2 and 4 scale with 1/stiffness, terms 1 and 3 do not
    auto m = default_wing_model();
    auto b = model_bounds(m), b4 = model_bounds(with_scaled_stiffness(m, 4.0));
    CHECK(b4.EI.inf == doctest::Approx(4 * b.EI.inf));
    CHECK(b4.GJ.inf == doctest::Approx(4 * b.GJ.inf));
    CHECK(b4.rho.sup == b.rho.sup);
    CHECK(b4.Iw.sup == b.Iw.sup);
}

TEST_CASE("compute_eps_stars") {
    auto e = compute_eps_stars(uniform_model(1.0));
    CHECK(e.eps1 == doctest::Approx(4 * std::pow(pi, 4) / (64 + std::pow(pi, 4))).epsilon(1e-14));
    CHECK(e.eps1 == doctest::Approx(2.41397).epsilon(1e-5));
    CHECK(e.eps2 == doctest::Approx(4 * pi * pi / (16 + pi * pi)).epsilon(1e-14));
    CHECK(e.eps2 == doctest::Approx(1.52605).epsilon(1e-5));

    // inf(eta_phi GJ) -> infinity with sup eta_phi fixed
    auto m = uniform_model(1.0);
    m.GJ = SpatialProfile::constant(1e12, 1.0);
    CHECK(compute_eps_stars(m).eps2 == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("compute_lambdas, zero aerodynamics") {
    auto b = model_bounds(uniform_model(1.0));
    CertificateParameters p;
    p.eps1 = p.eps2 = 0.1;
    auto L = compute_lambdas(b, p);
    CHECK(L.lambda[1] == 0.0);
    CHECK(L.lambda[4] == 0.0);
    CHECK(L.lambda[2] == doctest::Approx(1 - 0.1 * (16 / std::pow(pi, 4) + 0.5)).epsilon(1e-14));
    CHECK(L.lambda[2] == doctest::Approx(0.93358).epsilon(1e-5));
}

TEST_CASE("certificate constants are internally consistent") {
    auto rep = feasibility_search(default_wing_model(), 10, 4);
    REQUIRE(rep.feasible);
    CHECK(rep.Lambda > 0);
    CHECK(rep.Lambda == doctest::Approx(rep.mu_m / (1 + rep.eps_m() * rep.Km)).epsilon(1e-12));
    CHECK(rep.mu_m == doctest::Approx(compute_mu(rep.lambdas)).epsilon(1e-12));
    CHECK(rep.Km * rep.eps_m() > 0);
    CHECK(rep.Km * rep.eps_m() < 1);
    CHECK(rep.K_E >= 1.0);
    CHECK(compute_KE(0.0, 3.0) == 1.0);
    CHECK_THROWS_AS(compute_KE(0.5, 2.0), PreconditionError);
    CHECK(check_assumption2(default_wing_model(), rep.params));
    // deterministic
    auto again = feasibility_search(default_wing_model(), 10, 4);
    CHECK(again.Lambda == rep.Lambda);
    CHECK(again.params.r == rep.params.r);
}

TEST_CASE("check_assumption2 on zero-aero model with small eps and large r") {
    auto m = with_constant_aero(default_wing_model(), 0, 0, 0, 0, 0, 0);
    CertificateParameters p;
    p.eps1 = p.eps2 = 1e-3;
    p.r.fill(100.0);
    p.r[0] = p.r[1] = 1.0;  // r1, r2 balance the Kelvin-Voigt terms
    CHECK(check_assumption2(m, p));
}

TEST_CASE("eps outside the admissible box is a precondition violation") {
    auto m = default_wing_model();
    CertificateParameters p;
    p.eps1 = std::min(compute_eps_stars(m).eps1, 1.0 / compute_Km(m));
    CHECK_THROWS_AS(check_assumption2(m, p), PreconditionError);
    p.eps1 = 0.01;
    p.eps2 = 0.0;
    CHECK_THROWS_AS(check_assumption2(m, p), PreconditionError);
    p.eps2 = 0.01;
    p.r[3] = -1;
    CHECK_THROWS_AS(check_assumption2(m, p), PreconditionError);
    try {
        p.r[3] = 1;
        p.eps1 = 0.5;
        check_certificate_preconditions(model_bounds(m), p);
        FAIL("expected rejection");
    } catch (const PreconditionError& e) {
        std::string msg = e.what();
        CHECK(msg.find("eps1*") != std::string::npos);
        CHECK(msg.find("1/K_m") != std::string::npos);
    }
}

TEST_CASE("heavy aerodynamics is infeasible on a grid and in the search") {
    auto m = default_wing_model();
    m.alpha_w = m.alpha_w.scaled(1e6);
    auto b = model_bounds(m);
    const double Km = compute_Km(b);
    auto s = compute_eps_stars(b);
    int feasible = 0;
    for (double f1 : {0.01, 0.1, 0.5, 0.9})
        for (double f2 : {0.01, 0.1, 0.5, 0.9})
            for (double rv : {1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0, 1e3}) {
                CertificateParameters p;
                p.eps1 = f1 * std::min(s.eps1, 1 / Km);
                p.eps2 = f2 * std::min(s.eps2, 1 / Km);
                p.r.fill(rv);
                feasible += check_assumption2(b, p);
            }
    CHECK(feasible == 0);
    CHECK_FALSE(feasibility_search(m, 10, 4).feasible);
}

TEST_CASE("zero-aero default model is feasible; grid scan agrees") {
    auto m = with_constant_aero(default_wing_model(), 0, 0, 0, 0, 0, 0);
    auto rep = feasibility_search(m, 10, 4);
    CHECK(rep.feasible);
    CHECK(rep.Lambda > 0);
    auto b = model_bounds(m);
    auto s = compute_eps_stars(b);
    const double Km = compute_Km(b);
    double best = -1;
    for (double f : {0.05, 0.1, 0.2, 0.4, 0.8})
        for (double r12 : {0.5, 1.0, 2.0, 4.0}) {
            CertificateParameters p;
            p.eps1 = f * std::min(s.eps1, 1 / Km);
            p.eps2 = f * std::min(s.eps2, 1 / Km);
            p.r.fill(1.0);
            p.r[0] = p.r[1] = r12;
            if (check_assumption2(b, p)) {
                auto L = compute_lambdas(b, p);
                best = std::max(best, compute_decay_rate(compute_mu(L), std::max(p.eps1, p.eps2), Km));
            }
        }
    CHECK(best > 0);
    CHECK(rep.Lambda >= best * (1 - 1e-9));
}

TEST_CASE("feasibility is monotone in stiffness") {
    for (double c : {1.0, 2.0, 4.0, 8.0}) CHECK(feasibility_search(with_scaled_stiffness(default_wing_model(), c), 10, 4).feasible);
}

TEST_CASE("compute_norm_B") {
    auto m = uniform_model(1.0);
    CHECK(compute_norm_B(m, {0, 0, 0.1, 0.1}) == doctest::Approx(1.0).epsilon(1e-14));
    // k2 eps2 = 3: second branch 1/4, first sqrt(1/3)
    CHECK(compute_norm_B(m, {0, 30, 0.1, 0.1}) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-14));
    auto d = lift_denominators(m, {0, 30, 0.1, 0.1});
    CHECK(d.b2 == doctest::Approx(4.0));
    // stiffer bending strictly lowers the first branch
    auto stiff = m;
    stiff.EI = SpatialProfile::polynomial({1.0, 0.5}, 1.0);
    CHECK(compute_norm_B(stiff, {0, 30, 0.1, 0.1}) < compute_norm_B(m, {0, 30, 0.1, 0.1}));
    // quadrature at doubled resolution
    auto dm = default_wing_model();
    ControlLaw law{10, 4, 0.02, 0.3};
    CHECK(compute_norm_B(dm, law) == doctest::Approx(compute_norm_B(dm, law, {512, 6})).epsilon(1e-8));
}

TEST_CASE("compute_norm_AdB") {
    CHECK(compute_norm_AdB(uniform_model(1.0, 1.0, 0.0), {0, 0, 0.1, 0.1}) == 0.0);
    CHECK(compute_norm_AdB(uniform_model(1.0, 1.0, 1.0), {0, 0, 0.1, 0.1}) ==
          doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-14));

    // trapezoid oracle on the default model
    auto m = default_wing_model();
    ControlLaw law{10, 4, 0.02, 0.3};
    const double l = m.span;
    const int n = 200000;
    const double h = l / n;
    double H = 0, prev_g = 1 / m.GJ(0.0), acc = 0, iGJ = 0;
    auto integrand = [&](double y, double Hy) {
        return (m.rho(y) * std::pow(m.alpha_w(y), 2) + m.Iw(y) * std::pow(m.alpha_phi(y), 2)) * Hy * Hy;
    };
    double prev_f = integrand(0.0, 0.0);
    for (int i = 1; i <= n; ++i) {
        double y = i * h, gy = 1 / m.GJ(y);
        H += 0.5 * h * (prev_g + gy);
        double fy = integrand(y, H);
        acc += 0.5 * h * (prev_f + fy);
        prev_g = gy;
        prev_f = fy;
    }
    iGJ = H;
    const double b2 = 1 + law.k2 * law.eps2 * iGJ;
    CHECK(compute_norm_AdB(m, law) == doctest::Approx(std::sqrt(acc) / b2).epsilon(1e-8));
    CHECK(compute_norm_AdB(m, law) == doctest::Approx(compute_norm_AdB(m, law, {512, 6})).epsilon(1e-8));
}

TEST_CASE("ultimate_bounds") {
    auto rep = feasibility_search(default_wing_model(), 10, 4);
    REQUIRE(rep.feasible);
    auto z = ultimate_bounds(rep, 0, 0);
    CHECK(z.state == 0.0);
    CHECK(z.f_inf == 0.0);
    CHECK(z.fprime_inf == 0.0);
    CHECK(z.h_inf == 0.0);
    auto a = ultimate_bounds(rep, 1.0, 2.0), b = ultimate_bounds(rep, 3.0, 6.0);
    CHECK(b.state == doctest::Approx(3 * a.state));
    CHECK(b.h_inf == doctest::Approx(3 * a.h_inf));
    auto u = ultimate_bounds(rep, std::sqrt(10.0), 0.0);
    CHECK(u.state == doctest::Approx((rep.norm_B + 2 * rep.K_E / rep.Lambda * rep.norm_AdB) * std::sqrt(10.0)));
    auto f = sup_norm_factors(rep.bounds);
    CHECK(u.f_inf == doctest::Approx(4 * std::pow(2.0, 1.5) / (std::pow(pi, 1.5) * std::sqrt(75.0)) * u.state));
    CHECK(u.h_inf == doctest::Approx(f.h * u.state));
    CHECK(std::isfinite(u.state));
    CHECK_THROWS_AS(ultimate_bounds(rep, -1, 0), PreconditionError);
    auto bad = rep;
    bad.feasible = false;
    CHECK_THROWS_AS(ultimate_bounds(bad, 1, 0), PreconditionError);
}

TEST_CASE("report round trip") {
    auto rep = feasibility_search(default_wing_model(), 10, 4);
    rep.sup_U = std::sqrt(10.0);
    rep.sup_Udot = 1.5;
    rep.ultimate = ultimate_bounds(rep, rep.sup_U, rep.sup_Udot);
    std::stringstream ss;
    write_report(ss, rep);
    auto back = read_report(ss);
    CHECK(back.Lambda == rep.Lambda);
    CHECK(back.K_E == rep.K_E);
    CHECK(back.params.r == rep.params.r);
    CHECK(back.lambdas.lambda == rep.lambdas.lambda);
    CHECK(back.feasible == rep.feasible);
    CHECK(back.bounds.EI.inf == rep.bounds.EI.inf);
    REQUIRE(back.ultimate);
    CHECK(back.ultimate->state == rep.ultimate->state);

    std::istringstream dup("a = 1\na = 2\n");
    CHECK_THROWS(parse_key_values(dup));
    std::istringstream junk("no equals sign\n");
    CHECK_THROWS(parse_key_values(junk));
}
