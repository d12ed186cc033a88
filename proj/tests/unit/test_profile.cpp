#include "flexwing/model.hpp"
#include "flexwing/polynomial.hpp"
#include "flexwing/profile.hpp"
#include "flexwing/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace flexwing;

TEST_CASE("polynomial evaluation and calculus") {
    Polynomial p{1.0, -2.0, 0.0, 3.0};  // 1 - 2y + 3y^3
    CHECK(p(2.0) == doctest::Approx(21.0));
    CHECK(p.derivative(2.0) == doctest::Approx(34.0));
    CHECK(p.derivative(2.0, 2) == doctest::Approx(36.0));
    CHECK(p.derivative(2.0, 4) == 0.0);
    auto P = p.antiderivative();
    CHECK(P(1.0) - P(0.0) == doctest::Approx(1.0 - 1.0 + 0.75));
    CHECK((p * Polynomial{0.0, 1.0}).degree() == 4);
}

TEST_CASE("polynomial roots and extrema") {
    Polynomial p{-2.0, 0.0, 1.0};  // y^2 - 2
    auto r = real_roots_in(p, -3.0, 3.0);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-14));
    CHECK(r[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    auto e = extrema_on(Polynomial{0.0, 1.0, -1.0}, 0.0, 1.0);  // y - y^2
    CHECK(e.min == doctest::Approx(0.0));
    CHECK(e.max == doctest::Approx(0.25).epsilon(1e-14));
    // double root is still located
    auto d = real_roots_in(Polynomial{1.0, -2.0, 1.0}, 0.0, 2.0);
    REQUIRE_FALSE(d.empty());
    CHECK(d[0] == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("evaluate_profile") {
    CHECK(evaluate_profile(SpatialProfile::constant(2.0, 1.0), 0.3) == 2.0);
    CHECK(evaluate_profile(SpatialProfile::polynomial({0.0, 0.0, 1.0}, 1.0), 0.5) == doctest::Approx(0.25));
    CHECK(evaluate_profile(SpatialProfile::piecewise_linear({{0.0, 1.0}, {1.0, 3.0}}, 1.0), 0.5) == doctest::Approx(2.0));
    CHECK_THROWS_AS(SpatialProfile::constant(1.0, 1.0)(1.5), std::out_of_range);
    CHECK_THROWS_AS(SpatialProfile::constant(1.0, 1.0)(-0.1), std::out_of_range);
}

TEST_CASE("essential_bounds") {
    auto b = essential_bounds(SpatialProfile::constant(2.0, 1.0));
    CHECK(b.inf == 2.0);
    CHECK(b.sup == 2.0);
    b = essential_bounds(SpatialProfile::polynomial({1.0, 1.0}, 1.0));
    CHECK(b.inf == doctest::Approx(1.0));
    CHECK(b.sup == doctest::Approx(2.0));
    CHECK(b.exact);

    // 1 + sin(pi y) sampled on 64 nodes; oracle: dense sampling at 1e5 points of the interpolant
    std::vector<std::pair<double, double>> s;
    for (int i = 0; i <= 64; ++i) {
        double y = i / 64.0;
        s.emplace_back(y, 1.0 + std::sin(M_PI * y));
    }
    auto p = SpatialProfile::piecewise_linear(s, 1.0);
    b = essential_bounds(p);
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i <= 100000; ++i) {
        double v = p(i / 100000.0);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(b.inf == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(b.sup - 2.0) < 1e-3);
    CHECK(b.inf == doctest::Approx(lo).epsilon(1e-12));
    CHECK(b.sup == doctest::Approx(hi).epsilon(1e-12));
}

TEST_CASE("custom profiles use dense sampling") {
    auto p = SpatialProfile::custom([](double y) { return 2.0 + std::cos(3.0 * y); }, 2.0, "2 + cos 3y");
    auto b = p.bounds();
    CHECK_FALSE(b.exact);
    CHECK(b.inf == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(b.sup == doctest::Approx(3.0));
    CHECK(p.derivative(0.5) == doctest::Approx(-3.0 * std::sin(1.5)).epsilon(1e-6));
}

TEST_CASE("product_bounds") {
    auto b = product_bounds(SpatialProfile::constant(2.0, 1.0), SpatialProfile::constant(3.0, 1.0));
    CHECK(b.inf == doctest::Approx(6.0));
    CHECK(b.sup == doctest::Approx(6.0));
    // (1 + y)(2 - y): oracle by brute force on a fine grid
    auto p = SpatialProfile::polynomial({1.0, 1.0}, 1.0), q = SpatialProfile::polynomial({2.0, -1.0}, 1.0);
    b = product_bounds(p, q);
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i <= 100000; ++i) {
        double y = i / 100000.0;
        lo = std::min(lo, (1 + y) * (2 - y));
        hi = std::max(hi, (1 + y) * (2 - y));
    }
    CHECK(b.inf == doctest::Approx(2.0));
    CHECK(b.sup == doctest::Approx(2.25));
    CHECK(b.inf == doctest::Approx(lo));
    CHECK(b.sup == doctest::Approx(hi).epsilon(1e-9));
    auto one = SpatialProfile::constant(1.0, 1.0);
    auto bp = product_bounds(p, one);
    CHECK(bp.inf == doctest::Approx(1.0));
    CHECK(bp.sup == doctest::Approx(2.0));
}

TEST_CASE("physical profiles of the default wing respect their bounds") {
    auto m = default_wing_model();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, m.span);
    for (const SpatialProfile* p : {&m.rho, &m.Iw, &m.EI, &m.GJ, &m.eta_w, &m.eta_phi}) {
        auto b = p->bounds();
        CHECK(b.inf > 0.0);
        for (int i = 0; i < 1000; ++i) {
            double v = (*p)(U(rng));
            CHECK(v >= b.inf);
            CHECK(v <= b.sup);
        }
    }
    auto pb = product_bounds(m.eta_w, m.EI);
    CHECK(pb.inf >= m.eta_w.bounds().inf * m.EI.bounds().inf * (1 - 1e-15));
}

TEST_CASE("quadrature") {
    CHECK(quadrature([](double) { return 1.0; }, 0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(quadrature([](double y) { return y * y * y; }, 0, 1, {1, 2}) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(std::abs(quadrature([](double y) { return 1.0 / (1.0 + y); }, 0, 1, {8, 4}) - std::log(2.0)) < 1e-10);
    const auto& g = gauss_legendre(5);
    double s = 0;
    for (double w : g.weights) s += w;
    CHECK(s == doctest::Approx(2.0).epsilon(1e-15));

    CumulativeIntegral c([](double y) { return std::cos(y); }, 2.0, {16, 4});
    CHECK(c(1.3) == doctest::Approx(std::sin(1.3)).epsilon(1e-12));
    CHECK(c.total() == doctest::Approx(std::sin(2.0)).epsilon(1e-12));
}

TEST_CASE("validate(WingModel)") {
    auto m = default_wing_model();
    CHECK_NOTHROW(validate(m));
    auto bad = m;
    bad.EI = SpatialProfile::polynomial({1.0, -1.0}, m.span);  // negative past y = 1
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = m;
    bad.store_mass = 0.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = m;
    bad.GJ = SpatialProfile::constant(1.0, 3.0);
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    CHECK_THROWS_AS(validate(ControlLaw{-1, 1, 0.1, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS(validate(ControlLaw{1, 1, 0.0, 0.1}), std::invalid_argument);
}

TEST_CASE("disturbance derivatives are consistent with the signals") {
    for (const auto& d : {Disturbance::modulated(), Disturbance::exponentially_vanishing(3, 1, 0.7)}) {
        for (double t : {0.13, 0.77, 2.4, 5.9}) {
            double e[2];
            int k = 0;
            for (double h : {1e-3, 1e-4}) {
                Vec2 fd = (d(t + h) - d(t - h)) / (2 * h);
                e[k++] = (fd - d.rate(t)).norm();
            }
            CHECK(e[1] < 1e-5);
            if (e[0] > 1e-9) CHECK(std::log10(e[0] / e[1]) >= 1.9);
        }
    }
    auto p = Disturbance::modulated();
    CHECK(p(0.3)(0) == doctest::Approx(3 * std::cos(0.06 * M_PI) * std::sin(0.3 * M_PI) * std::cos(0.9 * M_PI)));
    CHECK(p.amplitude_bound() == doctest::Approx(std::sqrt(10.0)));
    double worst = 0, worst_rate = 0;
    for (int i = 0; i <= 20000; ++i) {
        worst = std::max(worst, p(i * 1e-3).norm());
        worst_rate = std::max(worst_rate, p.rate(i * 1e-3).norm());
    }
    CHECK(worst <= p.amplitude_bound());
    CHECK(worst_rate <= p.rate_bound());
    CHECK(Disturbance::zero()(1.0).norm() == 0.0);
}

TEST_CASE("initial conditions") {
    auto ic = reference_initial_condition(2.0);
    CHECK(ic.w0(2.0) == doctest::Approx(4.0 * (2.0 - 6.0) / 160.0));
    CHECK(ic.phi0(1.0) == doctest::Approx(2 * M_PI / 180.0));
    CHECK_NOTHROW(check_root_constraints(ic));
    InitialCondition bad = ic;
    bad.w0 = Polynomial{0.0, 1.0};
    CHECK_THROWS_AS(check_root_constraints(bad), std::invalid_argument);
}
