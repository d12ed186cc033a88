#include "flexwing/fem.hpp"

#include "helpers.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace flexwing;
using flexwing::test::uniform_model;

namespace {

// First root of cosh(x) cos(x) = -1 by bisection.
double clamped_free_root() {
    auto f = [](double x) { return std::cosh(x) * std::cos(x) + 1.0; };
    double a = 1.0, b = 2.5;
    for (int i = 0; i < 200; ++i) {
        double c = 0.5 * (a + b);
        (f(a) * f(c) <= 0 ? b : a) = c;
    }
    return 0.5 * (a + b);
}

MatrixXd block(const SparseMatrix& A, const std::vector<int>& idx) {
    MatrixXd D = MatrixXd(A);
    MatrixXd out(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = D(idx[i], idx[j]);
    return out;
}

double smallest_eigenvalue(const MatrixXd& K, const MatrixXd& M) {
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(K, M);
    return es.eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("mesh and dof map") {
    auto mesh = Mesh::uniform(2.0, 4);
    CHECK(mesh.n_elements() == 4);
    CHECK(mesh.h(2) == doctest::Approx(0.5));
    CHECK(mesh.locate(0.0) == 0);
    CHECK(mesh.locate(0.5) == 0);
    CHECK(mesh.locate(0.51) == 1);
    CHECK(mesh.locate(2.0) == 3);
    Mesh bad{{0.0, 1.0, 0.5}};
    CHECK_THROWS(bad.validate());
    DofMap d(4);
    CHECK(d.size() == 12);
    CHECK(d.w(0) == -1);
    CHECK(d.phi(0) == -1);
    CHECK(d.tip_w() == 9);
    CHECK(d.tip_phi() == 11);
    CHECK(d.bending(0)[0] == -1);
    CHECK(d.bending(0)[2] == 0);
}

TEST_CASE("clamped-free bending frequency") {
    const double beta = clamped_free_root();
    CHECK(beta == doctest::Approx(1.87510407).epsilon(1e-8));
    const double l = 2.0, EI = 3.0, rho = 1.5;
    auto m = uniform_model(l);
    m.EI = SpatialProfile::constant(EI, l);
    m.rho = SpatialProfile::constant(rho, l);
    // closed loop with k = 0: the store terms cancel and no feedback enters
    auto sys = assemble(m, {0, 0, 1, 1}, Mesh::uniform(l, 32), LoopMode::ClosedLoop);
    std::vector<int> bend;
    for (int i = 1; i <= 32; ++i) {
        bend.push_back(sys.dofs.w(i));
        bend.push_back(sys.dofs.slope(i));
    }
    const double lam = smallest_eigenvalue(block(sys.K_el, bend), block(sys.M_struct, bend));
    const double exact = std::pow(beta, 4) * EI / (rho * std::pow(l, 4));
    CHECK(std::abs(lam / exact - 1.0) < 1e-3);
}

TEST_CASE("clamped-free torsion frequency") {
    const double l = 1.5, GJ = 2.0, Iw = 0.5;
    auto m = uniform_model(l);
    m.GJ = SpatialProfile::constant(GJ, l);
    m.Iw = SpatialProfile::constant(Iw, l);
    auto sys = assemble(m, {0, 0, 1, 1}, Mesh::uniform(l, 64), LoopMode::ClosedLoop);
    std::vector<int> tor;
    for (int i = 1; i <= 64; ++i) tor.push_back(sys.dofs.phi(i));
    const double lam = smallest_eigenvalue(block(sys.K_el, tor), block(sys.M_struct, tor));
    const double exact = std::pow(M_PI / 2, 2) * GJ / (Iw * l * l);
    CHECK(std::abs(lam / exact - 1.0) < 1e-3);
}

TEST_CASE("structural matrices are symmetric and M is positive definite") {
    auto sys = assemble(default_wing_model(), {10, 4, 0.02, 0.3}, Mesh::uniform(2.0, 16), LoopMode::OpenLoop);
    MatrixXd M = MatrixXd(sys.M), K = MatrixXd(sys.K_el);
    CHECK((M - M.transpose()).norm() <= 1e-12 * M.norm());
    CHECK((K - K.transpose()).norm() <= 1e-12 * K.norm());
    Eigen::LLT<MatrixXd> llt(M);
    CHECK(llt.info() == Eigen::Success);
    Eigen::LLT<MatrixXd> kllt(K);
    CHECK(kllt.info() == Eigen::Success);
}

TEST_CASE("store inertia and feedback placement") {
    auto m = default_wing_model();
    ControlLaw law{10, 4, 0.02, 0.3};
    auto mesh = Mesh::uniform(2.0, 8);
    auto open = assemble(m, law, mesh, LoopMode::OpenLoop);
    auto closed = assemble(m, law, mesh, LoopMode::ClosedLoop);
    // removing the store recovers the plain beam matrix bit-for-bit
    CHECK(MatrixXd(closed.M) == MatrixXd(open.M_struct));
    MatrixXd dM = MatrixXd(open.M - open.M_struct);
    CHECK(dM(open.dofs.tip_w(), open.dofs.tip_w()) == m.store_mass);
    CHECK(dM(open.dofs.tip_phi(), open.dofs.tip_phi()) == doctest::Approx(m.store_inertia).epsilon(1e-14));
    CHECK(dM.cwiseAbs().sum() == doctest::Approx(m.store_mass + m.store_inertia));
    // modal mass grows with the store
    VectorXd x = VectorXd::Ones(open.size());
    CHECK(x.dot(open.M * x) > x.dot(open.M_struct * x));

    MatrixXd Cf = MatrixXd(closed.C_fb), Kf = MatrixXd(closed.K_fb);
    const int tw = closed.dofs.tip_w(), tp = closed.dofs.tip_phi();
    CHECK(Cf(tw, tw) == 10.0);
    CHECK(Cf(tp, tp) == 4.0);
    CHECK(Kf(tw, tw) == doctest::Approx(10 * 0.02));
    CHECK(Kf(tp, tp) == doctest::Approx(4 * 0.3));
    CHECK(Cf.cwiseAbs().sum() == doctest::Approx(14.0));
    CHECK(Kf.col(closed.dofs.tip_slope()).norm() == 0.0);
    CHECK(MatrixXd(open.C_fb).norm() == 0.0);
    CHECK(closed.P(tw, 0) == 1.0);
    CHECK(closed.P(tp, 1) == 1.0);
    CHECK(closed.P.col(0).cwiseAbs().sum() == 1.0);
}

TEST_CASE("closed-loop damping is dissipative without aerodynamics") {
    auto m = with_constant_aero(default_wing_model(), 0, 0, 0, 0, 0, 0);
    auto sys = assemble(m, {10, 4, 0.02, 0.3}, Mesh::uniform(2.0, 12), LoopMode::ClosedLoop);
    MatrixXd C = MatrixXd(sys.C);
    MatrixXd Cs = 0.5 * (C + C.transpose());
    std::mt19937_64 rng(3);
    std::normal_distribution<double> N;
    for (int i = 0; i < 200; ++i) {
        VectorXd x(sys.size());
        for (int k = 0; k < x.size(); ++k) x(k) = N(rng);
        CHECK(x.dot(Cs * x) >= 0.0);
    }
}

TEST_CASE("interpolate") {
    auto mesh = Mesh::uniform(2.0, 8);
    auto z = interpolate(zero_initial_condition(), mesh);
    CHECK(z.q.norm() == 0.0);
    CHECK(z.v.norm() == 0.0);

    auto ic = reference_initial_condition(2.0);
    auto s = interpolate(ic, mesh);
    DofMap d(8);
    for (double y : {0.0, 0.13, 0.5, 0.77, 1.31, 2.0}) {
        auto f = evaluate_fields(mesh, d, s.q, y);
        CHECK(f.w == doctest::Approx(ic.w0(y)).epsilon(1e-14));
        CHECK(f.dw == doctest::Approx(ic.w0.derivative(y)).epsilon(1e-13));
    }
    for (int i = 1; i <= 8; ++i) CHECK(s.q(d.w(i)) == doctest::Approx(ic.w0(mesh.nodes[i])).epsilon(1e-15));

    // linear interpolation of phi0: L2 error O(h^2)
    auto l2err = [&](int n) {
        auto me = Mesh::uniform(2.0, n);
        DofMap dd(n);
        auto st = interpolate(ic, me);
        double acc = 0;
        const int N = 4000;
        for (int k = 0; k < N; ++k) {
            double y = (k + 0.5) * 2.0 / N;
            acc += std::pow(evaluate_fields(me, dd, st.q, y).phi - ic.phi0(y), 2) * 2.0 / N;
        }
        return std::sqrt(acc);
    };
    double e8 = l2err(8), e16 = l2err(16), e32 = l2err(32);
    CHECK(std::log2(e8 / e16) == doctest::Approx(2.0).epsilon(0.02));
    CHECK(std::log2(e16 / e32) == doctest::Approx(2.0).epsilon(0.02));

    InitialCondition bad = ic;
    bad.phi0 = Polynomial{0.1};
    CHECK_THROWS_AS(interpolate(bad, mesh), std::invalid_argument);
}

TEST_CASE("field norms") {
    auto mesh = Mesh::uniform(1.0, 4);
    InitialCondition ic;
    ic.w0 = Polynomial{0, 0, 1};     // y^2
    ic.phi0 = Polynomial{0, 1};      // y
    auto s = interpolate(ic, mesh);
    auto n = field_norms(mesh, DofMap(4), s.q);
    CHECK(n.w_l2 == doctest::Approx(std::sqrt(0.2)).epsilon(1e-14));
    CHECK(n.dw_l2 == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-14));
    CHECK(n.d2w_l2 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(n.phi_l2 == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-14));
    CHECK(n.w_sup == doctest::Approx(1.0));
    CHECK(n.dw_sup == doctest::Approx(2.0));
    CHECK(n.phi_sup == doctest::Approx(1.0));
}

TEST_CASE("first-order form spectrum") {
    auto m = with_constant_aero(default_wing_model(), 0, 0, 0, 0, 0, 0);
    auto sys = assemble(m, {10, 4, 0.02, 0.3}, Mesh::uniform(2.0, 8), LoopMode::ClosedLoop);
    auto F = first_order_form(sys);
    CHECK(F.A.rows() == 2 * sys.size());
    CHECK(F.G.cols() == 2);
    Eigen::EigenSolver<MatrixXd> es(F.A);
    auto ev = es.eigenvalues();
    double max_re = -1e300;
    for (int i = 0; i < ev.size(); ++i) {
        max_re = std::max(max_re, ev(i).real());
        double best = 1e300;  // the conjugate is present
        for (int j = 0; j < ev.size(); ++j) best = std::min(best, std::abs(ev(j) - std::conj(ev(i))));
        CHECK(best <= 1e-8 * std::max(1.0, std::abs(ev(i))));
    }
    CHECK(max_re < 0.0);
}

TEST_CASE("linear solver and matrix export") {
    auto sys = assemble(default_wing_model(), {10, 4, 0.02, 0.3}, Mesh::uniform(2.0, 300), LoopMode::ClosedLoop);
    REQUIRE(sys.size() > LinearSolver::kDenseLimit);
    VectorXd x = VectorXd::LinSpaced(sys.size(), -1, 1);
    LinearSolver s(sys.M);
    VectorXd b = sys.M * x;
    CHECK((sys.M * s.solve(b) - b).norm() <= 1e-10 * b.norm());
    std::ostringstream os;
    write_matrix_market(os, assemble(default_wing_model(), {}, Mesh::uniform(2.0, 2), LoopMode::OpenLoop).K);
    CHECK(os.str().rfind("%%MatrixMarket", 0) == 0);
}
