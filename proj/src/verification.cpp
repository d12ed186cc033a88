#include "flexwing/verification.hpp"

#include "flexwing/simulation.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace flexwing {

namespace {

using std::numbers::pi;

double sq(double x) { return x * x; }

double uniform(std::mt19937_64& rng, double a, double b) {
    return a + (b - a) * std::generate_canonical<double, 53>(rng);
}

}  // namespace

Field::Field() : Field(zero()) {}

Field::Field(std::function<double(double, int)> eval, int max_order) : eval_(std::move(eval)), max_order_(max_order) {}

Field Field::zero() {
    Field f(std::function<double(double, int)>{}, 3);
    f.eval_ = [](double, int) { return 0.0; };
    return f;
}

Field Field::from_polynomial(const Polynomial& p) {
    return Field([p](double y, int k) { return k == 0 ? p(y) : p.derivative(y, k); }, 1 << 20);
}

double Field::operator()(double y, int k) const {
    if (k < 0 || k > max_order_) throw std::invalid_argument("field derivative order not available");
    return eval_(y, k);
}

void check_space_membership(const LiftedState& x, double tol) {
    if (std::abs(x.f(0.0)) > tol || std::abs(x.f(0.0, 1)) > tol || std::abs(x.h(0.0)) > tol)
        throw std::invalid_argument("state violates f(0) = f'(0) = h(0) = 0");
}

LiftedState build_B_lift(const WingModel& model, const ControlLaw& law, const Vec2& U, QuadratureSpec q) {
    const double l = model.span;
    const auto d = lift_denominators(model, law, q);
    const SpatialProfile EI = model.EI, GJ = model.GJ;
    const double s1 = U[0] / d.b1, s2 = U[1] / d.b2;

    auto J0 = std::make_shared<CumulativeIntegral>([EI, l](double x) { return (l - x) / EI(x); }, l, q);
    auto J1 = std::make_shared<CumulativeIntegral>([EI, l](double x) { return x * (l - x) / EI(x); }, l, q);
    auto H0 = std::make_shared<CumulativeIntegral>([GJ](double x) { return 1.0 / GJ(x); }, l, q);

    LiftedState x;
    x.f = Field([=](double y, int k) {
        switch (k) {
            case 0: return s1 * (y * (*J0)(y) - (*J1)(y));
            case 1: return s1 * (*J0)(y);
            case 2: return s1 * (l - y) / EI(y);
            default: {
                const double e = EI(y);
                return s1 * (-1.0 / e - (l - y) * EI.derivative(y) / (e * e));
            }
        }
    });
    x.h = Field(
        [=](double y, int k) {
            switch (k) {
                case 0: return s2 * (*H0)(y);
                case 1: return s2 / GJ(y);
                default: {
                    const double g = GJ(y);
                    return -s2 * GJ.derivative(y) / (g * g);
                }
            }
        },
        2);
    x.g = Field::zero();
    x.z = Field::zero();
    return x;
}

double tip_moment(const WingModel& m, const LiftedState& x) {
    const double l = m.span;
    return m.EI(l) * x.f(l, 2) + m.eta_w(l) * m.EI(l) * x.g(l, 2);
}

Vec2 boundary_operator(const WingModel& m, const ControlLaw& law, const LiftedState& x) {
    const double l = m.span;
    const double EI = m.EI(l), dEI = m.EI.derivative(l);
    const double ew = m.eta_w(l), dew = m.eta_w.derivative(l);
    const double shear = dEI * x.f(l, 2) + EI * x.f(l, 3) + (dew * EI + ew * dEI) * x.g(l, 2) + ew * EI * x.g(l, 3);
    const double GJ = m.GJ(l), ep = m.eta_phi(l);
    return {-shear + law.k1 * (x.g(l) + law.eps1 * x.f(l)),
            GJ * x.h(l, 1) + ep * GJ * x.z(l, 1) + law.k2 * (x.z(l) + law.eps2 * x.h(l))};
}

double norm_H1(const WingModel& m, const LiftedState& x, QuadratureSpec q) {
    const double v = quadrature(
        [&](double y) {
            return m.EI(y) * sq(x.f(y, 2)) + m.rho(y) * sq(x.g(y)) + m.GJ(y) * sq(x.h(y, 1)) + m.Iw(y) * sq(x.z(y));
        },
        0.0, m.span, q);
    return std::sqrt(v);
}

double dissipation_form_H1(const WingModel& m, const ControlLaw& law, const LiftedState& x, QuadratureSpec q) {
    const double l = m.span;
    const double damping = quadrature(
        [&](double y) {
            return m.eta_w(y) * m.EI(y) * sq(x.g(y, 2)) + m.eta_phi(y) * m.GJ(y) * sq(x.z(y, 1));
        },
        0.0, l, q);
    return -law.k1 * (x.g(l) + law.eps1 * x.f(l)) * x.g(l) - law.k2 * (x.z(l) + law.eps2 * x.h(l)) * x.z(l) -
           damping;
}

double dissipation_form_H2(const WingModel& m, const ControlLaw& law, const LiftedState& x, QuadratureSpec q) {
    const double l = m.span;
    const double e1 = law.eps1, e2 = law.eps2;
    const double integral = quadrature(
        [&](double y) {
            const double EI = m.EI(y), GJ = m.GJ(y);
            const double eEI = m.eta_w(y) * EI, eGJ = m.eta_phi(y) * GJ;
            const double f2 = x.f(y, 2), g2 = x.g(y, 2), h1 = x.h(y, 1), z1 = x.z(y, 1);
            return e1 * m.rho(y) * sq(x.g(y)) + e2 * m.Iw(y) * sq(x.z(y)) - eEI * g2 * g2 - eGJ * z1 * z1 -
                   e1 * EI * f2 * f2 - e1 * eEI * f2 * g2 - e2 * GJ * h1 * h1 - e2 * eGJ * h1 * z1;
        },
        0.0, l, q);
    return -law.k1 * sq(x.g(l) + e1 * x.f(l)) - law.k2 * sq(x.z(l) + e2 * x.h(l)) + integral;
}

Witness nondissipativity_witness(const WingModel& model, const ControlLaw& law, QuadratureSpec q) {
    if (!(law.k2 * law.eps2 > 0.0)) throw PreconditionError("witness requires k2 eps2 > 0");
    const double l = model.span;
    const SpatialProfile GJ = model.GJ, eta = model.eta_phi;
    Witness w;
    w.I1 = quadrature([&](double y) { return 1.0 / GJ(y); }, 0.0, l, q);
    w.I2 = quadrature([&](double y) { return y / GJ(y); }, 0.0, l, q);
    w.I3 = quadrature([&](double y) { return 1.0 / (eta(y) * GJ(y)); }, 0.0, l, q);
    const double A = (1.0 + law.k2 + 1.0 / w.I3) / (law.k2 * law.eps2);
    const double den = l * w.I1 - w.I2;
    w.kappa1 = (A + w.I1) / den;
    w.kappa2 = -(l * A + w.I2) / den;
    w.kappa3 = 1.0 / w.I3;
    const double k1 = w.kappa1, k2 = w.kappa2, k3 = w.kappa3;

    auto K0 = std::make_shared<CumulativeIntegral>([GJ](double x) { return 1.0 / GJ(x); }, l, q);
    auto K1 = std::make_shared<CumulativeIntegral>([GJ](double x) { return x / GJ(x); }, l, q);
    auto Z0 = std::make_shared<CumulativeIntegral>([GJ, eta](double x) { return 1.0 / (eta(x) * GJ(x)); }, l, q);

    w.state.f = Field::zero();
    w.state.g = Field::zero();
    w.state.h = Field(
        [=](double y, int k) {
            const double g = GJ(y);
            switch (k) {
                case 0: return k1 * (*K1)(y) + k2 * (*K0)(y);
                case 1: return (k1 * y + k2) / g;
                default: return k1 / g - (k1 * y + k2) * GJ.derivative(y) / (g * g);
            }
        },
        2);
    w.state.z = Field(
        [=](double y, int k) {
            const double p = eta(y) * GJ(y);
            switch (k) {
                case 0: return k3 * (*Z0)(y);
                case 1: return k3 / p;
                default: {
                    const double dp = eta.derivative(y) * GJ(y) + eta(y) * GJ.derivative(y);
                    return -k3 * dp / (p * p);
                }
            }
        },
        2);
    return w;
}

double witness_value(const WingModel& model, const ControlLaw& law, QuadratureSpec q) {
    const Witness w = nondissipativity_witness(model, law, q);
    const double l = model.span;
    const QuadratureSpec ref = kReferenceQuadrature;
    // Tip traces re-integrated from the pointwise derivatives with the reference rule.
    const double hl = quadrature([&](double y) { return w.state.h(y, 1); }, 0.0, l, ref);
    const double zl = quadrature([&](double y) { return w.state.z(y, 1); }, 0.0, l, ref);
    const double damping =
        quadrature([&](double y) { return model.eta_phi(y) * model.GJ(y) * sq(w.state.z(y, 1)); }, 0.0, l, ref);
    return -law.k2 * (zl + law.eps2 * hl) * zl - damping;
}

// ---- inverse of the principal operator ----

namespace {

struct InverseData {
    WingModel m;
    ControlLaw law;
    LiftedState t;
    CumulativeIntegral P0, P1, W0;
    double c = 0.0, d = 0.0;
    CumulativeIntegral F0, F1, H0;

    double Q(double y) const {
        return (P1.total() - P1(y)) - y * (P0.total() - P0(y));
    }
    double dQ(double y) const { return -(P0.total() - P0(y)); }
    double R(double y) const { return W0.total() - W0(y); }

    double base_f2(double y) const { return -m.eta_w(y) * t.f(y, 2) - Q(y) / m.EI(y); }
    double f2(double y) const { return base_f2(y) - law.k1 * c * (m.span - y) / m.EI(y); }
    double f3(double y) const {
        const double EI = m.EI(y), dEI = m.EI.derivative(y);
        const double l = m.span;
        return -m.eta_w.derivative(y) * t.f(y, 2) - m.eta_w(y) * t.f(y, 3) - (dQ(y) * EI - Q(y) * dEI) / (EI * EI) +
               law.k1 * c * (1.0 / EI + (l - y) * dEI / (EI * EI));
    }
    double base_h1(double y) const { return -m.eta_phi(y) * t.h(y, 1) - R(y) / m.GJ(y); }
    double h1(double y) const { return base_h1(y) - law.k2 * d / m.GJ(y); }
    double h2(double y) const {
        const double GJ = m.GJ(y), dGJ = m.GJ.derivative(y);
        return -m.eta_phi.derivative(y) * t.h(y, 1) - m.eta_phi(y) * t.h(y, 2) + m.Iw(y) * t.z(y) / GJ +
               (R(y) + law.k2 * d) * dGJ / (GJ * GJ);
    }
};

}  // namespace

LiftedState apply_A1_inverse(const WingModel& model, const ControlLaw& law, const LiftedState& target,
                             QuadratureSpec q) {
    check_space_membership(target, 1e-10);
    const double l = model.span;
    auto D = std::make_shared<InverseData>();
    D->m = model;
    D->law = law;
    D->t = target;
    InverseData* p = D.get();
    D->P0 = CumulativeIntegral([p](double x) { return p->m.rho(x) * p->t.g(x); }, l, q);
    D->P1 = CumulativeIntegral([p](double x) { return x * p->m.rho(x) * p->t.g(x); }, l, q);
    D->W0 = CumulativeIntegral([p](double x) { return p->m.Iw(x) * p->t.z(x); }, l, q);

    // f(l) from alpha (1 + k1 eps1 int (l - x)^2 / EI) = int (l - x) base_f2 - k1 f~(l) int (l - x)^2 / EI
    const double Iq = quadrature([&](double x) { return sq(l - x) / model.EI(x); }, 0.0, l, q);
    const double Ib = quadrature([&](double x) { return (l - x) * p->base_f2(x); }, 0.0, l, q);
    const double ft = target.f(l);
    const double alpha = (Ib - law.k1 * ft * Iq) / (1.0 + law.k1 * law.eps1 * Iq);
    D->c = ft + law.eps1 * alpha;

    const double I1 = quadrature([&](double x) { return 1.0 / model.GJ(x); }, 0.0, l, q);
    const double Ih = quadrature([&](double x) { return p->base_h1(x); }, 0.0, l, q);
    const double ht = target.h(l);
    const double beta = (Ih - law.k2 * ht * I1) / (1.0 + law.k2 * law.eps2 * I1);
    D->d = ht + law.eps2 * beta;

    D->F0 = CumulativeIntegral([p](double x) { return p->f2(x); }, l, q);
    D->F1 = CumulativeIntegral([p](double x) { return x * p->f2(x); }, l, q);
    D->H0 = CumulativeIntegral([p](double x) { return p->h1(x); }, l, q);

    LiftedState x;
    x.f = Field([D](double y, int k) {
        switch (k) {
            case 0: return y * D->F0(y) - D->F1(y);
            case 1: return D->F0(y);
            case 2: return D->f2(y);
            default: return D->f3(y);
        }
    });
    x.g = target.f;
    x.h = Field(
        [D](double y, int k) {
            switch (k) {
                case 0: return D->H0(y);
                case 1: return D->h1(y);
                default: return D->h2(y);
            }
        },
        2);
    x.z = target.h;
    return x;
}

double galerkin_A1_residual(const WingModel& m, const ControlLaw& law, const LiftedState& x, const LiftedState& T,
                            const Mesh& mesh, QuadratureSpec q) {
    const DofMap dofs(mesh.n_elements());
    const int n = dofs.size();
    VectorXd r = VectorXd::Zero(n);
    const GaussRule& rule = gauss_legendre(q.points + 2);
    double mismatch = 0.0;  // first/third components: g - f~, z - h~
    for (int e = 0; e < mesh.n_elements(); ++e) {
        const double h = mesh.h(e);
        const auto bi = dofs.bending(e);
        const auto ti = dofs.torsion(e);
        for (int g = 0; g < rule.size(); ++g) {
            const double xi = 0.5 * (rule.nodes[g] + 1.0);
            const double y = mesh.nodes[e] + xi * h;
            const double wq = 0.5 * h * rule.weights[g];
            const HermiteShape s(xi, h);
            const double L[2] = {1.0 - xi, xi}, dL[2] = {-1.0 / h, 1.0 / h};
            const double EI = m.EI(y), GJ = m.GJ(y);
            const double S = EI * x.f(y, 2) + m.eta_w(y) * EI * x.g(y, 2);
            const double Tq = GJ * x.h(y, 1) + m.eta_phi(y) * GJ * x.z(y, 1);
            const double rg = m.rho(y) * T.g(y), rz = m.Iw(y) * T.z(y);
            for (int a = 0; a < 4; ++a)
                if (bi[a] >= 0) r[bi[a]] += wq * (rg * s.N[a] + S * s.d2N[a]);
            for (int a = 0; a < 2; ++a)
                if (ti[a] >= 0) r[ti[a]] += wq * (rz * L[a] + Tq * dL[a]);
            mismatch += wq * (EI * sq(x.g(y, 2) - T.f(y, 2)) + GJ * sq(x.z(y, 1) - T.h(y, 1)));
        }
    }
    const double l = m.span;
    r[dofs.tip_w()] += law.k1 * (x.g(l) + law.eps1 * x.f(l));
    r[dofs.tip_phi()] += law.k2 * (x.z(l) + law.eps2 * x.h(l));

    const EnergyEvaluator ev(m, law, mesh, q.points + 2);
    const SparseMatrix Mass = ev.bending_mass() + ev.torsion_mass();
    const LinearSolver solver(Mass);
    const double dual = std::sqrt(std::max(0.0, r.dot(solver.solve(r))));
    const double scale = norm_H1(m, T, {mesh.n_elements(), q.points + 2});
    const double moment = std::abs(tip_moment(m, x));
    const double denom = scale > 0.0 ? scale : 1.0;
    return std::max({dual, std::sqrt(mismatch), moment}) / denom;
}

LiftedState random_polynomial_target(std::uint64_t seed, double l) {
    std::mt19937_64 rng(seed);
    const auto poly = [&](int first, int last) {
        std::vector<double> c(last + 1, 0.0);
        for (int k = first; k <= last; ++k) c[k] = uniform(rng, -1.0, 1.0) / std::pow(l, k);
        return Polynomial(c);
    };
    LiftedState t;
    t.f = Field::from_polynomial(poly(2, 5));
    t.g = Field::from_polynomial(poly(0, 5));
    t.h = Field::from_polynomial(poly(1, 5));
    t.z = Field::from_polynomial(poly(0, 5));
    return t;
}

Spectrum discrete_generator_spectrum(const DiscreteSystem& sys) {
    if (sys.mesh.n_elements() > kExpmMaxElements)
        throw std::invalid_argument("dense spectrum is limited to " + std::to_string(kExpmMaxElements) + " elements");
    const FirstOrderForm f = first_order_form(sys);
    Eigen::EigenSolver<MatrixXd> es(f.A, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
    Spectrum s;
    s.max_real = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        s.eigenvalues.push_back(es.eigenvalues()[i]);
        s.max_real = std::max(s.max_real, es.eigenvalues()[i].real());
    }
    return s;
}

namespace {

template <class F>
double over_directions(int directions, F&& f) {
    double best = std::max(f(Vec2(1.0, 0.0)), f(Vec2(0.0, 1.0)));
    for (int j = 0; j < directions; ++j) {
        const double th = 2.0 * pi * j / directions;
        best = std::max(best, f(Vec2(std::cos(th), std::sin(th))));
    }
    return best;
}

// Second derivative by a three-point stencil centred inside [0, l].
double second_difference(const std::function<double(double)>& s, double y, double l) {
    const double d = 1e-2 * l;
    const double c = std::clamp(y, d, l - d);
    return (s(c + d) - 2.0 * s(c) + s(c - d)) / (d * d);
}

double first_difference(const std::function<double(double)>& s, double y, double l) {
    const double d = 1e-2 * l;
    const double c = std::clamp(y, d, l - d);
    return (s(c + d) - s(c - d)) / (2.0 * d);
}

}  // namespace

double sampled_norm_B(const WingModel& m, const ControlLaw& law, int directions, QuadratureSpec q) {
    return over_directions(directions, [&](const Vec2& U) { return norm_H1(m, build_B_lift(m, law, U, q), q); });
}

double sampled_norm_AdB(const WingModel& m, const ControlLaw& law, int directions, QuadratureSpec q) {
    const double l = m.span;
    return over_directions(directions, [&](const Vec2& U) {
        const LiftedState x = build_B_lift(m, law, U, q);
        const std::function<double(double)> S = [&](double y) { return m.EI(y) * x.f(y, 2); };
        const std::function<double(double)> T = [&](double y) { return m.GJ(y) * x.h(y, 1); };
        const double v = quadrature(
            [&](double y) {
                const double gt = -second_difference(S, y, l) / m.rho(y) + m.alpha_w(y) * x.h(y);
                const double zt = first_difference(T, y, l) / m.Iw(y) + m.alpha_phi(y) * x.h(y);
                return m.rho(y) * gt * gt + m.Iw(y) * zt * zt;
            },
            0.0, l, q);
        return std::sqrt(v);
    });
}

// ---- suite ----

bool VerificationReport::all_passed() const {
    for (const auto& c : checks)
        if (c.status == CheckStatus::Fail) return false;
    return true;
}

namespace {

CheckResult judge(std::string name, double residual, double tol, std::string detail = {}) {
    CheckResult c;
    c.name = std::move(name);
    c.residual = residual;
    c.tolerance = tol;
    c.status = (residual <= tol) ? CheckStatus::Pass : CheckStatus::Fail;
    c.detail = std::move(detail);
    return c;
}

CheckResult skipped(std::string name, std::string why) {
    CheckResult c;
    c.name = std::move(name);
    c.status = CheckStatus::Skipped;
    c.detail = std::move(why);
    return c;
}

// Random constrained nodal vector mixing smooth modes and nodal noise.
VectorXd random_nodal_vector(std::mt19937_64& rng, const Mesh& mesh) {
    const DofMap d(mesh.n_elements());
    VectorXd q(d.size());
    const double l = mesh.span();
    const double a1 = uniform(rng, -1, 1), a2 = uniform(rng, -1, 1), a3 = uniform(rng, -1, 1);
    const double noise = std::pow(10.0, uniform(rng, -3, 0));
    for (int i = 1; i <= mesh.n_elements(); ++i) {
        const double s = mesh.nodes[i] / l;
        q[d.w(i)] = a1 * s * s + a2 * std::sin(3.0 * s) * s + noise * uniform(rng, -1, 1);
        q[d.slope(i)] = (2.0 * a1 * s + a2 * (3.0 * std::cos(3.0 * s) * s + std::sin(3.0 * s))) / l +
                        noise * uniform(rng, -1, 1) / l;
        q[d.phi(i)] = a3 * std::sin(1.7 * s) + noise * uniform(rng, -1, 1);
    }
    return q;
}

}  // namespace

VerificationReport run_verification_suite(const WingModel& model, const ControlLaw& law, const VerifyOptions& o) {
    validate(model);
    validate(law);
    VerificationReport rep;
    std::mt19937_64 rng(o.seed);
    const double l = model.span;

    {  // boundary lift identity
        double worst = 0.0;
        for (int i = 0; i < o.lift_samples; ++i) {
            const Vec2 U(uniform(rng, -10, 10), uniform(rng, -10, 10));
            const LiftedState x = build_B_lift(model, law, U, o.quadrature);
            const Vec2 r = boundary_operator(model, law, x) - U;
            worst = std::max({worst, r.cwiseAbs().maxCoeff() / std::max(1.0, U.norm()),
                              std::abs(tip_moment(model, x))});
        }
        rep.checks.push_back(judge("lift_identity", worst, 1e-10, std::to_string(o.lift_samples) + " random U"));
    }

    if (law.k2 * law.eps2 > 0.0) {
        const double v = witness_value(model, law, o.quadrature);
        rep.checks.push_back(judge("witness_value", std::abs(v - 1.0), 1e-8, "form value " + std::to_string(v)));
        QuadratureSpec fine = o.quadrature;
        fine.panels *= 2;
        const double v2 = witness_value(model, law, fine);
        rep.checks.push_back(judge("witness_refinement", std::abs(v2 - v), 1e-9));
        const Witness w = nondissipativity_witness(model, law, o.quadrature);
        const double h1 = dissipation_form_H1(model, law, w.state, kReferenceQuadrature);
        const double h2 = dissipation_form_H2(model, law, w.state, kReferenceQuadrature);
        CheckResult c = judge("witness_H2_distinct", 0.0, 0.0, "H1 form " + std::to_string(h1) + ", H2 form " +
                                                                   std::to_string(h2));
        c.residual = std::abs(h2 - h1);
        c.status = c.residual > 1e-10 ? CheckStatus::Pass : CheckStatus::Fail;
        rep.checks.push_back(c);
    } else {
        rep.checks.push_back(skipped("witness_value", "requires k2*eps2>0"));
        rep.checks.push_back(skipped("witness_refinement", "requires k2*eps2>0"));
        rep.checks.push_back(skipped("witness_H2_distinct", "requires k2*eps2>0"));
    }

    {  // A1 inverse round trip
        const Mesh grid = Mesh::uniform(l, 64);
        double worst = 0.0;
        for (int i = 0; i < o.inverse_targets; ++i) {
            const LiftedState T = random_polynomial_target(o.seed * 1000 + i, l);
            const LiftedState X = apply_A1_inverse(model, law, T, o.quadrature);
            worst = std::max(worst, galerkin_A1_residual(model, law, X, T, grid, o.quadrature));
        }
        rep.checks.push_back(
            judge("A1_inverse_roundtrip", worst, 1e-6, std::to_string(o.inverse_targets) + " polynomial targets"));
    }

    const ModelBounds b = model_bounds(model);
    const double Km = compute_Km(b);
    const double em = std::max(law.eps1, law.eps2);
    if (em * Km < 1.0) {
        const Mesh mesh = Mesh::uniform(l, o.norm_elements);
        const EnergyEvaluator ev(model, law, mesh, o.quadrature.points);
        int violations = 0;
        for (int i = 0; i < o.random_states; ++i) {
            const VectorXd q = random_nodal_vector(rng, mesh) * std::pow(10.0, uniform(rng, -2, 2));
            const VectorXd v = random_nodal_vector(rng, mesh) * std::pow(10.0, uniform(rng, -2, 2));
            const double n1 = 2.0 * ev.energy_H1(q, v), n2 = 2.0 * ev.energy_H2(q, v);
            const double slack = 1e-12 * n1;
            if (n2 < (1.0 - em * Km) * n1 - slack || n2 > (1.0 + em * Km) * n1 + slack) ++violations;
        }
        rep.checks.push_back(judge("norm_equivalence", violations, 0.0,
                                   std::to_string(o.random_states) + " random states, eps_m*K_m=" +
                                       std::to_string(em * Km)));
    } else {
        rep.checks.push_back(skipped("norm_equivalence", "requires eps_m*K_m<1"));
    }

    {
        const double cf = compute_norm_B(model, law), s = sampled_norm_B(model, law, 16, o.quadrature);
        rep.checks.push_back(judge("norm_B_sampled", std::abs(cf - s) / std::max(cf, 1e-300), 1e-8));
        const double ca = compute_norm_AdB(model, law), sa = sampled_norm_AdB(model, law, 16, o.quadrature);
        const double scale = ca > 0.0 ? ca : 1.0;
        rep.checks.push_back(judge("norm_AdB_sampled", std::abs(ca - sa) / scale, 1e-8));
    }

    {  // discrete Poincare and Agmon inequalities; 5 Gauss points integrate the piecewise cubics exactly
        const Mesh mesh = Mesh::uniform(l, o.norm_elements);
        const DofMap d(mesh.n_elements());
        const double P = 4.0 * l * l / (pi * pi);
        double worst = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < o.random_states; ++i) {
            const VectorXd q = random_nodal_vector(rng, mesh);
            const FieldNorms n = field_norms(mesh, d, q, 5);
            const double ratios[] = {
                sq(n.w_l2) / (P * sq(n.dw_l2)),        sq(n.dw_l2) / (P * sq(n.d2w_l2)),
                sq(n.phi_l2) / (P * sq(n.dphi_l2)),    sq(n.w_sup) / (2.0 * n.w_l2 * n.dw_l2),
                sq(n.dw_sup) / (2.0 * n.dw_l2 * n.d2w_l2), sq(n.phi_sup) / (2.0 * n.phi_l2 * n.dphi_l2)};
            for (double r : ratios)
                if (std::isfinite(r)) worst = std::max(worst, r);
        }
        CheckResult c = judge("poincare_agmon", std::max(0.0, worst - 1.0), 1e-12,
                              "max ratio " + std::to_string(worst) + " over " + std::to_string(o.random_states) +
                                  " fields");
        rep.checks.push_back(c);
    }

    {  // generator spectrum against the certificate at the configured eps
        try {
            SearchOptions so;
            so.fixed_eps1 = law.eps1;
            so.fixed_eps2 = law.eps2;
            const CertificateReport cert = feasibility_search(model, law.k1, law.k2, so);
            if (!cert.feasible) {
                rep.checks.push_back(skipped("generator_spectrum", "no certificate at the configured eps"));
            } else {
                const DiscreteSystem sys =
                    assemble(model, law, Mesh::uniform(l, o.spectrum_elements), LoopMode::ClosedLoop);
                const Spectrum s = discrete_generator_spectrum(sys);
                rep.checks.push_back(judge("generator_spectrum", std::max(0.0, s.max_real + cert.Lambda / 2.0), 1e-6,
                                           "max Re " + std::to_string(s.max_real) + ", -Lambda/2 " +
                                               std::to_string(-cert.Lambda / 2.0)));
            }
        } catch (const PreconditionError& e) {
            rep.checks.push_back(skipped("generator_spectrum", e.what()));
        }
    }
    return rep;
}

void write_verification_report(std::ostream& os, const VerificationReport& r) {
    const auto old = os.precision(6);
    for (const auto& c : r.checks) {
        os << "check." << c.name << " = ";
        switch (c.status) {
            case CheckStatus::Pass: os << "PASS"; break;
            case CheckStatus::Fail: os << "FAIL"; break;
            case CheckStatus::Skipped: os << "SKIPPED"; break;
        }
        if (c.status != CheckStatus::Skipped) os << " residual=" << c.residual << " tolerance=" << c.tolerance;
        if (!c.detail.empty()) os << " detail=\"" << c.detail << '"';
        os << '\n';
    }
    os << "summary = " << (r.all_passed() ? "PASS" : "FAIL") << '\n';
    os.precision(old);
}

}  // namespace flexwing
