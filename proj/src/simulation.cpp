#include "flexwing/simulation.hpp"

#include "flexwing/quadrature.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <ostream>
#include <sstream>

namespace flexwing {

void SimulationConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be nonnegative");
    if (!(beta >= 0.0 && beta <= 0.5)) throw std::invalid_argument("Newmark beta must lie in [0, 0.5]");
    if (!(gamma >= 0.5 && gamma <= 1.0)) throw std::invalid_argument("Newmark gamma must lie in [0.5, 1]");
    if (output_stride < 1) throw std::invalid_argument("output stride must be >= 1");
}

namespace {

std::string divergence_message(long step, double time) {
    std::ostringstream os;
    os << "state became non-finite at step " << step << " (t = " << time << ")";
    return os.str();
}

long step_count(const SimulationConfig& c) { return std::lround(std::ceil(c.t_end / c.dt - 1e-9)); }

}  // namespace

DivergenceError::DivergenceError(long s, double t) : std::runtime_error(divergence_message(s, t)), step(s), time(t) {}

EnergyEvaluator::EnergyEvaluator(const WingModel& model, const ControlLaw& law, const Mesh& mesh, int points)
    : eps1_(law.eps1), eps2_(law.eps2) {
    const DofMap d(mesh.n_elements());
    const int n = d.size();
    std::vector<Eigen::Triplet<double>> tb, tt, tr, ti;
    const GaussRule& rule = gauss_legendre(points);
    for (int e = 0; e < mesh.n_elements(); ++e) {
        const double h = mesh.h(e);
        const auto bi = d.bending(e);
        const auto pi = d.torsion(e);
        for (int g = 0; g < rule.size(); ++g) {
            const double xi = 0.5 * (rule.nodes[g] + 1.0);
            const double y = mesh.nodes[e] + xi * h;
            const double wq = 0.5 * h * rule.weights[g];
            const HermiteShape s(xi, h);
            const double L[2] = {1.0 - xi, xi}, dL[2] = {-1.0 / h, 1.0 / h};
            const double EI = model.EI(y), GJ = model.GJ(y), rho = model.rho(y), Iw = model.Iw(y);
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) {
                    if (bi[a] < 0 || bi[b] < 0) continue;
                    tb.emplace_back(bi[a], bi[b], wq * EI * s.d2N[a] * s.d2N[b]);
                    tr.emplace_back(bi[a], bi[b], wq * rho * s.N[a] * s.N[b]);
                }
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    if (pi[a] < 0 || pi[b] < 0) continue;
                    tt.emplace_back(pi[a], pi[b], wq * GJ * dL[a] * dL[b]);
                    ti.emplace_back(pi[a], pi[b], wq * Iw * L[a] * L[b]);
                }
        }
    }
    for (auto* m : {&Gb_, &Gt_, &Mr_, &Mi_}) m->resize(n, n);
    Gb_.setFromTriplets(tb.begin(), tb.end());
    Gt_.setFromTriplets(tt.begin(), tt.end());
    Mr_.setFromTriplets(tr.begin(), tr.end());
    Mi_.setFromTriplets(ti.begin(), ti.end());
}

double EnergyEvaluator::energy_H1(const VectorXd& q, const VectorXd& v) const {
    return 0.5 * (q.dot(Gb_ * q) + q.dot(Gt_ * q) + v.dot(Mr_ * v) + v.dot(Mi_ * v));
}

double EnergyEvaluator::energy_H2(const VectorXd& q, const VectorXd& v) const {
    return energy_H1(q, v) + eps1_ * q.dot(Mr_ * v) + eps2_ * q.dot(Mi_ * v);
}

double EnergyEvaluator::norm_H1(const VectorXd& q, const VectorXd& v) const {
    return std::sqrt(std::max(0.0, 2.0 * energy_H1(q, v)));
}

NewmarkIntegrator::NewmarkIntegrator(const DiscreteSystem& sys, double dt, double beta, double gamma)
    : sys_(&sys), dt_(dt), beta_(beta), gamma_(gamma), mass_(sys.M) {
    const SparseMatrix eff = sys.M + (gamma * dt) * sys.C + (beta * dt * dt) * sys.K;
    effective_ = LinearSolver(eff);
}

VectorXd NewmarkIntegrator::consistent_acceleration(const VectorXd& q, const VectorXd& v, const Vec2& u) const {
    return mass_.solve(VectorXd(sys_->load(u) - sys_->C * v - sys_->K * q));
}

void NewmarkIntegrator::step(VectorXd& q, VectorXd& v, VectorXd& a, const Vec2& u_next) const {
    const VectorXd qp = q + dt_ * v + (dt_ * dt_ * (0.5 - beta_)) * a;
    const VectorXd vp = v + (dt_ * (1.0 - gamma_)) * a;
    a = effective_.solve(VectorXd(sys_->load(u_next) - sys_->C * vp - sys_->K * qp));
    q = qp + (beta_ * dt_ * dt_) * a;
    v = vp + (gamma_ * dt_) * a;
}

DiscreteState step_newmark(const DiscreteSystem& sys, const DiscreteState& s, double t, double dt,
                           const Disturbance& u, double beta, double gamma) {
    const NewmarkIntegrator integ(sys, dt, beta, gamma);
    DiscreteState out = s;
    VectorXd a = integ.consistent_acceleration(s.q, s.v, u(t));
    integ.step(out.q, out.v, a, u(t + dt));
    return out;
}

namespace {

class Recorder {
public:
    Recorder(const DiscreteSystem& sys, const SimulationConfig& c, const Disturbance& u)
        : sys_(sys), u_(u), energy_(sys.model, sys.law, sys.mesh) {
        traj.snapshot_positions = c.snapshot_positions;
        for (double y : c.snapshot_positions)
            if (!(y >= 0.0 && y <= sys.model.span)) throw std::invalid_argument("snapshot position outside [0, l]");
    }

    void record(double t, const VectorXd& q, const VectorXd& v) {
        traj.times.push_back(t);
        traj.q.push_back(q);
        traj.v.push_back(v);
        traj.energy_H1.push_back(energy_.energy_H1(q, v));
        traj.energy_H2.push_back(energy_.energy_H2(q, v));
        traj.w_tip.push_back(q[sys_.dofs.tip_w()]);
        traj.phi_tip.push_back(q[sys_.dofs.tip_phi()]);
        const Vec2 u = u_(t);
        traj.u1.push_back(u[0]);
        traj.u2.push_back(u[1]);
        std::vector<double> ws, ps;
        for (double y : traj.snapshot_positions) {
            const auto f = evaluate_fields(sys_.mesh, sys_.dofs, q, y);
            ws.push_back(f.w);
            ps.push_back(f.phi);
        }
        traj.w_snapshots.push_back(std::move(ws));
        traj.phi_snapshots.push_back(std::move(ps));
    }

    Trajectory traj;

private:
    const DiscreteSystem& sys_;
    const Disturbance& u_;
    EnergyEvaluator energy_;
};

double poly_d(const Polynomial& p, double y, int k) { return p.derivative(y, k); }

}  // namespace

Vec2 compatibility_residual(const WingModel& m, const ControlLaw& law, const InitialCondition& ic, const Vec2& u0) {
    const double l = m.span;
    const double EI = m.EI(l), dEI = m.EI.derivative(l);
    const double eEI = m.eta_w(l) * EI, deEI = m.eta_w.derivative(l) * EI + m.eta_w(l) * dEI;
    const double GJ = m.GJ(l), eGJ = m.eta_phi(l) * GJ;
    const double shear = dEI * poly_d(ic.w0, l, 2) + EI * poly_d(ic.w0, l, 3) + deEI * poly_d(ic.wt0, l, 2) +
                         eEI * poly_d(ic.wt0, l, 3);
    const double u1 = -shear + law.k1 * (ic.wt0(l) + law.eps1 * ic.w0(l));
    const double u2 = GJ * poly_d(ic.phi0, l, 1) + eGJ * poly_d(ic.phit0, l, 1) +
                      law.k2 * (ic.phit0(l) + law.eps2 * ic.phi0(l));
    return Vec2(u1, u2) - u0;
}

namespace {

void check_compatibility(const DiscreteSystem& sys, const InitialCondition& ic, const Disturbance& u,
                         const SimulationConfig& c) {
    if (sys.mode != LoopMode::ClosedLoop || c.mild_solution) return;
    const double l = sys.model.span;
    const double moment = sys.model.EI(l) * ic.w0.derivative(l, 2) +
                          sys.model.eta_w(l) * sys.model.EI(l) * ic.wt0.derivative(l, 2);
    const Vec2 r = compatibility_residual(sys.model, sys.law, ic, u(0.0));
    if (std::abs(moment) > c.compatibility_tol || r.cwiseAbs().maxCoeff() > c.compatibility_tol) {
        std::ostringstream os;
        os << "initial data violate the closed-loop boundary compatibility (moment residual " << moment
           << ", boundary residual " << r[0] << ", " << r[1]
           << "); enable mild-solution semantics to integrate anyway";
        throw CompatibilityError(os.str());
    }
}

}  // namespace

Trajectory simulate(const DiscreteSystem& sys, const InitialCondition& ic, const Disturbance& u,
                    const SimulationConfig& c) {
    check_compatibility(sys, ic, u, c);
    return simulate(sys, interpolate(ic, sys.mesh), u, c);
}

Trajectory simulate(const DiscreteSystem& sys, const DiscreteState& x0, const Disturbance& u,
                    const SimulationConfig& c) {
    c.validate();
    if (c.integrator == Integrator::MatrixExponential) return propagate_expm(sys, x0, u, c);
    const NewmarkIntegrator integ(sys, c.dt, c.beta, c.gamma);
    Recorder rec(sys, c, u);
    VectorXd q = x0.q, v = x0.v;
    VectorXd a = integ.consistent_acceleration(q, v, u(0.0));
    rec.record(0.0, q, v);
    const long steps = step_count(c);
    for (long k = 1; k <= steps; ++k) {
        const double t = k * c.dt;
        integ.step(q, v, a, u(t));
        if (!q.allFinite() || !v.allFinite()) throw DivergenceError(k, t);
        if (k % c.output_stride == 0 || k == steps) rec.record(t, q, v);
    }
    return std::move(rec.traj);
}

Trajectory propagate_expm(const DiscreteSystem& sys, const InitialCondition& ic, const Disturbance& u,
                          const SimulationConfig& c) {
    check_compatibility(sys, ic, u, c);
    return propagate_expm(sys, interpolate(ic, sys.mesh), u, c);
}

Trajectory propagate_expm(const DiscreteSystem& sys, const DiscreteState& x0, const Disturbance& u,
                          const SimulationConfig& c) {
    c.validate();
    if (sys.mesh.n_elements() > kExpmMaxElements)
        throw std::invalid_argument("matrix-exponential propagation is limited to " +
                                    std::to_string(kExpmMaxElements) + " elements");
    const int n = sys.size();
    const FirstOrderForm f = first_order_form(sys);
    const double h = c.dt;
    const GaussRule& rule = gauss_legendre(8);
    const int p = rule.size();
    // Product integration: U is replaced on each step by its interpolant at the
    // Gauss nodes and the convolution of that polynomial is taken exactly from
    // one augmented exponential, which stays accurate for the stiff damped modes.
    // With tau = s / h and monomials tau^j / j!, exp([[hA, hG E0], [0, N]]) holds
    // Z_j = int_0^1 exp(hA(1 - tau)) hG tau^j / j! dtau in its top-right block.
    const int m = 2 * n, aug = m + 2 * p;
    MatrixXd Mx = MatrixXd::Zero(aug, aug);
    Mx.topLeftCorner(m, m) = f.A * h;
    Mx.block(0, m, m, 2) = f.G * h;
    for (int j = 0; j + 1 < p; ++j) Mx.block(m + 2 * j, m + 2 * (j + 1), 2, 2).setIdentity();
    const MatrixXd E = Mx.exp();
    const MatrixXd Phi = E.topLeftCorner(m, m);
    std::vector<double> s(p);
    MatrixXd V(p, p);  // V(g, j) = tau_g^j / j!
    for (int g = 0; g < p; ++g) {
        s[g] = 0.5 * h * (rule.nodes[g] + 1.0);
        double tau = s[g] / h, term = 1.0;
        for (int j = 0; j < p; ++j) {
            V(g, j) = term;
            term *= tau / (j + 1);
        }
    }
    // Lagrange basis L_g = sum_j C(j, g) tau^j / j! with C = V^{-1}
    const MatrixXd C = V.partialPivLu().inverse();
    std::vector<MatrixXd> W(p, MatrixXd::Zero(m, 2));
    for (int g = 0; g < p; ++g)
        for (int j = 0; j < p; ++j) W[g] += C(j, g) * E.block(0, m + 2 * j, m, 2);

    Recorder rec(sys, c, u);
    VectorXd x(2 * n);
    x << x0.q, x0.v;
    rec.record(0.0, x.head(n), x.tail(n));
    const long steps = step_count(c);
    for (long k = 1; k <= steps; ++k) {
        const double t0 = (k - 1) * h;
        VectorXd next = Phi * x;
        for (int g = 0; g < p; ++g) next += W[g] * u(t0 + s[g]);
        x = std::move(next);
        if (!x.allFinite()) throw DivergenceError(k, k * h);
        if (k % c.output_stride == 0 || k == steps) rec.record(k * h, x.head(n), x.tail(n));
    }
    return std::move(rec.traj);
}

DecayFit decay_fit(const std::vector<double>& t, const std::vector<double>& E) {
    if (t.size() != E.size() || t.empty()) throw std::invalid_argument("decay_fit: inconsistent trace");
    if (!(E[0] > 0.0)) throw std::invalid_argument("decay_fit: initial energy must be positive");
    const double floor = kEnergyFloor * E[0];
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(E[i] > floor)) break;
        const double y = std::log(E[i]);
        sx += t[i];
        sy += y;
        sxx += t[i] * t[i];
        sxy += t[i] * y;
        ++m;
    }
    if (m < 2) throw std::invalid_argument("decay_fit: energy reaches the numerical floor immediately");
    const double den = m * sxx - sx * sx;
    const double slope = (m * sxy - sx * sy) / den;
    return {-slope, (sy - slope * sx) / m, m};
}

DecayFit decay_fit(const Trajectory& traj) { return decay_fit(traj.times, traj.energy_H2); }

namespace {

void write_preamble(std::ostream& os, const std::vector<std::string>& preamble) {
    for (const auto& line : preamble) os << "# " << line << '\n';
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const std::vector<std::string>& preamble) {
    write_preamble(os, preamble);
    os << "t,E,Ecal,w_tip,phi_tip,u1,u2\n";
    const auto old = os.precision(12);
    for (std::size_t i = 0; i < traj.size(); ++i)
        os << traj.times[i] << ',' << traj.energy_H1[i] << ',' << traj.energy_H2[i] << ',' << traj.w_tip[i] << ','
           << traj.phi_tip[i] << ',' << traj.u1[i] << ',' << traj.u2[i] << '\n';
    os.precision(old);
}

void write_snapshot_csv(std::ostream& os, const Trajectory& traj, bool bending,
                        const std::vector<std::string>& preamble) {
    write_preamble(os, preamble);
    const auto old = os.precision(12);
    os << 't';
    for (double y : traj.snapshot_positions) os << ",y=" << y;
    os << '\n';
    const auto& data = bending ? traj.w_snapshots : traj.phi_snapshots;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        os << traj.times[i];
        for (double v : data[i]) os << ',' << v;
        os << '\n';
    }
    os.precision(old);
}

}  // namespace flexwing
