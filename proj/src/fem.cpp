#include "flexwing/fem.hpp"

#include "flexwing/polynomial.hpp"
#include "flexwing/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace flexwing {

Mesh Mesh::uniform(double span, int n_elements) {
    if (!(span > 0.0)) throw std::invalid_argument("mesh span must be positive");
    if (n_elements < 1) throw std::invalid_argument("mesh needs at least one element");
    Mesh m;
    m.nodes.resize(n_elements + 1);
    for (int i = 0; i <= n_elements; ++i) m.nodes[i] = span * static_cast<double>(i) / n_elements;
    m.nodes.back() = span;
    return m;
}

int Mesh::locate(double y) const {
    auto it = std::lower_bound(nodes.begin() + 1, nodes.end(), y);
    if (it == nodes.end()) return n_elements() - 1;
    return static_cast<int>(it - nodes.begin()) - 1;
}

void Mesh::validate() const {
    if (nodes.size() < 2) throw std::invalid_argument("mesh needs at least one element");
    if (nodes.front() != 0.0) throw std::invalid_argument("mesh must start at y = 0");
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        if (!(nodes[i + 1] > nodes[i])) throw std::invalid_argument("mesh nodes must increase strictly");
}

HermiteShape::HermiteShape(double x, double h) {
    const double x2 = x * x, x3 = x2 * x;
    N = {1.0 - 3.0 * x2 + 2.0 * x3, h * (x - 2.0 * x2 + x3), 3.0 * x2 - 2.0 * x3, h * (x3 - x2)};
    dN = {(-6.0 * x + 6.0 * x2) / h, 1.0 - 4.0 * x + 3.0 * x2, (6.0 * x - 6.0 * x2) / h, 3.0 * x2 - 2.0 * x};
    d2N = {(-6.0 + 12.0 * x) / (h * h), (-4.0 + 6.0 * x) / h, (6.0 - 12.0 * x) / (h * h), (-2.0 + 6.0 * x) / h};
    d3N = {12.0 / (h * h * h), 6.0 / (h * h), -12.0 / (h * h * h), 6.0 / (h * h)};
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void add(Triplets& t, int i, int j, double v) {
    if (i >= 0 && j >= 0 && v != 0.0) t.emplace_back(i, j, v);
}

SparseMatrix build(int n, const Triplets& t) {
    SparseMatrix A(n, n);
    A.setFromTriplets(t.begin(), t.end());
    A.makeCompressed();
    return A;
}

}  // namespace

DiscreteSystem assemble(const WingModel& model, const ControlLaw& law, const Mesh& mesh, LoopMode mode,
                        AssemblyOptions opts) {
    validate(model);
    validate(law);
    mesh.validate();
    if (std::abs(mesh.span() - model.span) > 1e-12 * model.span)
        throw std::invalid_argument("mesh span differs from the model span");

    DiscreteSystem sys;
    sys.model = model;
    sys.law = law;
    sys.mode = mode;
    sys.mesh = mesh;
    sys.dofs = DofMap(mesh.n_elements());
    const DofMap& d = sys.dofs;
    const int n = d.size();

    Triplets tM, tKel, tKaero, tCkv, tCaero;
    const GaussRule& rule = gauss_legendre(opts.quadrature_points);

    for (int e = 0; e < mesh.n_elements(); ++e) {
        const double y0 = mesh.nodes[e], h = mesh.h(e);
        const auto bi = d.bending(e);
        const auto ti = d.torsion(e);
        for (int g = 0; g < rule.size(); ++g) {
            const double xi = 0.5 * (rule.nodes[g] + 1.0);
            const double y = y0 + xi * h;
            const double wq = 0.5 * h * rule.weights[g];
            const HermiteShape s(xi, h);
            const std::array<double, 2> L{1.0 - xi, xi};
            const std::array<double, 2> dL{-1.0 / h, 1.0 / h};

            const double rho = model.rho(y), Iw = model.Iw(y), EI = model.EI(y), GJ = model.GJ(y);
            const double ew = model.eta_w(y), ep = model.eta_phi(y);
            const double aw = model.alpha_w(y), bw = model.beta_w(y), gw = model.gamma_w(y);
            const double ap = model.alpha_phi(y), bp = model.beta_phi(y), gp = model.gamma_phi(y);

            for (int a = 0; a < 4; ++a) {
                for (int b = 0; b < 4; ++b) {
                    add(tM, bi[a], bi[b], wq * rho * s.N[a] * s.N[b]);
                    add(tKel, bi[a], bi[b], wq * EI * s.d2N[a] * s.d2N[b]);
                    add(tCkv, bi[a], bi[b], wq * ew * EI * s.d2N[a] * s.d2N[b]);
                    add(tCaero, bi[a], bi[b], -wq * rho * gw * s.N[a] * s.N[b]);
                }
                for (int b = 0; b < 2; ++b) {
                    add(tKaero, bi[a], ti[b], -wq * rho * aw * s.N[a] * L[b]);
                    add(tCaero, bi[a], ti[b], -wq * rho * bw * s.N[a] * L[b]);
                    add(tCaero, ti[b], bi[a], -wq * Iw * gp * L[b] * s.N[a]);
                }
            }
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    add(tM, ti[a], ti[b], wq * Iw * L[a] * L[b]);
                    add(tKel, ti[a], ti[b], wq * GJ * dL[a] * dL[b]);
                    add(tCkv, ti[a], ti[b], wq * ep * GJ * dL[a] * dL[b]);
                    add(tKaero, ti[a], ti[b], -wq * Iw * ap * L[a] * L[b]);
                    add(tCaero, ti[a], ti[b], -wq * Iw * bp * L[a] * L[b]);
                }
            }
        }
    }

    Triplets tStore, tKfb, tCfb;
    sys.P = MatrixXd::Zero(n, 2);
    sys.P(d.tip_w(), 0) = 1.0;
    sys.P(d.tip_phi(), 1) = 1.0;
    if (mode == LoopMode::OpenLoop) {
        add(tStore, d.tip_w(), d.tip_w(), model.store_mass);
        add(tStore, d.tip_phi(), d.tip_phi(), model.store_inertia);
    } else {
        // The store inertia cancels against the feedforward part of the control law.
        add(tCfb, d.tip_w(), d.tip_w(), law.k1);
        add(tCfb, d.tip_phi(), d.tip_phi(), law.k2);
        add(tKfb, d.tip_w(), d.tip_w(), law.k1 * law.eps1);
        add(tKfb, d.tip_phi(), d.tip_phi(), law.k2 * law.eps2);
    }

    sys.M_struct = build(n, tM);
    sys.M_store = build(n, tStore);
    sys.K_el = build(n, tKel);
    sys.K_aero = build(n, tKaero);
    sys.K_fb = build(n, tKfb);
    sys.C_kv = build(n, tCkv);
    sys.C_aero = build(n, tCaero);
    sys.C_fb = build(n, tCfb);
    sys.M = sys.M_struct + sys.M_store;
    sys.K = sys.K_el + sys.K_aero + sys.K_fb;
    sys.C = sys.C_kv + sys.C_aero + sys.C_fb;
    return sys;
}

DiscreteState interpolate(const InitialCondition& ic, const Mesh& mesh) {
    check_root_constraints(ic);
    mesh.validate();
    const DofMap d(mesh.n_elements());
    DiscreteState s{VectorXd::Zero(d.size()), VectorXd::Zero(d.size())};
    for (int i = 1; i <= mesh.n_elements(); ++i) {
        const double y = mesh.nodes[i];
        s.q[d.w(i)] = ic.w0(y);
        s.q[d.slope(i)] = ic.w0.derivative(y);
        s.q[d.phi(i)] = ic.phi0(y);
        s.v[d.w(i)] = ic.wt0(y);
        s.v[d.slope(i)] = ic.wt0.derivative(y);
        s.v[d.phi(i)] = ic.phit0(y);
    }
    return s;
}

namespace {

double dof(const VectorXd& q, int i) { return i < 0 ? 0.0 : q[i]; }

}  // namespace

FieldValues evaluate_fields(const Mesh& mesh, const DofMap& d, const VectorXd& q, double y) {
    if (!(y >= -1e-12 * mesh.span() && y <= mesh.span() * (1.0 + 1e-12)))
        throw std::out_of_range("field evaluated outside [0, l]");
    const int e = mesh.locate(y);
    const double h = mesh.h(e);
    const double xi = std::clamp((y - mesh.nodes[e]) / h, 0.0, 1.0);
    const HermiteShape s(xi, h);
    const auto bi = d.bending(e);
    const auto ti = d.torsion(e);
    FieldValues f;
    for (int a = 0; a < 4; ++a) {
        const double c = dof(q, bi[a]);
        f.w += c * s.N[a];
        f.dw += c * s.dN[a];
        f.d2w += c * s.d2N[a];
        f.d3w += c * s.d3N[a];
    }
    const double p0 = dof(q, ti[0]), p1 = dof(q, ti[1]);
    f.phi = (1.0 - xi) * p0 + xi * p1;
    f.dphi = (p1 - p0) / h;
    return f;
}

FieldNorms field_norms(const Mesh& mesh, const DofMap& d, const VectorXd& q, int points) {
    const GaussRule& rule = gauss_legendre(points);
    FieldNorms n;
    const Polynomial N1({1.0, 0.0, -3.0, 2.0}), N2({0.0, 1.0, -2.0, 1.0}), N3({0.0, 0.0, 3.0, -2.0}),
        N4({0.0, 0.0, -1.0, 1.0});
    for (int e = 0; e < mesh.n_elements(); ++e) {
        const double h = mesh.h(e);
        const auto bi = d.bending(e);
        const auto ti = d.torsion(e);
        for (int g = 0; g < rule.size(); ++g) {
            const double xi = 0.5 * (rule.nodes[g] + 1.0);
            const double wq = 0.5 * h * rule.weights[g];
            const HermiteShape s(xi, h);
            double w = 0, dw = 0, d2w = 0;
            for (int a = 0; a < 4; ++a) {
                const double c = dof(q, bi[a]);
                w += c * s.N[a];
                dw += c * s.dN[a];
                d2w += c * s.d2N[a];
            }
            const double p0 = dof(q, ti[0]), p1 = dof(q, ti[1]);
            const double phi = (1.0 - xi) * p0 + xi * p1;
            const double dphi = (p1 - p0) / h;
            n.w_l2 += wq * w * w;
            n.dw_l2 += wq * dw * dw;
            n.d2w_l2 += wq * d2w * d2w;
            n.phi_l2 += wq * phi * phi;
            n.dphi_l2 += wq * dphi * dphi;
        }
        // element polynomial in the local coordinate xi
        const Polynomial wp = dof(q, bi[0]) * N1 + (h * dof(q, bi[1])) * N2 + dof(q, bi[2]) * N3 +
                              (h * dof(q, bi[3])) * N4;
        const auto ew = extrema_on(wp, 0.0, 1.0);
        const auto ed = extrema_on(wp.derivative_poly(), 0.0, 1.0);
        n.w_sup = std::max({n.w_sup, std::abs(ew.min), std::abs(ew.max)});
        n.dw_sup = std::max({n.dw_sup, std::abs(ed.min) / h, std::abs(ed.max) / h});
        n.phi_sup = std::max({n.phi_sup, std::abs(dof(q, ti[0])), std::abs(dof(q, ti[1]))});
    }
    n.w_l2 = std::sqrt(n.w_l2);
    n.dw_l2 = std::sqrt(n.dw_l2);
    n.d2w_l2 = std::sqrt(n.d2w_l2);
    n.phi_l2 = std::sqrt(n.phi_l2);
    n.dphi_l2 = std::sqrt(n.dphi_l2);
    return n;
}

LinearSolver::LinearSolver(const SparseMatrix& A) : n_(static_cast<int>(A.rows())) {
    if (A.rows() != A.cols()) throw std::invalid_argument("LinearSolver: matrix must be square");
    dense_ = n_ <= kDenseLimit;
    if (dense_) {
        lu_.compute(MatrixXd(A));
        const double rc = lu_.rcond();
        if (!(rc > 1e-15)) throw std::runtime_error("LinearSolver: matrix is singular (rcond " + std::to_string(rc) + ")");
    } else {
        sparse_ = std::make_shared<Eigen::SparseLU<SparseMatrix>>();
        sparse_->compute(A);
        if (sparse_->info() != Eigen::Success) throw std::runtime_error("LinearSolver: sparse LU factorization failed");
    }
}

VectorXd LinearSolver::solve(const VectorXd& b) const {
    if (dense_) return lu_.solve(b);
    return sparse_->solve(b);
}

MatrixXd LinearSolver::solve(const MatrixXd& B) const {
    if (dense_) return lu_.solve(B);
    return sparse_->solve(B);
}

FirstOrderForm first_order_form(const DiscreteSystem& sys) {
    const int n = sys.size();
    const LinearSolver Minv(sys.M);
    FirstOrderForm f;
    f.A = MatrixXd::Zero(2 * n, 2 * n);
    f.A.topRightCorner(n, n).setIdentity();
    f.A.bottomLeftCorner(n, n) = -Minv.solve(MatrixXd(sys.K));
    f.A.bottomRightCorner(n, n) = -Minv.solve(MatrixXd(sys.C));
    f.G = MatrixXd::Zero(2 * n, 2);
    f.G.bottomRows(n) = Minv.solve(sys.P);
    return f;
}

void write_matrix_market(std::ostream& os, const SparseMatrix& A) {
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << A.rows() << ' ' << A.cols() << ' ' << A.nonZeros() << '\n';
    const auto old = os.precision(17);
    for (int k = 0; k < A.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(A, k); it; ++it)
            os << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
    os.precision(old);
}

}  // namespace flexwing
