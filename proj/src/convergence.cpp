#include "flexwing/convergence.hpp"

#include "flexwing/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace flexwing {

namespace {

void fill_orders(std::vector<ConvergenceRow>& rows, bool by_mesh) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == 0 || !(rows[i].error > 0) || !(rows[i - 1].error > 0)) {
            rows[i].order = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        double ratio = by_mesh ? double(rows[i].elements) / rows[i - 1].elements : rows[i - 1].dt / rows[i].dt;
        rows[i].order = std::log(rows[i - 1].error / rows[i].error) / std::log(ratio);
    }
}

// Nodal solution of K_el q = F with a unit entry at the tip value DOF.
VectorXd static_solution(const WingModel& model, const Mesh& mesh, bool bending) {
    ControlLaw law{0, 0, 1, 1};
    auto sys = assemble(model, law, mesh, LoopMode::OpenLoop);
    VectorXd F = VectorXd::Zero(sys.size());
    F(bending ? sys.dofs.tip_w() : sys.dofs.tip_phi()) = 1.0;
    return LinearSolver(sys.K_el).solve(F);
}

// sqrt(int EI (f'' - f_h'')^2) for bending, sqrt(int GJ (h' - h_h')^2) for torsion.
double energy_error(const WingModel& model, int elements, bool bending) {
    const double l = model.span;
    const Mesh mesh = Mesh::uniform(l, elements);
    const DofMap d(elements);
    const VectorXd q = static_solution(model, mesh, bending);
    const GaussRule& g = gauss_legendre(8);
    double acc = 0.0;
    for (int e = 0; e < elements; ++e) {
        const double a = mesh.nodes[e], h = mesh.h(e);
        for (int k = 0; k < g.size(); ++k) {
            const double y = a + 0.5 * h * (g.nodes[k] + 1.0);
            const FieldValues f = evaluate_fields(mesh, d, q, y);
            double diff = 0.0, stiff = 0.0;
            if (bending) {
                stiff = model.EI(y);
                diff = (l - y) / stiff - f.d2w;
            } else {
                stiff = model.GJ(y);
                diff = 1.0 / stiff - f.dphi;
            }
            acc += 0.5 * h * g.weights[k] * stiff * diff * diff;
        }
    }
    return std::sqrt(acc);
}

}  // namespace

std::vector<ConvergenceRow> static_bending_convergence(const WingModel& model, const std::vector<int>& meshes) {
    std::vector<ConvergenceRow> rows;
    for (int n : meshes) rows.push_back({n, 0.0, energy_error(model, n, true), 0.0});
    fill_orders(rows, true);
    return rows;
}

std::vector<ConvergenceRow> static_torsion_convergence(const WingModel& model, const std::vector<int>& meshes) {
    std::vector<ConvergenceRow> rows;
    for (int n : meshes) rows.push_back({n, 0.0, energy_error(model, n, false), 0.0});
    fill_orders(rows, true);
    return rows;
}

double cubic_reproduction_error(double span, double EI, int elements) {
    WingModel m = default_wing_model();
    m.span = span;
    m = with_constant_aero(std::move(m), 0, 0, 0, 0, 0, 0);
    m.rho = SpatialProfile::constant(1.0, span);
    m.Iw = SpatialProfile::constant(1.0, span);
    m.EI = SpatialProfile::constant(EI, span);
    m.GJ = SpatialProfile::constant(1.0, span);
    m.eta_w = SpatialProfile::constant(0.02, span);
    m.eta_phi = SpatialProfile::constant(0.02, span);
    const Mesh mesh = Mesh::uniform(span, elements);
    const DofMap d(elements);
    const VectorXd q = static_solution(m, mesh, true);
    double err = 0.0;
    for (int i = 1; i <= elements; ++i) {
        double y = mesh.nodes[i];
        double w = y * y * (3 * span - y) / (6 * EI);
        double dw = y * (2 * span - y) / (2 * EI);
        err = std::max({err, std::abs(q(d.w(i)) - w), std::abs(q(d.slope(i)) - dw)});
    }
    return err;
}

double relative_l2_difference(const Trajectory& a, const Trajectory& ref) {
    double num = 0.0, den = 0.0;
    std::size_t j = 0;
    int matched = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        while (j < ref.size() && ref.times[j] < a.times[i] - 1e-9) ++j;
        if (j == ref.size()) break;
        if (std::abs(ref.times[j] - a.times[i]) > 1e-9) continue;
        num += (a.q[i] - ref.q[j]).squaredNorm();
        den += ref.q[j].squaredNorm();
        ++matched;
    }
    if (matched == 0 || !(den > 0)) throw std::invalid_argument("trajectories share no nonzero output times");
    return std::sqrt(num / den);
}

std::vector<ConvergenceRow> temporal_convergence(const DiscreteSystem& sys, const InitialCondition& ic,
                                                 const Disturbance& u, SimulationConfig base,
                                                 const std::vector<double>& dts, double sample_interval) {
    if (dts.empty()) throw std::invalid_argument("empty dt sequence");
    auto stride_for = [&](double dt) {
        long s = std::lround(sample_interval / dt);
        if (s < 1 || std::abs(s * dt - sample_interval) > 1e-9 * sample_interval)
            throw std::invalid_argument("sample interval must be a multiple of every dt");
        return static_cast<int>(s);
    };
    base.snapshot_positions.clear();
    SimulationConfig rc = base;
    rc.dt = *std::min_element(dts.begin(), dts.end());
    rc.output_stride = stride_for(rc.dt);
    rc.integrator = Integrator::MatrixExponential;
    Trajectory ref = propagate_expm(sys, ic, u, rc);

    std::vector<ConvergenceRow> rows;
    for (double dt : dts) {
        SimulationConfig c = base;
        c.dt = dt;
        c.output_stride = stride_for(dt);
        c.integrator = Integrator::Newmark;
        Trajectory t = simulate(sys, ic, u, c);
        rows.push_back({sys.mesh.n_elements(), dt, relative_l2_difference(t, ref), 0.0});
    }
    fill_orders(rows, false);
    return rows;
}

void write_convergence_csv(std::ostream& os, const ConvergenceReport& r, const std::vector<std::string>& preamble) {
    for (const auto& l : preamble) os << "# " << l << '\n';
    os << "study,elements,dt_s,error,order\n";
    char buf[160];
    auto row = [&](const char* study, const ConvergenceRow& x) {
        if (std::isnan(x.order))
            std::snprintf(buf, sizeof buf, "%s,%d,%.6g,%.12e,\n", study, x.elements, x.dt, x.error);
        else
            std::snprintf(buf, sizeof buf, "%s,%d,%.6g,%.12e,%.6f\n", study, x.elements, x.dt, x.error, x.order);
        os << buf;
    };
    for (const auto& x : r.bending) row("bending_static_energy", x);
    for (const auto& x : r.torsion) row("torsion_static_energy", x);
    for (const auto& x : r.temporal) row("newmark_vs_expm", x);
    for (const auto& [n, e] : r.cubic) {
        std::snprintf(buf, sizeof buf, "cubic_reproduction,%d,0,%.12e,\n", n, e);
        os << buf;
    }
}

}  // namespace flexwing
