#pragma once

#include "flexwing/fem.hpp"
#include "flexwing/model.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace flexwing {

enum class Integrator { Newmark, MatrixExponential };

struct SimulationConfig {
    double t_end = 10.0;
    double dt = 1e-3;
    Integrator integrator = Integrator::Newmark;
    double beta = 0.25;
    double gamma = 0.5;
    int output_stride = 10;
    std::vector<double> snapshot_positions;
    // Accept initial data that violate the closed-loop boundary compatibility.
    bool mild_solution = false;
    double compatibility_tol = 1e-8;

    void validate() const;
};

// Thrown when the state stops being finite.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(long step, double time);
    long step;
    double time;
};

// Closed-loop compatibility B X0 = U(0) violated without the mild-solution override.
class CompatibilityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<VectorXd> q, v;
    std::vector<double> energy_H1;  // E(t) = |X|^2_{H,1} / 2
    std::vector<double> energy_H2;  // script E(t) = <X, X>_{H,2} / 2
    std::vector<double> w_tip, phi_tip;
    std::vector<double> u1, u2;
    std::vector<double> snapshot_positions;
    std::vector<std::vector<double>> w_snapshots, phi_snapshots;  // [time][position]

    std::size_t size() const { return times.size(); }
};

// Quadratic forms of the two inner products on the discrete space, assembled
// with their own Gauss rule.
class EnergyEvaluator {
public:
    EnergyEvaluator(const WingModel& model, const ControlLaw& law, const Mesh& mesh, int quadrature_points = 5);

    double energy_H1(const VectorXd& q, const VectorXd& v) const;
    double energy_H2(const VectorXd& q, const VectorXd& v) const;
    double norm_H1(const VectorXd& q, const VectorXd& v) const;

    const SparseMatrix& bending_stiffness() const { return Gb_; }
    const SparseMatrix& torsion_stiffness() const { return Gt_; }
    const SparseMatrix& bending_mass() const { return Mr_; }
    const SparseMatrix& torsion_mass() const { return Mi_; }

private:
    double eps1_, eps2_;
    SparseMatrix Gb_, Gt_, Mr_, Mi_;
};

// Newmark time stepping with one factorization per run.
class NewmarkIntegrator {
public:
    NewmarkIntegrator(const DiscreteSystem& sys, double dt, double beta = 0.25, double gamma = 0.5);

    // Acceleration consistent with the equation of motion at time t.
    VectorXd consistent_acceleration(const VectorXd& q, const VectorXd& v, const Vec2& u) const;
    // Advances (q, v, a) from t to t + dt with load u(t + dt).
    void step(VectorXd& q, VectorXd& v, VectorXd& a, const Vec2& u_next) const;

private:
    const DiscreteSystem* sys_;
    double dt_, beta_, gamma_;
    LinearSolver mass_;
    LinearSolver effective_;
};

// One step from t to t + dt (factorizes on every call; prefer NewmarkIntegrator in loops).
DiscreteState step_newmark(const DiscreteSystem& sys, const DiscreteState& state, double t, double dt,
                           const Disturbance& u, double beta = 0.25, double gamma = 0.5);

Trajectory simulate(const DiscreteSystem& sys, const InitialCondition& ic, const Disturbance& u,
                    const SimulationConfig& config);
Trajectory simulate(const DiscreteSystem& sys, const DiscreteState& x0, const Disturbance& u,
                    const SimulationConfig& config);

// Variation of constants with a dense matrix exponential; on each step the
// disturbance is interpolated at 8 Gauss nodes and convolved exactly. Meshes up to kExpmMaxElements.
inline constexpr int kExpmMaxElements = 32;
Trajectory propagate_expm(const DiscreteSystem& sys, const InitialCondition& ic, const Disturbance& u,
                          const SimulationConfig& config);
Trajectory propagate_expm(const DiscreteSystem& sys, const DiscreteState& x0, const Disturbance& u,
                          const SimulationConfig& config);

// Boundary residual B X0 - U(0) of polynomial initial data (closed loop).
Vec2 compatibility_residual(const WingModel& model, const ControlLaw& law, const InitialCondition& ic, const Vec2& u0);

struct DecayFit {
    double rate = 0.0;  // -slope of log energy
    double intercept = 0.0;
    int samples = 0;
};
// Least-squares fit of log E(t) over the samples with E > floor * E(0).
inline constexpr double kEnergyFloor = 1e-12;
DecayFit decay_fit(const std::vector<double>& times, const std::vector<double>& energy);
DecayFit decay_fit(const Trajectory& traj);

// CSV with header row t,E,Ecal,w_tip,phi_tip,u1,u2. `preamble` lines are written first, prefixed by '#'.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const std::vector<std::string>& preamble = {});
// Rows = output times, columns = snapshot positions.
void write_snapshot_csv(std::ostream& os, const Trajectory& traj, bool bending,
                        const std::vector<std::string>& preamble = {});

}  // namespace flexwing
