#pragma once

#include "flexwing/fem.hpp"
#include "flexwing/model.hpp"
#include "flexwing/simulation.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace flexwing {

struct ConvergenceRow {
    int elements = 0;
    double dt = 0.0;
    double error = 0.0;
    double order = 0.0;  // NaN on the first row
};

// Energy-norm error of the static bending solve under a unit tip force against
// the exact curvature (l - y) / EI, integrated with 8 Gauss points per element.
std::vector<ConvergenceRow> static_bending_convergence(const WingModel& model, const std::vector<int>& meshes);
// Same for torsion under a unit tip torque (linear elements, order 1 expected).
std::vector<ConvergenceRow> static_torsion_convergence(const WingModel& model, const std::vector<int>& meshes);

// Max nodal error of the static cantilever deflection y^2 (3l - y) / (6 EI) with constant EI.
// Hermite cubics reproduce it exactly; what remains is round-off amplified by the O(n^4)
// condition number of the clamped stiffness.
double cubic_reproduction_error(double span, double EI, int elements);

// Relative L2 difference of the displacement vectors over the common output times of two runs.
double relative_l2_difference(const Trajectory& a, const Trajectory& reference);

// Newmark at each dt against the matrix-exponential reference at the smallest dt.
// Outputs are compared every `sample_interval` seconds.
std::vector<ConvergenceRow> temporal_convergence(const DiscreteSystem& sys, const InitialCondition& ic,
                                                 const Disturbance& u, SimulationConfig base,
                                                 const std::vector<double>& dts, double sample_interval = 0.04);

struct ConvergenceReport {
    std::vector<ConvergenceRow> bending, torsion, temporal;
    std::vector<std::pair<int, double>> cubic;
};

// Rows "study,elements,dt_s,error,order".
void write_convergence_csv(std::ostream& os, const ConvergenceReport& r, const std::vector<std::string>& preamble = {});

}  // namespace flexwing
