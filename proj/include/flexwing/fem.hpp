#pragma once

#include "flexwing/model.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <iosfwd>
#include <memory>
#include <vector>

namespace flexwing {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Mesh {
    std::vector<double> nodes;  // 0 = y_0 < ... < y_N = l

    static Mesh uniform(double span, int n_elements);
    int n_elements() const { return static_cast<int>(nodes.size()) - 1; }
    double span() const { return nodes.back(); }
    double h(int e) const { return nodes[e + 1] - nodes[e]; }
    // Element containing y (the left one at interior nodes).
    int locate(double y) const;
    void validate() const;
};

// Per free node i = 1..N the unknowns are (w, w_y, phi), stored at 3(i-1)+{0,1,2}.
// The root node is eliminated.
struct DofMap {
    int n_free_nodes = 0;

    explicit DofMap(int n_elements = 0) : n_free_nodes(n_elements) {}
    int size() const { return 3 * n_free_nodes; }
    // -1 for the eliminated root node
    int w(int node) const { return node == 0 ? -1 : 3 * (node - 1); }
    int slope(int node) const { return node == 0 ? -1 : 3 * (node - 1) + 1; }
    int phi(int node) const { return node == 0 ? -1 : 3 * (node - 1) + 2; }
    int tip_w() const { return w(n_free_nodes); }
    int tip_slope() const { return slope(n_free_nodes); }
    int tip_phi() const { return phi(n_free_nodes); }
    std::array<int, 4> bending(int e) const { return {w(e), slope(e), w(e + 1), slope(e + 1)}; }
    std::array<int, 2> torsion(int e) const { return {phi(e), phi(e + 1)}; }
};

enum class LoopMode { OpenLoop, ClosedLoop };

// Cubic Hermite shape functions on an element of length h, local xi in [0, 1].
struct HermiteShape {
    std::array<double, 4> N, dN, d2N, d3N;
    HermiteShape(double xi, double h);
};

struct DiscreteSystem {
    WingModel model;
    ControlLaw law;
    LoopMode mode = LoopMode::ClosedLoop;
    Mesh mesh;
    DofMap dofs;

    // Component matrices; M = M_struct + store, C = C_kv + C_aero + C_fb, K = K_el + K_aero + K_fb.
    SparseMatrix M_struct, M_store, K_el, K_aero, K_fb, C_kv, C_aero, C_fb;
    SparseMatrix M, C, K;
    MatrixXd P;  // n x 2 map from (u1, u2) to nodal loads

    int size() const { return dofs.size(); }
    VectorXd load(const Vec2& u) const { return P * u; }
};

struct AssemblyOptions {
    int quadrature_points = 4;
};

DiscreteSystem assemble(const WingModel& model, const ControlLaw& law, const Mesh& mesh, LoopMode mode,
                        AssemblyOptions opts = {});

// Displacement/velocity pair of the semi-discrete system.
struct DiscreteState {
    VectorXd q;
    VectorXd v;
};

// Nodal values and slopes of the initial fields.
DiscreteState interpolate(const InitialCondition& ic, const Mesh& mesh);

// Field values at y from the nodal vector q.
struct FieldValues {
    double w = 0, dw = 0, d2w = 0, d3w = 0;
    double phi = 0, dphi = 0;
};
FieldValues evaluate_fields(const Mesh& mesh, const DofMap& dofs, const VectorXd& q, double y);

// L2 norms of w, w', w'', phi, phi' by per-element Gauss quadrature and exact
// sup norms of w, w' (cubic/quadratic extrema per element) and phi.
struct FieldNorms {
    double w_l2 = 0, dw_l2 = 0, d2w_l2 = 0, phi_l2 = 0, dphi_l2 = 0;
    double w_sup = 0, dw_sup = 0, phi_sup = 0;
};
FieldNorms field_norms(const Mesh& mesh, const DofMap& dofs, const VectorXd& q, int quadrature_points = 5);

// x' = A x + G u with x = (q, v).
struct FirstOrderForm {
    MatrixXd A;
    MatrixXd G;
};
FirstOrderForm first_order_form(const DiscreteSystem& sys);

// Factorized linear solve; dense LU up to kDenseLimit unknowns, sparse LU beyond.
class LinearSolver {
public:
    static constexpr int kDenseLimit = 768;
    LinearSolver() = default;
    explicit LinearSolver(const SparseMatrix& A);
    VectorXd solve(const VectorXd& b) const;
    MatrixXd solve(const MatrixXd& B) const;
    int size() const { return n_; }

private:
    int n_ = 0;
    bool dense_ = true;
    Eigen::PartialPivLU<MatrixXd> lu_;
    std::shared_ptr<Eigen::SparseLU<SparseMatrix>> sparse_;
};

void write_matrix_market(std::ostream& os, const SparseMatrix& A);

}  // namespace flexwing
