#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "qcfd/common.hpp"

namespace qcfd {

enum class Boundary { Periodic, Dirichlet };

/// Uniform 1D grid with N = 2^L points x_i = i*dx on [0, domain_length).
/// In Dirichlet mode the left boundary is the grid point x_0 = 0 and the
/// right boundary is the ghost node x_N = domain_length; bc_left/bc_right
/// hold the prescribed values there.
struct GridSpec {
    int L = 0;
    int N = 0;
    double domain_length = 1.0;
    double dx = 0.0;
    Boundary boundary = Boundary::Periodic;
    double bc_left = 0.0;
    double bc_right = 0.0;

    static GridSpec periodic(int L, double domain_length = 1.0);
    static GridSpec dirichlet(int L, double bc_left, double bc_right,
                              double domain_length = 1.0);

    double x(int i) const { return static_cast<double>(i) * dx; }
    void validate() const;
};

/// Real-valued samples of u on a grid.
struct Field {
    GridSpec spec;
    Eigen::VectorXd values;

    Field() = default;
    Field(GridSpec s, Eigen::VectorXd v);
};

enum class InitialCondition { SinFull, NegSinHalf, Custom };

struct BurgersConfig {
    GridSpec spec;
    double nu = 0.05;       // kinematic viscosity
    double dt = 1e-4;       // time step
    double t_final = 0.2;
    InitialCondition ic = InitialCondition::SinFull;
    Eigen::VectorXd custom_ic;  // used when ic == Custom
    int snapshot_stride = 0;    // 0 -> max(1, steps/100)
    bool allow_unstable_dt = false;

    void validate() const;
    int steps() const;
    int effective_snapshot_stride() const;
};

Field initial_field(const BurgersConfig& cfg);

/// Largest explicit-Euler time step accepted for (nu, dx, umax):
/// min(dx^2/(2 nu), dx/max(umax, 1e-12)). nu = 0 drops the diffusive limit.
double stable_dt_limit(const GridSpec& spec, double nu, double umax);

/// Second-order centered first/second derivative matrices. Periodic mode
/// returns the circulant forms; Dirichlet mode zeroes the wrap-around
/// corners (ghost-value contributions are affine and handled by fdm_step).
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> derivative_matrices(const GridSpec& spec);

/// One explicit Euler step: u + dt * (-u .* (D1 u) + nu * (D2 u)).
Field fdm_step(const Field& u, double nu, double dt, bool allow_unstable = false);

struct FdmResult {
    Field final;
    std::vector<Field> snapshots;
    std::vector<int> snapshot_steps;
};

/// Marches ceil(t_final/dt) Euler steps from the initial condition,
/// recording snapshots at the configured stride (step 0 and the final step
/// are always included). Throws NumericError if the solution blows up.
FdmResult fdm_solve(const BurgersConfig& cfg);

}  // namespace qcfd
