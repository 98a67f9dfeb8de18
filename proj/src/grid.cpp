#include "qcfd/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qcfd {

GridSpec GridSpec::periodic(int L, double domain_length) {
    GridSpec s;
    s.L = L;
    s.N = 1 << L;
    s.domain_length = domain_length;
    s.dx = domain_length / s.N;
    s.boundary = Boundary::Periodic;
    s.validate();
    return s;
}

GridSpec GridSpec::dirichlet(int L, double bc_left, double bc_right, double domain_length) {
    GridSpec s = periodic(L, domain_length);
    s.boundary = Boundary::Dirichlet;
    s.bc_left = bc_left;
    s.bc_right = bc_right;
    return s;
}

void GridSpec::validate() const {
    if (L < 1 || L > 30) throw std::invalid_argument("GridSpec: L must be in [1, 30]");
    if (N != (1 << L)) throw std::invalid_argument("GridSpec: N != 2^L");
    if (!(dx > 0.0)) throw std::invalid_argument("GridSpec: dx must be positive");
}

Field::Field(GridSpec s, Eigen::VectorXd v) : spec(std::move(s)), values(std::move(v)) {
    if (values.size() != spec.N)
        throw std::invalid_argument("Field: values.size() != spec.N");
}

void BurgersConfig::validate() const {
    spec.validate();
    if (nu < 0.0) throw std::invalid_argument("BurgersConfig: nu must be >= 0");
    if (!(dt > 0.0)) throw std::invalid_argument("BurgersConfig: dt must be > 0");
    if (t_final < 0.0) throw std::invalid_argument("BurgersConfig: t_final must be >= 0");
    if (ic == InitialCondition::Custom && custom_ic.size() != spec.N)
        throw std::invalid_argument("BurgersConfig: custom_ic length != N");
}

int BurgersConfig::steps() const {
    if (t_final <= 0.0) return 0;
    // Guard against 0.2/1e-4 rounding up to 2001.
    return static_cast<int>(std::ceil(t_final / dt - 1e-9));
}

int BurgersConfig::effective_snapshot_stride() const {
    if (snapshot_stride > 0) return snapshot_stride;
    return std::max(1, steps() / 100);
}

Field initial_field(const BurgersConfig& cfg) {
    const GridSpec& s = cfg.spec;
    Eigen::VectorXd v(s.N);
    switch (cfg.ic) {
        case InitialCondition::SinFull:
            for (int i = 0; i < s.N; ++i)
                v[i] = std::sin(2.0 * std::numbers::pi * s.x(i) / s.domain_length);
            break;
        case InitialCondition::NegSinHalf:
            for (int i = 0; i < s.N; ++i)
                v[i] = -std::sin(std::numbers::pi * s.x(i) / s.domain_length);
            break;
        case InitialCondition::Custom:
            v = cfg.custom_ic;
            break;
    }
    return Field(s, std::move(v));
}

double stable_dt_limit(const GridSpec& spec, double nu, double umax) {
    const double adv = spec.dx / std::max(std::abs(umax), 1e-12);
    if (nu <= 0.0) return adv;
    return std::min(spec.dx * spec.dx / (2.0 * nu), adv);
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> derivative_matrices(const GridSpec& spec) {
    spec.validate();
    const int n = spec.N;
    const double c1 = 1.0 / (2.0 * spec.dx);
    const double c2 = 1.0 / (spec.dx * spec.dx);
    Eigen::MatrixXd d1 = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        if (i + 1 < n) {
            d1(i, i + 1) = c1;
            d2(i, i + 1) = c2;
        }
        if (i - 1 >= 0) {
            d1(i, i - 1) = -c1;
            d2(i, i - 1) = c2;
        }
        d2(i, i) = -2.0 * c2;
    }
    if (spec.boundary == Boundary::Periodic && n > 1) {
        d1(0, n - 1) = -c1;
        d1(n - 1, 0) = c1;
        d2(0, n - 1) = c2;
        d2(n - 1, 0) = c2;
    }
    return {std::move(d1), std::move(d2)};
}

namespace {

// Shared stepping kernel; d1/d2 must match u.spec.
Eigen::VectorXd euler_rhs(const GridSpec& spec, const Eigen::VectorXd& u, double nu,
                          const Eigen::MatrixXd& d1, const Eigen::MatrixXd& d2) {
    Eigen::VectorXd du = d1 * u;
    Eigen::VectorXd d2u = d2 * u;
    if (spec.boundary == Boundary::Dirichlet) {
        const int n = spec.N;
        const double c1 = 1.0 / (2.0 * spec.dx);
        const double c2 = 1.0 / (spec.dx * spec.dx);
        // Ghost nodes: u(-dx) = bc_left, u(domain_length) = bc_right.
        du[0] -= spec.bc_left * c1;
        du[n - 1] += spec.bc_right * c1;
        d2u[0] += spec.bc_left * c2;
        d2u[n - 1] += spec.bc_right * c2;
    }
    return (-u.array() * du.array() + nu * d2u.array()).matrix();
}

Eigen::VectorXd step_values(const GridSpec& spec, const Eigen::VectorXd& u, double nu,
                            double dt, const Eigen::MatrixXd& d1, const Eigen::MatrixXd& d2) {
    Eigen::VectorXd out = u + dt * euler_rhs(spec, u, nu, d1, d2);
    if (spec.boundary == Boundary::Dirichlet) out[0] = spec.bc_left;
    return out;
}

}  // namespace

Field fdm_step(const Field& u, double nu, double dt, bool allow_unstable) {
    if (!(dt > 0.0)) throw std::invalid_argument("fdm_step: dt must be > 0");
    if (!allow_unstable) {
        const double umax = u.values.size() ? u.values.cwiseAbs().maxCoeff() : 0.0;
        const double limit = stable_dt_limit(u.spec, nu, umax);
        if (dt > limit)
            throw std::invalid_argument("fdm_step: dt " + std::to_string(dt) +
                                        " exceeds stability limit " + std::to_string(limit));
    }
    auto [d1, d2] = derivative_matrices(u.spec);
    return Field(u.spec, step_values(u.spec, u.values, nu, dt, d1, d2));
}

FdmResult fdm_solve(const BurgersConfig& cfg) {
    cfg.validate();
    Field u0 = initial_field(cfg);
    if (!cfg.allow_unstable_dt) {
        const double umax = u0.values.cwiseAbs().maxCoeff();
        const double limit = stable_dt_limit(cfg.spec, cfg.nu, umax);
        if (cfg.dt > limit)
            throw std::invalid_argument("fdm_solve: dt " + std::to_string(cfg.dt) +
                                        " exceeds stability limit " + std::to_string(limit) +
                                        " (set allow_unstable_dt to override)");
    }
    const int n_steps = cfg.steps();
    const int stride = cfg.effective_snapshot_stride();
    auto [d1, d2] = derivative_matrices(cfg.spec);

    FdmResult res;
    Eigen::VectorXd u = u0.values;
    res.snapshots.emplace_back(cfg.spec, u);
    res.snapshot_steps.push_back(0);
    for (int k = 1; k <= n_steps; ++k) {
        u = step_values(cfg.spec, u, cfg.nu, cfg.dt, d1, d2);
        if (!u.allFinite())
            throw NumericError("fdm_solve: non-finite values at step " + std::to_string(k) +
                               " (blow-up); reduce dt");
        if (k % stride == 0 || k == n_steps) {
            res.snapshots.emplace_back(cfg.spec, u);
            res.snapshot_steps.push_back(k);
        }
    }
    res.final = Field(cfg.spec, std::move(u));
    return res;
}

}  // namespace qcfd
