#include "qcfd/tt_solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace qcfd {

void TtSolveConfig::validate() const {
    burgers.validate();
    policy.validate();
    if (burgers.spec.boundary != Boundary::Periodic)
        throw std::invalid_argument("TtSolveConfig: compressed solve requires periodic boundaries");
}

std::pair<Mps, double> tt_step(const Mps& u, double nu, double dt, const Mpo& d1,
                               const Mpo& d2, const TruncationPolicy& policy,
                               bool truncate_each_op) {
    double discarded = 0.0;
    auto maybe_compress = [&](Mps m) {
        if (!truncate_each_op) return m;
        auto [out, w] = truncate(m, policy);
        discarded += w;
        return out;
    };

    Mps advection = maybe_compress(mps_hadamard(u, mpo_apply(d1, u)));
    Mps diffusion = mpo_apply(d2, u);
    Mps rhs = maybe_compress(
        mps_add(mps_scale(advection, -dt), mps_scale(diffusion, nu * dt)));
    auto [next, w] = truncate(mps_add(u, rhs), policy);
    discarded += w;
    return {std::move(next), discarded};
}

TtSolveResult tt_solve(const TtSolveConfig& cfg) {
    cfg.validate();
    const Field u0 = initial_field(cfg.burgers);
    if (!cfg.burgers.allow_unstable_dt) {
        const double umax = u0.values.cwiseAbs().maxCoeff();
        const double limit = stable_dt_limit(cfg.burgers.spec, cfg.burgers.nu, umax);
        if (cfg.burgers.dt > limit)
            throw std::invalid_argument("tt_solve: dt exceeds stability limit " +
                                        std::to_string(limit) +
                                        " (set allow_unstable_dt to override)");
    }

    auto [d1, d2] = derivative_mpos(cfg.burgers.spec.L, cfg.burgers.spec.dx);
    // Lossless encoding first so chi sweeps share one canonical start.
    Mps u = encode_mps(u0, TruncationPolicy::unlimited());
    u = truncate(u, cfg.policy).first;

    const int n_steps = cfg.burgers.steps();
    const int stride = cfg.burgers.effective_snapshot_stride();

    TtSolveResult res;
    TtDiagnostics& diag = res.diagnostics;
    diag.steps = n_steps;
    diag.snapshots.push_back(decode_mps(u, cfg.burgers.spec));
    diag.snapshot_steps.push_back(0);

    for (int k = 1; k <= n_steps; ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        auto [next, w] = tt_step(u, cfg.burgers.nu, cfg.burgers.dt, d1, d2, cfg.policy,
                                 cfg.truncate_each_op);
        u = std::move(next);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        if (cfg.record_diagnostics) {
            diag.max_bond.push_back(u.max_bond());
            diag.discarded_weight.push_back(w);
            diag.seconds.push_back(secs);
        }
        if (!std::isfinite(mps_norm(u)))
            throw TtAbortError("tt_solve: non-finite state norm at step " + std::to_string(k),
                               std::move(diag));
        if (k % stride == 0 || k == n_steps) {
            diag.snapshots.push_back(decode_mps(u, cfg.burgers.spec));
            diag.snapshot_steps.push_back(k);
        }
    }
    res.final = std::move(u);
    return res;
}

}  // namespace qcfd
