#pragma once

#include <utility>
#include <vector>

#include "qcfd/tt.hpp"

namespace qcfd {

struct TtSolveConfig {
    BurgersConfig burgers;  // Periodic boundary only
    TruncationPolicy policy;
    bool record_diagnostics = true;
    bool truncate_each_op = false;  // compress intermediates too (perf experiments)

    void validate() const;
};

struct TtDiagnostics {
    std::vector<int> max_bond;           // per step
    std::vector<double> discarded_weight;  // per step
    std::vector<double> seconds;         // per step
    std::vector<Field> snapshots;        // decoded at the snapshot stride
    std::vector<int> snapshot_steps;
    int steps = 0;
};

/// Thrown when the compressed evolution produces non-finite values; carries
/// the diagnostics collected up to the failing step.
struct TtAbortError : NumericError {
    TtDiagnostics diagnostics;
    TtAbortError(const std::string& msg, TtDiagnostics diag)
        : NumericError(msg), diagnostics(std::move(diag)) {}
};

/// One explicit Euler step in compressed form:
///   truncate(u + dt * (-(u .* D1 u) + nu * D2 u), policy).
/// Returns the stepped state and the discarded weight of that truncation.
std::pair<Mps, double> tt_step(const Mps& u, double nu, double dt, const Mpo& d1,
                               const Mpo& d2, const TruncationPolicy& policy,
                               bool truncate_each_op = false);

struct TtSolveResult {
    Mps final;
    TtDiagnostics diagnostics;
};

/// Encodes the initial condition (losslessly, then truncated to the policy)
/// and marches ceil(t_final/dt) compressed Euler steps.
TtSolveResult tt_solve(const TtSolveConfig& cfg);

}  // namespace qcfd
