#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fdb/sde.hpp"

namespace fdb {

// Geometric schedule eps_k = eps0 * ratio^k, k = 0..max_levels-1, driving
// the limit construction. tol_limit is the sup-norm gap below which two
// consecutive levels count as converged.
struct EpsilonSchedule {
    double eps0 = 1e-2;
    double ratio = 0.5;
    int max_levels = 8;
    double tol_limit = 1e-3;

    void validate() const;
    std::vector<double> levels() const;
    double finest() const;
};

struct LimitDiagnostics {
    std::vector<double> levels;            // epsilons actually run
    std::vector<double> sup_gaps;          // sup |X^{k+1} - X^k| per consecutive pair
    std::vector<double> mono_violation_max;  // sup (X^k - X^{k+1})^+ per pair
    std::vector<double> mono_violation_p99;  // 99th pct of that series over the grid
    bool converged = false;
};

struct LimitResult {
    RegularizedPath path;  // finest level run
    LimitDiagnostics diagnostics;
};

// Runs euler_regularized on the same sample at each schedule level,
// stopping once the sup-norm gap between consecutive levels drops below
// tol_limit. Never throws on non-convergence: converged is reported and the
// finest path returned either way. params.epsilon is ignored (the schedule
// provides it); requires params.hurst == fbm.hurst <= 1/2.
LimitResult epsilon_limit(const SdeParams& params, const FbmSample& fbm,
                          const EpsilonSchedule& schedule);

// Left-endpoint quadrature of 1/x with a hard cap:
//   I_{i+1} = I_i + min(1 / max(x_i, 0), cap) * dt,   1/0 -> cap.
std::vector<double> drift_integral(std::span<const double> x, double cap, double dt);

// Checks carried out on a decomposition; violations are reported, never
// thrown, so a failing run can still be inspected.
struct ReflectionReport {
    double l0 = 0.0;
    double min_increment = 0.0;           // min (L_{i+1} - L_i)
    std::int64_t localization_violations = 0;  // increases away from the zero set
    double ineq_residual_min = 0.0;       // min (X_i - x0 - a I_i - sigma B_i)
    std::int64_t increase_points = 0;     // steps with a reflection-scale kick
    double tol_mono = 1e-8;

    bool ok() const {
        return l0 == 0.0 && min_increment >= -tol_mono && localization_violations == 0 &&
               ineq_residual_min >= -tol_mono;
    }
};

// Triple (X, I, L): limit path, drift integral and reflection function,
// with X_i = x0 + a I_i + sigma B_i + L_i. The drift the path received
// while at the discrete zero set {X <= z_thresh} is booked into L; off the
// zero set it is booked into I. This keeps the identity exact at every
// index and makes L a nondecreasing staircase supported on the zero set.
struct ReflectionDecomposition {
    SdeParams params;
    TimeGrid grid;
    std::uint64_t fbm_seed = 0;
    double z_thresh = 0.0;
    double cap = 0.0;
    std::vector<double> x;
    std::vector<double> drift_int;
    std::vector<double> refl;
    ReflectionReport report;
};

// z_thresh <= 0 defaults to the path's epsilon (the finest schedule level);
// cap <= 0 defaults to 1/epsilon. Requires the sample the path was built on.
ReflectionDecomposition reflection_function(const RegularizedPath& path, const FbmSample& fbm,
                                            double z_thresh = 0.0, double cap = 0.0,
                                            double tol_mono = 1e-8);

// Skorokhod reflection of a path at zero:
//   Lambda_i = max(0, max_{j<=i} (-f_j)),  g_i = f_i + Lambda_i.
struct SkorokhodResult {
    std::vector<double> g;
    std::vector<double> regulator;
};

SkorokhodResult skorokhod_map(std::span<const double> f);

}  // namespace fdb
