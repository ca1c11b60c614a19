#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "fdb/limit.hpp"

namespace fdb {

// Per-path summary of the long-run pathwise quantities.
struct PathStatistics {
    std::optional<double> last_zero;  // last grid time with X <= z_thresh
    double min_after = 0.0;           // min of X after last_zero, or global min
    std::vector<std::pair<double, double>> sup_ratio_alpha;  // alpha -> sup X_t / t^alpha
    double sqrt_ratio = 0.0;          // sup over [t_min, T] of X_t / sqrt(t)
};

// Ratios are taken over grid points in [t_min, T]; the zero scan covers the
// whole grid. Requires 0 < t_min < T and each alpha in (0, 1).
PathStatistics path_statistics(std::span<const double> x, const TimeGrid& grid, double z_thresh,
                               double t_min, std::span<const double> alphas);

PathStatistics path_statistics(const ReflectionDecomposition& decomp, double t_min,
                               std::span<const double> alphas);

// Same-noise comparison across drift coefficients.
struct SweepResult {
    std::vector<double> a_values;
    std::vector<PathStatistics> stats;
    std::vector<double> violation_max;  // sup (X^{a_{k+1}} - X^{a_k})^+ per adjacent pair
    std::vector<double> violation_p99;  // 99th pct of that series over the grid
    std::uint64_t seed = 0;
};

// a_values must be strictly decreasing and nonnegative; every run shares the
// given sample. base.a and base.epsilon are ignored.
SweepResult sweep_in_a(const SdeParams& base, std::span<const double> a_values,
                       const FbmSample& fbm, const EpsilonSchedule& schedule,
                       double t_min = 0.0, std::span<const double> alphas = {});

// Limit of the construction as the drift coefficient vanishes, compared
// against the Skorokhod reflection of x0 + sigma B.
struct AToZeroResult {
    std::vector<double> a_values;
    RegularizedPath limit_path;        // run at the smallest a
    std::vector<double> l_tilde;       // a * int ds/X + L at the smallest a
    std::vector<double> skorokhod_gap;  // sup |X^a - g| per a
    SkorokhodResult skorokhod;         // reflection of x0 + sigma B
};

AToZeroResult a_to_zero_limit(const SdeParams& base, std::span<const double> a_schedule,
                              const FbmSample& fbm, const EpsilonSchedule& schedule);

struct EnsembleConfig {
    SdeParams params;
    TimeGrid grid{1.0, 10000};
    std::int64_t n_paths = 500;
    std::uint64_t master_seed = 1;
    double z_thresh = 0.0;  // <= 0: params.epsilon
    double t_min = 0.0;     // <= 0: horizon / 4
    unsigned n_threads = 0;
};

// Monte Carlo aggregates over independent paths (single-epsilon runs on the
// ensemble grid). Sorted per-path vectors are kept for downstream gates.
struct EnsembleReport {
    std::int64_t n_paths = 0;
    double zero_hit_fraction = 0.0;
    double positive_final_quarter_fraction = 0.0;
    double sqrt_ratio_q05 = 0.0, sqrt_ratio_q50 = 0.0, sqrt_ratio_q95 = 0.0;
    double x_T_mean = 0.0, x_T_se = 0.0;
    double x_T_q05 = 0.0, x_T_q50 = 0.0, x_T_q95 = 0.0;
    std::vector<double> sqrt_ratios;  // sorted
    std::vector<double> x_T;          // sorted
    EnsembleConfig config;
};

// Embarrassingly parallel over paths; path i uses seed splitmix64(master ^ i).
// Requires n_paths >= 100.
EnsembleReport ensemble_run(const EnsembleConfig& config);

double quantile(const std::vector<double>& sorted, double p);

}  // namespace fdb
