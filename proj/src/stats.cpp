#include "fdb/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fdb/parallel.hpp"
#include "fdb/rng.hpp"

namespace fdb {

double quantile(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) return 0.0;
    const double rank = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(rank);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = rank - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

PathStatistics path_statistics(std::span<const double> x, const TimeGrid& grid, double z_thresh,
                               double t_min, std::span<const double> alphas) {
    if (!(t_min > 0.0) || !(t_min < grid.horizon))
        throw std::domain_error("path_statistics: need 0 < t_min < horizon");
    for (double a : alphas)
        if (!(a > 0.0 && a < 1.0))
            throw std::domain_error("path_statistics: exponents must lie in (0, 1)");
    if (x.size() != static_cast<std::size_t>(grid.n_points()))
        throw std::invalid_argument("path_statistics: path length does not match grid");

    PathStatistics out;
    std::int64_t last_zero_idx = -1;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] <= z_thresh) last_zero_idx = static_cast<std::int64_t>(i);
    if (last_zero_idx >= 0) out.last_zero = grid.t(last_zero_idx);

    const std::size_t min_from =
        last_zero_idx < 0 ? 0
                          : std::min(static_cast<std::size_t>(last_zero_idx + 1), x.size() - 1);
    double mn = x[min_from];
    for (std::size_t i = min_from; i < x.size(); ++i) mn = std::min(mn, x[i]);
    out.min_after = mn;

    out.sup_ratio_alpha.reserve(alphas.size());
    for (double alpha : alphas) out.sup_ratio_alpha.emplace_back(alpha, 0.0);
    out.sqrt_ratio = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double t = grid.t(static_cast<std::int64_t>(i));
        if (t < t_min) continue;
        for (auto& [alpha, sup] : out.sup_ratio_alpha)
            sup = std::max(sup, x[i] / std::pow(t, alpha));
        out.sqrt_ratio = std::max(out.sqrt_ratio, x[i] / std::sqrt(t));
    }
    return out;
}

PathStatistics path_statistics(const ReflectionDecomposition& decomp, double t_min,
                               std::span<const double> alphas) {
    return path_statistics(decomp.x, decomp.grid, decomp.z_thresh, t_min, alphas);
}

SweepResult sweep_in_a(const SdeParams& base, std::span<const double> a_values,
                       const FbmSample& fbm, const EpsilonSchedule& schedule, double t_min,
                       std::span<const double> alphas) {
    if (a_values.empty()) throw std::invalid_argument("sweep_in_a: empty parameter list");
    for (std::size_t i = 0; i < a_values.size(); ++i) {
        if (!(a_values[i] >= 0.0))
            throw std::invalid_argument("sweep_in_a: drift coefficients must be >= 0");
        if (i > 0 && !(a_values[i] < a_values[i - 1]))
            throw std::invalid_argument("sweep_in_a: values must be strictly decreasing");
    }
    if (t_min <= 0.0) t_min = fbm.grid.horizon / 4.0;
    const double default_alpha[] = {0.75};
    if (alphas.empty()) alphas = default_alpha;

    SweepResult out;
    out.seed = fbm.seed;
    const double z_thresh = schedule.finest();
    std::vector<double> prev;
    for (double a : a_values) {
        SdeParams p = base;
        p.a = a;
        LimitResult run = epsilon_limit(p, fbm, schedule);
        const auto& x = run.path.values;
        out.a_values.push_back(a);
        out.stats.push_back(path_statistics(x, fbm.grid, z_thresh, t_min, alphas));
        if (!prev.empty()) {
            // larger a ran first, so prev should dominate
            double mx = 0.0;
            std::vector<double> viol(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) {
                viol[i] = std::max(0.0, x[i] - prev[i]);
                mx = std::max(mx, viol[i]);
            }
            std::sort(viol.begin(), viol.end());
            out.violation_max.push_back(mx);
            out.violation_p99.push_back(quantile(viol, 0.99));
        }
        prev = x;
    }
    return out;
}

AToZeroResult a_to_zero_limit(const SdeParams& base, std::span<const double> a_schedule,
                              const FbmSample& fbm, const EpsilonSchedule& schedule) {
    if (a_schedule.empty()) throw std::invalid_argument("a_to_zero_limit: empty schedule");
    for (std::size_t i = 0; i < a_schedule.size(); ++i) {
        if (!(a_schedule[i] > 0.0))
            throw std::invalid_argument("a_to_zero_limit: drift coefficients must be > 0");
        if (i > 0 && !(a_schedule[i] < a_schedule[i - 1]))
            throw std::invalid_argument("a_to_zero_limit: schedule must be strictly decreasing");
    }

    AToZeroResult out;
    std::vector<double> f(fbm.values.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = base.x0 + base.sigma * fbm.values[i];
    out.skorokhod = skorokhod_map(f);

    for (double a : a_schedule) {
        SdeParams p = base;
        p.a = a;
        LimitResult run = epsilon_limit(p, fbm, schedule);
        double gap = 0.0;
        for (std::size_t i = 0; i < run.path.values.size(); ++i)
            gap = std::max(gap, std::abs(run.path.values[i] - out.skorokhod.g[i]));
        out.a_values.push_back(a);
        out.skorokhod_gap.push_back(gap);
        if (a == a_schedule.back()) {
            // a * int ds/X + L collapses to a times the received drift
            out.l_tilde.resize(run.path.drift_sum.size());
            for (std::size_t i = 0; i < out.l_tilde.size(); ++i)
                out.l_tilde[i] = a * run.path.drift_sum[i];
            out.limit_path = std::move(run.path);
        }
    }
    return out;
}

EnsembleReport ensemble_run(const EnsembleConfig& config) {
    if (config.n_paths < 100)
        throw std::invalid_argument("ensemble_run: need at least 100 paths");
    config.params.validate();
    config.grid.validate();

    const double z_thresh = config.z_thresh > 0.0 ? config.z_thresh : config.params.epsilon;
    const double t_min = config.t_min > 0.0 ? config.t_min : config.grid.horizon / 4.0;
    const double quarter_start = 0.75 * config.grid.horizon;
    const std::int64_t n_paths = config.n_paths;

    const CirculantFbmSampler sampler(config.grid, config.params.hurst);

    std::vector<double> sqrt_ratios(n_paths), x_T(n_paths);
    std::vector<char> hit_zero(n_paths), positive_quarter(n_paths);

    parallel_for(
        n_paths,
        [&](std::int64_t i) {
            const std::uint64_t seed =
                path_seed(config.master_seed, static_cast<std::uint64_t>(i));
            const FbmSample fbm = sampler.sample(seed);
            const RegularizedPath path = euler_regularized(config.params, fbm);
            const auto& x = path.values;

            double mn = x[0], mn_quarter = x.back(), ratio = 0.0;
            for (std::size_t j = 0; j < x.size(); ++j) {
                const double t = config.grid.t(static_cast<std::int64_t>(j));
                mn = std::min(mn, x[j]);
                if (t >= quarter_start) mn_quarter = std::min(mn_quarter, x[j]);
                if (j >= 1 && t >= t_min) ratio = std::max(ratio, x[j] / std::sqrt(t));
            }
            hit_zero[i] = mn <= z_thresh ? 1 : 0;
            positive_quarter[i] = mn_quarter > z_thresh ? 1 : 0;
            sqrt_ratios[i] = ratio;
            x_T[i] = x.back();
        },
        config.n_threads);

    EnsembleReport rep;
    rep.n_paths = n_paths;
    rep.config = config;

    std::int64_t hits = 0, positives = 0;
    double mean = 0.0, m2 = 0.0;
    for (std::int64_t i = 0; i < n_paths; ++i) {
        hits += hit_zero[i];
        positives += positive_quarter[i];
        const double d = x_T[i] - mean;
        mean += d / static_cast<double>(i + 1);
        m2 += d * (x_T[i] - mean);
    }
    rep.zero_hit_fraction = static_cast<double>(hits) / static_cast<double>(n_paths);
    rep.positive_final_quarter_fraction =
        static_cast<double>(positives) / static_cast<double>(n_paths);
    rep.x_T_mean = mean;
    rep.x_T_se = n_paths > 1 ? std::sqrt(m2 / static_cast<double>(n_paths - 1) /
                                         static_cast<double>(n_paths))
                             : 0.0;

    std::sort(sqrt_ratios.begin(), sqrt_ratios.end());
    std::sort(x_T.begin(), x_T.end());
    rep.sqrt_ratio_q05 = quantile(sqrt_ratios, 0.05);
    rep.sqrt_ratio_q50 = quantile(sqrt_ratios, 0.50);
    rep.sqrt_ratio_q95 = quantile(sqrt_ratios, 0.95);
    rep.x_T_q05 = quantile(x_T, 0.05);
    rep.x_T_q50 = quantile(x_T, 0.50);
    rep.x_T_q95 = quantile(x_T, 0.95);
    rep.sqrt_ratios = std::move(sqrt_ratios);
    rep.x_T = std::move(x_T);
    return rep;
}

}  // namespace fdb
