// Calibration runs behind the statistical gates in include/fdb/gates.hpp.
// Each section prints the raw numbers a gate was frozen from. Sections are
// selected by name on the command line.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "fdb/fbm.hpp"
#include "fdb/gates.hpp"
#include "fdb/limit.hpp"
#include "fdb/rng.hpp"
#include "fdb/sde.hpp"
#include "fdb/stats.hpp"

using namespace fdb;

namespace {

bool want(int argc, char** argv, const char* name) {
    for (int i = 1; i < argc; ++i)
        if (!std::strcmp(argv[i], name) || !std::strcmp(argv[i], "all")) return true;
    return false;
}

void pilot_bessel() {
    std::puts("== classical Bessel oracle: nu=3, x0=1, dt=1e-4, 1e4 paths ==");
    const TimeGrid grid(1.0, 10000);
    const CirculantFbmSampler sampler(grid, Hurst(0.5));
    const std::int64_t n_paths = 10000;
    double mean = 0.0, m2 = 0.0, max_end = 0.0;
    std::int64_t below_1e2 = 0, below_1e3 = 0, below_1e6 = 0;
    for (std::int64_t i = 0; i < n_paths; ++i) {
        const FbmSample w = sampler.sample(path_seed(7, i));
        const auto rho = euler_classical_bessel(3.0, 1.0, w);
        double mn = rho[0];
        for (double v : rho) mn = std::min(mn, v);
        if (mn <= 1e-2) ++below_1e2;
        if (mn <= 1e-3) ++below_1e3;
        if (mn <= 1e-6) ++below_1e6;
        const double sq = rho.back() * rho.back();
        max_end = std::max(max_end, rho.back());
        const double d = sq - mean;
        mean += d / static_cast<double>(i + 1);
        m2 += d * (sq - mean);
    }
    const double se = std::sqrt(m2 / (n_paths - 1.0) / n_paths);
    std::printf("mean rho_1^2 = %.6f (se %.6f, target 4.0), max rho_1 = %.3f\n", mean, se,
                max_end);
    std::printf("paths with min <= 1e-2: %lld, <= 1e-3: %lld, <= 1e-6: %lld\n",
                static_cast<long long>(below_1e2), static_cast<long long>(below_1e3),
                static_cast<long long>(below_1e6));
}

void eps_pair_violations(double dt, std::int64_t n, int seeds) {
    const TimeGrid grid(1.0, n);
    SdeParams p;  // x0=1, a=1, sigma=1, H=0.25
    for (std::uint64_t s = 1; s <= static_cast<std::uint64_t>(seeds); ++s) {
        const CirculantFbmSampler sampler(grid, p.hurst);
        const FbmSample fbm = sampler.sample(path_seed(s, 0));
        SdeParams p1 = p, p2 = p;
        p1.epsilon = 1e-4;
        p2.epsilon = 2e-4;
        const auto x1 = euler_regularized(p1, fbm).values;
        const auto x2 = euler_regularized(p2, fbm).values;
        std::vector<double> viol(x1.size());
        double mx = 0.0;
        std::int64_t cnt = 0;
        for (std::size_t i = 0; i < x1.size(); ++i) {
            viol[i] = std::max(0.0, x2[i] - x1[i]);
            mx = std::max(mx, viol[i]);
            if (viol[i] > 0.0) ++cnt;
        }
        std::sort(viol.begin(), viol.end());
        std::printf("dt=%.0e seed=%llu: viol frac %.4f, max %.3e, p99 %.3e\n", dt,
                    static_cast<unsigned long long>(s),
                    static_cast<double>(cnt) / static_cast<double>(x1.size()), mx,
                    quantile(viol, 0.99));
    }
}

void pilot_crit5() {
    std::puts("== epsilon-pair (1e-4, 2e-4) pointwise violations at production parameters ==");
    eps_pair_violations(1e-6, 1000000, 3);
    eps_pair_violations(1e-5, 100000, 3);
}

void pilot_crit6() {
    std::puts("== a->0 Skorokhod gap along a in {1e-1,1e-2,1e-3} ==");
    for (std::int64_t n : {10000L, 100000L}) {
        const TimeGrid grid(1.0, n);
        for (std::uint64_t s = 1; s <= 5; ++s) {
            const CirculantFbmSampler sampler(grid, Hurst(0.25));
            const FbmSample fbm = sampler.sample(path_seed(s, 0));
            SdeParams base;
            const double a_sched[] = {1e-1, 1e-2, 1e-3};
            EpsilonSchedule sched;
            sched.eps0 = 1.28e-2;  // descends to 1e-4
            const auto res = a_to_zero_limit(base, a_sched, fbm, sched);
            std::printf("n=%lld seed=%llu gaps: %.5f %.5f %.5f  monotone=%d\n",
                        static_cast<long long>(n), static_cast<unsigned long long>(s),
                        res.skorokhod_gap[0], res.skorokhod_gap[1], res.skorokhod_gap[2],
                        res.skorokhod_gap[0] >= res.skorokhod_gap[1] &&
                            res.skorokhod_gap[1] >= res.skorokhod_gap[2]);
        }
    }
}

void pilot_ensembles() {
    std::puts("== ensembles at dt=1e-4, 500 paths, seed 1 ==");
    for (double a : {10.0, 1.0, 0.01}) {
        EnsembleConfig ec;
        ec.params.a = a;
        ec.grid = TimeGrid(1.0, 10000);
        ec.n_paths = 500;
        ec.master_seed = 1;
        const EnsembleReport rep = ensemble_run(ec);
        double growth = 0.0;
        const double thr = gates::kGrowthRatioFactor * std::sqrt(2.0 * a);
        for (double r : rep.sqrt_ratios)
            if (r >= thr) growth += 1.0;
        growth /= static_cast<double>(rep.n_paths);
        std::printf(
            "a=%-5g zero_hit=%.4f pos_final_quarter=%.4f median_X1=%.4f (env %.4f) "
            "growth_frac=%.4f (thr %.4f)\n",
            a, rep.zero_hit_fraction, rep.positive_final_quarter_fraction, rep.x_T_q50,
            deterministic_envelope(1.0, a, 1.0), growth, thr);
    }
}

void pilot_ladder() {
    std::puts("== sup X_t/t^0.75 over [T/4,T], medians across 64 paths ==");
    for (double T : {1.0, 10.0, 100.0}) {
        const TimeGrid grid(T, static_cast<std::int64_t>(T * 1000));
        const CirculantFbmSampler sampler(grid, Hurst(0.25));
        std::vector<double> sups;
        for (std::int64_t i = 0; i < 64; ++i) {
            SdeParams p;
            const FbmSample fbm = sampler.sample(path_seed(11, static_cast<std::uint64_t>(i)));
            const auto path = euler_regularized(p, fbm);
            const double alphas[] = {0.75};
            const auto st = path_statistics(path.values, grid, p.epsilon, T / 4.0, alphas);
            sups.push_back(st.sup_ratio_alpha[0].second);
        }
        std::sort(sups.begin(), sups.end());
        std::printf("T=%-5g median=%.4f\n", T, quantile(sups, 0.5));
    }
}

void pilot_figures() {
    std::puts("== figure gates at dt=1e-6, seed 1 ==");
    const TimeGrid grid(1.0, 1000000);
    const CirculantFbmSampler sampler(grid, Hurst(0.25));
    const FbmSample fbm = sampler.sample(path_seed(1, 0));
    EpsilonSchedule sched;
    sched.eps0 = 1e-2;
    sched.ratio = 0.1;
    sched.max_levels = 3;
    sched.tol_limit = 1e-12;
    SdeParams base;

    auto decomp_at = [&](double a) {
        SdeParams p = base;
        p.a = a;
        return reflection_function(epsilon_limit(p, fbm, sched).path, fbm);
    };

    const auto d1 = decomp_at(1.0);
    double min_rhs = 1e300, min_x10 = 1e300;
    for (std::size_t i = 0; i < d1.x.size(); ++i)
        min_rhs = std::min(min_rhs, 1.0 + d1.drift_int[i] + fbm.values[i]);
    const auto d10 = decomp_at(10.0);
    for (double v : d10.x) min_x10 = std::min(min_x10, v);
    const auto d001 = decomp_at(0.01);
    std::printf("a=1:   min RHS = %.5f (want < 0), L_1 = %.5f, increase_points = %lld\n",
                min_rhs, d1.refl.back(), static_cast<long long>(d1.report.increase_points));
    std::printf("a=10:  min X = %.6f (z_thresh %.1e, want >), L_1 = %.3e\n", min_x10,
                d10.z_thresh, d10.refl.back());
    std::printf("a=.01: increase_points = %lld (want > a=1 count)\n",
                static_cast<long long>(d001.report.increase_points));
}

void pilot_fbm() {
    std::puts("== circulant sampler: n=512, 2e4 paths per H, seed 3 ==");
    for (double hv : {0.1, 0.25, 0.4, 0.5}) {
        const TimeGrid grid(1.0, 512);
        const CirculantFbmSampler sampler(grid, Hurst(hv));
        std::vector<FbmSample> samples(20000);
        for (std::size_t i = 0; i < samples.size(); ++i)
            samples[i] = sampler.sample(path_seed(3, i));
        const FbmReport rep = empirical_fbm_report(samples);
        std::printf("H=%.2f max_cov_se=%.3f lag1=%.5f (exp %.5f, se %.5f, dev %.2f se)\n", hv,
                    rep.max_cov_error_se, rep.lag1_autocorr, rep.lag1_expected, rep.lag1_se,
                    std::abs(rep.lag1_autocorr - rep.lag1_expected) / rep.lag1_se);
    }
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::puts("sections: bessel crit5 crit6 ensembles ladder figures fbm all");
        return 0;
    }
    if (want(argc, argv, "bessel")) pilot_bessel();
    if (want(argc, argv, "crit5")) pilot_crit5();
    if (want(argc, argv, "crit6")) pilot_crit6();
    if (want(argc, argv, "ensembles")) pilot_ensembles();
    if (want(argc, argv, "ladder")) pilot_ladder();
    if (want(argc, argv, "figures")) pilot_figures();
    if (want(argc, argv, "fbm")) pilot_fbm();
    return 0;
}
