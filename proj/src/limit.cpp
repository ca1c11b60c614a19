#include "fdb/limit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fdb {

void EpsilonSchedule::validate() const {
    if (!(eps0 > 0.0)) throw std::domain_error("EpsilonSchedule: eps0 must be > 0");
    if (!(ratio > 0.0 && ratio < 1.0))
        throw std::domain_error("EpsilonSchedule: ratio must lie in (0, 1)");
    if (max_levels < 2) throw std::domain_error("EpsilonSchedule: max_levels must be >= 2");
    if (!(tol_limit > 0.0)) throw std::domain_error("EpsilonSchedule: tol_limit must be > 0");
}

std::vector<double> EpsilonSchedule::levels() const {
    validate();
    std::vector<double> out(static_cast<std::size_t>(max_levels));
    double e = eps0;
    for (auto& v : out) {
        v = e;
        e *= ratio;
    }
    return out;
}

double EpsilonSchedule::finest() const { return levels().back(); }

namespace {

double percentile(std::vector<double> v, double p) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const double rank = p * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(rank);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = rank - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[hi] * frac;
}

}  // namespace

LimitResult epsilon_limit(const SdeParams& params, const FbmSample& fbm,
                          const EpsilonSchedule& schedule) {
    schedule.validate();
    if (!(fbm.hurst == params.hurst))
        throw std::invalid_argument("epsilon_limit: sample Hurst index does not match params");
    if (params.hurst.value > 0.5)
        throw std::invalid_argument("epsilon_limit: limit construction requires H <= 1/2");

    LimitResult result;
    auto& diag = result.diagnostics;
    RegularizedPath prev;
    for (double eps : schedule.levels()) {
        SdeParams level = params;
        level.epsilon = eps;
        RegularizedPath cur = euler_regularized(level, fbm);
        diag.levels.push_back(eps);
        if (!prev.values.empty()) {
            double gap = 0.0, viol_max = 0.0;
            std::vector<double> viol(cur.values.size());
            for (std::size_t i = 0; i < cur.values.size(); ++i) {
                const double d = cur.values[i] - prev.values[i];
                gap = std::max(gap, std::abs(d));
                viol[i] = d < 0.0 ? -d : 0.0;  // smaller eps should dominate
                viol_max = std::max(viol_max, viol[i]);
            }
            diag.sup_gaps.push_back(gap);
            diag.mono_violation_max.push_back(viol_max);
            diag.mono_violation_p99.push_back(percentile(std::move(viol), 0.99));
            if (gap < schedule.tol_limit) {
                diag.converged = true;
                result.path = std::move(cur);
                return result;
            }
        }
        prev = std::move(cur);
    }
    result.path = std::move(prev);
    return result;
}

std::vector<double> drift_integral(std::span<const double> x, double cap, double dt) {
    if (!(cap > 0.0)) throw std::domain_error("drift_integral: cap must be > 0");
    std::vector<double> out(x.size());
    if (x.empty()) return out;
    out[0] = 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double integrand = x[i] > 0.0 ? std::min(1.0 / x[i], cap) : cap;
        acc += integrand * dt;
        out[i + 1] = acc;
    }
    return out;
}

ReflectionDecomposition reflection_function(const RegularizedPath& path, const FbmSample& fbm,
                                            double z_thresh, double cap, double tol_mono) {
    if (!(fbm.grid == path.grid) || !(fbm.hurst == path.params.hurst) ||
        fbm.seed != path.fbm_seed)
        throw std::invalid_argument("reflection_function: sample does not match the path");

    const double eps = path.params.epsilon;
    if (z_thresh <= 0.0) z_thresh = eps;
    if (cap <= 0.0) cap = 1.0 / eps;

    const std::size_t n = path.values.size() - 1;
    const double dt = path.grid.dt();
    const double a = path.params.a;
    const double sigma = path.params.sigma;
    const double x0 = path.params.x0;

    ReflectionDecomposition d;
    d.params = path.params;
    d.grid = path.grid;
    d.fbm_seed = path.fbm_seed;
    d.z_thresh = z_thresh;
    d.cap = cap;
    d.x = path.values;
    d.drift_int.resize(n + 1);
    d.refl.resize(n + 1);
    d.report.tol_mono = tol_mono;

    // Split the drift the path actually received: steps at the discrete zero
    // set feed the reflection function, the rest feed the drift integral.
    const double kick_thresh = a > 0.0 ? a * dt / (2.0 * eps) : tol_mono;
    double integral = 0.0, refl = 0.0;
    d.drift_int[0] = 0.0;
    d.refl[0] = 0.0;
    std::int64_t kicks = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = path.values[i];
        const double positive_part = xi > 0.0 ? xi : 0.0;
        const double integrand = std::min(1.0 / (positive_part + eps), cap);
        if (xi <= z_thresh) {
            refl += a * integrand * dt;
            if (a * integrand * dt >= kick_thresh) ++kicks;
        } else {
            integral += integrand * dt;
        }
        d.drift_int[i + 1] = integral;
        d.refl[i + 1] = refl;
    }

    auto& rep = d.report;
    rep.l0 = d.refl[0];
    rep.increase_points = kicks;
    rep.min_increment = n > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    rep.localization_violations = 0;
    rep.ineq_residual_min = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double incr = d.refl[i + 1] - d.refl[i];
        rep.min_increment = std::min(rep.min_increment, incr);
        if (incr > tol_mono && std::min(d.x[i], d.x[i + 1]) > z_thresh)
            ++rep.localization_violations;
    }
    // residual of the inequality X >= x0 + a I + sigma B (equals L plus rounding)
    for (std::size_t i = 0; i <= n; ++i) {
        const double ineq = d.x[i] - x0 - a * d.drift_int[i] - sigma * fbm.values[i];
        rep.ineq_residual_min = std::min(rep.ineq_residual_min, ineq);
    }
    return d;
}

SkorokhodResult skorokhod_map(std::span<const double> f) {
    if (f.empty()) throw std::invalid_argument("skorokhod_map: empty input");
    if (f[0] < 0.0) throw std::domain_error("skorokhod_map: f_0 must be >= 0");
    SkorokhodResult r;
    r.g.resize(f.size());
    r.regulator.resize(f.size());
    double running = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        running = std::max(running, -f[i]);
        r.regulator[i] = running;
        r.g[i] = f[i] + running;
    }
    return r;
}

}  // namespace fdb
