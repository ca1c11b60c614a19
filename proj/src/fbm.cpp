#include "fdb/fbm.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "fdb/errors.hpp"
#include "fdb/fft.hpp"
#include "fdb/rng.hpp"

namespace fdb {

double fbm_covariance(double s, double t, Hurst h) {
    if (s < 0.0 || t < 0.0) throw std::domain_error("fbm_covariance: times must be >= 0");
    const double p = 2.0 * h.value;
    return 0.5 * (std::pow(t, p) + std::pow(s, p) - std::pow(std::abs(t - s), p));
}

double fgn_autocovariance(std::int64_t k, double dt, Hurst h) {
    const double p = 2.0 * h.value;
    const double a = static_cast<double>(std::abs(k));
    return 0.5 * std::pow(dt, p) *
           (std::pow(a + 1.0, p) - 2.0 * std::pow(a, p) + std::pow(std::abs(a - 1.0), p));
}

FbmSample zero_sample(const TimeGrid& grid, Hurst h) {
    grid.validate();
    FbmSample s;
    s.grid = grid;
    s.hurst = h;
    s.seed = 0;
    s.values.assign(static_cast<std::size_t>(grid.n_points()), 0.0);
    return s;
}

// ---------------------------------------------------------------------------
// Dense sampler
// ---------------------------------------------------------------------------

DenseFbmSampler::DenseFbmSampler(const TimeGrid& grid, Hurst h, std::int64_t max_steps)
    : grid_(grid), hurst_(h) {
    grid_.validate();
    if (grid.n_steps > max_steps)
        throw std::length_error("DenseFbmSampler: grid exceeds the dense limit of " +
                                std::to_string(max_steps) + " steps; use the circulant sampler");

    const std::size_t n = static_cast<std::size_t>(grid.n_steps);
    chol_.assign(n * n, 0.0);
    std::vector<double> cov(n * n);
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ti = grid.t(static_cast<std::int64_t>(i) + 1);
        for (std::size_t j = 0; j <= i; ++j) {
            const double tj = grid.t(static_cast<std::int64_t>(j) + 1);
            const double c = fbm_covariance(ti, tj, h);
            cov[i * n + j] = c;
            cov[j * n + i] = c;
        }
        max_diag = std::max(max_diag, cov[i * n + i]);
    }
    // diagonal regularization before factorizing
    const double jitter = 1e-12 * max_diag;
    for (std::size_t i = 0; i < n; ++i) cov[i * n + i] += jitter;

    for (std::size_t j = 0; j < n; ++j) {
        double d = cov[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= chol_[j * n + k] * chol_[j * n + k];
        if (!(d > 0.0))
            throw FactorizationError(
                "DenseFbmSampler: covariance matrix not positive definite after regularization");
        const double ljj = std::sqrt(d);
        chol_[j * n + j] = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = cov[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= chol_[i * n + k] * chol_[j * n + k];
            chol_[i * n + j] = s / ljj;
        }
    }
}

FbmSample DenseFbmSampler::sample(std::uint64_t seed) const {
    const std::size_t n = static_cast<std::size_t>(grid_.n_steps);
    RngEngine rng = make_engine(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> z(n);
    for (std::size_t j = 0; j < n; ++j) z[j] = gauss(rng);

    FbmSample out;
    out.grid = grid_;
    out.hurst = hurst_;
    out.seed = seed;
    out.values.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = &chol_[i * n];
        double acc = 0.0;
        for (std::size_t j = 0; j <= i; ++j) acc += row[j] * z[j];
        out.values[i + 1] = acc;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Circulant sampler
// ---------------------------------------------------------------------------

CirculantFbmSampler::CirculantFbmSampler(const TimeGrid& grid, Hurst h, double tol_eig_rel)
    : grid_(grid), hurst_(h) {
    grid_.validate();
    const std::size_t n = static_cast<std::size_t>(grid.n_steps);
    const std::size_t m = next_pow2(2 * n);
    const double dt = grid.dt();

    std::vector<std::complex<double>> c(m);
    for (std::size_t j = 0; j <= m / 2; ++j)
        c[j] = fgn_autocovariance(static_cast<std::int64_t>(j), dt, h);
    for (std::size_t j = m / 2 + 1; j < m; ++j) c[j] = c[m - j];

    fft_pow2(c);

    double max_eig = 0.0;
    for (std::size_t j = 0; j < m; ++j) max_eig = std::max(max_eig, c[j].real());
    const double tol = tol_eig_rel * max_eig;

    sqrt_eig_.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        double lambda = c[j].real();
        if (lambda < -tol)
            throw EmbeddingError(
                "CirculantFbmSampler: embedding eigenvalue " + std::to_string(lambda) +
                " below tolerance " + std::to_string(-tol) + "; use the dense sampler");
        if (lambda < 0.0) {
            lambda = 0.0;
            ++clamped_;
        }
        sqrt_eig_[j] = std::sqrt(lambda);
    }
}

FbmSample CirculantFbmSampler::sample(std::uint64_t seed) const {
    const std::size_t n = static_cast<std::size_t>(grid_.n_steps);
    const std::size_t m = sqrt_eig_.size();
    RngEngine rng = make_engine(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // Hermitian-symmetric spectral sample; draw order is part of the
    // determinism contract: V_0, V_{m/2}, then the pairs j = 1..m/2-1.
    std::vector<std::complex<double>> v(m);
    v[0] = sqrt_eig_[0] * gauss(rng);
    v[m / 2] = sqrt_eig_[m / 2] * gauss(rng);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t j = 1; j < m / 2; ++j) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        const std::complex<double> vj =
            sqrt_eig_[j] * inv_sqrt2 * std::complex<double>(re, im);
        v[j] = vj;
        v[m - j] = std::conj(vj);
    }

    fft_pow2(v);

    FbmSample out;
    out.grid = grid_;
    out.hurst = hurst_;
    out.seed = seed;
    out.values.assign(n + 1, 0.0);

    // compensated cumulative sum of the fGn increments
    const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));
    double sum = 0.0, comp = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double incr = v[k].real() * inv_sqrt_m;
        const double y = incr - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        out.values[k + 1] = sum;
    }
    return out;
}

FbmSample sample_fbm_dense(const TimeGrid& grid, Hurst h, std::uint64_t seed) {
    return DenseFbmSampler(grid, h).sample(seed);
}

FbmSample sample_fbm_circulant(const TimeGrid& grid, Hurst h, std::uint64_t seed) {
    return CirculantFbmSampler(grid, h).sample(seed);
}

// ---------------------------------------------------------------------------
// Ensemble diagnostics
// ---------------------------------------------------------------------------

namespace {

double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) return 0.0;
    const double rank = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(rank);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = rank - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

FbmReport empirical_fbm_report(const std::vector<FbmSample>& samples, double delta) {
    if (samples.size() < 100)
        throw std::invalid_argument("empirical_fbm_report: need at least 100 samples");
    const TimeGrid grid = samples.front().grid;
    const Hurst h = samples.front().hurst;
    for (const auto& s : samples)
        if (!(s.grid == grid) || !(s.hurst == h))
            throw std::invalid_argument("empirical_fbm_report: samples mix grids or Hurst indices");

    const std::size_t n = static_cast<std::size_t>(grid.n_steps);
    const std::size_t n_paths = samples.size();
    const double dt = grid.dt();
    const double inv_m = 1.0 / static_cast<double>(n_paths);

    // covariance entries over a strided index set (full grid up to 2048 points)
    std::vector<std::size_t> idx;
    const std::size_t stride = n <= 2048 ? 1 : (n + 1023) / 1024;
    for (std::size_t i = 1; i <= n; i += stride) idx.push_back(i);
    const std::size_t k = idx.size();

    std::vector<double> acc(k * k, 0.0);
    std::vector<double> var_sum(n + 1, 0.0);
    double lag1_mean = 0.0, lag1_m2 = 0.0;
    std::vector<double> sup_ratios(n_paths);

    const double gamma0 = std::pow(dt, 2.0 * h.value);
    const double t_denom = std::pow(grid.horizon, h.value + delta);
    std::size_t path_no = 0;
    for (const auto& s : samples) {
        const double* b = s.values.data();
        for (std::size_t i = 0; i < k; ++i) {
            const double bi = b[idx[i]];
            double* row = &acc[i * k];
            for (std::size_t j = i; j < k; ++j) row[j] += bi * b[idx[j]];
        }
        for (std::size_t i = 1; i <= n; ++i) var_sum[i] += b[i] * b[i];

        double lag1 = 0.0;
        for (std::size_t i = 0; i + 2 <= n; ++i)
            lag1 += (b[i + 1] - b[i]) * (b[i + 2] - b[i + 1]);
        const double r = n >= 2 ? lag1 / (static_cast<double>(n - 1) * gamma0) : 0.0;
        ++path_no;
        const double d = r - lag1_mean;
        lag1_mean += d / static_cast<double>(path_no);
        lag1_m2 += d * (r - lag1_mean);

        double sup = 0.0;
        for (std::size_t i = 0; i <= n; ++i) sup = std::max(sup, std::abs(b[i]));
        sup_ratios[path_no - 1] = sup / t_denom;
    }

    FbmReport rep;
    rep.h = h.value;
    rep.n_steps = grid.n_steps;
    rep.n_paths = static_cast<std::int64_t>(n_paths);
    rep.delta = delta;

    double max_cov = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double ti = grid.t(static_cast<std::int64_t>(idx[i]));
        const double cii = fbm_covariance(ti, ti, h);
        for (std::size_t j = i; j < k; ++j) {
            const double tj = grid.t(static_cast<std::int64_t>(idx[j]));
            const double cij = fbm_covariance(ti, tj, h);
            const double cjj = fbm_covariance(tj, tj, h);
            // SE of the product-moment estimator for a centered Gaussian pair
            const double se = std::sqrt((cii * cjj + cij * cij) * inv_m);
            const double err = std::abs(acc[i * k + j] * inv_m - cij);
            if (se > 0.0) max_cov = std::max(max_cov, err / se);
        }
    }
    rep.max_cov_error_se = max_cov;

    rep.variance_curve_t.resize(n);
    rep.variance_curve_emp.resize(n);
    rep.variance_curve_exact.resize(n);
    double max_var = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        const double t = grid.t(static_cast<std::int64_t>(i));
        const double exact = std::pow(t, 2.0 * h.value);
        const double emp = var_sum[i] * inv_m;
        rep.variance_curve_t[i - 1] = t;
        rep.variance_curve_emp[i - 1] = emp;
        rep.variance_curve_exact[i - 1] = exact;
        const double se = exact * std::sqrt(2.0 * inv_m);
        if (se > 0.0) max_var = std::max(max_var, std::abs(emp - exact) / se);
    }
    rep.max_var_error_se = max_var;

    rep.lag1_autocorr = lag1_mean;
    rep.lag1_se = n_paths > 1
                      ? std::sqrt(lag1_m2 / static_cast<double>(n_paths - 1) * inv_m)
                      : 0.0;
    rep.lag1_expected = 0.5 * (std::pow(2.0, 2.0 * h.value) - 2.0);

    std::sort(sup_ratios.begin(), sup_ratios.end());
    rep.sup_ratio_p50 = quantile_sorted(sup_ratios, 0.50);
    rep.sup_ratio_p90 = quantile_sorted(sup_ratios, 0.90);
    rep.sup_ratio_p99 = quantile_sorted(sup_ratios, 0.99);
    return rep;
}

}  // namespace fdb
