#pragma once

#include <cstdint>
#include <vector>

#include "fdb/time_grid.hpp"

namespace fdb {

// Covariance of fractional Brownian motion:
//   E[B_s B_t] = (t^{2H} + s^{2H} - |t-s|^{2H}) / 2.
// Throws std::domain_error for negative times.
double fbm_covariance(double s, double t, Hurst h);

// Autocovariance of the stationary increment sequence (fractional Gaussian
// noise) at lag k on a grid with step dt.
double fgn_autocovariance(std::int64_t k, double dt, Hurst h);

// One fBm trajectory on a uniform grid. values[0] == 0 exactly;
// values has grid.n_steps + 1 entries. Immutable after construction.
struct FbmSample {
    TimeGrid grid;
    Hurst hurst;
    std::uint64_t seed = 0;
    std::vector<double> values;
};

// All-zeros sample, used to inject a noiseless path into the solvers.
FbmSample zero_sample(const TimeGrid& grid, Hurst h);

// Exact sampler backed by a Cholesky factorization of the full covariance
// matrix. Factorizes once; sample() is a matrix-vector product per path.
// Intended as the validation oracle for grids up to max_n points.
class DenseFbmSampler {
public:
    static constexpr std::int64_t kDefaultMaxSteps = 4096;

    DenseFbmSampler(const TimeGrid& grid, Hurst h, std::int64_t max_steps = kDefaultMaxSteps);

    // Pure function of seed; safe to call concurrently.
    FbmSample sample(std::uint64_t seed) const;

    const TimeGrid& grid() const { return grid_; }
    Hurst hurst() const { return hurst_; }

private:
    TimeGrid grid_;
    Hurst hurst_;
    std::vector<double> chol_;  // lower triangle, row-major n x n
};

// Exact sampler via circulant embedding of fractional Gaussian noise.
// The embedding size is the smallest power of two >= 2 * n_steps; its
// eigenvalues are computed once and shared by every sample() call.
// Eigenvalues in [-tol_eig, 0) with tol_eig = tol_eig_rel * max eigenvalue
// are clamped to zero and counted; anything below -tol_eig throws
// EmbeddingError with advice to fall back to the dense sampler.
class CirculantFbmSampler {
public:
    CirculantFbmSampler(const TimeGrid& grid, Hurst h, double tol_eig_rel = 1e-9);

    // Pure function of seed; safe to call concurrently.
    FbmSample sample(std::uint64_t seed) const;

    std::size_t embedding_size() const { return sqrt_eig_.size(); }
    std::int64_t clamped_eigenvalues() const { return clamped_; }

    const TimeGrid& grid() const { return grid_; }
    Hurst hurst() const { return hurst_; }

private:
    TimeGrid grid_;
    Hurst hurst_;
    std::vector<double> sqrt_eig_;
    std::int64_t clamped_ = 0;
};

// One-shot conveniences; they rebuild the factorization/embedding per call.
FbmSample sample_fbm_dense(const TimeGrid& grid, Hurst h, std::uint64_t seed);
FbmSample sample_fbm_circulant(const TimeGrid& grid, Hurst h, std::uint64_t seed);

// Ensemble diagnostics against the covariance law.
struct FbmReport {
    double h = 0.0;
    std::int64_t n_steps = 0;
    std::int64_t n_paths = 0;

    // max over grid pairs of |empirical - exact| covariance in units of the
    // Monte Carlo standard error of the entry estimator
    double max_cov_error_se = 0.0;

    // lag-1 autocorrelation of the increments, normalized by the exact
    // increment variance so the per-path statistic is unbiased
    double lag1_autocorr = 0.0;
    double lag1_se = 0.0;
    double lag1_expected = 0.0;

    // empirical Var(B_t) against t^{2H}
    std::vector<double> variance_curve_t;
    std::vector<double> variance_curve_emp;
    std::vector<double> variance_curve_exact;
    double max_var_error_se = 0.0;

    // distribution of sup_{s<=T} |B_s| / T^{H+delta} (growth diagnostic)
    double delta = 0.0;
    double sup_ratio_p50 = 0.0;
    double sup_ratio_p90 = 0.0;
    double sup_ratio_p99 = 0.0;
};

// Requires at least 100 samples sharing one grid and Hurst index.
FbmReport empirical_fbm_report(const std::vector<FbmSample>& samples, double delta = 0.05);

}  // namespace fdb
