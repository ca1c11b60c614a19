#include <doctest.h>

#include <cmath>
#include <vector>

#include "fdb/errors.hpp"
#include "fdb/fbm.hpp"
#include "fdb/fft.hpp"
#include "fdb/rng.hpp"

using namespace fdb;

namespace {

template <typename Sampler>
std::vector<FbmSample> draw(const Sampler& sampler, std::size_t n_paths, std::uint64_t master) {
    std::vector<FbmSample> out(n_paths);
    for (std::size_t i = 0; i < n_paths; ++i) out[i] = sampler.sample(path_seed(master, i));
    return out;
}

}  // namespace

TEST_CASE("fft matches a direct DFT and inverts") {
    std::vector<std::complex<double>> x = {{1, 0}, {2, -1}, {0, 3}, {-4, 0},
                                           {0.5, 0.5}, {0, 0}, {7, -2}, {1, 1}};
    auto fwd = x;
    fft_pow2(fwd);
    const std::size_t n = x.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> ref(0, 0);
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = -2.0 * M_PI * static_cast<double>(k * j) / static_cast<double>(n);
            ref += x[j] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        CHECK(std::abs(fwd[k] - ref) < 1e-12);
    }
    auto back = fwd;
    fft_pow2(back, true);
    for (std::size_t j = 0; j < n; ++j)
        CHECK(std::abs(back[j] / static_cast<double>(n) - x[j]) < 1e-12);

    std::vector<std::complex<double>> bad(3);
    CHECK_THROWS_AS(fft_pow2(bad), std::invalid_argument);
}

TEST_CASE("fbm covariance closed form") {
    CHECK(fbm_covariance(1.0, 1.0, Hurst(0.25)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fbm_covariance(1.0, 2.0, Hurst(0.5)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fbm_covariance(1.0, 2.0, Hurst(0.25)) ==
          doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-12));
    CHECK(fbm_covariance(0.0, 5.0, Hurst(0.3)) == 0.0);
    CHECK(fbm_covariance(2.0, 1.0, Hurst(0.25)) == fbm_covariance(1.0, 2.0, Hurst(0.25)));
    CHECK_THROWS_AS(fbm_covariance(-1.0, 1.0, Hurst(0.25)), std::domain_error);
    CHECK_THROWS_AS(Hurst(1.5), std::domain_error);
    CHECK_THROWS_AS(Hurst(0.0), std::domain_error);
}

TEST_CASE("single-step dense sample is dt^H times a unit normal") {
    const TimeGrid grid(0.5, 1);
    const Hurst h(0.3);
    const DenseFbmSampler sampler(grid, h);
    const FbmSample s = sampler.sample(42);
    RngEngine rng = make_engine(42);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double z = gauss(rng);
    const double expected_sd = std::sqrt(fbm_covariance(0.5, 0.5, h) * (1.0 + 1e-12));
    CHECK(s.values[0] == 0.0);
    CHECK(s.values[1] == doctest::Approx(expected_sd * z).epsilon(1e-12));
}

TEST_CASE("samplers are deterministic and start at zero") {
    const TimeGrid grid(1.0, 64);
    for (double hv : {0.1, 0.25, 0.5, 0.75}) {
        const CirculantFbmSampler cs(grid, Hurst(hv));
        const DenseFbmSampler ds(grid, Hurst(hv));
        for (std::uint64_t seed : {std::uint64_t(1), std::uint64_t(99),
                                   std::uint64_t(0xDEADBEEF)}) {
            const FbmSample a = cs.sample(seed);
            const FbmSample b = cs.sample(seed);
            CHECK(a.values == b.values);  // bitwise
            CHECK(a.values[0] == 0.0);
            const FbmSample c = ds.sample(seed);
            CHECK(c.values == ds.sample(seed).values);
            CHECK(c.values[0] == 0.0);
        }
    }
}

TEST_CASE("dense sampler rejects oversized grids") {
    CHECK_THROWS_AS(DenseFbmSampler(TimeGrid(1.0, 5000), Hurst(0.25)), std::length_error);
}

TEST_CASE("H=1/2 dense paths have unit quadratic variation") {
    const TimeGrid grid(1.0, 1024);
    const DenseFbmSampler sampler(grid, Hurst(0.5));
    const std::size_t n_paths = 10000;
    double mean = 0.0, m2 = 0.0;
    for (std::size_t p = 0; p < n_paths; ++p) {
        const FbmSample s = sampler.sample(path_seed(5, p));
        double qv = 0.0;
        for (std::size_t i = 0; i + 1 < s.values.size(); ++i) {
            const double d = s.values[i + 1] - s.values[i];
            qv += d * d;
        }
        const double dlt = qv - mean;
        mean += dlt / static_cast<double>(p + 1);
        m2 += dlt * (qv - mean);
    }
    const double se = std::sqrt(m2 / (n_paths - 1.0) / n_paths);
    CHECK(std::abs(mean - 1.0) <= 3.0 * se);
}

TEST_CASE("dense covariance matches the closed form entrywise") {
    const TimeGrid grid(1.0, 512);
    const DenseFbmSampler sampler(grid, Hurst(0.25));
    const auto samples = draw(sampler, 20000, 17);
    const FbmReport rep = empirical_fbm_report(samples);
    CHECK(rep.max_cov_error_se < 5.0);
    CHECK(rep.max_var_error_se < 5.0);
}

TEST_CASE("circulant increments decorrelate at H=1/2 and match fGn at H=1/4") {
    const TimeGrid grid(1.0, 256);
    {
        const CirculantFbmSampler sampler(grid, Hurst(0.5));
        const FbmReport rep = empirical_fbm_report(draw(sampler, 4000, 23));
        CHECK(rep.lag1_expected == 0.0);
        CHECK(std::abs(rep.lag1_autocorr) <= 3.0 * rep.lag1_se);
    }
    {
        const CirculantFbmSampler sampler(grid, Hurst(0.25));
        const FbmReport rep = empirical_fbm_report(draw(sampler, 4000, 29));
        CHECK(rep.lag1_expected == doctest::Approx(0.5 * (std::sqrt(2.0) - 2.0)));
        CHECK(std::abs(rep.lag1_autocorr - rep.lag1_expected) <= 3.0 * rep.lag1_se);
    }
}

TEST_CASE("dense and circulant ensembles agree in their first two moments") {
    const TimeGrid grid(1.0, 128);
    const Hurst h(0.25);
    const auto dense = draw(DenseFbmSampler(grid, h), 4000, 31);
    const auto circ = draw(CirculantFbmSampler(grid, h), 4000, 37);
    for (std::size_t i : {std::size_t(32), std::size_t(64), std::size_t(128)}) {
        double m1 = 0.0, v1 = 0.0, m2 = 0.0, v2 = 0.0;
        for (const auto& s : dense) m1 += s.values[i];
        for (const auto& s : circ) m2 += s.values[i];
        m1 /= 4000.0;
        m2 /= 4000.0;
        for (const auto& s : dense) v1 += (s.values[i] - m1) * (s.values[i] - m1);
        for (const auto& s : circ) v2 += (s.values[i] - m2) * (s.values[i] - m2);
        v1 /= 3999.0;
        v2 /= 3999.0;
        const double t = grid.t(static_cast<std::int64_t>(i));
        const double var = std::pow(t, 0.5);  // t^{2H} at H = 1/4
        const double se_mean = std::sqrt(2.0 * var / 4000.0);
        const double se_var = var * std::sqrt(2.0 * 2.0 / 4000.0);
        CHECK(std::abs(m1 - m2) <= 5.0 * se_mean);
        CHECK(std::abs(v1 - v2) <= 5.0 * se_var);
    }
}

TEST_CASE("embedding size and eigenvalue clamping are reported") {
    const CirculantFbmSampler sampler(TimeGrid(1.0, 300), Hurst(0.25));
    CHECK(sampler.embedding_size() == 1024);
    CHECK(sampler.clamped_eigenvalues() >= 0);
}

TEST_CASE("report strides the covariance grid beyond 2048 points") {
    const TimeGrid grid(1.0, 4096);
    const CirculantFbmSampler sampler(grid, Hurst(0.5));
    const FbmReport rep = empirical_fbm_report(draw(sampler, 150, 47));
    CHECK(rep.n_steps == 4096);
    CHECK(std::isfinite(rep.max_cov_error_se));
    CHECK(rep.max_cov_error_se > 0.0);
}

TEST_CASE("report rejects bad inputs") {
    const TimeGrid grid(1.0, 16);
    const CirculantFbmSampler sampler(grid, Hurst(0.25));
    auto samples = draw(sampler, 99, 3);
    CHECK_THROWS_AS(empirical_fbm_report(samples), std::invalid_argument);
    samples = draw(sampler, 128, 3);
    samples.back() = sample_fbm_circulant(grid, Hurst(0.4), 8);
    CHECK_THROWS_AS(empirical_fbm_report(samples), std::invalid_argument);
}

TEST_CASE("report carries the growth diagnostic percentiles") {
    const TimeGrid grid(1.0, 64);
    const CirculantFbmSampler sampler(grid, Hurst(0.5));
    const FbmReport rep = empirical_fbm_report(draw(sampler, 500, 41), 0.05);
    CHECK(rep.delta == 0.05);
    CHECK(rep.sup_ratio_p99 > 0.0);
    CHECK(std::isfinite(rep.sup_ratio_p99));
    CHECK(rep.sup_ratio_p50 <= rep.sup_ratio_p90);
    CHECK(rep.sup_ratio_p90 <= rep.sup_ratio_p99);
}

TEST_CASE("zero sample is all zeros") {
    const FbmSample z = zero_sample(TimeGrid(2.0, 10), Hurst(0.25));
    CHECK(z.values.size() == 11);
    for (double v : z.values) CHECK(v == 0.0);
}
