#include "fdb/sde.hpp"

#include <cmath>
#include <stdexcept>

#include "fdb/errors.hpp"

namespace fdb {

void SdeParams::validate() const {
    if (!(x0 > 0.0)) throw std::domain_error("SdeParams: x0 must be > 0");
    if (!(a >= 0.0)) throw std::domain_error("SdeParams: a must be >= 0");
    if (!(sigma > 0.0)) throw std::domain_error("SdeParams: sigma must be > 0");
    if (!(epsilon > 0.0)) throw std::domain_error("SdeParams: epsilon must be > 0");
}

RegularizedPath euler_regularized(const SdeParams& params, const FbmSample& fbm) {
    params.validate();
    if (!(fbm.hurst == params.hurst))
        throw std::invalid_argument("euler_regularized: sample Hurst index does not match params");
    const TimeGrid grid = fbm.grid;
    grid.validate();
    const std::size_t n = static_cast<std::size_t>(grid.n_steps);
    if (fbm.values.size() != n + 1)
        throw std::invalid_argument("euler_regularized: sample length does not match its grid");

    const double dt = grid.dt();
    const double a = params.a;
    const double sigma = params.sigma;
    const double x0 = params.x0;
    const double eps = params.epsilon;

    RegularizedPath out;
    out.params = params;
    out.grid = grid;
    out.fbm_seed = fbm.seed;
    out.values.resize(n + 1);
    out.drift_sum.resize(n + 1);

    // The state is carried through the running drift sum so the identity
    // X_i = x0 + a * I_i + sigma * B_i holds to a few ulps at every index.
    double x = x0;
    double drift = 0.0;
    out.values[0] = x0;
    out.drift_sum[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double positive_part = x > 0.0 ? x : 0.0;
        drift += dt / (positive_part + eps);
        x = x0 + a * drift + sigma * fbm.values[i + 1];
        if (!std::isfinite(x))
            throw NumericError("euler_regularized: non-finite state",
                               static_cast<std::int64_t>(i + 1));
        out.values[i + 1] = x;
        out.drift_sum[i + 1] = drift;
    }
    return out;
}

std::vector<double> euler_classical_bessel(double nu, double x0, const FbmSample& bm,
                                           double floor) {
    if (bm.hurst.value != 0.5)
        throw std::invalid_argument("euler_classical_bessel: driving sample must have H = 1/2");
    if (!(nu >= 2.0)) throw std::invalid_argument("euler_classical_bessel: nu must be >= 2");
    if (!(x0 > 0.0)) throw std::invalid_argument("euler_classical_bessel: x0 must be > 0");
    if (!(floor > 0.0)) throw std::invalid_argument("euler_classical_bessel: floor must be > 0");

    const TimeGrid grid = bm.grid;
    const std::size_t n = static_cast<std::size_t>(grid.n_steps);
    const double dt = grid.dt();
    const double c = 0.5 * (nu - 1.0);

    std::vector<double> rho(n + 1);
    rho[0] = x0;
    double x = x0;
    for (std::size_t i = 0; i < n; ++i) {
        const double guarded = x > floor ? x : floor;
        // reflect at zero; a bare clamp would hand the next step a 1/floor
        // drift kick and blow the path up
        x = std::abs(x + c * dt / guarded + (bm.values[i + 1] - bm.values[i]));
        if (x < floor) x = floor;
        if (!std::isfinite(x))
            throw NumericError("euler_classical_bessel: non-finite state",
                               static_cast<std::int64_t>(i + 1));
        rho[i + 1] = x;
    }
    return rho;
}

double deterministic_envelope(double x0, double a, double t) {
    if (t < 0.0) throw std::domain_error("deterministic_envelope: t must be >= 0");
    return std::sqrt(x0 * x0 + 2.0 * a * t);
}

}  // namespace fdb
