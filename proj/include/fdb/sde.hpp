#pragma once

#include <cstdint>
#include <vector>

#include "fdb/fbm.hpp"
#include "fdb/time_grid.hpp"

namespace fdb {

// Parameters of the regularized equation
//   X_t = X0 + a * int_0^t ds / (X_s 1_{X_s>0} + epsilon) + sigma * B^H_t.
struct SdeParams {
    double x0 = 1.0;
    double a = 1.0;
    double sigma = 1.0;
    Hurst hurst{0.25};
    double epsilon = 1e-4;

    void validate() const;
};

// Euler solution of the regularized equation on the grid of its driving
// sample. values[i] and drift_sum[i] satisfy, up to rounding,
//   values[i] = x0 + a * drift_sum[i] + sigma * B_i,
// since the prelimit equation has no reflection term.
struct RegularizedPath {
    SdeParams params;
    TimeGrid grid;
    std::uint64_t fbm_seed = 0;
    std::vector<double> values;
    std::vector<double> drift_sum;
};

// Explicit Euler with left-endpoint drift evaluation. The drift is
// a / epsilon whenever the state is <= 0; the state may dip negative and is
// pushed back by that bounded drift. Throws NumericError (with the step
// index) if a non-finite value appears, std::invalid_argument on a
// grid/Hurst mismatch.
RegularizedPath euler_regularized(const SdeParams& params, const FbmSample& fbm);

// Classical Bessel oracle: Euler for d rho = ((nu-1)/2) rho^{-1} dt + dW,
// requiring a driving sample with H = 1/2 exactly and nu >= 2. The state is
// clamped at `floor` before each 1/rho evaluation and after each step.
std::vector<double> euler_classical_bessel(double nu, double x0, const FbmSample& bm,
                                           double floor = 1e-12);

// Solution of the noiseless equation x' = a/x: sqrt(x0^2 + 2 a t).
double deterministic_envelope(double x0, double a, double t);

}  // namespace fdb
