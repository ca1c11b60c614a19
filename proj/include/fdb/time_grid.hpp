#pragma once

#include <cstdint>
#include <stdexcept>

namespace fdb {

// Uniform partition of [0, horizon] with n_steps intervals; the common
// clock for every path in a run. Grid points are t_i = i * dt, i = 0..n_steps.
struct TimeGrid {
    double horizon = 1.0;
    std::int64_t n_steps = 1;

    TimeGrid() = default;
    TimeGrid(double horizon_, std::int64_t n_steps_) : horizon(horizon_), n_steps(n_steps_) {
        validate();
    }

    void validate() const {
        if (!(horizon > 0.0)) throw std::domain_error("TimeGrid: horizon must be > 0");
        if (n_steps < 1) throw std::domain_error("TimeGrid: n_steps must be >= 1");
        if (!(dt() > 0.0)) throw std::domain_error("TimeGrid: dt underflowed to 0");
    }

    double dt() const { return horizon / static_cast<double>(n_steps); }
    double t(std::int64_t i) const { return static_cast<double>(i) * dt(); }
    std::int64_t n_points() const { return n_steps + 1; }

    bool operator==(const TimeGrid& o) const {
        return horizon == o.horizon && n_steps == o.n_steps;
    }
};

// Hurst index, constrained to (0, 1). The Bessel-limit construction
// additionally requires H <= 1/2; that check lives at the call sites.
struct Hurst {
    double value = 0.5;

    Hurst() = default;
    explicit Hurst(double h) : value(h) {
        if (!(h > 0.0 && h < 1.0)) throw std::domain_error("Hurst index must lie in (0, 1)");
    }

    bool operator==(const Hurst& o) const { return value == o.value; }
};

}  // namespace fdb
