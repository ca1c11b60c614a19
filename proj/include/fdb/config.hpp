#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fdb/limit.hpp"
#include "fdb/sde.hpp"
#include "fdb/time_grid.hpp"

namespace fdb {

enum class RunMode { Simulate, Limit, SweepA, SweepEps, Ensemble, Figures, FbmTest };

const char* mode_name(RunMode mode);
RunMode mode_from_name(const std::string& name);

// Fully validated run description. `epsilon` is the regularization at which
// the process is constructed (the finest schedule level); schedule() ascends
// from it by 1/eps_ratio for eps_levels levels.
struct RunConfig {
    RunMode mode = RunMode::Simulate;
    double x0 = 1.0;
    double a = 1.0;
    double sigma = 1.0;
    double hurst = 0.25;
    double t_max = 1.0;
    double dt = 1e-5;
    double epsilon = 1e-4;
    double eps_ratio = 0.5;
    int eps_levels = 8;
    double eps_tol = 1e-3;
    std::uint64_t seed = 1;
    std::int64_t paths = 1;
    std::string out = "out";
    std::vector<double> a_list;
    double t_min = 0.0;  // 0: horizon / 4
    double delta = 0.05;
    bool zero_noise = false;
    unsigned threads = 0;
    std::string sampler = "circulant";  // fbm-test only
    double gate_zero_hit = 0.05;
    double gate_growth = 0.95;

    SdeParams sde_params() const;
    TimeGrid time_grid() const;
    EpsilonSchedule schedule() const;
    double stats_t_min() const { return t_min > 0.0 ? t_min : t_max / 4.0; }

    void validate() const;

    bool operator==(const RunConfig&) const = default;
};

using KeyValueMap = std::map<std::string, std::string>;

// Mode-aware defaults, then file values, then flag values. Unknown keys,
// type mismatches and invariant violations throw ConfigError naming the
// offending field.
RunConfig build_config(RunMode mode, const KeyValueMap& file_values,
                       const KeyValueMap& flag_values);

// Flat key=value document. parse_config(serialize_config(c)) == c.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);
std::string serialize_config(const RunConfig& config);

KeyValueMap parse_key_values(const std::string& text);

}  // namespace fdb
