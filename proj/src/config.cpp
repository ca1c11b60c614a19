#include "fdb/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fdb/errors.hpp"

namespace fdb {

namespace {

struct ModeName {
    RunMode mode;
    const char* name;
};

constexpr std::array<ModeName, 7> kModes = {{
    {RunMode::Simulate, "simulate"},
    {RunMode::Limit, "limit"},
    {RunMode::SweepA, "sweep-a"},
    {RunMode::SweepEps, "sweep-eps"},
    {RunMode::Ensemble, "ensemble"},
    {RunMode::Figures, "figures"},
    {RunMode::FbmTest, "fbm-test"},
}};

double parse_double_field(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config field '" + key + "': not a number: '" + value + "'");
    }
}

std::int64_t parse_int_field(const std::string& key, const std::string& value) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw ConfigError("config field '" + key + "': not an integer: '" + value + "'");
    return v;
}

std::uint64_t parse_uint_field(const std::string& key, const std::string& value) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw ConfigError("config field '" + key + "': not an unsigned integer: '" + value + "'");
    return v;
}

bool parse_bool_field(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("config field '" + key + "': not a boolean: '" + value + "'");
}

std::vector<double> parse_list_field(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(parse_double_field(key, item));
    }
    return out;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void apply_key(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "mode") c.mode = mode_from_name(value);
    else if (key == "x0") c.x0 = parse_double_field(key, value);
    else if (key == "a") c.a = parse_double_field(key, value);
    else if (key == "sigma") c.sigma = parse_double_field(key, value);
    else if (key == "hurst") c.hurst = parse_double_field(key, value);
    else if (key == "t-max") c.t_max = parse_double_field(key, value);
    else if (key == "dt") c.dt = parse_double_field(key, value);
    else if (key == "epsilon") c.epsilon = parse_double_field(key, value);
    else if (key == "eps-ratio") c.eps_ratio = parse_double_field(key, value);
    else if (key == "eps-levels") c.eps_levels = static_cast<int>(parse_int_field(key, value));
    else if (key == "eps-tol") c.eps_tol = parse_double_field(key, value);
    else if (key == "seed") c.seed = parse_uint_field(key, value);
    else if (key == "paths") c.paths = parse_int_field(key, value);
    else if (key == "out") c.out = value;
    else if (key == "a-list") c.a_list = parse_list_field(key, value);
    else if (key == "t-min") c.t_min = parse_double_field(key, value);
    else if (key == "delta") c.delta = parse_double_field(key, value);
    else if (key == "zero-noise") c.zero_noise = parse_bool_field(key, value);
    else if (key == "threads") c.threads = static_cast<unsigned>(parse_uint_field(key, value));
    else if (key == "sampler") c.sampler = value;
    else if (key == "gate-zero-hit") c.gate_zero_hit = parse_double_field(key, value);
    else if (key == "gate-growth") c.gate_growth = parse_double_field(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
}

}  // namespace

const char* mode_name(RunMode mode) {
    for (const auto& m : kModes)
        if (m.mode == mode) return m.name;
    return "simulate";
}

RunMode mode_from_name(const std::string& name) {
    for (const auto& m : kModes)
        if (name == m.name) return m.mode;
    throw ConfigError("unknown mode '" + name + "'");
}

SdeParams RunConfig::sde_params() const {
    SdeParams p;
    p.x0 = x0;
    p.a = a;
    p.sigma = sigma;
    p.hurst = Hurst(hurst);
    p.epsilon = epsilon;
    return p;
}

TimeGrid RunConfig::time_grid() const {
    const auto n = static_cast<std::int64_t>(std::llround(t_max / dt));
    return TimeGrid(t_max, n);
}

EpsilonSchedule RunConfig::schedule() const {
    EpsilonSchedule s;
    s.ratio = eps_ratio;
    s.max_levels = eps_levels;
    s.tol_limit = eps_tol;
    // the schedule descends to the configured epsilon at its finest level
    s.eps0 = epsilon * std::pow(eps_ratio, -(eps_levels - 1));
    return s;
}

void RunConfig::validate() const {
    auto fail = [](const std::string& field, const std::string& why) {
        throw ConfigError("config field '" + field + "': " + why);
    };
    if (!(x0 > 0.0)) fail("x0", "must be > 0");
    if (!(a >= 0.0)) fail("a", "must be >= 0");
    if (!(sigma > 0.0)) fail("sigma", "must be > 0");
    if (!(hurst > 0.0 && hurst < 1.0)) fail("hurst", "must lie in (0, 1)");
    if (!(t_max > 0.0)) fail("t-max", "must be > 0");
    if (!(dt > 0.0)) fail("dt", "must be > 0");
    if (dt > t_max) fail("dt", "must not exceed t-max");
    if (!(epsilon > 0.0)) fail("epsilon", "must be > 0");
    if (!(eps_ratio > 0.0 && eps_ratio < 1.0)) fail("eps-ratio", "must lie in (0, 1)");
    if (eps_levels < 2) fail("eps-levels", "must be >= 2");
    if (!(eps_tol > 0.0)) fail("eps-tol", "must be > 0");
    if (paths < 1) fail("paths", "must be >= 1");
    if (out.empty()) fail("out", "must not be empty");
    if (t_min < 0.0) fail("t-min", "must be >= 0");
    if (t_min > 0.0 && !(t_min < t_max)) fail("t-min", "must be < t-max");
    if (!(delta > 0.0)) fail("delta", "must be > 0");
    if (sampler != "circulant" && sampler != "dense")
        fail("sampler", "must be 'circulant' or 'dense'");
    if (!(gate_zero_hit >= 0.0 && gate_zero_hit <= 1.0)) fail("gate-zero-hit", "must be in [0,1]");
    if (!(gate_growth >= 0.0 && gate_growth <= 1.0)) fail("gate-growth", "must be in [0,1]");
    for (double v : a_list)
        if (!(v >= 0.0)) fail("a-list", "entries must be >= 0");
    time_grid().validate();
}

RunConfig build_config(RunMode mode, const KeyValueMap& file_values,
                       const KeyValueMap& flag_values) {
    RunConfig c;
    c.mode = mode;
    switch (mode) {
        case RunMode::Figures:
            c.dt = 1e-6;
            c.eps_ratio = 0.1;
            c.eps_levels = 3;
            c.eps_tol = 1e-12;  // run the full schedule; gaps are reported
            break;
        case RunMode::Ensemble:
            c.dt = 1e-4;
            c.paths = 500;
            break;
        case RunMode::FbmTest:
            c.dt = 1.0 / 512.0;
            c.paths = 20000;
            break;
        case RunMode::SweepA:
            c.a_list = {10.0, 1.0, 0.01};
            break;
        default:
            break;
    }
    for (const auto& [k, v] : file_values)
        if (k != "mode") apply_key(c, k, v);
    for (const auto& [k, v] : flag_values)
        if (k != "mode") apply_key(c, k, v);
    c.mode = mode;
    c.validate();
    return c;
}

KeyValueMap parse_key_values(const std::string& text) {
    KeyValueMap out;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        if (line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line without '=': '" + line + "'");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line with empty key: '" + line + "'");
        out[key] = value;
    }
    return out;
}

RunConfig parse_config(const std::string& text) {
    const KeyValueMap kv = parse_key_values(text);
    RunMode mode = RunMode::Simulate;
    if (auto it = kv.find("mode"); it != kv.end()) mode = mode_from_name(it->second);
    return build_config(mode, kv, {});
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& config) {
    std::string s;
    auto put = [&s](const std::string& key, const std::string& value) {
        s += key;
        s += "=";
        s += value;
        s += "\n";
    };
    put("mode", mode_name(config.mode));
    put("x0", format_number(config.x0));
    put("a", format_number(config.a));
    put("sigma", format_number(config.sigma));
    put("hurst", format_number(config.hurst));
    put("t-max", format_number(config.t_max));
    put("dt", format_number(config.dt));
    put("epsilon", format_number(config.epsilon));
    put("eps-ratio", format_number(config.eps_ratio));
    put("eps-levels", std::to_string(config.eps_levels));
    put("eps-tol", format_number(config.eps_tol));
    put("seed", std::to_string(config.seed));
    put("paths", std::to_string(config.paths));
    put("out", config.out);
    if (!config.a_list.empty()) {
        std::string list;
        for (std::size_t i = 0; i < config.a_list.size(); ++i) {
            if (i) list += ",";
            list += format_number(config.a_list[i]);
        }
        put("a-list", list);
    }
    put("t-min", format_number(config.t_min));
    put("delta", format_number(config.delta));
    put("zero-noise", config.zero_noise ? "true" : "false");
    put("threads", std::to_string(config.threads));
    put("sampler", config.sampler);
    put("gate-zero-hit", format_number(config.gate_zero_hit));
    put("gate-growth", format_number(config.gate_growth));
    return s;
}

}  // namespace fdb
