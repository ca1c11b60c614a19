#include "fdb/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "fdb/errors.hpp"
#include "fdb/parallel.hpp"
#include "fdb/rng.hpp"

namespace fdb {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<double> grid_times(const TimeGrid& grid) {
    std::vector<double> t(static_cast<std::size_t>(grid.n_points()));
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = grid.t(static_cast<std::int64_t>(i));
    return t;
}

FbmSample make_noise(const RunConfig& c, const TimeGrid& grid) {
    if (c.zero_noise) return zero_sample(grid, Hurst(c.hurst));
    const CirculantFbmSampler sampler(grid, Hurst(c.hurst));
    return sampler.sample(path_seed(c.seed, 0));
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::vector<double> rhs_column(const RegularizedPath& path, const ReflectionDecomposition& d,
                               const FbmSample& fbm) {
    std::vector<double> rhs(d.x.size());
    const double x0 = path.params.x0, a = path.params.a, sigma = path.params.sigma;
    for (std::size_t i = 0; i < rhs.size(); ++i)
        rhs[i] = x0 + a * d.drift_int[i] + sigma * fbm.values[i];
    return rhs;
}

ordered_json limit_diag_json(const LimitDiagnostics& diag, const ReflectionReport& rep,
                             double z_thresh) {
    ordered_json j;
    j["levels"] = diag.levels;
    j["sup_gaps"] = diag.sup_gaps;
    j["converged"] = diag.converged;
    j["mono_violation_p99"] = diag.mono_violation_p99;
    j["mono_violation_max"] = diag.mono_violation_max;
    j["ineq_residual_min"] = rep.ineq_residual_min;
    j["refl_min_increment"] = rep.min_increment;
    j["refl_localization_violations"] = rep.localization_violations;
    j["refl_increase_points"] = rep.increase_points;
    j["z_thresh"] = z_thresh;
    return j;
}

ordered_json config_echo(const RunConfig& c) {
    ordered_json j;
    j["mode"] = mode_name(c.mode);
    j["x0"] = c.x0;
    j["a"] = c.a;
    j["sigma"] = c.sigma;
    j["hurst"] = c.hurst;
    j["t-max"] = c.t_max;
    j["dt"] = c.dt;
    j["epsilon"] = c.epsilon;
    j["eps-ratio"] = c.eps_ratio;
    j["eps-levels"] = c.eps_levels;
    j["seed"] = c.seed;
    j["paths"] = c.paths;
    return j;
}

}  // namespace

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<const std::vector<double>*>& columns) {
    if (header.size() != columns.size())
        throw std::invalid_argument("write_csv: header/column mismatch");
    const std::size_t rows = columns.empty() ? 0 : columns.front()->size();
    for (const auto* col : columns)
        if (col->size() != rows) throw std::invalid_argument("write_csv: ragged columns");

    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    std::string head;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) head += ",";
        head += header[i];
    }
    head += "\n";
    std::fwrite(head.data(), 1, head.size(), f);

    char buf[64];
    std::string line;
    for (std::size_t r = 0; r < rows; ++r) {
        line.clear();
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) line += ',';
            std::snprintf(buf, sizeof buf, "%.17g", (*columns[c])[r]);
            line += buf;
        }
        line += '\n';
        std::fwrite(line.data(), 1, line.size(), f);
    }
    const bool bad = std::ferror(f);
    std::fclose(f);
    if (bad) throw std::runtime_error("failed writing '" + path + "'");
}

std::string json_fbm_report(const FbmReport& rep) {
    ordered_json j;
    j["h"] = rep.h;
    j["n_steps"] = rep.n_steps;
    j["n_paths"] = rep.n_paths;
    j["max_cov_error_se"] = rep.max_cov_error_se;
    j["lag1_autocorr"] = rep.lag1_autocorr;
    j["lag1_se"] = rep.lag1_se;
    j["lag1_expected"] = rep.lag1_expected;
    j["max_var_error_se"] = rep.max_var_error_se;
    j["delta"] = rep.delta;
    j["sup_ratio_p50"] = rep.sup_ratio_p50;
    j["sup_ratio_p90"] = rep.sup_ratio_p90;
    j["sup_ratio_p99"] = rep.sup_ratio_p99;
    // variance-vs-t^{2H} curve, thinned to keep the report readable
    const std::size_t n = rep.variance_curve_t.size();
    const std::size_t stride = n <= 1024 ? 1 : (n + 1023) / 1024;
    ordered_json curve = ordered_json::array();
    for (std::size_t i = 0; i < n; i += stride) {
        curve.push_back({{"t", rep.variance_curve_t[i]},
                         {"var", rep.variance_curve_emp[i]},
                         {"expected", rep.variance_curve_exact[i]}});
    }
    j["variance_curve"] = curve;
    return j.dump(2) + "\n";
}

std::string json_ensemble_report(const EnsembleReport& rep, const RunConfig& config) {
    ordered_json j;
    j["n_paths"] = rep.n_paths;
    j["zero_hit_fraction"] = rep.zero_hit_fraction;
    j["sqrt_ratio_q05"] = rep.sqrt_ratio_q05;
    j["sqrt_ratio_q50"] = rep.sqrt_ratio_q50;
    j["sqrt_ratio_q95"] = rep.sqrt_ratio_q95;
    j["x_T_mean"] = rep.x_T_mean;
    j["x_T_se"] = rep.x_T_se;
    j["x_T_q05"] = rep.x_T_q05;
    j["x_T_q50"] = rep.x_T_q50;
    j["x_T_q95"] = rep.x_T_q95;
    j["positive_final_quarter_fraction"] = rep.positive_final_quarter_fraction;
    j["config"] = config_echo(config);
    j["config"]["z_thresh"] = rep.config.z_thresh > 0.0 ? rep.config.z_thresh
                                                        : rep.config.params.epsilon;
    j["config"]["t_min"] = rep.config.t_min;
    j["config"]["grid_note"] =
        "ensemble grid is coarser than the dt=1e-6 single-path figure grid";
    return j.dump(2) + "\n";
}

namespace {

std::vector<std::string> run_simulate(const RunConfig& c, std::ostream& log) {
    const TimeGrid grid = c.time_grid();
    const FbmSample fbm = make_noise(c, grid);
    const RegularizedPath path = euler_regularized(c.sde_params(), fbm);
    const std::vector<double> t = grid_times(grid);

    const std::string file = c.out + "/simulate_path.csv";
    write_csv(file, {"t", "X", "I", "B"}, {&t, &path.values, &path.drift_sum, &fbm.values});
    log << "wrote " << file << " (" << t.size() << " rows)\n";
    return {file};
}

std::vector<std::string> run_limit(const RunConfig& c, std::ostream& log) {
    const TimeGrid grid = c.time_grid();
    const FbmSample fbm = make_noise(c, grid);
    const LimitResult limit = epsilon_limit(c.sde_params(), fbm, c.schedule());
    const ReflectionDecomposition d = reflection_function(limit.path, fbm);
    const std::vector<double> t = grid_times(grid);
    const std::vector<double> rhs = rhs_column(limit.path, d, fbm);

    const std::string csv = c.out + "/limit_decomposition.csv";
    write_csv(csv, {"t", "X", "I", "L", "B", "RHS"},
              {&t, &d.x, &d.drift_int, &d.refl, &fbm.values, &rhs});
    log << "wrote " << csv << " (" << t.size() << " rows)\n";

    const std::string diag = c.out + "/limit_diagnostics.json";
    write_text(diag, limit_diag_json(limit.diagnostics, d.report, d.z_thresh).dump(2) + "\n");
    log << "wrote " << diag << "\n";
    return {csv, diag};
}

std::vector<std::string> run_sweep_a(const RunConfig& c, std::ostream& log) {
    if (c.a_list.empty()) throw ConfigError("config field 'a-list': required for sweep-a");
    const TimeGrid grid = c.time_grid();
    const FbmSample fbm = make_noise(c, grid);
    const SweepResult sweep = sweep_in_a(c.sde_params(), c.a_list, fbm, c.schedule(),
                                         c.stats_t_min());

    std::vector<double> a_col, last_zero, min_after, sqrt_ratio, sup075, vmax, vp99;
    for (std::size_t i = 0; i < sweep.a_values.size(); ++i) {
        a_col.push_back(sweep.a_values[i]);
        const auto& st = sweep.stats[i];
        last_zero.push_back(st.last_zero ? *st.last_zero : -1.0);
        min_after.push_back(st.min_after);
        sqrt_ratio.push_back(st.sqrt_ratio);
        sup075.push_back(st.sup_ratio_alpha.front().second);
        vmax.push_back(i == 0 ? 0.0 : sweep.violation_max[i - 1]);
        vp99.push_back(i == 0 ? 0.0 : sweep.violation_p99[i - 1]);
    }
    const std::string file = c.out + "/sweep_a.csv";
    write_csv(file,
              {"a", "last_zero", "min_after", "sqrt_ratio", "sup_ratio_alpha075",
               "violation_max", "violation_p99"},
              {&a_col, &last_zero, &min_after, &sqrt_ratio, &sup075, &vmax, &vp99});
    log << "wrote " << file << " (" << a_col.size() << " rows)\n";
    return {file};
}

std::vector<std::string> run_sweep_eps(const RunConfig& c, std::ostream& log) {
    const TimeGrid grid = c.time_grid();
    const FbmSample fbm = make_noise(c, grid);
    const SdeParams base = c.sde_params();
    const EpsilonSchedule schedule = c.schedule();

    std::vector<double> eps_col, gap_col, vmax_col, vp99_col, min_col, xt_col;
    std::vector<double> prev;
    for (double eps : schedule.levels()) {
        SdeParams p = base;
        p.epsilon = eps;
        const RegularizedPath path = euler_regularized(p, fbm);
        double mn = path.values[0];
        for (double v : path.values) mn = std::min(mn, v);
        double gap = 0.0, vmax = 0.0;
        std::vector<double> viol(path.values.size(), 0.0);
        if (!prev.empty()) {
            for (std::size_t i = 0; i < path.values.size(); ++i) {
                const double dlt = path.values[i] - prev[i];
                gap = std::max(gap, std::abs(dlt));
                viol[i] = dlt < 0.0 ? -dlt : 0.0;
                vmax = std::max(vmax, viol[i]);
            }
            std::sort(viol.begin(), viol.end());
        }
        eps_col.push_back(eps);
        gap_col.push_back(gap);
        vmax_col.push_back(vmax);
        vp99_col.push_back(prev.empty() ? 0.0 : quantile(viol, 0.99));
        min_col.push_back(mn);
        xt_col.push_back(path.values.back());
        prev = path.values;
    }
    const std::string file = c.out + "/sweep_eps.csv";
    write_csv(file,
              {"epsilon", "sup_gap", "mono_violation_max", "mono_violation_p99", "min_X", "X_T"},
              {&eps_col, &gap_col, &vmax_col, &vp99_col, &min_col, &xt_col});
    log << "wrote " << file << " (" << eps_col.size() << " rows)\n";
    return {file};
}

std::vector<std::string> run_ensemble(const RunConfig& c, std::ostream& log) {
    EnsembleConfig ec;
    ec.params = c.sde_params();
    ec.grid = c.time_grid();
    ec.n_paths = c.paths;
    ec.master_seed = c.seed;
    ec.t_min = c.stats_t_min();
    ec.n_threads = c.threads;
    const EnsembleReport rep = ensemble_run(ec);

    const std::string file = c.out + "/ensemble_report.json";
    write_text(file, json_ensemble_report(rep, c));
    log << "wrote " << file << " (" << rep.n_paths << " paths, zero_hit_fraction="
        << rep.zero_hit_fraction << ")\n";
    return {file};
}

std::vector<std::string> run_figures(const RunConfig& c, std::ostream& log) {
    const TimeGrid grid = c.time_grid();
    const FbmSample fbm = make_noise(c, grid);
    const EpsilonSchedule schedule = c.schedule();
    const std::vector<double> t = grid_times(grid);
    std::vector<std::string> files;
    ordered_json diag;

    auto limit_at = [&](double a) {
        SdeParams p = c.sde_params();
        p.a = a;
        return epsilon_limit(p, fbm, schedule);
    };
    auto add_file = [&](const std::string& file, std::size_t rows) {
        log << "wrote " << file << " (" << rows << " rows)\n";
        files.push_back(file);
    };

    {  // drift a = 1: trajectory, unreflected right-hand side, reflection function
        const LimitResult limit = limit_at(1.0);
        const ReflectionDecomposition d = reflection_function(limit.path, fbm);
        const std::vector<double> rhs = rhs_column(limit.path, d, fbm);

        const std::string f1 = c.out + "/figure1_x.csv";
        write_csv(f1, {"t", "X"}, {&t, &d.x});
        add_file(f1, t.size());
        const std::string f2 = c.out + "/figure2_rhs.csv";
        write_csv(f2, {"t", "RHS"}, {&t, &rhs});
        add_file(f2, t.size());
        const std::string f3 = c.out + "/figure3_l.csv";
        write_csv(f3, {"t", "L"}, {&t, &d.refl});
        add_file(f3, t.size());
        diag["a1"] = limit_diag_json(limit.diagnostics, d.report, d.z_thresh);
    }
    {  // drift a = 10: trajectory against the noiseless envelope
        const LimitResult limit = limit_at(10.0);
        const ReflectionDecomposition d = reflection_function(limit.path, fbm);
        std::vector<double> envelope(t.size());
        for (std::size_t i = 0; i < t.size(); ++i)
            envelope[i] = std::sqrt(2.0 * 10.0 * t[i]);
        const std::string f4 = c.out + "/figure4_x_envelope.csv";
        write_csv(f4, {"t", "X", "envelope"}, {&t, &limit.path.values, &envelope});
        add_file(f4, t.size());
        diag["a10"] = limit_diag_json(limit.diagnostics, d.report, d.z_thresh);
    }
    {  // drift a = 0.01: combined reflection-plus-integral staircase
        const LimitResult limit = limit_at(0.01);
        const ReflectionDecomposition d = reflection_function(limit.path, fbm);
        std::vector<double> ltilde(limit.path.drift_sum.size());
        for (std::size_t i = 0; i < ltilde.size(); ++i)
            ltilde[i] = 0.01 * limit.path.drift_sum[i];
        const std::string f5 = c.out + "/figure5_ltilde.csv";
        write_csv(f5, {"t", "Ltilde"}, {&t, &ltilde});
        add_file(f5, t.size());
        diag["a0.01"] = limit_diag_json(limit.diagnostics, d.report, d.z_thresh);
    }

    const std::string dj = c.out + "/figures_diagnostics.json";
    write_text(dj, diag.dump(2) + "\n");
    log << "wrote " << dj << "\n";
    files.push_back(dj);
    return files;
}

std::vector<std::string> run_fbm_test(const RunConfig& c, std::ostream& log) {
    const TimeGrid grid = c.time_grid();
    const Hurst h(c.hurst);
    const std::int64_t n_paths = c.paths;

    std::vector<FbmSample> samples(static_cast<std::size_t>(n_paths));
    if (c.sampler == "dense") {
        const DenseFbmSampler sampler(grid, h);
        parallel_for(
            n_paths,
            [&](std::int64_t i) {
                samples[i] = sampler.sample(path_seed(c.seed, static_cast<std::uint64_t>(i)));
            },
            c.threads);
    } else {
        const CirculantFbmSampler sampler(grid, h);
        parallel_for(
            n_paths,
            [&](std::int64_t i) {
                samples[i] = sampler.sample(path_seed(c.seed, static_cast<std::uint64_t>(i)));
            },
            c.threads);
    }

    const FbmReport rep = empirical_fbm_report(samples, c.delta);

    const std::vector<double> t = grid_times(grid);
    const std::string sample_csv = c.out + "/fbm_sample.csv";
    write_csv(sample_csv, {"t", "B"}, {&t, &samples.front().values});
    log << "wrote " << sample_csv << " (" << t.size() << " rows)\n";

    const std::string file = c.out + "/fbm_report.json";
    write_text(file, json_fbm_report(rep));
    log << "wrote " << file << " (max_cov_error_se=" << rep.max_cov_error_se << ")\n";
    return {sample_csv, file};
}

}  // namespace

std::vector<std::string> run(const RunConfig& config, std::ostream& log) {
    config.validate();
    std::filesystem::create_directories(config.out);
    switch (config.mode) {
        case RunMode::Simulate: return run_simulate(config, log);
        case RunMode::Limit: return run_limit(config, log);
        case RunMode::SweepA: return run_sweep_a(config, log);
        case RunMode::SweepEps: return run_sweep_eps(config, log);
        case RunMode::Ensemble: return run_ensemble(config, log);
        case RunMode::Figures: return run_figures(config, log);
        case RunMode::FbmTest: return run_fbm_test(config, log);
    }
    throw ConfigError("unknown mode");
}

}  // namespace fdb
