// Command-line driver: modes, evolve, fig2, fig3, fig4, sweep
//
// Exit codes: 0 success, 1 usage error, 2 configuration error,
// 3 runtime or numerical failure.

#pragma once

#include "jch/experiments.hpp"
#include "jch/io/config.hpp"
#include "jch/io/csv.hpp"
#include "jch/io/svg.hpp"
#include "jch/jacobi.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace jch::io {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitConfig = 2, kExitRuntime = 3 };

namespace detail {

inline std::string short_number(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError(0, "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

struct Flags {
    std::string config;
    std::string out; // empty: config value, else "."
    std::string method;
    std::optional<int> samples;
    std::optional<double> t_max;
    std::string pairs;
    std::string snapshot_times;
    double g_over_j{10.0};
    std::optional<double> scale_max;
};

inline void apply_overrides(RunConfig& cfg, const Flags& f) {
    if (!f.method.empty()) cfg.method = parse_method(f.method);
    if (f.samples) cfg.samples = *f.samples;
    if (f.t_max) cfg.t_max = *f.t_max;
    if (!f.pairs.empty()) cfg.pairs = parse_pairs(f.pairs);
    if (!f.snapshot_times.empty()) cfg.snapshot_times = parse_real_list(f.snapshot_times, 0, "--snapshot-times");
    if (f.scale_max) cfg.scale_max = *f.scale_max;
    if (!f.out.empty()) cfg.out = f.out;
    cfg.validate();
}

inline std::string output_dir(const std::string& dir) { return dir.empty() ? "." : dir; }

inline ExperimentSpec spec_from_config(const RunConfig& cfg) {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::Custom;
    spec.label = "evolve";
    spec.params = cfg.model_params();
    spec.x0 = cfg.initial_site();
    spec.grid = cfg.grid();
    spec.method = cfg.method;
    spec.resonant_mode = cfg.resonant_mode;
    spec.pairs = cfg.pairs;
    spec.snapshot_times = cfg.snapshot_times;
    try {
        spec.validate();
    } catch (const std::logic_error& ex) {
        throw ConfigError(0, ex.what());
    }
    return spec;
}

class Writer {
public:
    Writer(const std::string& dir, std::ostream& out) : dir_(dir), out_(out) {
        std::filesystem::create_directories(dir_);
    }

    std::filesystem::path path(const std::string& name) const { return dir_ / name; }

    void csv(const CsvTable& table, const std::string& name, const std::string& note) {
        write_csv(table, path(name));
        out_ << "wrote " << path(name).string() << " (" << table.rows.size() << " rows" << (note.empty() ? "" : "; ")
             << note << ")\n";
    }

    void text(const std::string& content, const std::string& name, const std::string& note) {
        std::ofstream os(path(name), std::ios::binary);
        if (!os) throw IoError("cannot open '" + path(name).string() + "' for writing");
        os << content;
        if (!os) throw IoError("write to '" + path(name).string() + "' failed");
        out_ << "wrote " << path(name).string() << (note.empty() ? "" : " (" + note + ")") << "\n";
    }

private:
    std::filesystem::path dir_;
    std::ostream& out_;
};

inline std::string series_note(const ObservableSeries& s) {
    double s_max = 0.0;
    for (const double v : s.entropy) s_max = std::max(s_max, v);
    std::string note = "max S=" + short_number(s_max);
    for (std::size_t p = 0; p < s.pairs.size(); ++p) {
        double c = 0.0;
        for (const double v : s.concurrence[p]) c = std::max(c, v);
        note += ", max C_" + std::to_string(s.pairs[p].first) + "_" + std::to_string(s.pairs[p].second) + "=" +
                short_number(c);
    }
    return note;
}

inline void write_snapshots(Writer& w, const std::string& prefix, const std::vector<Snapshot>& snaps, int x0,
                            double scale_max, std::ostream& err) {
    CsvTable summary;
    summary.header = {"snapshot", "t_J", "pi_a", "entropy", "front_offset", "off_peak_warning"};
    for (std::size_t k = 0; k < snaps.size(); ++k) {
        const auto& s = snaps[k];
        const std::string base = prefix + "_snapshot" + std::to_string(k + 1) + "_map";
        const int front = front_pulse_offset(s.state, x0);
        w.csv(map_table(s.map), base + ".csv", "t_J=" + short_number(s.time) + ", pi_a=" + short_number(s.pi_a));
        w.text(heatmap_svg(s.map, scale_max, prefix + " t J = " + short_number(s.time)), base + ".svg", "");
        if (s.off_peak_warning) {
            err << "warning: snapshot t_J=" << short_number(s.time)
                << " is not a multiple of pi/g; Pi_a < 1 lowers the map contrast\n";
        }
        summary.rows.push_back({static_cast<double>(k + 1), s.time, s.pi_a, s.entropy, static_cast<double>(front),
                                s.off_peak_warning ? 1.0 : 0.0});
    }
    w.csv(summary, prefix + "_snapshots.csv", "");
}

inline int run_modes(const Flags& f, std::ostream& out) {
    auto cfg = load_config(f.config);
    apply_overrides(cfg, f);
    const auto modes = mode_table(cfg.model_params());
    Writer w(output_dir(cfg.out), out);
    w.csv(modes_table(modes), "modes.csv", "N=" + std::to_string(cfg.n));
    std::vector<double> k;
    std::vector<double> wk, ep, em;
    for (const auto& m : modes.modes) {
        k.push_back(m.momentum);
        wk.push_back(m.freq);
        ep.push_back(m.eps_plus);
        em.push_back(m.eps_minus);
    }
    w.text(line_plot_svg(k, {{"omega_k", wk}, {"eps_plus", ep}, {"eps_minus", em}}, "k", "normal modes"),
           "modes_plot.svg", "");
    return kExitOk;
}

inline int run_evolve(const Flags& f, std::ostream& out, std::ostream& err) {
    auto cfg = load_config(f.config);
    apply_overrides(cfg, f);
    const auto spec = spec_from_config(cfg);
    const auto result = run_experiment(spec);
    if (spec.method == PropagatorMethod::WeakEffective || spec.method == PropagatorMethod::StrongEffective) {
        out << "method " << to_string(spec.method) << ": validity metric " << short_number(result.validity_metric)
            << (result.validity_metric <= kValidityThreshold ? "" : " (outside the regime of validity)") << "\n";
    }
    Writer w(output_dir(cfg.out), out);
    w.csv(series_table(result.series), "evolve_series.csv", series_note(result.series));
    w.text(series_plot_svg(result.series, "evolution"), "evolve_plot.svg", "");
    if (!result.snapshots.empty()) write_snapshots(w, "evolve", result.snapshots, spec.x0, cfg.scale_max, err);
    return kExitOk;
}

inline int run_fig2_cmd(const Flags& f, std::ostream& out) {
    const auto series = run_fig2();
    Writer w(output_dir(f.out), out);
    w.csv(series_table(series), "fig2_series.csv", series_note(series));
    w.text(series_plot_svg(series, "N=41, x0=21, g=1e-3 J"), "fig2_plot.svg", "");
    return kExitOk;
}

inline int run_fig3_cmd(const Flags& f, std::ostream& out, std::ostream& err) {
    auto times = fig3_default_snapshot_times();
    if (!f.snapshot_times.empty()) times = parse_real_list(f.snapshot_times, 0, "--snapshot-times");
    const auto spec = fig3_spec(times);
    const auto result = run_experiment(spec);
    Writer w(output_dir(f.out), out);
    write_snapshots(w, "fig3", result.snapshots, spec.x0, f.scale_max.value_or(0.25), err);
    return kExitOk;
}

inline int run_fig4_cmd(const Flags& f, std::ostream& out) {
    if (!(f.g_over_j > 0.0)) throw ConfigError(0, "--g-over-j must be > 0");
    const double scale = f.scale_max.value_or(0.25);
    if (!(scale > 0.0)) throw ConfigError(0, "--scale-max must be > 0");
    const auto result = run_experiment(fig4_spec(f.g_over_j));
    const auto& map = *result.max_map;
    const std::string base = "fig4_g" + short_number(f.g_over_j) + "_maxmap";
    Writer w(output_dir(f.out), out);
    w.csv(map_table(map), base + ".csv",
          std::to_string(result.max_map_samples) + " samples, max C=" + short_number(map.values().maxCoeff()));
    w.text(heatmap_svg(map, scale, "max C_ij, tJ in [0, 90], g/J = " + short_number(f.g_over_j)), base + ".svg", "");
    return kExitOk;
}

inline int run_sweep_cmd(const Flags& f, std::ostream& out, std::ostream& err) {
    ExperimentSpec base = fig2_spec();
    base.kind = ExperimentKind::Custom;
    std::vector<double> g_values{1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0};
    double window_periods = 2.0;
    std::string dir = f.out;
    if (!f.config.empty()) {
        auto cfg = load_config(f.config);
        apply_overrides(cfg, f);
        dir = cfg.out;
        base = spec_from_config(cfg);
        if (!cfg.sweep_g.empty()) g_values = cfg.sweep_g;
        if (cfg.lines.count("t_max") || f.t_max) window_periods = 0.0;
    } else {
        if (!f.method.empty()) base.method = parse_method(f.method);
        if (f.samples) base.grid.n_samples = *f.samples;
        if (!f.pairs.empty()) base.pairs = parse_pairs(f.pairs);
        if (f.t_max) {
            base.grid.t_end = *f.t_max;
            window_periods = 0.0;
        }
        try {
            base.validate();
        } catch (const std::logic_error& ex) {
            throw ConfigError(0, ex.what());
        }
    }

    const auto specs = coupling_sweep(base, g_values, window_periods);
    const auto results = run_sweep(specs);

    Writer w(output_dir(dir), out);
    CsvTable summary;
    summary.header = {"g_over_J", "ok", "max_entropy", "min_pi_a"};
    for (const auto& [i, j] : base.pairs) summary.header.push_back("max_C_" + std::to_string(i) + "_" + std::to_string(j));
    int failures = 0;
    for (std::size_t s = 0; s < results.size(); ++s) {
        const auto& r = results[s];
        std::vector<double> row{specs[s].params.coupling, r.ok() ? 1.0 : 0.0};
        if (!r.ok()) {
            ++failures;
            err << "sweep entry " << r.label << " failed: " << r.error << "\n";
            row.resize(summary.header.size(), std::numeric_limits<double>::quiet_NaN());
            summary.rows.push_back(std::move(row));
            continue;
        }
        const auto& series = r.output->series;
        double s_max = 0.0, pa_min = 1.0;
        for (const double v : series.entropy) s_max = std::max(s_max, v);
        for (const double v : series.pi_a) pa_min = std::min(pa_min, v);
        row.push_back(s_max);
        row.push_back(pa_min);
        for (const auto& channel : series.concurrence) {
            double c = 0.0;
            for (const double v : channel) c = std::max(c, v);
            row.push_back(c);
        }
        summary.rows.push_back(std::move(row));
        w.csv(series_table(series), "sweep_" + r.label + "_series.csv", series_note(series));
    }
    w.csv(summary, "sweep_summary.csv", std::to_string(results.size() - failures) + "/" +
                                            std::to_string(results.size()) + " succeeded");
    return failures == 0 ? kExitOk : kExitRuntime;
}

} // namespace detail

inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
    CLI::App app{"Single-excitation Jaynes-Cummings-Hubbard dynamics and atomic entanglement", "jchsim"};
    app.require_subcommand(1);
    detail::Flags f;

    auto add_out = [&](CLI::App* sub) { sub->add_option("--out", f.out, "output directory (default: config 'out', else .)"); };
    auto add_run_flags = [&](CLI::App* sub) {
        sub->add_option("--method", f.method, "propagator: analytic|dense|weak|strong")
            ->check(CLI::IsMember({"analytic", "dense", "weak", "strong"}));
        sub->add_option("--samples", f.samples, "number of time samples");
        sub->add_option("--t-max", f.t_max, "final time in units of 1/J");
        sub->add_option("--pairs", f.pairs, "concurrence channels i:j[,i:j...]");
    };

    auto* modes = app.add_subcommand("modes", "dump the normal-mode and dressed-state table");
    modes->add_option("--config", f.config, "config file")->required();
    add_out(modes);

    auto* evolve = app.add_subcommand("evolve", "evolve |e_x0> and record entropy and concurrence");
    evolve->add_option("--config", f.config, "config file")->required();
    add_run_flags(evolve);
    evolve->add_option("--snapshot-times", f.snapshot_times, "concurrence map times REAL[,REAL...]");
    evolve->add_option("--scale-max", f.scale_max, "heatmap colour scale maximum");
    add_out(evolve);

    auto* fig2 = app.add_subcommand("fig2", "weak-coupling trapping series (N=41, g=1e-3 J)");
    add_out(fig2);

    auto* fig3 = app.add_subcommand("fig3", "strong-coupling concurrence snapshots (N=101, g=1e3 J)");
    fig3->add_option("--snapshot-times", f.snapshot_times, "snapshot times in 1/J, REAL[,REAL...]");
    fig3->add_option("--scale-max", f.scale_max, "heatmap colour scale maximum");
    add_out(fig3);

    auto* fig4 = app.add_subcommand("fig4", "running-max concurrence map (N=201, tJ in [0, 90])");
    fig4->add_option("--g-over-j", f.g_over_j, "coupling g in units of J")->capture_default_str();
    fig4->add_option("--scale-max", f.scale_max, "heatmap colour scale maximum");
    add_out(fig4);

    auto* sweep = app.add_subcommand("sweep", "sweep the coupling g over a list of values");
    sweep->add_option("--config", f.config, "config file (base parameters and sweep_g list)");
    add_run_flags(sweep);
    add_out(sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    try {
        if (*modes) return detail::run_modes(f, out);
        if (*evolve) return detail::run_evolve(f, out, err);
        if (*fig2) return detail::run_fig2_cmd(f, out);
        if (*fig3) return detail::run_fig3_cmd(f, out, err);
        if (*fig4) return detail::run_fig4_cmd(f, out);
        if (*sweep) return detail::run_sweep_cmd(f, out, err);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    err << app.help();
    return kExitUsage;
}

} // namespace jch::io
