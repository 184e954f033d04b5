// Preset pipelines (trapping series, ballistic snapshots,
// running-max concurrence maps) and a batch sweep runner.

#pragma once

#include "jch/dynamics.hpp"
#include "jch/entanglement.hpp"
#include "jch/model.hpp"
#include "jch/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace jch {

using SitePair = std::pair<int, int>;

struct ObservableSeries {
    std::vector<double> times; // units 1/J
    std::vector<double> entropy;
    std::vector<double> pi_a;
    std::vector<double> pi_f;
    std::vector<SitePair> pairs;
    std::vector<std::vector<double>> concurrence; // one channel per pair

    std::size_t size() const noexcept { return times.size(); }
    bool empty() const noexcept { return times.empty(); }

    void push(double t, const PureState& state) {
        const auto e = atom_field_entropy(state);
        times.push_back(t);
        entropy.push_back(e.entropy);
        pi_a.push_back(e.pi_a);
        pi_f.push_back(e.pi_f);
        concurrence.resize(pairs.size());
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            concurrence[p].push_back(concurrence_closed_form(state, pairs[p].first, pairs[p].second));
        }
    }

    const std::vector<double>& channel(int i, int j) const {
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            if ((pairs[p].first == i && pairs[p].second == j) || (pairs[p].first == j && pairs[p].second == i)) {
                return concurrence[p];
            }
        }
        throw std::out_of_range("ObservableSeries: no channel C_" + std::to_string(i) + "_" + std::to_string(j));
    }
};

// Indices of samples strictly greater than both neighbours.
inline std::vector<std::size_t> strict_peaks(std::span<const double> values) {
    std::vector<std::size_t> peaks;
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        if (values[i] > values[i - 1] && values[i] > values[i + 1]) peaks.push_back(i);
    }
    return peaks;
}

// Largest |x - x0| among sites with |c_{a,x}|^2 > threshold; -1 if none.
inline int probability_edge_offset(const PureState& state, int x0, double threshold) {
    int edge = -1;
    for (int x = 1; x <= state.n_cavities(); ++x) {
        if (std::norm(state.atom(x)) > threshold) edge = std::max(edge, std::abs(x - x0));
    }
    return edge;
}

// Distance from x0 of the outermost local maximum of |c_{a,x}|^2, ignoring
// maxima below 1% of the largest atomic probability.
inline int front_pulse_offset(const PureState& state, int x0) {
    const int n = state.n_cavities();
    std::vector<double> p(static_cast<std::size_t>(n) + 2, -1.0);
    double p_max = 0.0;
    for (int x = 1; x <= n; ++x) {
        p[static_cast<std::size_t>(x)] = std::norm(state.atom(x));
        p_max = std::max(p_max, p[static_cast<std::size_t>(x)]);
    }
    int front = -1;
    for (int x = 1; x <= n; ++x) {
        const auto i = static_cast<std::size_t>(x);
        if (p[i] >= 0.01 * p_max && p[i] >= p[i - 1] && p[i] >= p[i + 1]) {
            front = std::max(front, std::abs(x - x0));
        }
    }
    return front;
}

// Band-centre mode m = (N+1)/2, resonant with omega_a = omega_c. Requires N
// odd and m odd, otherwise v_{k,(N+1)/2} vanishes and nothing propagates.
inline int band_center_mode(const ModelParams& params) {
    const int n = params.n_cavities;
    if (n % 2 == 0) {
        throw std::invalid_argument("band_center_mode: N must be odd, got " + std::to_string(n));
    }
    const int m = (n + 1) / 2;
    if (m % 2 == 0) {
        throw std::invalid_argument("band_center_mode: (N+1)/2 = " + std::to_string(m) +
                                    " is even, the centre atom does not overlap the resonant mode");
    }
    return m;
}

// Nearest multiples of pi/g (instants where the atomic envelope cos^2(gt) is 1),
// duplicates removed, order kept.
inline std::vector<double> snap_to_rabi_peaks(std::span<const double> times, double g) {
    if (!(g > 0.0)) throw std::invalid_argument("snap_to_rabi_peaks: g must be > 0");
    const double period = std::numbers::pi / g;
    std::vector<double> out;
    out.reserve(times.size());
    long last = -1;
    for (const double t : times) {
        const long k = std::lround(t / period);
        if (k == last) continue;
        last = k;
        out.push_back(static_cast<double>(k) * period);
    }
    return out;
}

inline bool is_rabi_peak_time(double t, double g, double tol = 1e-9) {
    if (!(g > 0.0)) return false;
    const double ratio = t * g / std::numbers::pi;
    return std::abs(ratio - std::round(ratio)) <= tol;
}

// ------------------------------ specs ----------------------------------------

enum class ExperimentKind { Fig2, Fig3, Fig4, Custom };

inline const char* to_string(ExperimentKind k) noexcept {
    switch (k) {
    case ExperimentKind::Fig2: return "fig2";
    case ExperimentKind::Fig3: return "fig3";
    case ExperimentKind::Fig4: return "fig4";
    case ExperimentKind::Custom: return "custom";
    }
    return "?";
}

struct ExperimentSpec {
    ExperimentKind kind{ExperimentKind::Custom};
    std::string label{"custom"};
    ModelParams params;
    int x0{1};
    TimeGrid grid;
    PropagatorMethod method{PropagatorMethod::AnalyticBlocks};
    std::optional<int> resonant_mode; // weak method only; defaults to the band centre

    bool record_series{true};
    std::vector<SitePair> pairs;
    std::vector<double> snapshot_times;
    bool running_max{false};
    bool snap_grid_to_rabi_peaks{false};

    void validate() const {
        params.validate();
        if (x0 < 1 || x0 > params.n_cavities) {
            throw std::out_of_range("ExperimentSpec: x0 outside [1, N]");
        }
        grid.validate();
        for (const auto& [i, j] : pairs) {
            if (i == j || i < 1 || j < 1 || i > params.n_cavities || j > params.n_cavities) {
                throw std::out_of_range("ExperimentSpec: invalid pair " + std::to_string(i) + ":" +
                                        std::to_string(j));
            }
        }
        for (const double t : snapshot_times) {
            if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("ExperimentSpec: bad snapshot time");
        }
        if (kind == ExperimentKind::Fig2 || method == PropagatorMethod::WeakEffective) {
            if (!resonant_mode) band_center_mode(params);
        }
        if (snap_grid_to_rabi_peaks && !(params.coupling > 0.0)) {
            throw std::invalid_argument("ExperimentSpec: snapping to Rabi peaks needs g > 0");
        }
    }

    std::vector<double> sample_times() const {
        auto t = grid.times();
        if (snap_grid_to_rabi_peaks) return snap_to_rabi_peaks(t, params.coupling);
        return t;
    }
};

inline Propagator make_propagator(const ExperimentSpec& spec) {
    switch (spec.method) {
    case PropagatorMethod::AnalyticBlocks: return Propagator::analytic(spec.params);
    case PropagatorMethod::DenseOracle: return Propagator::dense(spec.params);
    case PropagatorMethod::WeakEffective:
        return Propagator::weak(spec.params,
                                spec.resonant_mode ? *spec.resonant_mode : band_center_mode(spec.params));
    case PropagatorMethod::StrongEffective: return Propagator::strong(spec.params);
    }
    throw std::logic_error("make_propagator: unknown method");
}

// Weak-coupling trapping preset: N = 41, x0 = 21, g = 1e-3 J, omega_a = omega_c = 0,
// t in [0, 4 pi/g] at 512 samples per pi/g, channels C_21_33 and C_31_33.
inline ExperimentSpec fig2_spec() {
    ExperimentSpec s;
    s.kind = ExperimentKind::Fig2;
    s.label = "fig2";
    s.params = ModelParams{41, 1.0, 1e-3, 0.0, 0.0};
    s.x0 = 21;
    s.grid = TimeGrid{0.0, 4.0 * std::numbers::pi / s.params.coupling, 4 * 512 + 1};
    s.pairs = {{21, 33}, {31, 33}};
    return s;
}

inline std::vector<double> fig3_default_snapshot_times() {
    const double g = 1e3;
    return {2000.0 * std::numbers::pi / g, 5000.0 * std::numbers::pi / g, 10000.0 * std::numbers::pi / g};
}

// Strong-coupling ballistic preset: N = 101, x0 = 51, g = 1e3 J.
inline ExperimentSpec fig3_spec(std::vector<double> snapshot_times = fig3_default_snapshot_times()) {
    ExperimentSpec s;
    s.kind = ExperimentKind::Fig3;
    s.label = "fig3";
    s.params = ModelParams{101, 1.0, 1e3, 0.0, 0.0};
    s.x0 = 51;
    s.record_series = false;
    s.snapshot_times = std::move(snapshot_times);
    return s;
}

// Running-max map preset: N = 201, x0 = 101, tJ in [0, 90] at dt = 0.05/J. In the
// strong regime the grid is snapped to multiples of pi/g.
inline ExperimentSpec fig4_spec(double g_over_j) {
    if (!(g_over_j > 0.0)) throw std::invalid_argument("fig4_spec: g/J must be > 0");
    ExperimentSpec s;
    s.kind = ExperimentKind::Fig4;
    s.label = "fig4";
    s.params = ModelParams{201, 1.0, g_over_j, 0.0, 0.0};
    s.x0 = 101;
    s.grid = TimeGrid{0.0, 90.0, 1801};
    s.record_series = false;
    s.running_max = true;
    s.snap_grid_to_rabi_peaks = strong_validity_metric(s.params) < 1.0;
    return s;
}

// ------------------------------ running ---------------------------------------

struct Snapshot {
    double time{0.0};
    double pi_a{0.0};
    double entropy{0.0};
    bool off_peak_warning{false}; // time is not a multiple of pi/g
    PureState state;
    ConcurrenceMap map;
};

struct ExperimentOutput {
    std::string label;
    ExperimentKind kind{ExperimentKind::Custom};
    PropagatorMethod method{PropagatorMethod::AnalyticBlocks};
    double validity_metric{0.0};
    ObservableSeries series;
    std::vector<Snapshot> snapshots;
    std::optional<ConcurrenceMap> max_map;
    std::size_t max_map_samples{0};
};

inline ExperimentOutput run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const auto prop = make_propagator(spec);
    const auto state0 = initial_atomic_excitation(spec.params, spec.x0);

    ExperimentOutput out;
    out.label = spec.label;
    out.kind = spec.kind;
    out.method = spec.method;
    out.validity_metric = prop.validity_metric();
    out.series.pairs = spec.pairs;

    if (spec.record_series || spec.running_max) {
        const auto times = spec.sample_times();
        std::optional<RunningMaxMap> acc;
        if (spec.running_max) acc.emplace(spec.params.n_cavities);
        for (const double t : times) {
            const auto state = prop.evolve(state0, t);
            if (spec.record_series) out.series.push(t, state);
            if (acc) acc->add(state);
        }
        if (acc) {
            out.max_map = acc->map();
            out.max_map_samples = acc->count();
        }
    }

    for (const double t : spec.snapshot_times) {
        Snapshot snap;
        snap.time = t;
        snap.state = prop.evolve(state0, t);
        const auto e = atom_field_entropy(snap.state);
        snap.pi_a = e.pi_a;
        snap.entropy = e.entropy;
        snap.off_peak_warning = !is_rabi_peak_time(t, spec.params.coupling);
        snap.map = concurrence_map(snap.state);
        out.snapshots.push_back(std::move(snap));
    }
    return out;
}

inline ObservableSeries run_fig2() { return run_experiment(fig2_spec()).series; }

inline std::vector<Snapshot> run_fig3(std::vector<double> snapshot_times = fig3_default_snapshot_times()) {
    return run_experiment(fig3_spec(std::move(snapshot_times))).snapshots;
}

inline ConcurrenceMap run_fig4(double g_over_j) { return *run_experiment(fig4_spec(g_over_j)).max_map; }

struct SweepEntry {
    std::string label;
    std::optional<ExperimentOutput> output;
    std::string error; // empty on success

    bool ok() const noexcept { return output.has_value(); }
};

// Specs run independently; a failing spec is recorded and the batch continues.
inline std::vector<SweepEntry> run_sweep(std::span<const ExperimentSpec> specs) {
    std::vector<SweepEntry> results;
    results.reserve(specs.size());
    for (const auto& spec : specs) {
        SweepEntry entry;
        entry.label = spec.label;
        try {
            entry.output = run_experiment(spec);
        } catch (const std::exception& ex) {
            entry.error = ex.what();
        }
        results.push_back(std::move(entry));
    }
    return results;
}

// Copies of base with g set to each value. When window_periods > 0 the grid
// spans window_periods * pi/g (keeping the sample count), else base.grid is kept.
inline std::vector<ExperimentSpec> coupling_sweep(const ExperimentSpec& base, std::span<const double> g_values,
                                                  double window_periods = 2.0) {
    std::vector<ExperimentSpec> specs;
    for (const double g : g_values) {
        auto s = base;
        s.kind = ExperimentKind::Custom;
        s.params.coupling = g;
        char buf[64];
        std::snprintf(buf, sizeof buf, "g%g", g);
        s.label = buf;
        if (window_periods > 0.0 && g > 0.0) {
            s.grid.t_start = 0.0;
            s.grid.t_end = window_periods * std::numbers::pi / g;
        }
        specs.push_back(std::move(s));
    }
    return specs;
}

} // namespace jch
