#include "jch/experiments.hpp"

#include "oracles/frozen_values.hpp"

#include <gtest/gtest.h>

#include <map>
#include <numbers>

using namespace jch;

namespace {

constexpr double kPi = std::numbers::pi;

const ObservableSeries& fig2_series() {
    static const ObservableSeries s = run_fig2();
    return s;
}

const ConcurrenceMap& fig4_map(double g) {
    static std::map<double, ConcurrenceMap> cache;
    auto it = cache.find(g);
    if (it == cache.end()) it = cache.emplace(g, run_fig4(g)).first;
    return it->second;
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

// Peaks of at least half the channel maximum.
std::vector<std::size_t> significant_peaks(const std::vector<double>& v) {
    std::vector<std::size_t> out;
    const double m = max_of(v);
    for (auto i : strict_peaks(v))
        if (v[i] >= 0.5 * m) out.push_back(i);
    return out;
}

} // namespace

TEST(Helpers, StrictPeaks) {
    const std::vector<double> v{0, 1, 0, 2, 2, 1, 3, 0};
    EXPECT_EQ(strict_peaks(v), (std::vector<std::size_t>{1, 6}));
    EXPECT_TRUE(strict_peaks(std::vector<double>{1.0, 2.0}).empty());
}

TEST(Helpers, BandCentreMode) {
    EXPECT_EQ(band_center_mode(ModelParams{41}), 21);
    EXPECT_EQ(band_center_mode(ModelParams{101}), 51);
    EXPECT_THROW(band_center_mode(ModelParams{40}), std::invalid_argument);
    EXPECT_THROW(band_center_mode(ModelParams{43}), std::invalid_argument); // m = 22
}

TEST(Helpers, SnapToRabiPeaks) {
    const double g = 10.0;
    const std::vector<double> t{0.0, 0.1, 0.3, 0.31, 0.7};
    const auto s = snap_to_rabi_peaks(t, g); // pi/g = 0.314...
    for (double x : s) EXPECT_TRUE(is_rabi_peak_time(x, g));
    ASSERT_EQ(s.size(), 3u); // 0.3 and 0.31 land on the same multiple
    EXPECT_EQ(s[0], 0.0);
    EXPECT_DOUBLE_EQ(s[1], kPi / g);
    EXPECT_DOUBLE_EQ(s[2], 2 * kPi / g);
    EXPECT_FALSE(is_rabi_peak_time(0.1, g));
    EXPECT_THROW(snap_to_rabi_peaks(t, 0.0), std::invalid_argument);
}

TEST(Helpers, FrontOffsets) {
    auto s = PureState::zero(11);
    s.amplitudes()(11 + 5) = 0.8;   // site 6
    s.amplitudes()(11 + 1) = 0.5;   // site 2, local max at distance 4
    s.amplitudes()(11 + 10) = 0.01; // site 11, below 1% of the peak
    EXPECT_EQ(front_pulse_offset(s, 6), 4);
    EXPECT_EQ(probability_edge_offset(s, 6, 1e-5), 5);
    EXPECT_EQ(probability_edge_offset(s, 6, 1e-3), 4);
    EXPECT_EQ(probability_edge_offset(s, 6, 1.0), -1);
}

TEST(Presets, FixedParameters) {
    const auto f2 = fig2_spec();
    EXPECT_EQ(f2.params.n_cavities, 41);
    EXPECT_EQ(f2.x0, 21);
    EXPECT_EQ(f2.params.coupling, 1e-3);
    EXPECT_GE(f2.grid.n_samples, 2048);
    EXPECT_DOUBLE_EQ(f2.grid.t_end, 4 * kPi / 1e-3);
    EXPECT_EQ(f2.pairs, (std::vector<SitePair>{{21, 33}, {31, 33}}));

    const auto f3 = fig3_spec();
    EXPECT_EQ(f3.params.n_cavities, 101);
    EXPECT_EQ(f3.x0, 51);
    EXPECT_EQ(f3.params.coupling, 1e3);
    ASSERT_EQ(f3.snapshot_times.size(), 3u);
    for (double t : f3.snapshot_times) EXPECT_TRUE(is_rabi_peak_time(t, 1e3));

    for (double g : {0.1, 1.5, 10.0}) {
        const auto f4 = fig4_spec(g);
        EXPECT_EQ(f4.params.n_cavities, 201);
        EXPECT_EQ(f4.x0, 101);
        EXPECT_EQ(f4.grid.t_end, 90.0);
        EXPECT_LE(f4.grid.step(), 0.05 + 1e-15);
        EXPECT_EQ(f4.snap_grid_to_rabi_peaks, g > 4.0);
    }
    EXPECT_THROW(fig4_spec(0.0), std::invalid_argument);
}

TEST(Fig2, Observables) {
    const auto& s = fig2_series();
    ASSERT_EQ(s.size(), 2049u);
    EXPECT_NEAR(max_of(s.entropy), oracle::kWeakMaxEntropy, 1e-9);
    EXPECT_NEAR(max_of(s.channel(21, 33)), oracle::kWeakMaxC21_33, 1e-9);
    EXPECT_NEAR(max_of(s.channel(33, 31)), oracle::kWeakMaxC31_33, 1e-9);
    EXPECT_NEAR(max_of(s.entropy), 0.2762, 1e-3);
    EXPECT_NEAR(max_of(s.channel(21, 33)), 76.0 / 441.0, 5e-3);
    EXPECT_NEAR(max_of(s.channel(31, 33)), 8.0 / 441.0, 2e-3);
    EXPECT_THROW(s.channel(1, 2), std::out_of_range);
}

TEST(Fig2, EntropyIsBinaryEntropyOfAtomicWeight) {
    const auto& s = fig2_series();
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(s.entropy[i], binary_entropy(s.pi_a[i]), 1e-12);
}

TEST(Fig2, EntropyPeriodAndZeros) {
    const auto& s = fig2_series();
    const auto peaks = strict_peaks(s.entropy);
    ASSERT_GE(peaks.size(), 2u);
    const double spacing = static_cast<double>(peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
    EXPECT_NEAR(spacing, 512.0, 2.0); // pi/g in grid steps
    // S vanishes again at t = T and 3T
    for (std::size_t k : {512u, 1536u}) {
        EXPECT_LT(s.entropy[k], 1e-3);
        EXPECT_LE(s.entropy[k], s.entropy[k - 1]);
        EXPECT_LE(s.entropy[k], s.entropy[k + 1]);
    }
}

TEST(Fig2, ConcurrencePeaksAtOddMultiplesOfT) {
    const auto& s = fig2_series();
    for (const auto& channel : {s.channel(21, 33), s.channel(31, 33)}) {
        const auto peaks = significant_peaks(channel);
        ASSERT_EQ(peaks.size(), 2u);
        EXPECT_NEAR(static_cast<double>(peaks[0]), 512.0, 2.0);
        EXPECT_NEAR(static_cast<double>(peaks[1]), 1536.0, 2.0);
    }
}

TEST(Fig2, RerunIsBitIdentical) {
    const auto again = run_fig2();
    EXPECT_EQ(again.entropy, fig2_series().entropy);
    EXPECT_EQ(again.concurrence, fig2_series().concurrence);
}

TEST(StrongRegime, EntropyMaximaAtOddQuarterPeriods) {
    ExperimentSpec spec;
    spec.params = ModelParams{101, 1.0, 1e3};
    spec.x0 = 51;
    spec.grid = TimeGrid{0.0, 2 * kPi / 1e3, 2 * 128 + 1}; // 128 samples per pi/g
    const auto s = run_experiment(spec).series;
    const auto peaks = strict_peaks(s.entropy);
    ASSERT_EQ(peaks.size(), 4u);
    const double step = spec.grid.step();
    for (std::size_t k = 0; k < 4; ++k) {
        const double expected = (2.0 * static_cast<double>(k) + 1.0) * kPi / (4.0 * 1e3);
        EXPECT_NEAR(s.times[peaks[k]], expected, 1.01 * step);
        EXPECT_GT(s.entropy[peaks[k]], 0.99);
    }
}

TEST(Fig3, SnapshotsSpreadOutward) {
    const auto snaps = run_fig3();
    ASSERT_EQ(snaps.size(), 3u);
    int previous = -1;
    for (const auto& s : snaps) {
        EXPECT_FALSE(s.off_peak_warning);
        EXPECT_NEAR(s.pi_a, 1.0, 1e-4);
        const int radius = probability_edge_offset(s.state, 51, 1e-6);
        EXPECT_GT(radius, previous);
        previous = radius;
        EXPECT_EQ((s.map.values() - s.map.values().transpose()).cwiseAbs().maxCoeff(), 0.0);
    }
}

TEST(Fig3, FrozenAtomicWeight) {
    const auto snaps = run_fig3({2000 * kPi / 1e3, 5000 * kPi / 1e3});
    EXPECT_NEAR(snaps[0].pi_a, oracle::kStrongPiA2000, 1e-12);
    EXPECT_NEAR(snaps[1].pi_a, oracle::kStrongPiA5000, 1e-12);
}

TEST(Fig3, OffPeakSnapshotIsFlagged) {
    const auto snaps = run_fig3({1.0});
    EXPECT_TRUE(snaps[0].off_peak_warning);
}

TEST(Fig4, AllPanelsSymmetricWithZeroDiagonal) {
    for (double g : {0.1, 1.5, 10.0}) {
        const auto& m = fig4_map(g).values();
        EXPECT_EQ((m - m.transpose()).cwiseAbs().maxCoeff(), 0.0) << g;
        EXPECT_EQ(m.diagonal().cwiseAbs().maxCoeff(), 0.0) << g;
        EXPECT_GE(m.minCoeff(), 0.0);
        EXPECT_LE(m.maxCoeff(), 1.0);
        for (int i = 1; i <= 201; i += 7)
            for (int j = 1; j <= 201; j += 5) EXPECT_NEAR(fig4_map(g)(i, j), fig4_map(g)(202 - i, 202 - j), 1e-10);
    }
}

TEST(Fig4, WeakCouplingPairsTheCentreWithEveryone) {
    const auto& m = fig4_map(0.1).values();
    Eigen::Index r, c;
    m.maxCoeff(&r, &c);
    EXPECT_TRUE(r == 100 || c == 100) << r << "," << c;
    Eigen::Index best_row;
    m.rowwise().mean().maxCoeff(&best_row);
    EXPECT_EQ(best_row, 100);
}

TEST(Fig4, StrongCouplingRidges) {
    const auto& m = fig4_map(10.0).values();
    const int n = 201;
    double off_sum = 0.0, near_sum = 0.0, anti_sum = 0.0;
    int near_count = 0, anti_count = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            off_sum += m(i, j);
            if (std::abs(i - j) == 1) near_sum += m(i, j), ++near_count;
            if (i + j == n - 1) anti_sum += m(i, j), ++anti_count;
        }
    const double global = off_sum / (n * (n - 1));
    EXPECT_GE(near_sum / near_count, 3.0 * global);
    EXPECT_GE(anti_sum / anti_count, 3.0 * global);
}

TEST(Sweep, EmptyAndDuplicate) {
    EXPECT_TRUE(run_sweep({}).empty());
    ExperimentSpec spec;
    spec.params = ModelParams{9, 1.0, 0.4};
    spec.x0 = 5;
    spec.grid = TimeGrid{0.0, 20.0, 50};
    spec.pairs = {{5, 6}};
    const std::vector<ExperimentSpec> specs{spec, spec};
    const auto out = run_sweep(specs);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[0].output->series.entropy, out[1].output->series.entropy);
    EXPECT_EQ(out[0].output->series.concurrence, out[1].output->series.concurrence);
}

TEST(Sweep, FailuresDoNotAbortTheBatch) {
    ExperimentSpec good;
    good.params = ModelParams{5, 1.0, 0.4};
    good.x0 = 3;
    auto bad = good;
    bad.x0 = 9;
    const std::vector<ExperimentSpec> specs{bad, good};
    const auto out = run_sweep(specs);
    EXPECT_FALSE(out[0].ok());
    EXPECT_FALSE(out[0].error.empty());
    EXPECT_TRUE(out[1].ok());
}

// Largest entropy over two Rabi periods grows with g: the trapped plateau
// 0.276 at weak coupling rises to 1 once the atoms fully empty into photons.
TEST(Sweep, MaxEntropyAcrossCouplings) {
    auto base = fig2_spec();
    base.grid.n_samples = 1025;
    const std::vector<double> gs{1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0};
    const auto out = run_sweep(coupling_sweep(base, gs));
    std::vector<double> smax;
    for (const auto& e : out) {
        ASSERT_TRUE(e.ok()) << e.error;
        smax.push_back(max_of(e.output->series.entropy));
    }
    EXPECT_NEAR(smax[0], 0.2762, 1e-3);
    for (std::size_t k = 1; k < smax.size(); ++k) EXPECT_GE(smax[k], smax[k - 1] - 1e-3);
    for (std::size_t k = 3; k < smax.size(); ++k) EXPECT_GT(smax[k], 0.999);
    EXPECT_EQ(out[2].label, "g0.1");
}

TEST(ExperimentSpec, Validation) {
    ExperimentSpec s;
    s.params = ModelParams{5};
    s.x0 = 6;
    EXPECT_THROW(s.validate(), std::out_of_range);
    s.x0 = 2;
    s.pairs = {{2, 2}};
    EXPECT_THROW(s.validate(), std::out_of_range);
    s.pairs.clear();
    s.method = PropagatorMethod::WeakEffective; // N=5: band centre m=3 odd, fine
    EXPECT_NO_THROW(s.validate());
    s.params.n_cavities = 7; // m = 4, even
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s.resonant_mode = 3; // explicit choice bypasses the band-centre rule
    EXPECT_NO_THROW(s.validate());
    EXPECT_EQ(make_propagator(s).resonant_mode(), 3);
}
