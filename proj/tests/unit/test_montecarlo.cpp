// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "lgas/montecarlo.hpp"
#include "lgas/theory.hpp"

namespace mc = lgas::mc;
namespace dyn = lgas::dynamics;
using lgas::GasConfig;
using std::numbers::pi;

namespace {

mc::RunOptions options(std::uint64_t seed, unsigned threads = 1, std::uint64_t chunk = mc::kDefaultChunk) {
    mc::RunOptions o;
    o.seed = seed;
    o.threads = threads;
    o.chunk = chunk;
    return o;
}

double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double stderr_of(const std::vector<double>& xs) {
    const double m = mean_of(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
}

}  // namespace

// --- initial conditions -------------------------------------------------------

TEST(SampleInitial, RadialDensityIsFlat) {
    // Nine equal-area annuli between r and 1/2 plus the corners beyond 1/2.
    const double r = 0.3;
    const dyn::Billiard billiard(GasConfig::make(2, r));
    const double free_area = 1 - pi * r * r;
    const double ring = pi * (0.25 - r * r) / 9;
    std::array<double, 10> expected;
    std::array<double, 9> outer_radius;
    for (int k = 0; k < 9; ++k) {
        expected[k] = ring / free_area;
        outer_radius[k] = std::sqrt(r * r + (k + 1) * ring / pi);
    }
    expected[9] = (1 - pi / 4) / free_area;

    const int n = 1'000'000;
    std::array<int, 10> counts{};
    for (int i = 0; i < n; ++i) {
        lgas::rng::Stream stream(17, static_cast<std::uint64_t>(i));
        const auto s = mc::sample_initial(billiard, stream);
        const double rho = std::hypot(s.position[0], s.position[1]);
        ASSERT_GE(rho, r);
        const auto k = std::lower_bound(outer_radius.begin(), outer_radius.end(), rho) - outer_radius.begin();
        ++counts[static_cast<std::size_t>(k)];
    }
    double chi2 = 0.0;
    for (int k = 0; k < 10; ++k) chi2 += std::pow(counts[k] - n * expected[k], 2) / (n * expected[k]);
    EXPECT_LT(chi2, 21.666);  // 1% point of chi^2 with 9 degrees of freedom
}

TEST(SampleInitial, VelocityMomentsAreIsotropic) {
    const int d = 3;
    const dyn::Billiard billiard(GasConfig::make(d, 0.4));
    const int n = 200000;
    std::vector<std::vector<double>> comp(d), prod(d * d);
    for (int i = 0; i < n; ++i) {
        lgas::rng::Stream stream(3, static_cast<std::uint64_t>(i));
        const auto s = mc::sample_initial(billiard, stream);
        for (int a = 0; a < d; ++a) {
            comp[a].push_back(s.velocity[a]);
            for (int b = 0; b < d; ++b) prod[a * d + b].push_back(s.velocity[a] * s.velocity[b]);
        }
    }
    for (int a = 0; a < d; ++a) {
        EXPECT_NEAR(mean_of(comp[a]), 0.0, 3 * stderr_of(comp[a]));
        for (int b = 0; b < d; ++b) {
            const auto& p = prod[a * d + b];
            EXPECT_NEAR(mean_of(p), a == b ? 1.0 / d : 0.0, 3 * stderr_of(p)) << a << b;
        }
    }
}

TEST(SampleInitial, NeverInsideAScatterer) {
    for (double r : {0.2, 0.5, 0.6}) {
        const dyn::Billiard billiard(GasConfig::make(3, r));
        for (int i = 0; i < 20000; ++i) {
            lgas::rng::Stream stream(5, static_cast<std::uint64_t>(i));
            const auto s = mc::sample_initial(billiard, stream);
            ASSERT_TRUE(billiard.outside_scatterers(s.position));
            EXPECT_GE(billiard.clearance(s), 0.0);
            EXPECT_EQ(s.time, 0.0);
            EXPECT_EQ(s.cell, (std::vector<std::int64_t>{0, 0, 0}));
        }
    }
}

// --- survival -------------------------------------------------------------------

TEST(Survival, ThresholdGrid) {
    const auto t = mc::survival_thresholds(1000.0);
    EXPECT_EQ(t.front(), 0.0);
    EXPECT_NEAR(t[1], 0.1, 1e-15);
    EXPECT_EQ(t.back(), 1000.0);
    EXPECT_EQ(t.size(), 1u + 80u + 1u);
    for (std::size_t k = 2; k + 1 < t.size(); ++k) EXPECT_NEAR(t[k] / t[k - 1], std::pow(10.0, 0.05), 1e-12);
    EXPECT_THROW(mc::survival_thresholds(0.0), std::invalid_argument);
}

TEST(Survival, CurveInvariants) {
    for (double r : {0.3, 0.5, 0.6}) {
        const auto c = mc::estimate_survival(GasConfig::make(3, r), 20000, 500.0, options(r * 100));
        EXPECT_EQ(c.samples, 20000u);
        EXPECT_EQ(c.survivors.front(), c.samples);
        EXPECT_EQ(c.estimate.front(), 1.0);
        for (std::size_t k = 0; k < c.times.size(); ++k) {
            EXPECT_LE(c.survivors[k], c.samples);
            if (k > 0) EXPECT_LE(c.survivors[k], c.survivors[k - 1]);
            EXPECT_DOUBLE_EQ(c.estimate[k], static_cast<double>(c.survivors[k]) / c.samples);
            EXPECT_DOUBLE_EQ(c.stderr_[k], std::sqrt(c.estimate[k] * (1 - c.estimate[k]) / c.samples));
        }
    }
}

TEST(Survival, PlanarOverlapTrapsEveryOrbit) {
    const auto c = mc::estimate_survival(GasConfig::make(2, 0.6), 50000, 100.0, options(2));
    EXPECT_EQ(c.survivors.back(), 0u);
    // the largest free chord is bounded, so the curve is already empty at t = 1
    const auto at_one = std::find(c.times.begin(), c.times.end(), 1.0) - c.times.begin();
    EXPECT_EQ(c.survivors[static_cast<std::size_t>(at_one)], 0u);
}

TEST(Survival, FromTimesCountsThresholdsInclusively) {
    const std::vector<double> times{0.0, 0.1, 0.5, 2.0, 10.0, dyn::kNoHit};
    const auto c = mc::survival_from_times(times, 10.0);
    EXPECT_EQ(c.samples, 6u);
    EXPECT_EQ(c.survivors.front(), 6u);
    EXPECT_EQ(c.survivors[1], 5u);   // T >= 0.1
    EXPECT_EQ(c.survivors.back(), 2u);  // T >= 10
}

TEST(Survival, IndependentOfThreadsAndChunks) {
    const auto cfg = GasConfig::make(3, 0.45);
    const auto base = mc::estimate_survival(cfg, 30000, 1000.0, options(9, 1));
    for (unsigned threads : {2u, 5u}) {
        for (std::uint64_t chunk : {1000u, 4096u}) {
            mc::RunReport report;
            auto o = options(9, threads, chunk);
            o.report = &report;
            const auto c = mc::estimate_survival(cfg, 30000, 1000.0, o);
            EXPECT_EQ(c.survivors, base.survivors);
            EXPECT_EQ(report.workers, threads);
            std::set<std::uint64_t> chunks;
            std::size_t total = 0;
            for (const auto& w : report.worker_chunks) {
                chunks.insert(w.begin(), w.end());
                total += w.size();
            }
            EXPECT_EQ(total, chunks.size());
            EXPECT_EQ(chunks.size(), (30000 + chunk - 1) / chunk);
        }
    }
}

TEST(Survival, ConsistentBetweenNAndTwoN) {
    const auto cfg = GasConfig::make(2, 0.4);
    const auto a = mc::estimate_survival(cfg, 50000, 1000.0, options(21));
    const auto b = mc::estimate_survival(cfg, 100000, 1000.0, options(21));
    for (std::size_t k = 0; k < a.times.size(); ++k) {
        const double combined = std::hypot(a.stderr_[k], b.stderr_[k]);
        EXPECT_LE(std::fabs(a.estimate[k] - b.estimate[k]), 3 * combined + 1e-12) << a.times[k];
    }
}

// --- exponent fits --------------------------------------------------------------

TEST(FitExponent, ExactPowerLaw) {
    mc::SurvivalCurve c;
    c.times = mc::survival_thresholds(1e4);
    c.samples = 0;
    for (double t : c.times) c.estimate.push_back(t < 1.0 ? 1.0 : 1.0 / (t * t));
    c.survivors.assign(c.times.size(), 0);
    c.stderr_.assign(c.times.size(), 0.0);
    const auto fit = mc::fit_exponent(c, 2e-7, 5e-2);
    EXPECT_NEAR(fit.alpha, 2.0, 1e-6);
    EXPECT_LT(fit.residual, 1e-12);
    EXPECT_EQ(fit.bins_used, 53u);
    EXPECT_EQ(fit.weighting, "unweighted least squares in (ln t, ln F)");
}

TEST(FitExponent, UsesOnlyBinsStrictlyInsideWindow) {
    mc::SurvivalCurve c;
    c.times = {1, 2, 3, 4, 5, 6};
    c.estimate = {0.5, 0.25, 0.1, 0.05, 0.01, 0.001};
    c.samples = 0;
    const auto fit = mc::fit_exponent(c, 0.01, 0.5);
    EXPECT_EQ(fit.bins_used, 3u);
    EXPECT_THROW(mc::fit_exponent(c, 0.04, 0.2), mc::FitError);
    EXPECT_THROW(mc::fit_exponent(c, 0.5, 0.1), std::invalid_argument);
}

TEST(FitExponent, StandardErrorsCoverTheTruth) {
    // Pareto first-collision times, F(t) = t^-2 for t >= 1.
    const std::uint64_t n = 100000;
    const auto window = mc::standard_fit_window(n);
    int covered = 0;
    const int runs = 200;
    for (int seed = 0; seed < runs; ++seed) {
        lgas::rng::Stream s(static_cast<std::uint64_t>(1000 + seed), 0);
        std::vector<double> times(n);
        for (double& t : times) t = 1.0 / std::sqrt(1.0 - s.uniform());
        const auto fit = mc::fit_exponent(mc::survival_from_times(times, 1000.0), window.first, window.second);
        ASSERT_GT(fit.stderr_, 0.0);
        if (std::fabs(fit.alpha - 2.0) <= 2 * fit.stderr_) ++covered;
    }
    // nominal 95%; 92% leaves two binomial standard deviations of slack
    EXPECT_GE(covered, static_cast<int>(0.92 * runs));
}

// --- velocity autocorrelation ---------------------------------------------------

TEST(Vacf, LagZeroIsOne) {
    const auto cfg = GasConfig::make(3, 0.4);
    for (double w : {0.0, 3.0}) {
        mc::VacfOptions v;
        v.origin_window = w;
        const auto c = mc::estimate_vacf(cfg, 500, {0.0, 1.0, 5.0}, options(4), v);
        EXPECT_NEAR(c.values[0], 1.0, 1e-12);
        EXPECT_NEAR(c.stderr_[0], 0.0, 1e-7);
        EXPECT_LT(c.values[2], c.values[0]);
        EXPECT_EQ(c.origin_window, w);
        EXPECT_EQ(c.samples, 500u);
    }
}

TEST(Vacf, StartAnchoredMatchesDirectEvaluation) {
    const auto cfg = GasConfig::make(2, 0.35);
    const std::vector<double> lags{0.5, 2.0, 7.0};
    const std::uint64_t n = 300;
    const auto c = mc::estimate_vacf(cfg, n, lags, options(8, 3, 64));
    const dyn::Billiard billiard(cfg);
    for (std::size_t j = 0; j < lags.size(); ++j) {
        double sum = 0.0;
        for (std::uint64_t i = 0; i < n; ++i) {
            lgas::rng::Stream stream(8, i);
            const auto s = mc::sample_initial(billiard, stream);
            const auto e = billiard.advance(s, lags[j]);
            sum += s.velocity[0] * e.velocity[0] + s.velocity[1] * e.velocity[1];
        }
        EXPECT_NEAR(c.values[j], sum / n, 1e-12);
    }
}

TEST(Vacf, OriginWindowMatchesMidpointAverage) {
    const auto cfg = GasConfig::make(3, 0.4);
    const dyn::Billiard billiard(cfg);
    const double W = 4.0;
    const std::vector<double> lags{0.0, 0.7, 3.0};
    const std::uint64_t n = 12;
    mc::VacfOptions v;
    v.origin_window = W;
    const auto c = mc::estimate_vacf(cfg, n, lags, options(6), v);

    const int K = 4000;
    for (std::size_t j = 0; j < lags.size(); ++j) {
        double sum = 0.0;
        for (std::uint64_t i = 0; i < n; ++i) {
            lgas::rng::Stream stream(6, i);
            const auto s0 = mc::sample_initial(billiard, stream);
            auto a = billiard.advance(s0, 0.5 * W / K);
            auto b = billiard.advance(s0, 0.5 * W / K + lags[j]);
            double acc = 0.0;
            for (int k = 0; k < K; ++k) {
                acc += a.velocity[0] * b.velocity[0] + a.velocity[1] * b.velocity[1] + a.velocity[2] * b.velocity[2];
                if (k + 1 < K) {
                    billiard.advance_in_place(a, W / K);
                    billiard.advance_in_place(b, W / K);
                }
            }
            sum += acc / K;
        }
        // each velocity jump misplaces at most one grid cell of width W / K
        EXPECT_NEAR(c.values[j], sum / n, 2e-2) << lags[j];
    }
}

TEST(Vacf, InvariantUnderVelocityReversal) {
    // Paired samples (x, v) and (x, -v) have the same correlation law.
    const auto cfg = GasConfig::make(2, 0.4);
    const dyn::Billiard billiard(cfg);
    for (double lag : {0.5, 2.0, 10.0}) {
        std::vector<double> diff;
        for (std::uint64_t i = 0; i < 20000; ++i) {
            lgas::rng::Stream stream(44, i);
            const auto s = mc::sample_initial(billiard, stream);
            auto r = s;
            for (double& c : r.velocity) c = -c;
            const auto a = billiard.advance(s, lag);
            const auto b = billiard.advance(r, lag);
            const double ca = s.velocity[0] * a.velocity[0] + s.velocity[1] * a.velocity[1];
            const double cb = r.velocity[0] * b.velocity[0] + r.velocity[1] * b.velocity[1];
            diff.push_back(ca - cb);
        }
        EXPECT_NEAR(mean_of(diff), 0.0, 3 * stderr_of(diff)) << lag;
    }
}

TEST(Vacf, IndependentOfThreads) {
    const auto cfg = GasConfig::make(3, 0.45);
    mc::VacfOptions v;
    v.origin_window = 10.0;
    const auto a = mc::estimate_vacf(cfg, 3000, {0, 5, 25}, options(12, 1, 256), v);
    const auto b = mc::estimate_vacf(cfg, 3000, {0, 5, 25}, options(12, 4, 256), v);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.stderr_, b.stderr_);
}

TEST(Vacf, RejectsBadLags) {
    const auto cfg = GasConfig::make(2, 0.4);
    EXPECT_THROW(mc::estimate_vacf(cfg, 10, {2.0, 1.0}, options(1)), std::invalid_argument);
    EXPECT_THROW(mc::estimate_vacf(cfg, 10, {-1.0}, options(1)), std::invalid_argument);
    mc::VacfOptions v;
    v.origin_window = -1.0;
    EXPECT_THROW(mc::estimate_vacf(cfg, 10, {1.0}, options(1), v), std::invalid_argument);
}

TEST(FitInverseLag, RecoversExactAmplitude) {
    mc::CorrelationSeries s;
    for (double t = 10; t <= 600; t += 10) {
        s.lags.push_back(t);
        s.values.push_back(0.25 / t);
        s.stderr_.push_back(1e-3 * (1 + t / 100));
    }
    const auto fit = mc::fit_inverse_lag(s, 50, 500);
    EXPECT_NEAR(fit.amplitude, 0.25, 1e-12);
    EXPECT_EQ(fit.points, 46u);
    EXPECT_GT(fit.stderr_, 0.0);
    EXPECT_THROW(mc::fit_inverse_lag(s, 601, 700), mc::FitError);
}

// --- mean-square displacement ---------------------------------------------------

TEST(Msd, BallisticFloor) {
    const auto m = mc::estimate_msd(GasConfig::make(3, 0.4), 20000, {0.01, 0.03, 0.1}, options(2));
    for (std::size_t j = 0; j < m.times.size(); ++j) {
        const double t = m.times[j];
        EXPECT_NEAR(m.msd[j], t * t, 0.05 * t * t) << t;
        EXPECT_LE(m.msd[j], t * t * (1 + 1e-12));
        EXPECT_TRUE(std::isnan(m.scaled[j]));
    }
}

TEST(Msd, CubicSymmetry) {
    const int d = 3;
    const auto m = mc::estimate_msd(GasConfig::make(d, 0.4), 20000, {5.0, 100.0}, options(3));
    for (std::size_t j = 0; j < m.times.size(); ++j) {
        double trace = 0.0;
        for (int a = 0; a < d; ++a) {
            trace += m.second_moment[j][a * d + a];
            for (int b = 0; b < d; ++b) {
                EXPECT_EQ(m.second_moment[j][a * d + b], m.second_moment[j][b * d + a]);
                if (a != b) EXPECT_NEAR(m.second_moment[j][a * d + b], 0.0, 3 * m.second_moment_stderr[j][a * d + b]);
            }
        }
        EXPECT_NEAR(trace, m.msd[j], 1e-9 * m.msd[j]);
        const double t = m.times[j];
        EXPECT_NEAR(m.scaled[j], m.msd[j] / (2 * d * t * std::log(t)), 1e-15);
        EXPECT_GT(m.scaled[j], 0.0);
        EXPECT_GT(m.scaled_stderr[j], 0.0);
    }
}

TEST(Msd, IndependentOfThreadsAndRejectsBadTimes) {
    const auto cfg = GasConfig::make(2, 0.4);
    const auto a = mc::estimate_msd(cfg, 4000, {1.5, 20.0}, options(7, 1, 512));
    const auto b = mc::estimate_msd(cfg, 4000, {1.5, 20.0}, options(7, 3, 512));
    EXPECT_EQ(a.msd, b.msd);
    EXPECT_EQ(a.second_moment, b.second_moment);
    EXPECT_THROW(mc::estimate_msd(cfg, 10, {0.0, 1.0}, options(1)), std::invalid_argument);
    EXPECT_THROW(mc::estimate_msd(cfg, 10, {5.0, 2.0}, options(1)), std::invalid_argument);
}

// --- scaled displacement histogram ----------------------------------------------

TEST(DisplacementHistogram, NormalisedAndEven) {
    const auto cfg = GasConfig::make(2, 0.4);
    const auto h = mc::scaled_displacement_histogram(cfg, 40000, 100.0, options(10));
    EXPECT_NEAR(h.scale, std::sqrt(100 * std::log(100.0)), 1e-12);
    EXPECT_NEAR(h.reference_variance, lgas::theory::superdiffusion_matrix(cfg)(0, 0), 1e-15);
    const std::size_t bins = h.counts.size();
    ASSERT_EQ(h.edges.size(), bins + 1);
    EXPECT_NEAR(h.edges.back(), -h.edges.front(), 1e-12);
    EXPECT_GE(h.edges.back(), 100.0 / h.scale);

    double mass = 0.0;
    std::uint64_t total = 0;
    for (std::size_t b = 0; b < bins; ++b) {
        mass += h.density[b] * (h.edges[b + 1] - h.edges[b]);
        total += h.counts[b];
    }
    EXPECT_NEAR(mass, 1.0, 1e-12);
    EXPECT_EQ(total, h.samples);

    // Mirror-image bins: their counts differ like two Poisson variables.
    double chi2 = 0.0;
    int dof = 0;
    for (std::size_t b = 0; b < bins / 2; ++b) {
        const double x = static_cast<double>(h.counts[b]);
        const double y = static_cast<double>(h.counts[bins - 1 - b]);
        if (x + y < 20) continue;
        chi2 += (x - y) * (x - y) / (x + y);
        ++dof;
    }
    ASSERT_GT(dof, 10);
    EXPECT_LT(chi2, dof + 4 * std::sqrt(2.0 * dof));
}

TEST(DisplacementHistogram, BallisticTailsBeyondSixSigma) {
    const auto h = mc::scaled_displacement_histogram(GasConfig::make(2, 0.4), 40000, 300.0, options(11));
    EXPECT_GT(h.mass_beyond_6sigma, 0.0);
    EXPECT_LT(h.mass_beyond_6sigma, 0.05);
}

TEST(DisplacementHistogram, KolmogorovDistanceShrinksWithTime) {
    const auto cfg = GasConfig::make(2, 0.4);
    const auto early = mc::scaled_displacement_histogram(cfg, 50000, 100.0, options(13));
    const auto late = mc::scaled_displacement_histogram(cfg, 50000, 1000.0, options(13));
    EXPECT_LT(late.ks_distance, early.ks_distance);
}

TEST(DisplacementHistogram, OverlappingRadiusHasNoReference) {
    const auto h = mc::scaled_displacement_histogram(GasConfig::make(3, 0.6), 2000, 10.0, options(1), 40);
    EXPECT_TRUE(std::isnan(h.reference_variance));
    EXPECT_TRUE(std::isnan(h.ks_distance));
    EXPECT_EQ(h.counts.size(), 40u);
    EXPECT_THROW(mc::scaled_displacement_histogram(GasConfig::make(2, 0.4), 10, 2.0, options(1)),
                 std::invalid_argument);
}
