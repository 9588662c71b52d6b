// SPDX-License-Identifier: Apache-2.0
//
// Ensemble estimators over trajectories started from the invariant measure:
// free-flight survival, velocity autocorrelation, mean-square displacement,
// scaled displacement histograms, and power-law fits to survival tails.
//
// Every estimator is a deterministic function of (config, n, seed): sample i
// draws from rng stream (seed, i); samples are grouped into fixed-size chunks
// whose partial sums are combined in chunk order, so the worker count never
// changes a result bit.

#ifndef LGAS_MONTECARLO_HPP
#define LGAS_MONTECARLO_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgas/dynamics.hpp"
#include "lgas/gas_config.hpp"
#include "lgas/rng.hpp"

namespace lgas::mc {

inline constexpr std::uint64_t kDefaultChunk = 2048;
inline constexpr std::uint64_t kMaxRejections = 1'000'000;

/// Which chunks each worker processed; chunk c covers samples [c * chunk, (c + 1) * chunk).
struct RunReport {
    unsigned workers = 0;
    std::uint64_t chunk = 0;
    std::vector<std::vector<std::uint64_t>> worker_chunks;
};

struct RunOptions {
    std::uint64_t seed = 1;
    unsigned threads = 0;  ///< 0: LGAS_THREADS if set, else hardware concurrency
    std::uint64_t chunk = kDefaultChunk;
    RunReport* report = nullptr;  ///< filled in when non-null
};

/// Worker count actually used for a request of `requested` (0 = automatic).
unsigned resolve_threads(unsigned requested);

/// Uniform position in the cell outside the scatterers, isotropic velocity.
/// Throws dynamics::DegenerateGeometryError after kMaxRejections rejected positions.
dynamics::ParticleState sample_initial(const dynamics::Billiard& billiard, rng::Stream& stream);

// --- survival ---------------------------------------------------------------

struct SurvivalCurve {
    std::vector<double> times;               ///< thresholds: 0, then 20 per decade from 0.1, then t_max
    std::vector<std::uint64_t> survivors;    ///< #{T >= t}
    std::uint64_t samples = 0;
    std::vector<double> estimate;            ///< survivors / samples
    std::vector<double> stderr_;             ///< sqrt(F (1 - F) / n)
};

/// Threshold grid used by estimate_survival.
std::vector<double> survival_thresholds(double t_max);

/// Builds a curve from first-collision times (kNoHit or anything >= t_max
/// counts as surviving the whole grid).
SurvivalCurve survival_from_times(std::span<const double> first_collision_times, double t_max);

/// Builds a curve from survivor counts on an explicit grid.
SurvivalCurve survival_from_counts(std::vector<double> times, std::vector<std::uint64_t> survivors,
                                   std::uint64_t samples);

/// F(t) from n first-collision times capped at t_max.
SurvivalCurve estimate_survival(const GasConfig& cfg, std::uint64_t n, double t_max, const RunOptions& opts);

// --- velocity autocorrelation ------------------------------------------------

struct VacfOptions {
    /// Length W of the time-origin window. 0 anchors every sample at its
    /// start; W > 0 averages v(s).v(s + lag) exactly over s in [0, W] along
    /// the same stationary trajectory.
    double origin_window = 0.0;
};

struct CorrelationSeries {
    std::vector<double> lags;
    std::vector<double> values;   ///< <v(0).v(lag)>
    std::vector<double> stderr_;
    std::uint64_t samples = 0;    ///< independent trajectories
    double origin_window = 0.0;
};

/// Lags must be non-negative and sorted ascending.
CorrelationSeries estimate_vacf(const GasConfig& cfg, std::uint64_t n, std::vector<double> lags,
                                const RunOptions& opts, const VacfOptions& vacf = {});

/// Weighted least-squares amplitude C of values ~ C / lag over lags in
/// [lag_min, lag_max], with weights 1 / stderr^2.
struct AmplitudeFit {
    double amplitude = 0.0;
    double stderr_ = 0.0;
    std::size_t points = 0;
};
AmplitudeFit fit_inverse_lag(const CorrelationSeries& series, double lag_min, double lag_max);

// --- mean-square displacement ------------------------------------------------

struct MsdSeries {
    int dim = 0;
    std::vector<double> times;
    std::vector<std::vector<double>> second_moment;  ///< per time, d x d row-major <D_i D_j>
    std::vector<std::vector<double>> second_moment_stderr;
    std::vector<double> msd;                          ///< <|D|^2>
    std::vector<double> msd_stderr;
    std::vector<double> scaled;                       ///< <|D|^2> / (2 d t ln t)
    std::vector<double> scaled_stderr;
    std::uint64_t samples = 0;
};

/// Times must be sorted ascending and > 0. `scaled` is NaN where ln t <= 0.
MsdSeries estimate_msd(const GasConfig& cfg, std::uint64_t n, std::vector<double> times, const RunOptions& opts);

// --- scaled displacement distribution -----------------------------------------

struct DisplacementHistogram {
    double time = 0.0;
    double scale = 0.0;                   ///< sqrt(t ln t)
    double reference_variance = 0.0;      ///< Xi = D from the theory module (NaN if undefined)
    std::vector<double> edges;            ///< bins + 1 edges
    std::vector<double> density;          ///< normalised so sum density * width = 1
    std::vector<std::uint64_t> counts;
    std::vector<double> reference_density;
    double ks_distance = 0.0;             ///< sup |F_n - Phi| against the reference normal
    double mass_beyond_6sigma = 0.0;      ///< fraction with |x| > 6 sqrt(Xi)
    std::uint64_t samples = 0;
};

/// Histogram of Delta_1 / sqrt(t ln t). Requires t > e. `bins` = 0 picks a
/// width of a tenth of the reference standard deviation over the ballistic
/// support +-t / sqrt(t ln t).
DisplacementHistogram scaled_displacement_histogram(const GasConfig& cfg, std::uint64_t n, double t,
                                                    const RunOptions& opts, std::size_t bins = 0);

// --- exponent fits ------------------------------------------------------------

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExponentFit {
    double alpha = 0.0;
    double stderr_ = 0.0;      ///< delta-method standard error under multinomial counts
    double window_low = 0.0;
    double window_high = 0.0;
    double residual = 0.0;     ///< RMS residual of the log-log fit
    std::size_t bins_used = 0;
    std::string weighting = "unweighted least squares in (ln t, ln F)";
};

/// Fits ln F = c - alpha ln t on bins with window_low < F < window_high.
/// Throws FitError when fewer than 3 bins qualify.
ExponentFit fit_exponent(const SurvivalCurve& curve, double window_low, double window_high);

/// The (10^2 / n, 10^4 / n) survival window.
inline std::pair<double, double> standard_fit_window(std::uint64_t n) {
    return {1e2 / static_cast<double>(n), 1e4 / static_cast<double>(n)};
}

}  // namespace lgas::mc

#endif  // LGAS_MONTECARLO_HPP
