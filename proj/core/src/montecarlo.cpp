// SPDX-License-Identifier: Apache-2.0

#include "lgas/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>
#include <random>
#include <thread>

#include "lgas/theory.hpp"

namespace lgas::mc {

namespace {

// Runs body(begin, end, partial) over fixed chunks of [0, n) on a pool of
// workers, then folds the per-chunk partials with merge(acc, partial) in
// chunk order.
template <class Partial, class Body, class Merge>
Partial chunked_reduce(std::uint64_t n, const RunOptions& opts, Partial init, Body body, Merge merge) {
    const std::uint64_t chunk = std::max<std::uint64_t>(1, opts.chunk);
    const std::uint64_t chunks = (n + chunk - 1) / chunk;
    std::vector<Partial> partials(chunks, init);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    const unsigned workers = static_cast<unsigned>(
        std::max<std::uint64_t>(1, std::min<std::uint64_t>(resolve_threads(opts.threads), chunks)));
    std::vector<std::vector<std::uint64_t>> worker_chunks(workers);

    auto worker = [&](unsigned w) {
        for (;;) {
            const std::uint64_t c = next.fetch_add(1);
            if (c >= chunks) return;
            worker_chunks[w].push_back(c);
            try {
                const std::uint64_t begin = c * chunk;
                body(begin, std::min(n, begin + chunk), partials[c]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(chunks);
                return;
            }
        }
    };

    if (workers == 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker, w);
    }
    if (failure) std::rethrow_exception(failure);
    if (opts.report) *opts.report = {workers, chunk, std::move(worker_chunks)};

    Partial acc = std::move(init);
    for (auto& p : partials) merge(acc, p);
    return acc;
}

struct Moments {
    std::vector<double> sum;
    std::vector<double> sum_sq;
    explicit Moments(std::size_t k = 0) : sum(k, 0.0), sum_sq(k, 0.0) {}
    void add(std::size_t i, double x) {
        sum[i] += x;
        sum_sq[i] += x * x;
    }
    void merge(const Moments& o) {
        for (std::size_t i = 0; i < sum.size(); ++i) {
            sum[i] += o.sum[i];
            sum_sq[i] += o.sum_sq[i];
        }
    }
    double mean(std::size_t i, std::uint64_t n) const { return sum[i] / static_cast<double>(n); }
    double stderr_of_mean(std::size_t i, std::uint64_t n) const {
        if (n < 2) return std::numeric_limits<double>::quiet_NaN();
        const double m = mean(i, n);
        const double var = std::max(0.0, (sum_sq[i] / static_cast<double>(n) - m * m)) *
                           static_cast<double>(n) / static_cast<double>(n - 1);
        return std::sqrt(var / static_cast<double>(n));
    }
};

void require_samples(std::uint64_t n, const char* who) {
    if (n < 1) throw std::invalid_argument(std::string(who) + ": n must be at least 1");
}

void require_sorted_nonnegative(const std::vector<double>& xs, const char* who) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] >= 0.0) || !std::isfinite(xs[i]) || (i > 0 && xs[i] < xs[i - 1])) {
            throw std::invalid_argument(std::string(who) + ": times must be finite, non-negative and sorted");
        }
    }
}

constexpr double kOpen = std::numeric_limits<double>::infinity();

// Collision times and post-collision velocities along one trajectory.
class VelocityTrace : public dynamics::EventSink {
public:
    explicit VelocityTrace(int d) : d_(static_cast<std::size_t>(d)) {}
    void reset(const dynamics::ParticleState& s) {
        times_.assign(1, s.time);
        velocities_.assign(s.velocity.begin(), s.velocity.end());
    }
    void record(dynamics::EventKind kind, const dynamics::ParticleState& s) override {
        if (kind != dynamics::EventKind::Collision) return;
        times_.push_back(s.time);
        velocities_.insert(velocities_.end(), s.velocity.begin(), s.velocity.end());
    }
    // Index of the velocity in force at time t (right-continuous).
    std::size_t index_at(double t) const {
        return static_cast<std::size_t>(std::upper_bound(times_.begin(), times_.end(), t) - times_.begin()) - 1;
    }
    double dot(std::size_t i, std::size_t j) const {
        double s = 0.0;
        for (std::size_t c = 0; c < d_; ++c) s += velocities_[i * d_ + c] * velocities_[j * d_ + c];
        return s;
    }
    // (1/W) * integral over s in [0, W] of v(s).v(s + lag); v(0).v(lag) when W = 0.
    double correlation(double lag, double window) const {
        std::size_t i = 0;
        std::size_t j = index_at(lag);
        if (window <= 0.0) return dot(i, j);
        const std::size_t last = times_.size() - 1;
        double now = 0.0;
        double integral = 0.0;
        for (;;) {
            const double next_i = i < last ? times_[i + 1] : kOpen;
            const double next_j = j < last ? times_[j + 1] - lag : kOpen;
            const double next = std::min({next_i, next_j, window});
            integral += (next - now) * dot(i, j);
            now = next;
            if (now >= window) break;
            if (next_i <= now) ++i;
            if (next_j <= now) ++j;
        }
        return integral / window;
    }

private:
    std::size_t d_;
    std::vector<double> times_;
    std::vector<double> velocities_;
};

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("LGAS_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

dynamics::ParticleState sample_initial(const dynamics::Billiard& billiard, rng::Stream& stream) {
    const int d = billiard.dim();
    dynamics::ParticleState s;
    s.position.resize(static_cast<std::size_t>(d));
    s.cell.assign(static_cast<std::size_t>(d), 0);
    s.velocity.resize(static_cast<std::size_t>(d));
    std::uint64_t draws = 0;
    for (;;) {
        for (double& x : s.position) x = stream.uniform() - 0.5;
        if (billiard.outside_scatterers(s.position)) break;
        if (++draws >= kMaxRejections) {
            throw dynamics::DegenerateGeometryError(
                "sample_initial: rejection sampling failed; packing fraction too close to 1");
        }
    }
    std::normal_distribution<double> gauss;
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (double& v : s.velocity) {
            v = gauss(stream);
            n2 += v * v;
        }
    } while (!(n2 > 0.0));
    const double inv = 1.0 / std::sqrt(n2);
    for (double& v : s.velocity) v *= inv;
    return s;
}

// --- survival ---------------------------------------------------------------

std::vector<double> survival_thresholds(double t_max) {
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw std::invalid_argument("survival: t_max must be positive");
    std::vector<double> t{0.0};
    for (int k = 0;; ++k) {
        const double tk = std::pow(10.0, -1.0 + k / 20.0);
        if (tk >= t_max * (1.0 - 1e-12)) break;
        t.push_back(tk);
    }
    t.push_back(t_max);
    return t;
}

SurvivalCurve survival_from_counts(std::vector<double> times, std::vector<std::uint64_t> survivors,
                                   std::uint64_t samples) {
    if (times.size() != survivors.size()) throw std::invalid_argument("survival: size mismatch");
    SurvivalCurve c;
    c.times = std::move(times);
    c.survivors = std::move(survivors);
    c.samples = samples;
    const double n = static_cast<double>(samples);
    c.estimate.resize(c.times.size());
    c.stderr_.resize(c.times.size());
    for (std::size_t k = 0; k < c.times.size(); ++k) {
        const double f = samples ? static_cast<double>(c.survivors[k]) / n : 0.0;
        c.estimate[k] = f;
        c.stderr_[k] = samples ? std::sqrt(f * (1.0 - f) / n) : 0.0;
    }
    return c;
}

namespace {

// bucket[j] counts samples whose time passes exactly j thresholds.
void bucket_time(const std::vector<double>& thresholds, double t, std::vector<std::uint64_t>& bucket) {
    const auto passed = std::upper_bound(thresholds.begin(), thresholds.end(), t) - thresholds.begin();
    ++bucket[static_cast<std::size_t>(passed)];
}

std::vector<std::uint64_t> survivors_from_buckets(const std::vector<std::uint64_t>& bucket, std::size_t k) {
    std::vector<std::uint64_t> out(k, 0);
    std::uint64_t run = 0;
    for (std::size_t j = k; j-- > 0;) {
        run += bucket[j + 1];
        out[j] = run;
    }
    return out;
}

}  // namespace

SurvivalCurve survival_from_times(std::span<const double> first_collision_times, double t_max) {
    auto thresholds = survival_thresholds(t_max);
    std::vector<std::uint64_t> bucket(thresholds.size() + 1, 0);
    for (double t : first_collision_times) bucket_time(thresholds, t, bucket);
    auto survivors = survivors_from_buckets(bucket, thresholds.size());
    return survival_from_counts(std::move(thresholds), std::move(survivors), first_collision_times.size());
}

SurvivalCurve estimate_survival(const GasConfig& cfg, std::uint64_t n, double t_max, const RunOptions& opts) {
    require_samples(n, "estimate_survival");
    auto thresholds = survival_thresholds(t_max);
    const dynamics::Billiard billiard(cfg);
    const std::size_t k = thresholds.size();

    auto bucket = chunked_reduce(
        n, opts, std::vector<std::uint64_t>(k + 1, 0),
        [&](std::uint64_t begin, std::uint64_t end, std::vector<std::uint64_t>& part) {
            for (std::uint64_t i = begin; i < end; ++i) {
                rng::Stream stream(opts.seed, i);
                auto s = sample_initial(billiard, stream);
                bucket_time(thresholds, billiard.first_collision_time(std::move(s), t_max), part);
            }
        },
        [](std::vector<std::uint64_t>& acc, const std::vector<std::uint64_t>& p) {
            for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += p[j];
        });
    auto survivors = survivors_from_buckets(bucket, k);
    return survival_from_counts(std::move(thresholds), std::move(survivors), n);
}

// --- velocity autocorrelation ------------------------------------------------

CorrelationSeries estimate_vacf(const GasConfig& cfg, std::uint64_t n, std::vector<double> lags,
                                const RunOptions& opts, const VacfOptions& vacf) {
    require_samples(n, "estimate_vacf");
    require_sorted_nonnegative(lags, "estimate_vacf");
    if (!(vacf.origin_window >= 0.0) || !std::isfinite(vacf.origin_window)) {
        throw std::invalid_argument("estimate_vacf: origin window must be finite and non-negative");
    }
    const dynamics::Billiard billiard(cfg);
    const int d = cfg.dim;
    const std::size_t m = lags.size();
    const double horizon = (lags.empty() ? 0.0 : lags.back()) + vacf.origin_window;

    Moments moments = chunked_reduce(
        n, opts, Moments(m),
        [&](std::uint64_t begin, std::uint64_t end, Moments& part) {
            VelocityTrace trace(d);
            for (std::uint64_t i = begin; i < end; ++i) {
                rng::Stream stream(opts.seed, i);
                auto s = sample_initial(billiard, stream);
                trace.reset(s);
                billiard.advance_in_place(s, horizon, &trace);
                for (std::size_t j = 0; j < m; ++j) part.add(j, trace.correlation(lags[j], vacf.origin_window));
            }
        },
        [](Moments& a, const Moments& b) { a.merge(b); });

    CorrelationSeries out;
    out.lags = std::move(lags);
    out.samples = n;
    out.origin_window = vacf.origin_window;
    out.values.resize(m);
    out.stderr_.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        out.values[j] = moments.mean(j, n);
        out.stderr_[j] = moments.stderr_of_mean(j, n);
    }
    return out;
}

AmplitudeFit fit_inverse_lag(const CorrelationSeries& series, double lag_min, double lag_max) {
    // values_j = C / t_j + noise_j: C = sum(w y / t) / sum(w / t^2).
    double num = 0.0;
    double den = 0.0;
    AmplitudeFit fit;
    for (std::size_t j = 0; j < series.lags.size(); ++j) {
        const double t = series.lags[j];
        if (t < lag_min || t > lag_max || !(t > 0.0)) continue;
        const double se = series.stderr_[j];
        if (!(se > 0.0)) continue;
        const double w = 1.0 / (se * se);
        num += w * series.values[j] / t;
        den += w / (t * t);
        ++fit.points;
    }
    if (fit.points == 0) throw FitError("fit_inverse_lag: no usable lags in range");
    fit.amplitude = num / den;
    fit.stderr_ = 1.0 / std::sqrt(den);
    return fit;
}

// --- mean-square displacement ------------------------------------------------

MsdSeries estimate_msd(const GasConfig& cfg, std::uint64_t n, std::vector<double> times, const RunOptions& opts) {
    require_samples(n, "estimate_msd");
    require_sorted_nonnegative(times, "estimate_msd");
    if (!times.empty() && !(times.front() > 0.0)) throw std::invalid_argument("estimate_msd: times must be positive");
    const dynamics::Billiard billiard(cfg);
    const int d = cfg.dim;
    const std::size_t dd = static_cast<std::size_t>(d) * d;
    const std::size_t m = times.size();
    // Per time: d*d second moments followed by |D|^2.
    const std::size_t stride = dd + 1;

    Moments moments = chunked_reduce(
        n, opts, Moments(m * stride),
        [&](std::uint64_t begin, std::uint64_t end, Moments& part) {
            std::vector<double> delta(static_cast<std::size_t>(d));
            for (std::uint64_t i = begin; i < end; ++i) {
                rng::Stream stream(opts.seed, i);
                auto s = sample_initial(billiard, stream);
                const std::vector<double> x0 = s.position;
                double now = 0.0;
                for (std::size_t j = 0; j < m; ++j) {
                    billiard.advance_in_place(s, times[j] - now);
                    now = times[j];
                    double r2 = 0.0;
                    for (int a = 0; a < d; ++a) {
                        delta[a] = static_cast<double>(s.cell[a]) + (s.position[a] - x0[a]);
                        r2 += delta[a] * delta[a];
                    }
                    for (int a = 0; a < d; ++a) {
                        for (int b = 0; b < d; ++b) part.add(j * stride + a * d + b, delta[a] * delta[b]);
                    }
                    part.add(j * stride + dd, r2);
                }
            }
        },
        [](Moments& a, const Moments& b) { a.merge(b); });

    MsdSeries out;
    out.dim = d;
    out.samples = n;
    out.times = std::move(times);
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<double> mom(dd);
        std::vector<double> se(dd);
        for (std::size_t e = 0; e < dd; ++e) {
            mom[e] = moments.mean(j * stride + e, n);
            se[e] = moments.stderr_of_mean(j * stride + e, n);
        }
        out.second_moment.push_back(std::move(mom));
        out.second_moment_stderr.push_back(std::move(se));
        const double msd = moments.mean(j * stride + dd, n);
        const double msd_se = moments.stderr_of_mean(j * stride + dd, n);
        out.msd.push_back(msd);
        out.msd_stderr.push_back(msd_se);
        const double t = out.times[j];
        const double norm = t > 1.0 ? 2.0 * d * t * std::log(t) : std::numeric_limits<double>::quiet_NaN();
        out.scaled.push_back(msd / norm);
        out.scaled_stderr.push_back(msd_se / norm);
    }
    return out;
}

// --- scaled displacement distribution -----------------------------------------

DisplacementHistogram scaled_displacement_histogram(const GasConfig& cfg, std::uint64_t n, double t,
                                                    const RunOptions& opts, std::size_t bins) {
    require_samples(n, "scaled_displacement_histogram");
    if (!(t > std::exp(1.0)) || !std::isfinite(t)) {
        throw std::invalid_argument("scaled_displacement_histogram: t must exceed e");
    }
    const dynamics::Billiard billiard(cfg);
    const double scale = std::sqrt(t * std::log(t));

    std::vector<double> scaled(n);
    chunked_reduce(
        n, opts, 0,
        [&](std::uint64_t begin, std::uint64_t end, int&) {
            for (std::uint64_t i = begin; i < end; ++i) {
                rng::Stream stream(opts.seed, i);
                auto s = sample_initial(billiard, stream);
                const double x0 = s.position[0];
                billiard.advance_in_place(s, t);
                scaled[i] = (static_cast<double>(s.cell[0]) + (s.position[0] - x0)) / scale;
            }
        },
        [](int&, int) {});

    DisplacementHistogram h;
    h.time = t;
    h.scale = scale;
    h.samples = n;
    h.reference_variance = cfg.radius < 0.5 ? theory::superdiffusion_matrix(cfg)(0, 0)
                                            : std::numeric_limits<double>::quiet_NaN();
    const double sigma = std::sqrt(h.reference_variance);
    const double support = t / scale;

    if (bins == 0) {
        const double width = std::isfinite(sigma) && sigma > 0.0 ? sigma / 10.0 : support / 200.0;
        bins = static_cast<std::size_t>(std::ceil(2.0 * support / width));
    }
    const double lo = -support * (1.0 + 1e-9);
    const double width = -2.0 * lo / static_cast<double>(bins);
    h.edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b) h.edges[b] = lo + width * static_cast<double>(b);
    h.counts.assign(bins, 0);
    std::uint64_t beyond = 0;
    for (double x : scaled) {
        const auto b = static_cast<std::ptrdiff_t>(std::floor((x - lo) / width));
        ++h.counts[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(b, 0, static_cast<std::ptrdiff_t>(bins) - 1))];
        if (std::isfinite(sigma) && std::fabs(x) > 6.0 * sigma) ++beyond;
    }
    h.density.resize(bins);
    h.reference_density.resize(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        h.density[b] = static_cast<double>(h.counts[b]) / (static_cast<double>(n) * width);
        const double mid = 0.5 * (h.edges[b] + h.edges[b + 1]);
        h.reference_density[b] = std::isfinite(sigma)
                                     ? std::exp(-0.5 * mid * mid / h.reference_variance) /
                                           (sigma * std::sqrt(2.0 * std::numbers::pi))
                                     : std::numeric_limits<double>::quiet_NaN();
    }

    if (std::isfinite(sigma)) {
        std::sort(scaled.begin(), scaled.end());
        double ks = 0.0;
        const double nn = static_cast<double>(n);
        for (std::size_t i = 0; i < scaled.size(); ++i) {
            const double phi = normal_cdf(scaled[i] / sigma);
            ks = std::max({ks, std::fabs((i + 1) / nn - phi), std::fabs(i / nn - phi)});
        }
        h.ks_distance = ks;
        h.mass_beyond_6sigma = static_cast<double>(beyond) / nn;
    } else {
        h.ks_distance = std::numeric_limits<double>::quiet_NaN();
        h.mass_beyond_6sigma = std::numeric_limits<double>::quiet_NaN();
    }
    return h;
}

// --- exponent fits ------------------------------------------------------------

ExponentFit fit_exponent(const SurvivalCurve& curve, double window_low, double window_high) {
    if (!(window_low < window_high)) throw std::invalid_argument("fit_exponent: empty window");
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> f;
    for (std::size_t k = 0; k < curve.times.size(); ++k) {
        const double F = curve.estimate[k];
        const double t = curve.times[k];
        if (t > 0.0 && F > window_low && F < window_high) {
            x.push_back(std::log(t));
            y.push_back(std::log(F));
            f.push_back(F);
        }
    }
    const std::size_t m = x.size();
    if (m < 3) {
        throw FitError("fit_exponent: " + std::to_string(m) + " bins inside window, need at least 3");
    }
    const double xm = std::accumulate(x.begin(), x.end(), 0.0) / m;
    const double ym = std::accumulate(y.begin(), y.end(), 0.0) / m;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (x[i] - xm) * (x[i] - xm);
        sxy += (x[i] - xm) * (y[i] - ym);
    }
    if (!(sxx > 0.0)) throw FitError("fit_exponent: degenerate time grid");
    const double slope = sxy / sxx;

    ExponentFit fit;
    fit.alpha = -slope;
    fit.window_low = window_low;
    fit.window_high = window_high;
    fit.bins_used = m;
    double rss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double e = y[i] - (ym + slope * (x[i] - xm));
        rss += e * e;
    }
    fit.residual = std::sqrt(rss / m);

    // slope = sum a_i ln F_i; for t_i <= t_j, Cov(ln F_i, ln F_j) = (1 - F_i) / (n F_i).
    if (curve.samples > 0) {
        const double n = static_cast<double>(curve.samples);
        double var = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double ai = (x[i] - xm) / sxx;
            for (std::size_t j = 0; j < m; ++j) {
                const double aj = (x[j] - xm) / sxx;
                const std::size_t early = std::min(i, j);
                var += ai * aj * (1.0 - f[early]) / (n * f[early]);
            }
        }
        fit.stderr_ = std::sqrt(std::max(0.0, var));
    }
    return fit;
}

}  // namespace lgas::mc
