// SPDX-License-Identifier: Apache-2.0

#include "lgas/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lgas/horizons.hpp"
#include "lgas/lattice.hpp"
#include "lgas/rng.hpp"
#include "lgas/special_math.hpp"

namespace lgas::theory {

namespace {

void require_principal(const GasConfig& cfg, const char* what) {
    if (cfg.radius >= 0.5) {
        throw IncipientError(std::string(what) + ": incipient-or-closed, no principal horizon for r = " +
                             std::to_string(cfg.radius));
    }
}

// sum_H w_H^2 L (delta_ij - n_i n_j), row-major and exactly symmetric.
std::vector<double> projector_sum(const GasConfig& cfg) {
    const int d = cfg.dim;
    std::vector<double> m(static_cast<std::size_t>(d * d), 0.0);
    horizons::for_each_horizon(d, cfg.radius, [&](const std::vector<int>& v, double L, double w) {
        const double weight = w * w * L;
        const double inv_l2 = 1.0 / (L * L);
        for (int i = 0; i < d; ++i) {
            m[i * d + i] += weight;
            if (v[i] == 0) continue;
            for (int j = i; j < d; ++j) {
                if (v[j] == 0) continue;
                m[i * d + j] -= weight * (v[i] * v[j]) * inv_l2;
            }
        }
    });
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < i; ++j) m[i * d + j] = m[j * d + i];
    }
    return m;
}

SuperdiffusionMatrix scaled(int d, std::vector<double> m, double factor) {
    SuperdiffusionMatrix out;
    out.dim = d;
    for (double& x : m) x *= factor;
    out.entries = std::move(m);
    out.scalar = out.trace() / d;
    return out;
}

}  // namespace

double SuperdiffusionMatrix::trace() const {
    double t = 0.0;
    for (int i = 0; i < dim; ++i) t += (*this)(i, i);
    return t;
}

double free_flight_asymptote(const GasConfig& cfg) {
    require_principal(cfg, "free_flight_asymptote");
    const double r = cfg.radius;
    double sum = 0.0;
    lattice::for_each_primitive(cfg.dim, 1.0 / (2.0 * r), false, [&](const std::vector<int>&, std::int64_t n2) {
        const double L = std::sqrt(static_cast<double>(n2));
        const double w = 1.0 / L - 2.0 * r;
        if (w > 0.0) sum += L * w * w;
    });
    return special::g_factor(cfg.dim) / (1.0 - cfg.packing) * sum;
}

SuperdiffusionMatrix superdiffusion_matrix(const GasConfig& cfg) {
    require_principal(cfg, "superdiffusion_matrix");
    const int d = cfg.dim;
    const double factor =
        special::ball_measure(d - 1) / (special::sphere_measure(d - 1) * (1.0 - cfg.packing));
    return scaled(d, projector_sum(cfg), factor);
}

double mean_free_time(const GasConfig& cfg) {
    if (cfg.overlapping()) {
        throw std::domain_error("mean_free_time: spheres overlap for r > 1/2; boundary measure formula invalid");
    }
    const int d = cfg.dim;
    return (1.0 - cfg.packing) / (special::ball_measure(d - 1) * std::pow(cfg.radius, d - 1));
}

SuperdiffusionMatrix discrete_covariance(const GasConfig& cfg) {
    require_principal(cfg, "discrete_covariance");
    const int d = cfg.dim;
    const double factor = 1.0 / (std::pow(cfg.radius, d - 1) * special::sphere_measure(d - 1));
    return scaled(d, projector_sum(cfg), factor);
}

double small_r_leading(int d, double r) {
    if (d < 2) throw std::domain_error("small_r_leading: requires d >= 2");
    if (!(r > 0.0)) throw std::domain_error("small_r_leading: requires r > 0");
    return std::pow(special::kPi, 0.5 * (d - 1)) /
           (std::ldexp(1.0, d) * d * std::tgamma(0.5 * (d + 3)) * special::riemann_zeta(d) * std::pow(r, d - 1));
}

double small_r_linear_correction(int d) {
    if (d < 2) throw std::domain_error("small_r_linear_correction: requires d >= 2");
    const double dd = d;
    return special::sphere_measure(d - 2) * special::ball_measure(d) /
               (std::ldexp(1.0, d - 1) * (dd * dd * dd - dd) * special::riemann_zeta(d)) -
           8.0 * special::g_factor(d);
}

double small_r_superdiffusion_leading(int d, double r) { return small_r_leading(d, r) / d; }

bool in_incipient_region(double xi, double eta) {
    const double ax = std::fabs(xi);
    if (!(ax < 0.5)) return false;
    const double f = (ax - 0.5) * (ax - 0.5);
    return std::fabs(eta) < f;
}

bool segment_visible(double xi1, double eta1, double xi2, double eta2) {
    if (!in_incipient_region(xi1, eta1) || !in_incipient_region(xi2, eta2)) return false;
    const double dxi = xi2 - xi1;
    const double deta = eta2 - eta1;

    // Break [0, 1] where xi changes sign.
    double cuts[3] = {0.0, 1.0, 1.0};
    int pieces = 1;
    if ((xi1 < 0.0) != (xi2 < 0.0) && dxi != 0.0) {
        const double lam0 = -xi1 / dxi;
        if (lam0 > 0.0 && lam0 < 1.0) {
            cuts[1] = lam0;
            cuts[2] = 1.0;
            pieces = 2;
        }
    }
    for (int p = 0; p < pieces; ++p) {
        const double lo = cuts[p];
        const double hi = cuts[p + 1];
        const double mid_xi = xi1 + 0.5 * (lo + hi) * dxi;
        const double sigma = mid_xi < 0.0 ? -1.0 : 1.0;
        // On this piece f(xi(lam)) = (u0 + lam sigma dxi)^2 with u0 = sigma xi1 - 1/2.
        const double u0 = sigma * xi1 - 0.5;
        for (double side : {1.0, -1.0}) {
            // g(lam) = f - side * eta(lam); need g > 0 on [lo, hi].
            const double a = dxi * dxi;
            const double b = 2.0 * u0 * sigma * dxi - side * deta;
            const double c = u0 * u0 - side * eta1;
            auto g = [&](double lam) { return (a * lam + b) * lam + c; };
            double minimum = std::min(g(lo), g(hi));
            if (a > 0.0) {
                const double vertex = -b / (2.0 * a);
                if (vertex > lo && vertex < hi) minimum = std::min(minimum, g(vertex));
            }
            if (!(minimum > 0.0)) return false;
        }
    }
    return true;
}

namespace {

// Area of the incipient region with xi < x: int_{-1/2}^{x} 2 (|t| - 1/2)^2 dt.
double region_area_below(double x) {
    if (x <= 0.0) {
        const double u = x + 0.5;
        return 2.0 * u * u * u / 3.0;
    }
    const double u = x - 0.5;
    return 1.0 / 6.0 + 2.0 * u * u * u / 3.0;
}

// Rejection sampling from the region restricted to xi in [xi_lo, xi_lo + width),
// using the tallest parabola height over the slab as the bounding box.
void sample_region(rng::Stream& stream, double xi_lo, double xi_width, double* point) {
    const double xi_hi = xi_lo + xi_width;
    const double nearest = (xi_lo <= 0.0 && xi_hi >= 0.0) ? 0.0 : std::min(std::fabs(xi_lo), std::fabs(xi_hi));
    const double height = (nearest - 0.5) * (nearest - 0.5);
    do {
        point[0] = xi_lo + xi_width * stream.uniform();
        point[1] = height * (2.0 * stream.uniform() - 1.0);
    } while (!in_incipient_region(point[0], point[1]));
}

}  // namespace

VisibilityEstimate incipient_visibility_constant(std::uint64_t seed, std::uint64_t pairs) {
    if (pairs == 0) throw std::invalid_argument("incipient_visibility_constant: need at least one pair");
    // The first point is stratified over equal-width xi slabs (equal
    // allocation, reweighted by each slab's share of the area); the second is
    // uniform over the whole region. Pair i owns stream (seed, i).
    constexpr std::uint64_t kStrata = 64;
    constexpr double kSlab = 1.0 / kStrata;
    std::vector<std::uint64_t> hits(kStrata, 0);
    std::vector<std::uint64_t> draws(kStrata, 0);
    for (std::uint64_t i = 0; i < pairs; ++i) {
        rng::Stream stream(seed, i);
        const std::uint64_t s = i % kStrata;
        double p[2];
        double q[2];
        sample_region(stream, -0.5 + static_cast<double>(s) * kSlab, kSlab, p);
        sample_region(stream, -0.5, 1.0, q);
        ++draws[s];
        if (segment_visible(p[0], p[1], q[0], q[1])) ++hits[s];
    }
    double fraction = 0.0;
    double variance = 0.0;
    for (std::uint64_t s = 0; s < kStrata; ++s) {
        if (draws[s] == 0) continue;
        const double lo = -0.5 + static_cast<double>(s) * kSlab;
        const double weight = (region_area_below(lo + kSlab) - region_area_below(lo)) / kIncipientRegionArea;
        const double f = static_cast<double>(hits[s]) / static_cast<double>(draws[s]);
        fraction += weight * f;
        variance += weight * weight * f * (1.0 - f) / static_cast<double>(draws[s]);
    }
    const double area2 = kIncipientRegionArea * kIncipientRegionArea;
    return VisibilityEstimate{area2 * fraction, area2 * std::sqrt(variance), pairs};
}

IncipientTail incipient_tail_prediction(int d, double max_norm) {
    if (d < 3) throw std::domain_error("incipient_tail_prediction: requires d >= 3");
    if (!(max_norm > 0.0)) throw std::domain_error("incipient_tail_prediction: requires max_norm > 0");
    const int k = d - 1;
    IncipientTail out;
    // Accumulate per shell |l|^2 = m, smallest terms first.
    const std::int64_t bound2 = lattice::exclusive_norm_squared_bound(max_norm);
    std::vector<std::int64_t> shell_counts(static_cast<std::size_t>(bound2), 0);
    lattice::for_each_primitive(k, max_norm, false,
                                [&](const std::vector<int>&, std::int64_t n2) { ++shell_counts[n2]; });
    double sum = 0.0;
    for (std::int64_t m = bound2 - 1; m >= 1; --m) {
        if (shell_counts[m] != 0) {
            sum += static_cast<double>(shell_counts[m]) * std::pow(static_cast<double>(m), -2.5);
        }
    }
    out.partial_sum = sum;
    out.diverges = d >= 6;
    if (out.diverges) {
        out.limit = std::numeric_limits<double>::quiet_NaN();
        out.tail_bound = std::numeric_limits<double>::infinity();
        return out;
    }
    out.limit = special::epstein_zeta(2.5, k) / special::riemann_zeta(5.0);
    // Integral test over unit cubes: for x in the cube around l, |l| >= |x| - s
    // with s = sqrt(k)/2, hence
    //   sum_{|l| >= R} |l|^-5 <= S_{k-1} int_{R-2s}^inf (u + s)^{k-1} u^-5 du.
    const double s = 0.5 * std::sqrt(static_cast<double>(k));
    const double u0 = max_norm - 2.0 * s;
    if (!(u0 > 0.0)) {
        out.tail_bound = std::numeric_limits<double>::infinity();
        return out;
    }
    double integral = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= k - 1; ++j) {
        if (j > 0) binom = binom * (k - j) / j;
        const int p = k - 1 - j - 5;  // exponent of u, always <= -2 for k <= 4
        integral += binom * std::pow(s, j) * std::pow(u0, p + 1) / -(p + 1);
    }
    out.tail_bound = special::sphere_measure(k - 1) * integral;
    return out;
}

IncipientExponent conjectured_incipient_exponent(int d) {
    if (d < 3) throw std::domain_error("conjectured_incipient_exponent: requires d >= 3");
    if (d < 6) return {IncipientDecay::InverseSquare, 2.0, 2.0, "t^-2"};
    if (d == 6) return {IncipientDecay::InverseSquareLog, 2.0, 2.0, "t^-2 log t"};
    return {IncipientDecay::Fractional, 1.0, 2.0, "t^-alpha, 1<alpha<2"};
}

}  // namespace lgas::theory
