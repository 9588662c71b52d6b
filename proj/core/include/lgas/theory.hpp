// SPDX-License-Identifier: Apache-2.0
//
// Closed-form predictions for the cubic Lorentz gas: the 1/t free-flight
// amplitude, the superdiffusion matrix, mean free time, the per-collision
// covariance, small-radius zeta expansions and the incipient-horizon
// analysis at r = 1/2.

#ifndef LGAS_THEORY_HPP
#define LGAS_THEORY_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgas/gas_config.hpp"

namespace lgas::theory {

/// No principal horizon of positive width exists (r >= 1/2).
class IncipientError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Symmetric d x d matrix, row-major, with scalar = trace / d.
struct SuperdiffusionMatrix {
    int dim = 0;
    std::vector<double> entries;
    double scalar = 0.0;

    double operator()(int i, int j) const { return entries[static_cast<std::size_t>(i * dim + j)]; }
    double trace() const;
};

/// lim t F(t) = G_d / (1 - V_d r^d) * sum over signed primitive l of L (1/L - 2r)^2_+.
/// Throws IncipientError for r >= 1/2.
double free_flight_asymptote(const GasConfig& cfg);

/// D_ij = V_{d-1} / (S_{d-1} (1 - P)) * sum_H w_H^2 L (delta_ij - n_i n_j).
SuperdiffusionMatrix superdiffusion_matrix(const GasConfig& cfg);

/// tau = (1 - V_d r^d) / (V_{d-1} r^{d-1}). Throws std::domain_error when the
/// spheres overlap (r > 1/2), where the boundary-measure formula fails.
double mean_free_time(const GasConfig& cfg);

/// Xi^disc_ij = 1 / (r^{d-1} S_{d-1}) * sum_H w_H^2 L (delta_ij - n_i n_j).
SuperdiffusionMatrix discrete_covariance(const GasConfig& cfg);

/// Leading small-r term of t F(t):
/// pi^{(d-1)/2} / (2^d d Gamma((d+3)/2) zeta(d) r^{d-1}).
double small_r_leading(int d, double r);

/// Coefficient of r in the small-r expansion of t F(t):
/// S_{d-2} V_d / (2^{d-1} (d^3 - d) zeta(d)) - 8 G_d.
double small_r_linear_correction(int d);

/// Leading small-r superdiffusion coefficient, small_r_leading / d.
double small_r_superdiffusion_leading(int d, double r);

// --- incipient horizons (r = 1/2) -------------------------------------------

/// The limiting cross-section |eta| < (|xi| - 1/2)^2, |xi| < 1/2.
bool in_incipient_region(double xi, double eta);

/// True iff the closed segment p-q stays inside the incipient region. Exact:
/// on each side of xi = 0 the distance to either parabola is a convex
/// quadratic in the segment parameter, so checking its minimum suffices.
bool segment_visible(double xi1, double eta1, double xi2, double eta2);

/// Area of the incipient region; the closed form is 1/6.
inline constexpr double kIncipientRegionArea = 1.0 / 6.0;

struct VisibilityEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::uint64_t pairs = 0;
};

/// Monte Carlo estimate of the double integral over the region of the
/// mutual-visibility indicator. Pairs are drawn uniformly in the region by
/// rejection; value = area^2 * visible fraction. Deterministic in `seed`.
VisibilityEstimate incipient_visibility_constant(std::uint64_t seed = 20160101, std::uint64_t pairs = 2'000'000);

struct IncipientTail {
    double partial_sum = 0.0;  ///< sum of L^-5 over signed primitive l in Z^{d-1}, L < max_norm
    bool diverges = false;     ///< d >= 6
    double limit = 0.0;        ///< E(5/2; Z^{d-1}) / zeta(5) for d <= 5, NaN otherwise
    double tail_bound = 0.0;   ///< integral-test bound on the omitted terms (inf if divergent)
};

/// Partial sums of the incipient contribution. Throws std::domain_error for d < 3.
IncipientTail incipient_tail_prediction(int d, double max_norm);

enum class IncipientDecay { InverseSquare, InverseSquareLog, Fractional };

struct IncipientExponent {
    IncipientDecay kind = IncipientDecay::InverseSquare;
    double alpha_low = 2.0;   ///< exponent range; equal ends when exact
    double alpha_high = 2.0;
    std::string label;        ///< "t^-2", "t^-2 log t" or "t^-alpha, 1<alpha<2"
};

/// Conjectured decay of F(t) with an incipient principal horizon.
/// Throws std::domain_error for d < 3.
IncipientExponent conjectured_incipient_exponent(int d);

}  // namespace lgas::theory

#endif  // LGAS_THEORY_HPP
