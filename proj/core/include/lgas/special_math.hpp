// SPDX-License-Identifier: Apache-2.0
//
// Special functions for the analytic side of the Lorentz gas: sphere and
// ball measures, Riemann zeta, Dirichlet beta and Epstein zeta sums over the
// integer lattice. Only real arguments in the convergent region are
// supported; nothing here performs analytic continuation.

#ifndef LGAS_SPECIAL_MATH_HPP
#define LGAS_SPECIAL_MATH_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace lgas::special {

/// Raised when an argument sits on or beyond a pole / divergence of a sum.
class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Measures of the unit d-sphere and d-ball, and G_d = S_{d-2} / (2 S_{d-1}).
struct GeometryConstants {
    int dim = 0;
    double sphere_measure = 0.0;  ///< S_d, the d-dimensional unit sphere in R^{d+1}
    double ball_measure = 0.0;    ///< V_d, the unit ball in R^d
    double g_factor = 0.0;        ///< G_d, NaN for d < 2

    static GeometryConstants of(int d);
};

/// S_d = 2 pi^{(d+1)/2} / Gamma((d+1)/2). Throws std::domain_error for d < 0.
double sphere_measure(int d);

/// V_d = pi^{d/2} / Gamma(d/2 + 1). Throws std::domain_error for d < 0.
double ball_measure(int d);

/// G_d = S_{d-2} / (2 S_{d-1}). Throws std::domain_error for d < 2.
double g_factor(int d);

/// Riemann zeta for real s > 1.
///
/// Fifteen terms of the Dirichlet series followed by an Euler-Maclaurin
/// tail with Bernoulli corrections through B_20. The first neglected term is
/// below 1e-17 relative for every s > 1, so the result is accurate to a few
/// ulp. Throws std::domain_error for s <= 1.
double riemann_zeta(double s);

/// Dirichlet beta, sum_{k>=0} (-1)^k (2k+1)^{-s}, for real s > 0.
///
/// Direct partial sum of 64 terms plus the Boole (alternating
/// Euler-Maclaurin) expansion of the remainder through the ninth derivative.
/// Throws std::domain_error for s <= 0.
double dirichlet_beta(double s);

/// Epstein zeta of Z^k: sum over nonzero l in Z^k of |l|^{-2s}, for s > k/2.
///
/// Evaluated with the theta-function splitting at t = 1,
///
///   pi^{-s} Gamma(s) E(s) = 1/(s - k/2) - 1/s
///       + sum_{m>=1} r_k(m) [G(s, pi m) + G(k/2 - s, pi m)],
///   G(a, x) = int_1^inf t^{a-1} e^{-x t} dt,
///
/// where r_k(m) counts the lattice vectors with |l|^2 = m. Shells are summed
/// up to m = 40; each neglected shell is bounded by 2 r_k(m) e^{-pi m}
/// / (pi m - |a|), giving a truncation error far below 1e-8 for k <= 16.
/// Throws PoleError for s <= k/2 and std::domain_error for k < 1.
double epstein_zeta(double s, int k);

/// Representation counts r_k(m) = #{l in Z^k : |l|^2 = m} for m = 0..max_m.
std::vector<std::int64_t> square_representation_counts(int k, int max_m);

/// int_1^inf t^{a-1} e^{-x t} dt for real a and x > 0, via the Legendre
/// continued fraction of the upper incomplete gamma function.
double incomplete_gamma_tail(double a, double x);

}  // namespace lgas::special

#endif  // LGAS_SPECIAL_MATH_HPP
