// SPDX-License-Identifier: Apache-2.0
//
// Slow, independent reference computations shared by the unit and
// acceptance tests. Nothing here calls into the library's algorithms.

#ifndef LGAS_TESTS_ORACLES_HPP
#define LGAS_TESTS_ORACLES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

namespace oracle {

inline constexpr long double kPi = 3.141592653589793238462643383279502884L;

/// Sum of n^-s for n <= N plus a three-term Euler-Maclaurin tail.
inline double zeta(double s, int N = 100000) {
    long double sum = 0.0L;
    for (int n = N; n >= 1; --n) sum += std::pow(static_cast<long double>(n), -static_cast<long double>(s));
    const long double Nl = N;
    const long double ls = s;
    sum += std::pow(Nl, 1 - ls) / (ls - 1) - std::pow(Nl, -ls) / 2 + ls * std::pow(Nl, -ls - 1) / 12 -
           ls * (ls + 1) * (ls + 2) * std::pow(Nl, -ls - 3) / 720;
    return static_cast<double>(sum);
}

/// Partial sum of (-1)^k (2k+1)^-s for k < N.
inline long double beta_partial(double s, int N) {
    long double sum = 0.0L;
    for (int k = N - 1; k >= 0; --k) {
        const long double term = std::pow(2.0L * k + 1, -static_cast<long double>(s));
        sum += (k % 2 == 0) ? term : -term;
    }
    return sum;
}

/// Number of representations of m as a sum of k squares, for k in {1, 2, 4},
/// from the classical divisor formulas (k = 2: Jacobi's 4(d1 - d3); k = 4: 8 sigma' ).
inline std::vector<std::int64_t> representations(int k, std::int64_t M) {
    std::vector<std::int64_t> r(static_cast<std::size_t>(M + 1), 0);
    r[0] = 1;
    if (k == 1) {
        for (std::int64_t a = 1; a * a <= M; ++a) r[a * a] = 2;
        return r;
    }
    for (std::int64_t d = 1; d <= M; ++d) {
        for (std::int64_t m = d; m <= M; m += d) {
            if (k == 2) {
                if (d % 4 == 1) r[m] += 4;
                if (d % 4 == 3) r[m] -= 4;
            } else if (d % 4 != 0) {
                r[m] += 8 * d;
            }
        }
    }
    return r;
}

/// Shell-by-shell lattice sum over nonzero l in Z^k with |l|^2 <= M of
/// |l|^-2s, plus the smooth-density tail integral beyond M + 1/2.
inline double epstein_shells(double s, int k, std::int64_t M) {
    const auto r = representations(k, M);
    long double sum = 0.0L;
    for (std::int64_t m = M; m >= 1; --m) {
        if (r[m] != 0) sum += r[m] * std::pow(static_cast<long double>(m), -static_cast<long double>(s));
    }
    // mean density of r_k(m) is pi^{k/2} / Gamma(k/2) m^{k/2 - 1}
    const long double c = std::pow(kPi, k / 2.0L) / std::tgamma(k / 2.0L);
    const long double e = k / 2.0L - s;
    sum += c * -std::pow(static_cast<long double>(M) + 0.5L, e) / e;
    return static_cast<double>(sum);
}

/// All primitive vectors of Z^d with 0 < |v| < Lmax, by exhaustive box scan.
inline std::vector<std::vector<int>> primitive_box(int d, double Lmax, bool modulo_inversion) {
    const int reach = static_cast<int>(std::ceil(Lmax));
    std::vector<std::vector<int>> out;
    std::vector<int> v(static_cast<std::size_t>(d), -reach);
    for (;;) {
        long n2 = 0;
        int g = 0;
        for (int c : v) {
            n2 += static_cast<long>(c) * c;
            g = std::gcd(g, std::abs(c));
        }
        if (n2 > 0 && g == 1 && std::sqrt(static_cast<double>(n2)) < Lmax) {
            bool keep = true;
            if (modulo_inversion) {
                const auto first = std::find_if(v.begin(), v.end(), [](int c) { return c != 0; });
                keep = *first > 0;
            }
            if (keep) out.push_back(v);
        }
        int axis = 0;
        while (axis < d && v[axis] == reach) v[axis++] = -reach;
        if (axis == d) break;
        ++v[axis];
    }
    return out;
}

struct Hit {
    long double time = std::numeric_limits<long double>::infinity();
    std::vector<std::int64_t> center;
};

/// Earliest contact of the ray x + v t (global coordinates) with any lattice
/// sphere whose centre lies within ceil(t_cap) + 1 of the start, in long
/// double. Tangential and outgoing contacts are ignored.
inline Hit first_contact(const std::vector<long double>& x, const std::vector<long double>& v, long double r,
                         double t_cap) {
    const int d = static_cast<int>(x.size());
    const int reach = static_cast<int>(std::ceil(t_cap)) + 1;
    std::vector<std::int64_t> base(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) base[i] = std::llround(x[i]);
    std::vector<int> o(static_cast<std::size_t>(d), -reach);
    Hit best;
    for (;;) {
        long double b = 0.0L;
        long double p2 = 0.0L;
        for (int i = 0; i < d; ++i) {
            const long double p = x[i] - static_cast<long double>(base[i] + o[i]);
            b += p * v[i];
            p2 += p * p;
        }
        const long double c = p2 - r * r;
        const long double disc = b * b - c;
        if (b < 0.0L && disc > 0.0L) {
            const long double t = -b - std::sqrt(disc);
            if (t >= 0.0L && t <= t_cap && t < best.time) {
                best.time = t;
                best.center.resize(static_cast<std::size_t>(d));
                for (int i = 0; i < d; ++i) best.center[i] = base[i] + o[i];
            }
        }
        int axis = 0;
        while (axis < d && o[axis] == reach) o[axis++] = -reach;
        if (axis == d) break;
        ++o[axis];
    }
    return best;
}

}  // namespace oracle

#endif  // LGAS_TESTS_ORACLES_HPP
