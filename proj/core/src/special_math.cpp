// SPDX-License-Identifier: Apache-2.0

#include "lgas/special_math.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace lgas::special {

namespace {

void require_dim(int d, int min_d, const char* what) {
    if (d < min_d) {
        throw std::domain_error(std::string(what) + ": dimension " + std::to_string(d) +
                                " below minimum " + std::to_string(min_d));
    }
}

// B_{2k} / (2k)! for k = 1..10.
constexpr std::array<double, 10> kBernoulliOverFactorial = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
    43867.0 / 798.0 / 6402373705728000.0,
    -174611.0 / 330.0 / 2432902008176640000.0,
};

// Taylor coefficients of 1 / (1 + e^x) at odd orders 1, 3, ..., 11 (the
// constant term 1/2 is handled separately).
constexpr std::array<double, 6> kBooleOdd = {
    -1.0 / 4.0,
    1.0 / 48.0,
    -1.0 / 480.0,
    17.0 / 80640.0,
    -31.0 / 1451520.0,
    691.0 / 319334400.0,
};

}  // namespace

GeometryConstants GeometryConstants::of(int d) {
    require_dim(d, 0, "GeometryConstants");
    GeometryConstants g;
    g.dim = d;
    g.sphere_measure = special::sphere_measure(d);
    g.ball_measure = special::ball_measure(d);
    g.g_factor = d >= 2 ? special::sphere_measure(d - 2) / (2.0 * special::sphere_measure(d - 1))
                        : std::numeric_limits<double>::quiet_NaN();
    return g;
}

double sphere_measure(int d) {
    require_dim(d, 0, "sphere_measure");
    const double h = 0.5 * (d + 1);
    return 2.0 * std::pow(kPi, h) / std::tgamma(h);
}

double ball_measure(int d) {
    require_dim(d, 0, "ball_measure");
    const double h = 0.5 * d;
    return std::pow(kPi, h) / std::tgamma(h + 1.0);
}

double g_factor(int d) {
    require_dim(d, 2, "g_factor");
    return sphere_measure(d - 2) / (2.0 * sphere_measure(d - 1));
}

double riemann_zeta(double s) {
    if (!(s > 1.0)) {
        throw std::domain_error("riemann_zeta: requires s > 1, got " + std::to_string(s));
    }
    constexpr int kN = 16;
    double sum = 0.0;
    for (int n = kN - 1; n >= 1; --n) {
        sum += std::pow(static_cast<double>(n), -s);
    }
    const double N = kN;
    const double n_pow = std::pow(N, -s);
    double tail = N * n_pow / (s - 1.0) + 0.5 * n_pow;
    // Rising factorial s (s+1) ... (s+2k-2) times N^{-s-2k+1}.
    double rising = s;
    double power = n_pow / N;
    for (std::size_t k = 0; k < kBernoulliOverFactorial.size(); ++k) {
        tail += kBernoulliOverFactorial[k] * rising * power;
        const double m = 2.0 * static_cast<double>(k) + 1.0;
        rising *= (s + m) * (s + m + 1.0);
        power /= N * N;
    }
    return sum + tail;
}

double dirichlet_beta(double s) {
    if (!(s > 0.0)) {
        throw std::domain_error("dirichlet_beta: requires s > 0, got " + std::to_string(s));
    }
    constexpr int kN = 64;
    double head = 0.0;
    for (int k = kN - 1; k >= 0; --k) {
        const double term = std::pow(2.0 * k + 1.0, -s);
        head += (k % 2 == 0) ? term : -term;
    }
    // Remainder sum_{j>=0} (-1)^j f(N + j) with f(k) = (2k+1)^{-s}.
    const double base = 2.0 * kN + 1.0;
    double deriv = std::pow(base, -s);  // f^{(m)}(N), starting at m = 0
    double remainder = 0.5 * deriv;
    double rising = 1.0;
    for (std::size_t j = 0; j < kBooleOdd.size(); ++j) {
        const double m_odd = 2.0 * static_cast<double>(j) + 1.0;
        // Advance f^{(m)} to the next odd order.
        if (j == 0) {
            rising = s;
        } else {
            rising *= (s + m_odd - 2.0) * (s + m_odd - 1.0);
        }
        const double f_m = -std::pow(2.0, m_odd) * rising * std::pow(base, -s - m_odd);
        remainder += kBooleOdd[j] * f_m;
    }
    return head + ((kN % 2 == 0) ? remainder : -remainder);
}

double incomplete_gamma_tail(double a, double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("incomplete_gamma_tail: requires x > 0");
    }
    // Modified Lentz evaluation of
    //   Gamma(a, x) = e^{-x} x^a / (x + 1 - a - 1 (1 - a) / (x + 3 - a - ...)),
    // then G(a, x) = x^{-a} Gamma(a, x).
    constexpr double kTiny = 1e-300;
    constexpr double kEps = 1e-16;
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps) {
            return std::exp(-x) * h;
        }
    }
    throw std::runtime_error("incomplete_gamma_tail: continued fraction did not converge");
}

std::vector<std::int64_t> square_representation_counts(int k, int max_m) {
    require_dim(k, 0, "square_representation_counts");
    if (max_m < 0) {
        throw std::domain_error("square_representation_counts: negative bound");
    }
    std::vector<std::int64_t> counts(static_cast<std::size_t>(max_m) + 1, 0);
    counts[0] = 1;
    for (int axis = 0; axis < k; ++axis) {
        std::vector<std::int64_t> next(counts.size(), 0);
        for (int m = 0; m <= max_m; ++m) {
            if (counts[m] == 0) continue;
            next[m] += counts[m];
            for (int n = 1; m + n * n <= max_m; ++n) {
                next[m + n * n] += 2 * counts[m];
            }
        }
        counts = std::move(next);
    }
    return counts;
}

double epstein_zeta(double s, int k) {
    require_dim(k, 1, "epstein_zeta");
    const double half_k = 0.5 * k;
    if (!(s > half_k)) {
        throw PoleError("epstein_zeta: s = " + std::to_string(s) +
                        " is not above the pole at k/2 = " + std::to_string(half_k));
    }
    constexpr int kShells = 40;
    const auto counts = square_representation_counts(k, kShells);
    double shells = 0.0;
    for (int m = kShells; m >= 1; --m) {
        if (counts[m] == 0) continue;
        const double x = kPi * m;
        shells += static_cast<double>(counts[m]) *
                  (incomplete_gamma_tail(s, x) + incomplete_gamma_tail(half_k - s, x));
    }
    const double bracket = shells + 1.0 / (s - half_k) - 1.0 / s;
    return std::pow(kPi, s) / std::tgamma(s) * bracket;
}

}  // namespace lgas::special
