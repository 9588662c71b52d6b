// SPDX-License-Identifier: Apache-2.0

#include "lgas/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lgas::dynamics {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void renormalize_if_drifted(std::vector<double>& v) {
    const double n2 = dot(v, v);
    if (std::fabs(n2 - 1.0) > kSpeedDriftTolerance) {
        const double inv = 1.0 / std::sqrt(n2);
        for (double& c : v) c *= inv;
    }
}

void reflect_velocity(std::vector<double>& v, const std::vector<double>& n) {
    const double vn = dot(v, n);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= 2.0 * vn * n[i];
    renormalize_if_drifted(v);
}

}  // namespace

std::vector<double> ParticleState::unwrapped() const {
    std::vector<double> x(position.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(cell[i]) + position[i];
    return x;
}

ParticleState make_state(std::vector<double> position, std::vector<double> velocity) {
    if (position.size() != velocity.size() || position.empty()) {
        throw std::invalid_argument("make_state: position and velocity must have the same nonzero length");
    }
    const double n = std::sqrt(dot(velocity, velocity));
    if (!(n > 0.0)) throw std::invalid_argument("make_state: zero velocity");
    for (double& c : velocity) c /= n;
    ParticleState s;
    s.cell.assign(position.size(), 0);
    s.position = std::move(position);
    s.velocity = std::move(velocity);
    return s;
}

Billiard::Billiard(const GasConfig& cfg) : cfg_(cfg), r2_(cfg.radius * cfg.radius) {
    if (!(cfg.radius > 0.0) || !(cfg.radius < 1.0)) {
        throw std::invalid_argument("Billiard: radius must lie in (0, 1)");
    }
    const int d = cfg.dim;
    const double reach = 4.0 * r2_;
    // Enumerate {-1,0,1}^d keeping offsets whose sphere can intrude on the cell.
    std::vector<int> o(static_cast<std::size_t>(d), -1);
    offsets_.insert(offsets_.end(), o.size(), 0);  // own sphere first
    if (cfg.radius > 0.5) {
        for (;;) {
            int nonzero = 0;
            for (int c : o) nonzero += (c != 0);
            if (nonzero > 0 && nonzero < reach) offsets_.insert(offsets_.end(), o.begin(), o.end());
            int axis = 0;
            while (axis < d && o[axis] == 1) o[axis++] = -1;
            if (axis == d) break;
            ++o[axis];
        }
    }
}

bool Billiard::outside_scatterers(const std::vector<double>& x) const {
    const int d = cfg_.dim;
    for (std::size_t k = 0; k < candidate_count(); ++k) {
        const int* o = &offsets_[k * d];
        double p2 = 0.0;
        for (int i = 0; i < d; ++i) {
            const double p = x[i] - o[i];
            p2 += p * p;
        }
        if (p2 < r2_) return false;
    }
    return true;
}

double Billiard::clearance(const ParticleState& s) const {
    const int d = cfg_.dim;
    double best = kNoHit;
    for (std::size_t k = 0; k < candidate_count(); ++k) {
        const int* o = &offsets_[k * d];
        double p2 = 0.0;
        for (int i = 0; i < d; ++i) {
            const double p = s.position[i] - o[i];
            p2 += p * p;
        }
        best = std::min(best, std::sqrt(p2) - cfg_.radius);
    }
    return best;
}

void Billiard::surface_normal(const ParticleState& s, std::size_t offset, std::vector<double>& n) const {
    const int d = cfg_.dim;
    const int* o = &offsets_[offset * d];
    n.resize(static_cast<std::size_t>(d));
    double n2 = 0.0;
    for (int i = 0; i < d; ++i) {
        n[i] = s.position[i] - o[i];
        n2 += n[i] * n[i];
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (double& c : n) c *= inv;
}

bool Billiard::fly(ParticleState& s, double t_cap, Impact& impact) const {
    const int d = cfg_.dim;
    const std::size_t candidates = candidate_count();
    const double r = cfg_.radius;
    double* x = s.position.data();
    const double* v = s.velocity.data();

    // exits[i]: time until coordinate i reaches the face it is heading for.
    thread_local std::vector<double> exits;
    exits.resize(static_cast<std::size_t>(d));

    double elapsed = 0.0;
    for (;;) {
        double exit = kNoHit;
        for (int i = 0; i < d; ++i) {
            double t;
            if (v[i] > 0.0) {
                t = (0.5 - x[i]) / v[i];
            } else if (v[i] < 0.0) {
                t = (-0.5 - x[i]) / v[i];
            } else {
                t = kNoHit;
            }
            if (t < 0.0) t = 0.0;
            exits[i] = t;
            exit = std::min(exit, t);
        }

        // Earliest sphere contact inside this cell. With |v| = 1 the contact
        // solves t^2 + 2 b t + c = 0, b = p.v, c = |p|^2 - r^2; the near root
        // is taken in the cancellation-free form c / (-b + sqrt(b^2 - c)).
        double hit = kNoHit;
        std::size_t hit_offset = 0;
        for (std::size_t k = 0; k < candidates; ++k) {
            const int* o = &offsets_[k * d];
            double b = 0.0;
            double p2 = 0.0;
            for (int i = 0; i < d; ++i) {
                const double p = x[i] - o[i];
                b += p * v[i];
                p2 += p * p;
            }
            if (b >= 0.0) continue;  // moving away from (or tangent to) this sphere
            const double c = p2 - r2_;
            const double disc = b * b - c;
            if (disc < 0.0) continue;
            const double root = std::sqrt(disc);
            if (root < kGrazeThreshold * r) continue;  // tangential contact
            const double t = c > 0.0 ? c / (-b + root) : 0.0;
            if (t < hit) {
                hit = t;
                hit_offset = k;
            }
        }

        const double remaining = t_cap - elapsed;
        if (hit <= exit && hit <= remaining) {
            for (int i = 0; i < d; ++i) x[i] += v[i] * hit;
            s.time += hit;
            impact.time = elapsed + hit;
            impact.offset = hit_offset;
            return true;
        }
        if (remaining <= exit) {
            for (int i = 0; i < d; ++i) x[i] = std::clamp(x[i] + v[i] * remaining, -0.5, 0.5);
            s.time += remaining;
            return false;
        }

        // Cross every face reached at this instant (corners wrap together).
        const double tie = exit + 1e-15 * (1.0 + exit);
        for (int i = 0; i < d; ++i) {
            if (exits[i] <= tie) {
                if (v[i] > 0.0) {
                    x[i] = -0.5;
                    ++s.cell[i];
                } else {
                    x[i] = 0.5;
                    --s.cell[i];
                }
            } else {
                x[i] = std::clamp(x[i] + v[i] * exit, -0.5, 0.5);
            }
        }
        elapsed += exit;
        s.time += exit;
    }
}

CollisionEvent Billiard::next_collision(const ParticleState& state, double t_cap) const {
    ParticleState s = state;
    Impact impact;
    CollisionEvent ev;
    if (!fly(s, t_cap, impact)) return ev;
    const int d = cfg_.dim;
    ev.time_to_hit = impact.time;
    surface_normal(s, impact.offset, ev.normal);
    ev.center.resize(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) ev.center[i] = s.cell[i] + offsets_[impact.offset * d + i];
    ev.hit_position = std::move(s.position);
    ev.hit_cell = std::move(s.cell);
    return ev;
}

double Billiard::first_collision_time(ParticleState state, double t_cap) const {
    Impact impact;
    return fly(state, t_cap, impact) ? impact.time : kNoHit;
}

std::uint64_t Billiard::advance_in_place(ParticleState& s, double t_total, EventSink* log) const {
    if (!(t_total >= 0.0)) throw std::invalid_argument("advance: t_total must be non-negative");
    const double t_end = s.time + t_total;
    if (log) log->record(EventKind::Start, s);
    double remaining = t_total;
    std::uint64_t collisions = 0;
    std::uint64_t window_count = 0;
    double window_start = s.time;
    Impact impact;
    thread_local std::vector<double> n;
    while (remaining > 0.0) {
        if (!fly(s, remaining, impact)) break;
        remaining -= impact.time;
        surface_normal(s, impact.offset, n);
        if (std::fabs(dot(s.velocity, n)) < kGrazeThreshold) {
            if (log) log->record(EventKind::Graze, s);
            continue;
        }
        reflect_velocity(s.velocity, n);
        ++collisions;
        if (log) log->record(EventKind::Collision, s);
        if (s.time - window_start >= 1.0) {
            window_start = s.time;
            window_count = 0;
        } else if (++window_count > kMaxCollisionsPerUnitTime) {
            throw DegenerateGeometryError("advance: more than " + std::to_string(kMaxCollisionsPerUnitTime) +
                                          " collisions within unit time near t = " + std::to_string(s.time));
        }
    }
    s.time = t_end;
    if (log) log->record(EventKind::Final, s);
    return collisions;
}

ParticleState reflect(const ParticleState& state, const CollisionEvent& event) {
    if (!event.hit()) throw std::invalid_argument("reflect: event is not a collision");
    ParticleState out = state;
    if (!event.hit_position.empty()) {
        out.position = event.hit_position;
        out.cell = event.hit_cell;
    }
    out.time = state.time + event.time_to_hit;
    if (std::fabs(dot(out.velocity, event.normal)) < kGrazeThreshold) return out;
    reflect_velocity(out.velocity, event.normal);
    return out;
}

CollisionEvent next_collision(const ParticleState& state, const GasConfig& cfg, double t_cap) {
    return Billiard(cfg).next_collision(state, t_cap);
}

ParticleState advance(const ParticleState& state, const GasConfig& cfg, double t_total, EventSink* log) {
    return Billiard(cfg).advance(state, t_total, log);
}

}  // namespace lgas::dynamics
