// SPDX-License-Identifier: Apache-2.0
//
// Event-driven flow of a unit-speed point particle through the cubic lattice
// of spheres. The particle lives in the unit cell [-1/2, 1/2]^d around the
// sphere at the origin; crossing a face moves it to the opposite face and
// bumps the integer cell vector, so cell + position is the unwrapped
// coordinate and displacements never lose precision to large offsets.
//
// Flights are marched cell by cell. In each cell the candidate spheres are
// the ones that can reach into it: only the cell's own sphere for r <= 1/2,
// and the neighbours at offsets in {-1,0,1}^d with fewer than 4 r^2 nonzero
// entries for 1/2 < r < 1 (a neighbour with m nonzero offsets sits at
// distance sqrt(m)/2 from the cell).

#ifndef LGAS_DYNAMICS_HPP
#define LGAS_DYNAMICS_HPP

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "lgas/gas_config.hpp"

namespace lgas::dynamics {

inline constexpr double kPenetrationTolerance = 1e-9;
inline constexpr double kGrazeThreshold = 1e-12;
inline constexpr double kSpeedDriftTolerance = 1e-13;
inline constexpr std::uint64_t kMaxCollisionsPerUnitTime = 1'000'000;
inline constexpr double kNoHit = std::numeric_limits<double>::infinity();

/// More than kMaxCollisionsPerUnitTime collisions inside one unit of time.
class DegenerateGeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ParticleState {
    std::vector<double> position;     ///< in [-1/2, 1/2]^d relative to the cell's sphere
    std::vector<std::int64_t> cell;   ///< accumulated lattice translations
    std::vector<double> velocity;     ///< unit vector
    double time = 0.0;

    int dim() const { return static_cast<int>(position.size()); }
    /// cell + position.
    std::vector<double> unwrapped() const;
};

struct CollisionEvent {
    double time_to_hit = kNoHit;
    std::vector<std::int64_t> center;  ///< lattice point of the struck sphere
    std::vector<double> normal;        ///< outward unit normal at impact
    std::vector<double> hit_position;  ///< impact point in the cell's local frame
    std::vector<std::int64_t> hit_cell;

    bool hit() const { return time_to_hit != kNoHit; }
};

/// Sink for a trajectory's events (see event_log.hpp for the binary format).
enum class EventKind : std::uint32_t { Start = 0, Collision = 1, Graze = 2, Final = 3 };

class EventSink {
public:
    virtual ~EventSink() = default;
    virtual void record(EventKind kind, const ParticleState& state) = 0;
};

class Billiard {
public:
    /// Throws std::invalid_argument unless 0 < r < 1.
    explicit Billiard(const GasConfig& cfg);

    const GasConfig& config() const { return cfg_; }
    int dim() const { return cfg_.dim; }
    /// Number of candidate sphere offsets tested per cell.
    std::size_t candidate_count() const { return offsets_.size() / static_cast<std::size_t>(cfg_.dim); }

    /// Earliest collision along the straight flight from `state`, or an event
    /// with time_to_hit = kNoHit if none occurs within t_cap. Tangential
    /// contacts (|v.n| < kGrazeThreshold) do not count as collisions.
    CollisionEvent next_collision(const ParticleState& state, double t_cap) const;

    /// Time of the first collision, or kNoHit if beyond t_cap. Cheaper than
    /// next_collision when only the free-flight time is needed.
    double first_collision_time(ParticleState state, double t_cap) const;

    /// Flows `state` for exactly t_total through collisions and cell wraps.
    /// Returns the number of collisions. Throws DegenerateGeometryError.
    std::uint64_t advance_in_place(ParticleState& state, double t_total, EventSink* log = nullptr) const;

    ParticleState advance(ParticleState state, double t_total, EventSink* log = nullptr) const {
        advance_in_place(state, t_total, log);
        return state;
    }

    /// Signed distance to the nearest candidate sphere surface (negative
    /// inside a scatterer).
    double clearance(const ParticleState& state) const;

    /// True iff a point in the local cell frame lies outside every sphere.
    bool outside_scatterers(const std::vector<double>& position) const;

private:
    struct Impact {
        double time = 0.0;
        std::size_t offset = 0;
    };

    // Moves `s` along its velocity until the first collision (returns true,
    // `s` at the impact point) or for t_cap (returns false).
    bool fly(ParticleState& s, double t_cap, Impact& impact) const;
    void surface_normal(const ParticleState& s, std::size_t offset, std::vector<double>& n) const;

    GasConfig cfg_;
    double r2_;
    std::vector<int> offsets_;  ///< candidate_count x d, row-major
};

/// Mirror reflection off the struck sphere: v' = v - 2 (v.n) n, with the
/// state moved to the impact point. If |v.n| < kGrazeThreshold the contact is
/// tangential and the velocity is left unchanged.
ParticleState reflect(const ParticleState& state, const CollisionEvent& event);

/// Convenience forms taking a GasConfig directly.
CollisionEvent next_collision(const ParticleState& state, const GasConfig& cfg, double t_cap);
ParticleState advance(const ParticleState& state, const GasConfig& cfg, double t_total, EventSink* log = nullptr);

/// Builds a state at the given local position with the given velocity (normalised).
ParticleState make_state(std::vector<double> position, std::vector<double> velocity);

}  // namespace lgas::dynamics

#endif  // LGAS_DYNAMICS_HPP
