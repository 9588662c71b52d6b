// SPDX-License-Identifier: Apache-2.0
//
// Binary trajectory log. All fields little-endian, fixed width:
//
//   header (16 bytes)
//     char[4]  magic  "LGEV"
//     u16      version (1)
//     u16      dim d
//     u32      record size in bytes (16 + 24 d)
//     u32      reserved (0)
//   record (16 + 24 d bytes)
//     u32      kind (0 start, 1 collision, 2 graze, 3 final)
//     u32      reserved (0)
//     f64      time
//     f64[d]   position (local cell frame)
//     f64[d]   velocity
//     i64[d]   cell

#ifndef LGAS_EVENT_LOG_HPP
#define LGAS_EVENT_LOG_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "lgas/dynamics.hpp"

namespace lgas::dynamics {

inline constexpr std::uint16_t kEventLogVersion = 1;

class BinaryEventLog : public EventSink {
public:
    /// Writes the header immediately. The stream must outlive the log.
    BinaryEventLog(std::ostream& out, int dim);
    void record(EventKind kind, const ParticleState& state) override;
    std::uint64_t records() const { return records_; }

private:
    std::ostream& out_;
    int dim_;
    std::uint64_t records_ = 0;
};

struct EventRecord {
    EventKind kind = EventKind::Start;
    ParticleState state;
};

/// Parses a complete log. Throws std::runtime_error on a malformed stream.
std::vector<EventRecord> read_event_log(std::istream& in);

/// Collects events in memory, for tests and diagnostics.
class MemoryEventLog : public EventSink {
public:
    void record(EventKind kind, const ParticleState& state) override { events.push_back({kind, state}); }
    std::vector<EventRecord> events;
};

}  // namespace lgas::dynamics

#endif  // LGAS_EVENT_LOG_HPP
