// SPDX-License-Identifier: Apache-2.0

#include "lgas/event_log.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace lgas::dynamics {

namespace {

template <class U>
void put(std::ostream& out, U value) {
    std::array<char, sizeof(U)> bytes;
    for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
    out.write(bytes.data(), bytes.size());
}

template <class U>
U get(std::istream& in) {
    std::array<unsigned char, sizeof(U)> bytes;
    if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
        throw std::runtime_error("event log: truncated stream");
    }
    U value = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
    return value;
}

std::uint32_t record_size(int dim) { return 16u + 24u * static_cast<std::uint32_t>(dim); }

}  // namespace

BinaryEventLog::BinaryEventLog(std::ostream& out, int dim) : out_(out), dim_(dim) {
    out_.write("LGEV", 4);
    put<std::uint16_t>(out_, kEventLogVersion);
    put<std::uint16_t>(out_, static_cast<std::uint16_t>(dim));
    put<std::uint32_t>(out_, record_size(dim));
    put<std::uint32_t>(out_, 0);
}

void BinaryEventLog::record(EventKind kind, const ParticleState& s) {
    put<std::uint32_t>(out_, static_cast<std::uint32_t>(kind));
    put<std::uint32_t>(out_, 0);
    put<std::uint64_t>(out_, std::bit_cast<std::uint64_t>(s.time));
    for (int i = 0; i < dim_; ++i) put<std::uint64_t>(out_, std::bit_cast<std::uint64_t>(s.position[i]));
    for (int i = 0; i < dim_; ++i) put<std::uint64_t>(out_, std::bit_cast<std::uint64_t>(s.velocity[i]));
    for (int i = 0; i < dim_; ++i) put<std::uint64_t>(out_, static_cast<std::uint64_t>(s.cell[i]));
    ++records_;
}

std::vector<EventRecord> read_event_log(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, "LGEV", 4) != 0) {
        throw std::runtime_error("event log: bad magic");
    }
    const auto version = get<std::uint16_t>(in);
    if (version != kEventLogVersion) throw std::runtime_error("event log: unsupported version");
    const int dim = get<std::uint16_t>(in);
    if (get<std::uint32_t>(in) != record_size(dim)) throw std::runtime_error("event log: record size mismatch");
    get<std::uint32_t>(in);

    std::vector<EventRecord> out;
    while (in.peek() != std::char_traits<char>::eof()) {
        EventRecord rec;
        const auto kind = get<std::uint32_t>(in);
        if (kind > static_cast<std::uint32_t>(EventKind::Final)) throw std::runtime_error("event log: bad kind");
        rec.kind = static_cast<EventKind>(kind);
        get<std::uint32_t>(in);
        rec.state.time = std::bit_cast<double>(get<std::uint64_t>(in));
        rec.state.position.resize(dim);
        rec.state.velocity.resize(dim);
        rec.state.cell.resize(dim);
        for (auto& x : rec.state.position) x = std::bit_cast<double>(get<std::uint64_t>(in));
        for (auto& v : rec.state.velocity) v = std::bit_cast<double>(get<std::uint64_t>(in));
        for (auto& c : rec.state.cell) c = static_cast<std::int64_t>(get<std::uint64_t>(in));
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace lgas::dynamics
