#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hstm/traffic_matrix.hpp"

namespace hstm {

// One observed packet, reduced to the fields the matrices need.
struct PacketRecord {
    uint32_t src = 0;
    uint32_t dst = 0;
    uint64_t ts_us = 0;  // capture timestamp, microseconds

    friend bool operator==(const PacketRecord&, const PacketRecord&) = default;
};

// A run of consecutive packets from one stream. Blocks normally hold exactly
// the configured block size; a block cut short by end of input is flagged
// partial so downstream stages can account for it.
struct PacketBlock {
    std::vector<PacketRecord> records;
    uint32_t stream_id = 0;
    uint64_t seq = 0;  // per-stream block counter, from 0
    bool partial = false;

    uint64_t ts_first_us() const { return records.empty() ? 0 : records.front().ts_us; }
    uint64_t ts_last_us() const { return records.empty() ? 0 : records.back().ts_us; }
};

// Blocking and windowing geometry. Defaults give 2^17-packet blocks and
// 64-block windows (2^23 packets per window) spread over 8 streams.
struct WindowConfig {
    uint64_t block_size = uint64_t{1} << 17;
    uint64_t blocks_per_window = 64;
    uint32_t streams = 8;

    uint64_t window_packets() const { return block_size * blocks_per_window; }
    // Throws std::invalid_argument unless block_size and blocks_per_window are
    // powers of two and streams >= 1.
    void validate() const;
};

// Tallies src -> dst packet counts into a full-address-space sparse matrix.
TrafficMatrix matrix_from_records(std::span<const PacketRecord> records);

}  // namespace hstm
