#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hstm/traffic_matrix.hpp"

namespace hstm {

// Provenance carried alongside a serialized matrix. For a matrix tallied
// from packets, packet_count equals the matrix sum.
struct BlobMeta {
    uint64_t packet_count = 0;
    uint64_t ts_first_us = 0;
    uint64_t ts_last_us = 0;
    bool partial = false;

    friend bool operator==(const BlobMeta&, const BlobMeta&) = default;
};

// Byte layout, all integers little-endian:
//   0   u8[4]  magic "HSTM"
//   4   u16    version (1)
//   6   u16    flags (bit 0: partial block)
//   8   u64    row dimension
//   16  u64    column dimension
//   24  u64    entry count
//   32  u64    packet count
//   40  u64    first timestamp, microseconds
//   48  u64    last timestamp, microseconds
//   56  entries: (u32 row, u32 col, u64 count) sorted by (row, col)
std::vector<uint8_t> serialize_matrix(const TrafficMatrix& m, const BlobMeta& meta);

struct DecodedBlob {
    TrafficMatrix matrix;
    BlobMeta meta;
};

// Validates magic, version, size arithmetic, entry order, and counts; throws
// std::runtime_error describing the first defect found.
DecodedBlob deserialize_matrix(std::span<const uint8_t> bytes);

}  // namespace hstm
