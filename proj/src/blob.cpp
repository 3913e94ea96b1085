#include "hstm/blob.hpp"

#include <cstring>
#include <stdexcept>
#include <string>

namespace hstm {

namespace {

constexpr char kMagic[4] = {'H', 'S', 'T', 'M'};
constexpr uint16_t kVersion = 1;
constexpr size_t kHeaderSize = 56;
constexpr size_t kEntrySize = 16;
constexpr uint16_t kFlagPartial = 1;

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v & 0xFF));
    out.push_back(static_cast<uint8_t>(v >> 8));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>((v >> (8 * i)) & 0xFF));
}

uint16_t get_u16(const uint8_t* p) { return static_cast<uint16_t>(p[0] | (p[1] << 8)); }

uint32_t get_u32(const uint8_t* p) {
    return uint32_t{p[0]} | (uint32_t{p[1]} << 8) | (uint32_t{p[2]} << 16) |
           (uint32_t{p[3]} << 24);
}

uint64_t get_u64(const uint8_t* p) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= uint64_t{p[i]} << (8 * i);
    return v;
}

}  // namespace

std::vector<uint8_t> serialize_matrix(const TrafficMatrix& m, const BlobMeta& meta) {
    std::vector<uint8_t> out;
    out.reserve(kHeaderSize + m.nnz() * kEntrySize);
    out.insert(out.end(), kMagic, kMagic + 4);
    put_u16(out, kVersion);
    put_u16(out, meta.partial ? kFlagPartial : 0);
    put_u64(out, m.row_dim());
    put_u64(out, m.col_dim());
    put_u64(out, m.nnz());
    put_u64(out, meta.packet_count);
    put_u64(out, meta.ts_first_us);
    put_u64(out, meta.ts_last_us);
    for (const auto& t : m.entries()) {
        put_u32(out, t.row);
        put_u32(out, t.col);
        put_u64(out, t.count);
    }
    return out;
}

DecodedBlob deserialize_matrix(std::span<const uint8_t> bytes) {
    if (bytes.size() < kHeaderSize)
        throw std::runtime_error("matrix blob truncated: " + std::to_string(bytes.size()) +
                                 " bytes, header needs " + std::to_string(kHeaderSize));
    const uint8_t* p = bytes.data();
    if (std::memcmp(p, kMagic, 4) != 0)
        throw std::runtime_error("matrix blob has wrong magic bytes");
    uint16_t version = get_u16(p + 4);
    if (version != kVersion)
        throw std::runtime_error("unsupported matrix blob version " +
                                 std::to_string(version));
    uint16_t flags = get_u16(p + 6);
    if (flags & ~kFlagPartial)
        throw std::runtime_error("matrix blob carries unknown flags " +
                                 std::to_string(flags));
    uint64_t row_dim = get_u64(p + 8);
    uint64_t col_dim = get_u64(p + 16);
    uint64_t nnz = get_u64(p + 24);

    if (nnz > (bytes.size() - kHeaderSize) / kEntrySize ||
        bytes.size() != kHeaderSize + nnz * kEntrySize)
        throw std::runtime_error("matrix blob size mismatch: " +
                                 std::to_string(bytes.size()) + " bytes for " +
                                 std::to_string(nnz) + " entries");

    BlobMeta meta;
    meta.packet_count = get_u64(p + 32);
    meta.ts_first_us = get_u64(p + 40);
    meta.ts_last_us = get_u64(p + 48);
    meta.partial = flags & kFlagPartial;

    std::vector<Triple> entries;
    entries.reserve(nnz);
    const uint8_t* q = p + kHeaderSize;
    for (uint64_t i = 0; i < nnz; ++i, q += kEntrySize) {
        Triple t{get_u32(q), get_u32(q + 4), get_u64(q + 8)};
        if (t.row >= row_dim || t.col >= col_dim)
            throw std::runtime_error("matrix blob entry " + std::to_string(i) +
                                     " outside declared dimensions");
        if (t.count == 0)
            throw std::runtime_error("matrix blob entry " + std::to_string(i) +
                                     " has a zero count");
        if (i > 0) {
            const auto& prev = entries.back();
            if (t.row < prev.row || (t.row == prev.row && t.col <= prev.col))
                throw std::runtime_error("matrix blob entries not strictly sorted at " +
                                         std::to_string(i));
        }
        entries.push_back(t);
    }
    // Entries arrive sorted and validated, so reconstruction through the
    // public factory cannot change them.
    return {TrafficMatrix::from_triples(std::move(entries), row_dim, col_dim), meta};
}

}  // namespace hstm
