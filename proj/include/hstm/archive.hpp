#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hstm/blob.hpp"
#include "hstm/packet.hpp"

namespace hstm {

// One block's worth of matrix plus its provenance, ready for archiving.
struct ArchiveBlock {
    TrafficMatrix matrix;
    BlobMeta meta;
    uint32_t stream_id = 0;
    uint64_t stream_seq = 0;
};

struct ArchiveBlockInfo {
    std::string name;  // member name inside the archive
    uint64_t packets = 0;
    uint64_t nnz = 0;
    uint64_t ts_first_us = 0;
    uint64_t ts_last_us = 0;
    uint32_t stream_id = 0;
    uint64_t stream_seq = 0;
};

// manifest.json, the first member of every archive.
struct ArchiveManifest {
    uint64_t window_seq = 0;
    uint64_t total_packets = 0;
    uint64_t created_us = 0;  // derived from packet timestamps, not wall clock
    bool partial = false;
    uint64_t block_size = 0;
    std::vector<ArchiveBlockInfo> blocks;
};

struct ArchiveWindowMeta {
    uint64_t window_seq = 0;
    bool partial = false;
    uint64_t block_size = 0;
    int zstd_level = 1;
};

// Writes one window archive: manifest.json first, then one zstd-compressed
// matrix blob per block, named w<window>_b<index>.gbz in block order. The
// archive is byte-reproducible: every field, including member timestamps,
// derives from the packets themselves. Throws on an empty block list.
ArchiveManifest write_archive(const std::filesystem::path& path,
                              const std::vector<ArchiveBlock>& blocks,
                              const ArchiveWindowMeta& meta);

struct ArchiveContents {
    ArchiveManifest manifest;
    std::vector<ArchiveBlock> blocks;  // in manifest order
};

// Reads an archive back and cross-checks it: the member set must match the
// manifest exactly, and each blob's counts must agree with its manifest row.
ArchiveContents read_archive(const std::filesystem::path& path);

std::string manifest_to_json(const ArchiveManifest& m);
ArchiveManifest manifest_from_json(const std::string& text);

}  // namespace hstm
