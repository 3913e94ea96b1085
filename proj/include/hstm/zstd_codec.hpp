#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hstm {

// Single-shot Zstandard framing. Level 1 is the deployment default: the
// write path must keep up with capture, and matrix blobs are mostly small
// integers that compress well even at the fastest setting.
std::vector<uint8_t> zstd_compress(std::span<const uint8_t> data, int level = 1);

// Frames written by zstd_compress carry the content size, so decompression
// allocates exactly once. Throws std::runtime_error on corrupt input.
std::vector<uint8_t> zstd_decompress(std::span<const uint8_t> frame);

}  // namespace hstm
