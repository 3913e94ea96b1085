#include "hstm/zstd_codec.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>

// Declared locally against libzstd's stable C ABI; the runtime library is
// linked directly. Signatures follow the public single-shot API.
extern "C" {
size_t ZSTD_compress(void* dst, size_t dstCapacity, const void* src, size_t srcSize,
                     int compressionLevel);
size_t ZSTD_decompress(void* dst, size_t dstCapacity, const void* src, size_t srcSize);
size_t ZSTD_compressBound(size_t srcSize);
unsigned ZSTD_isError(size_t code);
const char* ZSTD_getErrorName(size_t code);
unsigned long long ZSTD_getFrameContentSize(const void* src, size_t srcSize);
}

namespace hstm {

namespace {

constexpr unsigned long long kContentSizeUnknown = 0ULL - 1;  // ZSTD_CONTENTSIZE_UNKNOWN
constexpr unsigned long long kContentSizeError = 0ULL - 2;    // ZSTD_CONTENTSIZE_ERROR

}  // namespace

std::vector<uint8_t> zstd_compress(std::span<const uint8_t> data, int level) {
    std::vector<uint8_t> out(ZSTD_compressBound(data.size()));
    size_t n = ZSTD_compress(out.data(), out.size(), data.data(), data.size(), level);
    if (ZSTD_isError(n))
        throw std::runtime_error(std::string("compression failed: ") +
                                 ZSTD_getErrorName(n));
    out.resize(n);
    return out;
}

std::vector<uint8_t> zstd_decompress(std::span<const uint8_t> frame) {
    if (frame.size() < 4)
        throw std::runtime_error("corrupt frame at byte offset 0: shorter than a magic number");
    unsigned long long content = ZSTD_getFrameContentSize(frame.data(), frame.size());
    if (content == kContentSizeError)
        throw std::runtime_error("corrupt frame at byte offset 0: bad frame header");
    if (content == kContentSizeUnknown)
        throw std::runtime_error("frame does not declare its content size");

    std::vector<uint8_t> out(content);
    size_t n = ZSTD_decompress(out.data(), out.size(), frame.data(), frame.size());
    if (ZSTD_isError(n))
        throw std::runtime_error(std::string("corrupt frame: ") + ZSTD_getErrorName(n) +
                                 " (offset within frame unknown, " +
                                 std::to_string(frame.size()) + " bytes)");
    if (n != content)
        throw std::runtime_error("frame decoded to " + std::to_string(n) +
                                 " bytes, header declared " + std::to_string(content));
    return out;
}

}  // namespace hstm
