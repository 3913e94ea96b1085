#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "hstm/packet.hpp"

struct evp_cipher_ctx_st;

namespace hstm {

// 32 bytes of key material: 16 bytes of cipher key plus 16 bytes of pad seed.
// The same key yields the identical address mapping on every run and machine.
class AnonKey {
public:
    static constexpr size_t kSize = 32;

    static AnonKey from_bytes(std::span<const uint8_t> bytes);  // exactly 32 bytes
    static AnonKey from_hex(std::string_view hex);              // 64 hex digits
    // Raw file of >= 32 bytes, or a text file holding 64 hex digits.
    static AnonKey from_file(const std::filesystem::path& path);
    static AnonKey from_env(const char* var = "HSTM_ANON_KEY");

    const std::array<uint8_t, kSize>& bytes() const { return bytes_; }
    // First 8 bytes (little-endian) of SHA-256 over the key material; stored in
    // table files so a table is never used with the wrong key.
    uint64_t fingerprint() const { return fingerprint_; }

private:
    AnonKey() = default;
    std::array<uint8_t, kSize> bytes_{};
    uint64_t fingerprint_ = 0;
};

// Prefix-preserving keyed bijection on IPv4 addresses.
//
// Each address bit is flipped by a pseudorandom function of the bits above it,
// so two addresses share a k-bit prefix exactly when their images do. The PRF
// is AES-128-ECB keyed by the first half of the key; the second half seeds the
// padding block, itself run through the cipher once.
//
// Instances hold a cipher context and are not safe for concurrent calls;
// construction is cheap, so give each thread its own copy.
class CryptoPan {
public:
    explicit CryptoPan(const AnonKey& key);
    CryptoPan(const CryptoPan& other);
    CryptoPan& operator=(const CryptoPan& other);
    CryptoPan(CryptoPan&& other) noexcept;
    CryptoPan& operator=(CryptoPan&& other) noexcept;
    ~CryptoPan();

    uint32_t anonymize(uint32_t addr) const { return anonymize(addr, 32); }
    // Bijection on [0, 2^width); width in [1, 32]. Throws std::out_of_range if
    // addr does not fit the width.
    uint32_t anonymize(uint32_t addr, unsigned width) const;

    // Flip decision for the bit below a prefix: prefix holds prefix_len bits
    // (prefix_len < 32) in its low positions. Exposed so table construction can
    // walk the prefix tree without recomputing shared prefixes.
    uint32_t prefix_flip_bit(unsigned prefix_len, uint32_t prefix) const;

    uint64_t key_fingerprint() const;

private:
    void init_cipher();
    void aes_block(const uint8_t in[16], uint8_t out[16]) const;

    AnonKey key_;
    std::array<uint8_t, 16> pad_{};
    uint32_t pad32_ = 0;
    evp_cipher_ctx_st* ctx_ = nullptr;
};

// Precomputed anonymization of every address in [0, 2^width): trades memory
// (4 * 2^width bytes) for per-address lookup speed.
class LookupTable {
public:
    static LookupTable build(const AnonKey& key, unsigned width);

    uint32_t anonymize(uint32_t addr) const;
    unsigned width() const { return width_; }
    uint64_t key_fingerprint() const { return fingerprint_; }
    const std::vector<uint32_t>& table() const { return table_; }

    // File layout: magic "HSLT", u16 version, u16 width, u64 key fingerprint,
    // then 2^width little-endian u32 entries.
    void save(const std::filesystem::path& path) const;
    static LookupTable load(const std::filesystem::path& path, const AnonKey& key);
    static LookupTable load_unchecked(const std::filesystem::path& path);

private:
    LookupTable() = default;
    unsigned width_ = 0;
    uint64_t fingerprint_ = 0;
    std::vector<uint32_t> table_;
};

enum class AnonMode { none, direct, table };

AnonMode parse_anon_mode(std::string_view name);  // "none" | "direct" | "table"
std::string_view to_string(AnonMode mode);

// Mode-dispatching handle used by the pipeline's reporter stage.
class Anonymizer {
public:
    Anonymizer() = default;  // pass-through

    static Anonymizer none();
    static Anonymizer direct(const AnonKey& key);
    static Anonymizer table(std::shared_ptr<const LookupTable> table);

    uint32_t map(uint32_t addr) const;
    void apply(std::span<PacketRecord> records) const;  // src and dst of every record
    void apply(PacketBlock& block) const;

    AnonMode mode() const { return mode_; }

private:
    AnonMode mode_ = AnonMode::none;
    std::shared_ptr<const CryptoPan> pan_;
    std::shared_ptr<const LookupTable> table_;
};

}  // namespace hstm
