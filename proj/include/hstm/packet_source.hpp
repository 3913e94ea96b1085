#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "hstm/packet.hpp"

namespace hstm {

// Shape of synthetically drawn addresses: uniform over the configured space,
// or a heavy-tailed draw where a few addresses dominate, as live traffic does.
enum class TrafficModel { uniform, heavy_tail };

TrafficModel parse_traffic_model(std::string_view name);  // "uniform" | "heavy-tail"
std::string_view to_string(TrafficModel model);

// Pull-based packet supplier. fill() writes up to out.size() records and
// returns how many it wrote; zero means the source is exhausted.
class PacketSource {
public:
    virtual ~PacketSource() = default;
    virtual size_t fill(std::span<PacketRecord> out) = 0;
    // Records dropped because they could not be parsed.
    virtual uint64_t skipped() const { return 0; }
};

struct SyntheticConfig {
    uint64_t count = 0;
    TrafficModel model = TrafficModel::uniform;
    uint64_t seed = 1;
    unsigned address_bits = 24;  // addresses drawn from [0, 2^address_bits)
    uint64_t start_ts_us = 1'700'000'000'000'000;
};

// Deterministic pseudorandom packet generator; the same config reproduces the
// same packet sequence exactly.
class SyntheticSource final : public PacketSource {
public:
    explicit SyntheticSource(const SyntheticConfig& config);
    size_t fill(std::span<PacketRecord> out) override;

private:
    PacketRecord next();
    uint32_t draw_address();

    SyntheticConfig config_;
    std::mt19937_64 rng_;
    uint64_t emitted_ = 0;
    uint64_t ts_us_ = 0;
    uint32_t mask_ = 0;
};

std::vector<PacketRecord> generate_synthetic(uint64_t count, TrafficModel model,
                                             uint64_t seed = 1,
                                             unsigned address_bits = 24);

struct CsvReaderOptions {
    // Parse failures tolerated before the whole read is abandoned.
    uint64_t error_budget = 100;
};

// Reads "src,dst,ts_us" lines; src and dst are dotted quads or decimal
// addresses. Lines that fail to parse are counted and skipped until the error
// budget runs out, then the source throws.
class CsvPacketSource final : public PacketSource {
public:
    CsvPacketSource(const std::filesystem::path& path, CsvReaderOptions options = {});
    size_t fill(std::span<PacketRecord> out) override;
    uint64_t skipped() const override { return skipped_; }

private:
    bool next_record(PacketRecord& out);

    std::filesystem::path path_;
    CsvReaderOptions options_;
    std::vector<char> data_;
    size_t pos_ = 0;
    uint64_t line_ = 0;
    uint64_t skipped_ = 0;
};

// Loads a whole capture file into memory. format: "csv".
std::vector<PacketRecord> read_records(const std::filesystem::path& path,
                                       std::string_view format = "csv",
                                       CsvReaderOptions options = {},
                                       uint64_t* skipped = nullptr);

}  // namespace hstm
