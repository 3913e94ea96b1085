#include "hstm/packet_source.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

namespace hstm {

namespace {

// Dotted quad or plain decimal.
bool parse_address(std::string_view text, uint32_t& out) {
    if (text.empty()) return false;
    size_t dots = 0;
    for (char c : text) dots += (c == '.');
    if (dots == 0) {
        auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
        return ec == std::errc() && p == text.data() + text.size();
    }
    if (dots != 3) return false;
    uint32_t value = 0;
    size_t pos = 0;
    for (int octet = 0; octet < 4; ++octet) {
        size_t end = text.find('.', pos);
        if (end == std::string_view::npos) end = text.size();
        unsigned part = 0;
        auto [p, ec] = std::from_chars(text.data() + pos, text.data() + end, part);
        if (ec != std::errc() || p != text.data() + end || part > 255) return false;
        value = (value << 8) | part;
        pos = end + 1;
    }
    return (out = value, true);
}

bool parse_line(std::string_view line, PacketRecord& out) {
    size_t c1 = line.find(',');
    if (c1 == std::string_view::npos) return false;
    size_t c2 = line.find(',', c1 + 1);
    if (c2 == std::string_view::npos) return false;
    if (line.find(',', c2 + 1) != std::string_view::npos) return false;
    if (!parse_address(line.substr(0, c1), out.src)) return false;
    if (!parse_address(line.substr(c1 + 1, c2 - c1 - 1), out.dst)) return false;
    std::string_view ts = line.substr(c2 + 1);
    if (ts.empty()) return false;
    auto [p, ec] = std::from_chars(ts.data(), ts.data() + ts.size(), out.ts_us);
    return ec == std::errc() && p == ts.data() + ts.size();
}

}  // namespace

TrafficModel parse_traffic_model(std::string_view name) {
    if (name == "uniform") return TrafficModel::uniform;
    if (name == "heavy-tail") return TrafficModel::heavy_tail;
    throw std::invalid_argument("unknown traffic model '" + std::string(name) +
                                "' (expected uniform or heavy-tail)");
}

std::string_view to_string(TrafficModel model) {
    switch (model) {
        case TrafficModel::uniform: return "uniform";
        case TrafficModel::heavy_tail: return "heavy-tail";
    }
    throw std::invalid_argument("invalid traffic model value");
}

SyntheticSource::SyntheticSource(const SyntheticConfig& config)
    : config_(config), rng_(config.seed), ts_us_(config.start_ts_us) {
    if (config.address_bits < 1 || config.address_bits > 32)
        throw std::invalid_argument("address width must be in [1, 32], got " +
                                    std::to_string(config.address_bits));
    mask_ = config.address_bits == 32 ? 0xFFFFFFFFu
                                      : ((1u << config.address_bits) - 1);
}

uint32_t SyntheticSource::draw_address() {
    if (config_.model == TrafficModel::uniform)
        return static_cast<uint32_t>(rng_()) & mask_;
    // Heavy tail: draw a rank log-uniformly, so rank r appears with weight
    // roughly 1/r, then scatter ranks across the space with a fixed odd
    // multiplier to avoid clustering all hot addresses near zero.
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
    double span = static_cast<double>(mask_) + 1.0;
    auto rank = static_cast<uint64_t>(std::pow(span, u));
    return static_cast<uint32_t>(rank * 0x9E3779B1u) & mask_;
}

PacketRecord SyntheticSource::next() {
    PacketRecord r;
    r.src = draw_address();
    r.dst = draw_address();
    ts_us_ += rng_() & 3;
    r.ts_us = ts_us_;
    return r;
}

size_t SyntheticSource::fill(std::span<PacketRecord> out) {
    size_t n = 0;
    while (n < out.size() && emitted_ < config_.count) {
        out[n++] = next();
        ++emitted_;
    }
    return n;
}

std::vector<PacketRecord> generate_synthetic(uint64_t count, TrafficModel model,
                                             uint64_t seed, unsigned address_bits) {
    SyntheticConfig cfg;
    cfg.count = count;
    cfg.model = model;
    cfg.seed = seed;
    cfg.address_bits = address_bits;
    SyntheticSource src(cfg);
    std::vector<PacketRecord> out(count);
    size_t n = src.fill(out);
    out.resize(n);
    return out;
}

CsvPacketSource::CsvPacketSource(const std::filesystem::path& path,
                                 CsvReaderOptions options)
    : path_(path), options_(options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open capture file: " + path.string());
    in.seekg(0, std::ios::end);
    data_.resize(static_cast<size_t>(in.tellg()));
    in.seekg(0);
    in.read(data_.data(), static_cast<std::streamsize>(data_.size()));
    if (!in && !data_.empty())
        throw std::runtime_error("read failed: " + path.string());
}

bool CsvPacketSource::next_record(PacketRecord& out) {
    while (pos_ < data_.size()) {
        size_t start = pos_;
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
        std::string_view line(data_.data() + start, pos_ - start);
        if (pos_ < data_.size()) ++pos_;
        ++line_;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (parse_line(line, out)) return true;
        ++skipped_;
        if (skipped_ > options_.error_budget)
            throw std::runtime_error("too many malformed records in " + path_.string() +
                                     ": gave up at line " + std::to_string(line_) +
                                     " after " + std::to_string(skipped_) + " failures");
    }
    return false;
}

size_t CsvPacketSource::fill(std::span<PacketRecord> out) {
    size_t n = 0;
    while (n < out.size() && next_record(out[n])) ++n;
    return n;
}

std::vector<PacketRecord> read_records(const std::filesystem::path& path,
                                       std::string_view format,
                                       CsvReaderOptions options, uint64_t* skipped) {
    if (format != "csv")
        throw std::invalid_argument("unsupported capture format '" +
                                    std::string(format) + "' (expected csv)");
    CsvPacketSource src(path, options);
    std::vector<PacketRecord> all;
    std::vector<PacketRecord> buf(65536);
    while (size_t n = src.fill(buf))
        all.insert(all.end(), buf.begin(), buf.begin() + static_cast<ptrdiff_t>(n));
    if (skipped) *skipped = src.skipped();
    return all;
}

}  // namespace hstm
