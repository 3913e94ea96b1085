#include "hstm/packet.hpp"

#include <stdexcept>
#include <string>

namespace hstm {

namespace {

bool power_of_two(uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

}  // namespace

void WindowConfig::validate() const {
    if (!power_of_two(block_size))
        throw std::invalid_argument("block size must be a power of two, got " +
                                    std::to_string(block_size));
    if (!power_of_two(blocks_per_window))
        throw std::invalid_argument("blocks per window must be a power of two, got " +
                                    std::to_string(blocks_per_window));
    if (streams == 0) throw std::invalid_argument("stream count must be at least 1");
}

TrafficMatrix matrix_from_records(std::span<const PacketRecord> records) {
    std::vector<Triple> triples;
    triples.reserve(records.size());
    for (const auto& r : records) triples.push_back({r.src, r.dst, 1});
    return TrafficMatrix::from_triples(triples);
}

}  // namespace hstm
