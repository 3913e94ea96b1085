#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <vector>

namespace hstm {

// Point-in-time view of a pipeline's counters.
struct MetricsSnapshot {
    uint64_t packets = 0;
    uint64_t skipped = 0;
    uint64_t blocks = 0;
    uint64_t windows = 0;
    uint64_t partial_windows = 0;
    std::map<uint32_t, uint64_t> blocks_per_stream;
    // Packets ingested per wall-clock second, oldest first.
    std::vector<std::pair<uint64_t, uint64_t>> packets_per_second;
    uint64_t reporter_queue_depth = 0;
    uint64_t writer_queue_depth = 0;
    double last_window_build_seconds = 0;
    uint64_t rss_bytes = 0;
};

// Shared counter sink for one pipeline run. All methods are thread-safe;
// packet counts arrive in chunk-sized increments, so per-second buckets are
// accurate to one chunk.
class MetricsRegistry {
public:
    void add_packets(uint64_t n);
    void add_skipped(uint64_t n);
    void block_published(uint32_t stream_id);
    void window_written(bool partial, double build_seconds);
    void set_queue_depths(uint64_t reporter, uint64_t writer);

    MetricsSnapshot snapshot() const;

private:
    mutable std::mutex mu_;
    MetricsSnapshot state_;
};

// Resident set size of this process, 0 if unavailable.
uint64_t read_rss_bytes();

// Cumulative user+system CPU time of this process, 0 if unavailable.
double process_cpu_seconds();

}  // namespace hstm
