#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hstm/anonymizer.hpp"
#include "hstm/archive.hpp"
#include "hstm/metrics.hpp"
#include "hstm/packet.hpp"
#include "hstm/packet_source.hpp"

namespace hstm {

// Blocking MPSC queue with a fixed capacity bound. push blocks while full and
// returns false once the queue is closed; pop blocks while empty and returns
// nullopt once the queue is closed and drained.
template <typename T>
class BoundedQueue {
public:
    explicit BoundedQueue(size_t capacity) : capacity_(capacity ? capacity : 1) {}

    bool push(T item) {
        std::unique_lock lock(mu_);
        not_full_.wait(lock, [&] { return closed_ || items_.size() < capacity_; });
        if (closed_) return false;
        items_.push_back(std::move(item));
        lock.unlock();
        not_empty_.notify_one();
        return true;
    }

    std::optional<T> pop() {
        std::unique_lock lock(mu_);
        not_empty_.wait(lock, [&] { return closed_ || !items_.empty(); });
        if (items_.empty()) return std::nullopt;
        T item = std::move(items_.front());
        items_.pop_front();
        lock.unlock();
        not_full_.notify_one();
        return item;
    }

    // Idempotent; wakes every waiter. Queued items remain poppable.
    void close() {
        {
            std::lock_guard lock(mu_);
            closed_ = true;
        }
        not_full_.notify_all();
        not_empty_.notify_all();
    }

    size_t depth() const {
        std::lock_guard lock(mu_);
        return items_.size();
    }

private:
    mutable std::mutex mu_;
    std::condition_variable not_full_;
    std::condition_variable not_empty_;
    std::deque<T> items_;
    size_t capacity_;
    bool closed_ = false;
};

// Destination for finished window archives.
class ArchiveSink {
public:
    virtual ~ArchiveSink() = default;
    virtual void write(const std::vector<ArchiveBlock>& blocks,
                       const ArchiveWindowMeta& meta) = 0;
};

// Writes one TAR per window into a directory, named w<window_seq>.tar.
class DirArchiveSink final : public ArchiveSink {
public:
    explicit DirArchiveSink(std::filesystem::path dir, int zstd_level = 1);
    void write(const std::vector<ArchiveBlock>& blocks,
               const ArchiveWindowMeta& meta) override;
    const std::vector<std::filesystem::path>& paths() const { return paths_; }

private:
    std::filesystem::path dir_;
    int zstd_level_;
    std::vector<std::filesystem::path> paths_;
};

// Keeps windows in memory; test support.
class CollectSink final : public ArchiveSink {
public:
    struct Window {
        std::vector<ArchiveBlock> blocks;
        ArchiveWindowMeta meta;
    };
    void write(const std::vector<ArchiveBlock>& blocks,
               const ArchiveWindowMeta& meta) override {
        windows.push_back({blocks, meta});
    }
    std::vector<Window> windows;
};

struct PipelineOptions {
    WindowConfig window;
    Anonymizer anonymizer;
    // Packets handed from the source to stream workers per queue message.
    uint64_t chunk_packets = 4096;
    size_t worker_queue_depth = 4;
    size_t reporter_queue_depth = 16;
    size_t writer_queue_depth = 2;
};

struct RunReport {
    bool ok = false;
    std::string error;  // empty when ok
    uint64_t packets = 0;
    uint64_t skipped = 0;
    uint64_t blocks = 0;
    uint64_t full_windows = 0;
    uint64_t partial_windows = 0;
    // Sequence number of the last window durably handed to the sink; -1 if none.
    int64_t last_durable_window = -1;
    double wall_seconds = 0;
    double packets_per_second = 0;
    double cpu_seconds = 0;
};

// Drives packets from the source through round-robin stream workers, block
// assembly, reporter-side anonymization and matrix construction, and archive
// writing. Returns instead of throwing: failures land in the report with all
// threads joined.
RunReport run_pipeline(PacketSource& source, const PipelineOptions& options,
                       ArchiveSink& sink, MetricsRegistry* metrics = nullptr);

}  // namespace hstm
