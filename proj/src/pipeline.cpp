#include "hstm/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <memory>
#include <thread>

namespace hstm {

namespace {

struct WindowJob {
    std::vector<ArchiveBlock> blocks;
    ArchiveWindowMeta meta;
    double build_seconds = 0;
};

using Chunk = std::vector<PacketRecord>;

// First failure wins; every queue is closed so all stages unblock promptly.
struct Shared {
    std::atomic<bool> failed{false};
    std::mutex error_mu;
    std::string error;

    std::vector<std::unique_ptr<BoundedQueue<Chunk>>> worker_queues;
    std::unique_ptr<BoundedQueue<PacketBlock>> reporter_queue;
    std::unique_ptr<BoundedQueue<WindowJob>> writer_queue;

    std::atomic<int64_t> last_durable{-1};
    std::atomic<uint64_t> full_windows{0};
    std::atomic<uint64_t> partial_windows{0};
    std::atomic<uint64_t> blocks{0};

    void fail(const std::string& what) {
        {
            std::lock_guard lock(error_mu);
            if (error.empty()) error = what;
        }
        failed.store(true);
        close_all();
    }

    void close_all() {
        for (auto& q : worker_queues) q->close();
        reporter_queue->close();
        writer_queue->close();
    }
};

void worker_main(Shared& shared, const PipelineOptions& options, uint32_t stream_id,
                 MetricsRegistry* metrics) {
    const size_t block_size = options.window.block_size;
    PacketBlock current;
    current.stream_id = stream_id;
    current.records.reserve(block_size);
    uint64_t seq = 0;

    auto publish = [&](bool partial) {
        current.partial = partial;
        current.seq = seq++;
        shared.blocks.fetch_add(1);
        if (metrics) metrics->block_published(stream_id);
        bool pushed = shared.reporter_queue->push(std::move(current));
        current = PacketBlock{};
        current.stream_id = stream_id;
        current.records.reserve(block_size);
        return pushed;
    };

    while (auto chunk = shared.worker_queues[stream_id]->pop()) {
        if (shared.failed.load()) return;
        for (auto& rec : *chunk) {
            current.records.push_back(rec);
            if (current.records.size() == block_size)
                if (!publish(false)) return;
        }
    }
    if (!shared.failed.load() && !current.records.empty()) publish(true);
}

void reporter_main(Shared& shared, const PipelineOptions& options,
                   MetricsRegistry* metrics) {
    const uint64_t window_size = options.window.blocks_per_window;
    std::vector<PacketBlock> pending_full;
    std::vector<PacketBlock> partial_stash;
    uint64_t window_seq = 0;

    auto emit = [&](std::vector<PacketBlock> blocks, bool partial) {
        auto t0 = std::chrono::steady_clock::now();
        WindowJob job;
        job.blocks.reserve(blocks.size());
        for (auto& b : blocks) {
            options.anonymizer.apply(b);
            ArchiveBlock out;
            out.matrix = matrix_from_records(b.records);
            out.meta = {b.records.size(), b.ts_first_us(), b.ts_last_us(), b.partial};
            out.stream_id = b.stream_id;
            out.stream_seq = b.seq;
            job.blocks.push_back(std::move(out));
        }
        job.meta.window_seq = window_seq++;
        job.meta.partial = partial;
        job.meta.block_size = options.window.block_size;
        job.build_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return shared.writer_queue->push(std::move(job));
    };

    while (auto block = shared.reporter_queue->pop()) {
        if (shared.failed.load()) return;
        if (metrics)
            metrics->set_queue_depths(shared.reporter_queue->depth(),
                                      shared.writer_queue->depth());
        if (block->partial) {
            partial_stash.push_back(std::move(*block));
            continue;
        }
        pending_full.push_back(std::move(*block));
        if (pending_full.size() == window_size) {
            if (!emit(std::move(pending_full), false)) return;
            pending_full.clear();
        }
    }
    if (shared.failed.load()) return;
    // Source exhausted: whatever remains, full blocks first, is the final
    // partial window. Nothing is dropped.
    auto leftovers = std::move(pending_full);
    for (auto& b : partial_stash) leftovers.push_back(std::move(b));
    if (!leftovers.empty()) emit(std::move(leftovers), true);
}

void writer_main(Shared& shared, ArchiveSink& sink, MetricsRegistry* metrics) {
    while (auto job = shared.writer_queue->pop()) {
        if (shared.failed.load()) return;
        try {
            sink.write(job->blocks, job->meta);
        } catch (const std::exception& e) {
            shared.fail(std::string("archive write failed: ") + e.what());
            return;
        }
        shared.last_durable.store(static_cast<int64_t>(job->meta.window_seq));
        if (job->meta.partial)
            shared.partial_windows.fetch_add(1);
        else
            shared.full_windows.fetch_add(1);
        if (metrics) metrics->window_written(job->meta.partial, job->build_seconds);
    }
}

}  // namespace

DirArchiveSink::DirArchiveSink(std::filesystem::path dir, int zstd_level)
    : dir_(std::move(dir)), zstd_level_(zstd_level) {}

void DirArchiveSink::write(const std::vector<ArchiveBlock>& blocks,
                           const ArchiveWindowMeta& meta) {
    char name[32];
    std::snprintf(name, sizeof name, "w%08llu.tar",
                  static_cast<unsigned long long>(meta.window_seq));
    auto path = dir_ / name;
    ArchiveWindowMeta with_level = meta;
    with_level.zstd_level = zstd_level_;
    write_archive(path, blocks, with_level);
    paths_.push_back(path);
}

RunReport run_pipeline(PacketSource& source, const PipelineOptions& options,
                       ArchiveSink& sink, MetricsRegistry* metrics) {
    RunReport report;
    try {
        options.window.validate();
    } catch (const std::exception& e) {
        report.error = e.what();
        return report;
    }
    if (options.chunk_packets == 0) {
        report.error = "chunk size must be at least 1";
        return report;
    }

    const uint32_t streams = options.window.streams;
    Shared shared;
    for (uint32_t s = 0; s < streams; ++s)
        shared.worker_queues.push_back(
            std::make_unique<BoundedQueue<Chunk>>(options.worker_queue_depth));
    shared.reporter_queue =
        std::make_unique<BoundedQueue<PacketBlock>>(options.reporter_queue_depth);
    shared.writer_queue =
        std::make_unique<BoundedQueue<WindowJob>>(options.writer_queue_depth);

    const auto wall0 = std::chrono::steady_clock::now();
    const double cpu0 = process_cpu_seconds();

    // A stage that throws (table miss, allocation failure) must fail the run,
    // not the process; guard every stage thread at its root.
    auto guarded = [&shared](const char* stage, auto fn) {
        return [&shared, stage, fn = std::move(fn)] {
            try {
                fn();
            } catch (const std::exception& e) {
                shared.fail(std::string(stage) + " failed: " + e.what());
            }
        };
    };

    std::vector<std::thread> workers;
    workers.reserve(streams);
    for (uint32_t s = 0; s < streams; ++s)
        workers.emplace_back(guarded(
            "stream worker", [&shared, &options, s, metrics] {
                worker_main(shared, options, s, metrics);
            }));
    std::thread reporter(guarded("window build", [&shared, &options, metrics] {
        reporter_main(shared, options, metrics);
    }));
    std::thread writer(guarded("archive writer", [&shared, &sink, metrics] {
        writer_main(shared, sink, metrics);
    }));

    // Ingest runs on this thread: read a chunk, deal packets round-robin into
    // per-stream staging, ship staging chunks as they fill.
    std::string source_error;
    {
        std::vector<Chunk> staging(streams);
        for (auto& c : staging) c.reserve(options.chunk_packets);
        std::vector<PacketRecord> buffer(options.chunk_packets);
        uint32_t next_stream = 0;
        bool aborted = false;
        try {
            while (!aborted) {
                size_t n = source.fill(buffer);
                if (n == 0) break;
                report.packets += n;
                if (metrics) metrics->add_packets(n);
                for (size_t i = 0; i < n && !aborted; ++i) {
                    auto& stage = staging[next_stream];
                    stage.push_back(buffer[i]);
                    if (stage.size() == options.chunk_packets) {
                        if (!shared.worker_queues[next_stream]->push(std::move(stage)))
                            aborted = true;
                        stage = Chunk{};
                        stage.reserve(options.chunk_packets);
                    }
                    next_stream = (next_stream + 1) % streams;
                }
            }
        } catch (const std::exception& e) {
            source_error = std::string("source read failed: ") + e.what();
        }
        if (!aborted)
            for (uint32_t s = 0; s < streams; ++s)
                if (!staging[s].empty()) shared.worker_queues[s]->push(std::move(staging[s]));
    }

    // Orderly drain: each stage's queue closes only after its producers are
    // done, so close-then-join cascades front to back.
    for (auto& q : shared.worker_queues) q->close();
    for (auto& t : workers) t.join();
    shared.reporter_queue->close();
    reporter.join();
    shared.writer_queue->close();
    writer.join();

    report.skipped = source.skipped();
    if (metrics && report.skipped) metrics->add_skipped(report.skipped);
    report.blocks = shared.blocks.load();
    report.full_windows = shared.full_windows.load();
    report.partial_windows = shared.partial_windows.load();
    report.last_durable_window = shared.last_durable.load();
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    report.cpu_seconds = process_cpu_seconds() - cpu0;
    if (report.wall_seconds > 0)
        report.packets_per_second = double(report.packets) / report.wall_seconds;

    {
        std::lock_guard lock(shared.error_mu);
        if (!shared.error.empty())
            report.error = shared.error;
        else if (!source_error.empty())
            report.error = source_error;
    }
    report.ok = report.error.empty();
    return report;
}

}  // namespace hstm
