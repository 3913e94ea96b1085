// hstm: command-line front end for the traffic-matrix toolkit.
//
// Subcommands cover the full life cycle: synthesize or read packets, run the
// streaming pipeline into window archives, compute analytics over archives,
// filter archives by address range, build anonymization tables, benchmark the
// pipeline, and turn connection logs into daily reports.
//
// Key material is accepted from a file (--key-file) or the HSTM_ANON_KEY
// environment variable, never from an argument, so keys stay out of process
// listings.

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hstm/analytics.hpp"
#include "hstm/anonymizer.hpp"
#include "hstm/archive.hpp"
#include "hstm/connection_log.hpp"
#include "hstm/metrics.hpp"
#include "hstm/packet.hpp"
#include "hstm/packet_source.hpp"
#include "hstm/pipeline.hpp"
#include "hstm/traffic_matrix.hpp"

namespace fs = std::filesystem;
using namespace hstm;

namespace {

// Fixed key for benchmark runs that never touch real traffic; lets `bench`
// exercise the anonymization path without any key setup.
constexpr std::string_view kBenchKeyHex =
    "8e4d9a3c57f1b2064db8c9e21f6a5370415a6b7c8d9e0f1a2b3c4d5e6f708192";

std::string fmt_double(double v, int precision = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

std::string fmt_hex64(uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// std::cout for "-", an owned file otherwise.
struct OutStream {
    explicit OutStream(const std::string& path) {
        if (path == "-") return;
        file.open(path, std::ios::binary);
        if (!file) throw std::runtime_error("cannot write " + path);
        use_file = true;
    }
    std::ostream& get() { return use_file ? file : std::cout; }

    std::ofstream file;
    bool use_file = false;
};

AnonKey require_key(const std::string& key_file) {
    if (!key_file.empty()) return AnonKey::from_file(key_file);
    if (std::getenv("HSTM_ANON_KEY")) return AnonKey::from_env();
    throw std::runtime_error(
        "anonymization key required: pass --key-file or set HSTM_ANON_KEY");
}

Anonymizer assemble_anonymizer(AnonMode mode, const AnonKey& key,
                               const std::string& table_path, unsigned table_width) {
    switch (mode) {
        case AnonMode::none:
            return Anonymizer::none();
        case AnonMode::direct:
            return Anonymizer::direct(key);
        case AnonMode::table: {
            auto table = table_path.empty()
                             ? std::make_shared<const LookupTable>(
                                   LookupTable::build(key, table_width))
                             : std::make_shared<const LookupTable>(
                                   LookupTable::load(table_path, key));
            return Anonymizer::table(std::move(table));
        }
    }
    throw std::logic_error("unhandled anonymization mode");
}

// Samples pipeline counters, memory, and CPU once per second on a side
// thread. stop() always records one final sample, so even a sub-second run
// yields a row.
class MetricSampler {
public:
    struct Row {
        double elapsed_s = 0;
        uint64_t packets = 0;
        uint64_t rss_bytes = 0;
        double cpu_seconds = 0;
    };

    explicit MetricSampler(const MetricsRegistry& metrics) : metrics_(metrics) {}

    void start() {
        start_ = std::chrono::steady_clock::now();
        thread_ = std::thread([this] { run(); });
    }

    std::vector<Row> stop() {
        {
            std::lock_guard lock(mu_);
            done_ = true;
        }
        cv_.notify_all();
        thread_.join();
        sample();
        return std::move(rows_);
    }

private:
    void run() {
        std::unique_lock lock(mu_);
        while (!done_) {
            if (cv_.wait_for(lock, std::chrono::seconds(1), [this] { return done_; }))
                break;
            lock.unlock();
            sample();
            lock.lock();
        }
    }

    void sample() {
        Row r;
        r.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                    start_)
                          .count();
        r.packets = metrics_.snapshot().packets;
        r.rss_bytes = read_rss_bytes();
        r.cpu_seconds = process_cpu_seconds();
        rows_.push_back(r);
    }

    const MetricsRegistry& metrics_;
    std::chrono::steady_clock::time_point start_;
    std::thread thread_;
    std::mutex mu_;
    std::condition_variable cv_;
    bool done_ = false;
    std::vector<Row> rows_;
};

void write_metric_rows(std::ostream& out, const std::vector<MetricSampler::Row>& rows) {
    out << "elapsed_s\tpackets\tpackets_per_s\trss_bytes\tcpu_seconds\n";
    double prev_t = 0;
    uint64_t prev_p = 0;
    for (const auto& r : rows) {
        double dt = r.elapsed_s - prev_t;
        double rate = dt > 0 ? static_cast<double>(r.packets - prev_p) / dt : 0.0;
        out << fmt_double(r.elapsed_s) << '\t' << r.packets << '\t'
            << fmt_double(rate, 1) << '\t' << r.rss_bytes << '\t'
            << fmt_double(r.cpu_seconds) << '\n';
        prev_t = r.elapsed_s;
        prev_p = r.packets;
    }
}

void print_run_summary(std::ostream& out, const RunReport& r, size_t archives) {
    out << "packets\t" << r.packets << '\n'
        << "skipped\t" << r.skipped << '\n'
        << "blocks\t" << r.blocks << '\n'
        << "full_windows\t" << r.full_windows << '\n'
        << "partial_windows\t" << r.partial_windows << '\n'
        << "archives\t" << archives << '\n'
        << "wall_seconds\t" << fmt_double(r.wall_seconds) << '\n'
        << "packets_per_second\t" << fmt_double(r.packets_per_second, 1) << '\n'
        << "cpu_seconds\t" << fmt_double(r.cpu_seconds) << '\n';
}

// Caps an inner source at a wall-clock deadline; seconds <= 0 means no cap.
class DeadlineSource final : public PacketSource {
public:
    DeadlineSource(PacketSource& inner, double seconds)
        : inner_(inner), enabled_(seconds > 0) {
        if (enabled_)
            deadline_ = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(seconds));
    }

    size_t fill(std::span<PacketRecord> out) override {
        if (enabled_ && std::chrono::steady_clock::now() >= deadline_) return 0;
        return inner_.fill(out);
    }
    uint64_t skipped() const override { return inner_.skipped(); }

private:
    PacketSource& inner_;
    std::chrono::steady_clock::time_point deadline_;
    bool enabled_;
};

struct GenOpts {
    uint64_t count = 0;
    std::string model = "heavy-tail";
    uint64_t seed = 1;
    unsigned address_bits = 24;
    std::string output;
};

int cmd_gen(const GenOpts& o) {
    SyntheticConfig cfg;
    cfg.count = o.count;
    cfg.model = parse_traffic_model(o.model);
    cfg.seed = o.seed;
    cfg.address_bits = o.address_bits;
    SyntheticSource source(cfg);

    OutStream out(o.output);
    std::vector<PacketRecord> buf(size_t{1} << 16);
    std::string chunk;
    char line[64];
    uint64_t written = 0;
    size_t n;
    while ((n = source.fill(buf)) > 0) {
        chunk.clear();
        for (size_t i = 0; i < n; ++i) {
            int len = std::snprintf(line, sizeof line, "%u,%u,%llu\n", buf[i].src,
                                    buf[i].dst,
                                    static_cast<unsigned long long>(buf[i].ts_us));
            chunk.append(line, static_cast<size_t>(len));
        }
        out.get().write(chunk.data(), static_cast<std::streamsize>(chunk.size()));
        written += n;
    }
    out.get().flush();
    if (!out.get()) throw std::runtime_error("write failed: " + o.output);
    if (out.use_file)
        std::cout << "records\t" << written << "\nwrote\t" << o.output << '\n';
    return 0;
}

struct MktableOpts {
    std::string key_file;
    unsigned width = 16;
    std::string output;
};

int cmd_mktable(const MktableOpts& o) {
    AnonKey key = require_key(o.key_file);
    LookupTable table = LookupTable::build(key, o.width);
    table.save(o.output);
    std::cout << "width\t" << o.width << '\n'
              << "entries\t" << table.table().size() << '\n'
              << "key_fingerprint\t" << fmt_hex64(table.key_fingerprint()) << '\n'
              << "wrote\t" << o.output << '\n';
    return 0;
}

struct BuildOpts {
    std::string input;
    uint64_t synthetic = 0;
    bool have_synthetic = false;
    std::string model = "heavy-tail";
    uint64_t seed = 1;
    unsigned address_bits = 24;
    std::string output_dir;
    uint64_t block_size = uint64_t{1} << 17;
    uint64_t blocks = 64;
    uint32_t streams = 8;
    std::string anon = "none";
    std::string key_file;
    std::string table_path;
    unsigned table_width = 20;
    int zstd_level = 1;
    uint64_t error_budget = 100;
    uint64_t chunk_packets = 4096;
    std::string metrics_path;
};

int cmd_build(const BuildOpts& o) {
    WindowConfig window{o.block_size, o.blocks, o.streams};
    window.validate();

    AnonMode mode = parse_anon_mode(o.anon);
    Anonymizer anonymizer =
        mode == AnonMode::none
            ? Anonymizer::none()
            : assemble_anonymizer(mode, require_key(o.key_file), o.table_path,
                                  o.table_width);

    std::unique_ptr<PacketSource> source;
    if (!o.input.empty()) {
        source = std::make_unique<CsvPacketSource>(o.input,
                                                   CsvReaderOptions{o.error_budget});
    } else {
        SyntheticConfig cfg;
        cfg.count = o.synthetic;
        cfg.model = parse_traffic_model(o.model);
        cfg.seed = o.seed;
        cfg.address_bits = o.address_bits;
        source = std::make_unique<SyntheticSource>(cfg);
    }

    fs::create_directories(o.output_dir);
    DirArchiveSink sink(o.output_dir, o.zstd_level);

    PipelineOptions opts;
    opts.window = window;
    opts.anonymizer = std::move(anonymizer);
    opts.chunk_packets = o.chunk_packets;

    MetricsRegistry metrics;
    MetricSampler sampler(metrics);
    sampler.start();
    RunReport report = run_pipeline(*source, opts, sink, &metrics);
    auto samples = sampler.stop();

    if (!o.metrics_path.empty()) {
        OutStream ms(o.metrics_path);
        write_metric_rows(ms.get(), samples);
    }
    print_run_summary(std::cout, report, sink.paths().size());
    if (!report.ok) {
        std::cerr << "error: " << report.error << '\n';
        return 1;
    }
    return 0;
}

struct StatsOpts {
    std::vector<std::string> archives;
    int levels = -1;  // -1: every level up to the whole-window matrix
    std::string format = "tsv";
    std::string output = "-";
};

int cmd_stats(const StatsOpts& o) {
    OutStream out(o.output);
    bool json = o.format == "json";
    nlohmann::json all = nlohmann::json::array();
    int failures = 0;

    for (const auto& path : o.archives) {
        try {
            ArchiveContents contents = read_archive(path);
            std::vector<TrafficMatrix> mats;
            mats.reserve(contents.blocks.size());
            for (auto& b : contents.blocks) mats.push_back(std::move(b.matrix));
            auto rows = quantities_report(hierarchical_aggregate(std::move(mats)));
            if (o.levels >= 0)
                std::erase_if(rows, [&](const ReportRow& r) {
                    return r.level > static_cast<unsigned>(o.levels);
                });
            if (json) {
                all.push_back(
                    {{"archive", path},
                     {"report", nlohmann::json::parse(
                                    format_report(rows, ReportFormat::json))}});
            } else {
                out.get() << "# archive\t" << path << '\n'
                          << format_report(rows, ReportFormat::tsv);
            }
        } catch (const std::exception& e) {
            std::cerr << "error: " << path << ": " << e.what() << '\n';
            ++failures;
        }
    }
    if (json) out.get() << all.dump(2) << '\n';
    return failures ? 1 : 0;
}

struct FilterOpts {
    std::string input;
    std::string range;
    std::string mode = "include";
    std::string output;
    int zstd_level = 1;
};

int cmd_filter(const FilterOpts& o) {
    ArchiveContents contents = read_archive(o.input);
    RangeSet range = RangeSet::parse(o.range);
    bool include = o.mode == "include";

    std::vector<ArchiveBlock> blocks;
    blocks.reserve(contents.blocks.size());
    uint64_t packets_in = 0;
    uint64_t packets_out = 0;
    for (auto& b : contents.blocks) {
        TrafficMatrix filtered =
            include ? b.matrix.subrange(range) : b.matrix.exclude(range);
        BlobMeta meta = b.meta;
        packets_in += b.meta.packet_count;
        meta.packet_count = filtered.sum_all();
        packets_out += meta.packet_count;
        blocks.push_back({std::move(filtered), meta, b.stream_id, b.stream_seq});
    }

    ArchiveWindowMeta meta{contents.manifest.window_seq, contents.manifest.partial,
                           contents.manifest.block_size, o.zstd_level};
    write_archive(o.output, blocks, meta);
    std::cout << "members\t" << blocks.size() << '\n'
              << "packets_in\t" << packets_in << '\n'
              << "packets_out\t" << packets_out << '\n'
              << "wrote\t" << o.output << '\n';
    return 0;
}

struct ReportOpts {
    std::string input;
    std::string date;
    uint64_t top_k = 10;
    std::string output_dir;
    uint64_t error_budget = 100;
};

bool valid_date(const std::string& d) {
    if (d.size() != 10 || d[4] != '-' || d[7] != '-') return false;
    for (size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
        if (d[i] < '0' || d[i] > '9') return false;
    return true;
}

int cmd_d4m_report(const ReportOpts& o) {
    if (!valid_date(o.date))
        throw std::invalid_argument("--date must be YYYY-MM-DD, got \"" + o.date + "\"");

    using clock = std::chrono::steady_clock;
    LogParseOptions parse_opts;
    parse_opts.error_budget = o.error_budget;

    auto t0 = clock::now();
    uint64_t skipped = 0;
    auto records = parse_log_file(o.input, parse_opts, &skipped);
    auto t1 = clock::now();
    DailyReport report = daily_report(records, o.top_k, o.date);
    auto t2 = clock::now();
    report.skipped = skipped;

    auto paths = write_daily_report(o.output_dir, report);

    auto seconds = [](clock::time_point a, clock::time_point b) {
        return std::chrono::duration<double>(b - a).count();
    };
    auto rate = [](uint64_t n, double s) {
        return s > 0 ? static_cast<double>(n) / s : 0.0;
    };
    double parse_s = seconds(t0, t1);
    double analyze_s = seconds(t1, t2);
    std::cout << "records\t" << records.size() << '\n'
              << "skipped\t" << skipped << '\n'
              << "parse_seconds\t" << fmt_double(parse_s) << '\n'
              << "parse_rate_rec_s\t" << fmt_double(rate(records.size(), parse_s), 1)
              << '\n'
              << "analyze_seconds\t" << fmt_double(analyze_s) << '\n'
              << "analyze_rate_rec_s\t"
              << fmt_double(rate(records.size(), analyze_s), 1) << '\n'
              << "reference_parse_rate_rec_s\t25000\n"
              << "reference_analyze_rate_rec_s\t40000\n";
    for (const auto& p : paths) std::cout << "wrote\t" << p.string() << '\n';
    return 0;
}

struct BenchOpts {
    uint64_t packets = uint64_t{1} << 23;
    double seconds = 0;
    std::string model = "heavy-tail";
    uint64_t seed = 1;
    unsigned address_bits = 24;
    uint64_t block_size = uint64_t{1} << 17;
    uint64_t blocks = 64;
    uint32_t streams = 8;
    std::string anon = "table";
    std::string key_file;
    std::string table_path;
    unsigned table_width = 24;
    std::string output_dir;
    std::string report = "-";
    uint64_t chunk_packets = 4096;
};

int cmd_bench(const BenchOpts& o) {
    WindowConfig window{o.block_size, o.blocks, o.streams};
    window.validate();

    AnonMode mode = parse_anon_mode(o.anon);
    Anonymizer anonymizer = Anonymizer::none();
    if (mode != AnonMode::none) {
        // A benchmark with no key configured falls back to the fixed key.
        AnonKey key = (o.key_file.empty() && !std::getenv("HSTM_ANON_KEY"))
                          ? AnonKey::from_hex(kBenchKeyHex)
                          : require_key(o.key_file);
        anonymizer = assemble_anonymizer(mode, key, o.table_path, o.table_width);
    }

    SyntheticConfig cfg;
    cfg.count = o.packets;
    cfg.model = parse_traffic_model(o.model);
    cfg.seed = o.seed;
    cfg.address_bits = o.address_bits;
    SyntheticSource inner(cfg);
    DeadlineSource source(inner, o.seconds);

    fs::path dir = o.output_dir;
    bool scratch = dir.empty();
    if (scratch)
        dir = fs::temp_directory_path() /
              ("hstm-bench-" +
               std::to_string(
                   std::chrono::steady_clock::now().time_since_epoch().count()));
    fs::create_directories(dir);
    DirArchiveSink sink(dir, 1);

    PipelineOptions opts;
    opts.window = window;
    opts.anonymizer = std::move(anonymizer);
    opts.chunk_packets = o.chunk_packets;

    MetricsRegistry metrics;
    MetricSampler sampler(metrics);
    sampler.start();
    RunReport run = run_pipeline(source, opts, sink, &metrics);
    auto samples = sampler.stop();
    if (scratch) fs::remove_all(dir);

    uint64_t peak_rss = 0;
    for (const auto& r : samples) peak_rss = std::max(peak_rss, r.rss_bytes);
    double per_cpu =
        run.cpu_seconds > 0 ? static_cast<double>(run.packets) / run.cpu_seconds : 0.0;

    OutStream out(o.report);
    write_metric_rows(out.get(), samples);
    out.get() << "# total_packets\t" << run.packets << '\n'
              << "# blocks\t" << run.blocks << '\n'
              << "# windows\t" << run.full_windows + run.partial_windows << '\n'
              << "# wall_seconds\t" << fmt_double(run.wall_seconds) << '\n'
              << "# cpu_seconds\t" << fmt_double(run.cpu_seconds) << '\n'
              << "# packets_per_second\t" << fmt_double(run.packets_per_second, 1)
              << '\n'
              << "# packets_per_cpu_second\t" << fmt_double(per_cpu, 1) << '\n'
              << "# peak_rss_bytes\t" << peak_rss << '\n'
              << "# anon_mode\t" << to_string(mode) << '\n'
              << "# reference_pkt_per_s_low\t700000\n"
              << "# reference_pkt_per_s_high\t2100000\n";
    if (!run.ok) {
        std::cerr << "error: " << run.error << '\n';
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Traffic-matrix toolkit: streaming capture pipeline, window archives, "
        "network analytics, prefix-preserving anonymization, and connection-log "
        "reports."};
    app.require_subcommand(1);
    int rc = 0;

    // gen
    GenOpts gen;
    auto* g = app.add_subcommand("gen", "Write synthetic packets as src,dst,ts_us CSV");
    g->add_option("--count", gen.count, "packets to generate")->required();
    g->add_option("--model", gen.model, "address distribution")
        ->check(CLI::IsMember({"uniform", "heavy-tail"}))
        ->capture_default_str();
    g->add_option("--seed", gen.seed, "generator seed")->capture_default_str();
    g->add_option("--address-bits", gen.address_bits,
                  "addresses drawn from [0, 2^bits)")
        ->check(CLI::Range(1u, 32u))
        ->capture_default_str();
    g->add_option("--output", gen.output, "output file, - for stdout")->required();
    g->callback([&] { rc = cmd_gen(gen); });

    // mktable
    MktableOpts mk;
    auto* m = app.add_subcommand("mktable",
                                 "Precompute an anonymization lookup table");
    m->add_option("--key-file", mk.key_file,
                  "key file (32 raw bytes or 64 hex digits); HSTM_ANON_KEY when absent");
    m->add_option("--width", mk.width, "table covers addresses in [0, 2^width)")
        ->check(CLI::Range(1u, 28u))
        ->required();
    m->add_option("--output", mk.output, "table file to write")->required();
    m->callback([&] { rc = cmd_mktable(mk); });

    // build
    BuildOpts build;
    auto* b = app.add_subcommand(
        "build", "Run the capture pipeline and write one TAR archive per window");
    auto* b_in = b->add_option("--input", build.input, "CSV capture file")
                     ->check(CLI::ExistingFile);
    auto* b_syn = b->add_option("--synthetic", build.synthetic,
                                "generate this many synthetic packets instead");
    b_in->excludes(b_syn);
    b_syn->excludes(b_in);
    b->add_option("--model", build.model, "synthetic address distribution")
        ->check(CLI::IsMember({"uniform", "heavy-tail"}))
        ->capture_default_str();
    b->add_option("--seed", build.seed, "synthetic generator seed")
        ->capture_default_str();
    b->add_option("--address-bits", build.address_bits,
                  "synthetic addresses drawn from [0, 2^bits)")
        ->check(CLI::Range(1u, 32u))
        ->capture_default_str();
    b->add_option("--output-dir", build.output_dir, "directory for window archives")
        ->required();
    b->add_option("--block-size", build.block_size, "packets per block (power of two)")
        ->capture_default_str();
    b->add_option("--blocks", build.blocks, "blocks per window (power of two)")
        ->capture_default_str();
    b->add_option("--streams", build.streams, "parallel stream workers")
        ->capture_default_str();
    b->add_option("--anon", build.anon, "address anonymization mode")
        ->check(CLI::IsMember({"none", "direct", "table"}))
        ->capture_default_str();
    b->add_option("--key-file", build.key_file,
                  "key file (32 raw bytes or 64 hex digits); HSTM_ANON_KEY when absent");
    b->add_option("--table", build.table_path,
                  "precomputed table from mktable; built in process when absent");
    b->add_option("--table-width", build.table_width,
                  "width for an in-process table; every input address must fit")
        ->check(CLI::Range(1u, 28u))
        ->capture_default_str();
    b->add_option("--zstd-level", build.zstd_level, "archive compression level")
        ->check(CLI::Range(1, 19))
        ->capture_default_str();
    b->add_option("--error-budget", build.error_budget,
                  "malformed CSV lines tolerated before aborting")
        ->capture_default_str();
    b->add_option("--chunk-packets", build.chunk_packets,
                  "packets per ingest queue message")
        ->capture_default_str();
    b->add_option("--metrics", build.metrics_path,
                  "write a per-second metrics TSV here, - for stdout");
    b->callback([&] {
        if (build.input.empty() && b->count("--synthetic") == 0)
            throw CLI::RequiredError("--input or --synthetic");
        rc = cmd_build(build);
    });

    // stats
    StatsOpts stats;
    auto* s = app.add_subcommand(
        "stats", "Compute per-block and aggregated quantities from archives");
    s->add_option("archives", stats.archives, "window archive TARs")
        ->required()
        ->expected(-1);
    s->add_option("--levels", stats.levels,
                  "highest aggregation level to report; all levels when omitted");
    s->add_option("--format", stats.format, "output format")
        ->check(CLI::IsMember({"tsv", "json"}))
        ->capture_default_str();
    s->add_option("--output", stats.output, "output file, - for stdout")
        ->capture_default_str();
    s->callback([&] { rc = cmd_stats(stats); });

    // filter
    FilterOpts filter;
    auto* f = app.add_subcommand(
        "filter", "Keep or drop an address range in every matrix of an archive");
    f->add_option("--input", filter.input, "source archive TAR")
        ->required()
        ->check(CLI::ExistingFile);
    f->add_option("--range", filter.range,
                  "addresses: dotted quads, CIDR blocks, decimals, and ranges, "
                  "comma separated")
        ->required();
    f->add_option("--mode", filter.mode, "include keeps the range, exclude drops it")
        ->check(CLI::IsMember({"include", "exclude"}))
        ->capture_default_str();
    f->add_option("--output", filter.output, "archive TAR to write")->required();
    f->add_option("--zstd-level", filter.zstd_level, "archive compression level")
        ->check(CLI::Range(1, 19))
        ->capture_default_str();
    f->callback([&] { rc = cmd_filter(filter); });

    // d4m-report
    ReportOpts report;
    auto* d = app.add_subcommand(
        "d4m-report", "Build a daily connection-log report from a TSV log");
    d->add_option("--input", report.input, "TSV connection log with a header line")
        ->required()
        ->check(CLI::ExistingFile);
    d->add_option("--date", report.date, "report date, YYYY-MM-DD")->required();
    d->add_option("--top-k", report.top_k, "entries per ranking table")
        ->check(CLI::Range(uint64_t{1}, std::numeric_limits<uint64_t>::max()))
        ->capture_default_str();
    d->add_option("--output-dir", report.output_dir, "directory for report files")
        ->required();
    d->add_option("--error-budget", report.error_budget,
                  "malformed log lines tolerated before aborting")
        ->capture_default_str();
    d->callback([&] { rc = cmd_d4m_report(report); });

    // bench
    BenchOpts bench;
    auto* n = app.add_subcommand(
        "bench", "Measure pipeline throughput on synthetic traffic");
    n->add_option("--packets", bench.packets, "packet budget")->capture_default_str();
    n->add_option("--seconds", bench.seconds,
                  "stop after this many seconds; unlimited packets unless --packets "
                  "is also given");
    n->add_option("--model", bench.model, "address distribution")
        ->check(CLI::IsMember({"uniform", "heavy-tail"}))
        ->capture_default_str();
    n->add_option("--seed", bench.seed, "generator seed")->capture_default_str();
    n->add_option("--address-bits", bench.address_bits,
                  "addresses drawn from [0, 2^bits)")
        ->check(CLI::Range(1u, 32u))
        ->capture_default_str();
    n->add_option("--block-size", bench.block_size, "packets per block (power of two)")
        ->capture_default_str();
    n->add_option("--blocks", bench.blocks, "blocks per window (power of two)")
        ->capture_default_str();
    n->add_option("--streams", bench.streams, "parallel stream workers")
        ->capture_default_str();
    n->add_option("--anon", bench.anon, "address anonymization mode")
        ->check(CLI::IsMember({"none", "direct", "table"}))
        ->capture_default_str();
    n->add_option("--key-file", bench.key_file,
                  "key file; a fixed benchmark key is used when absent");
    n->add_option("--table", bench.table_path, "precomputed table from mktable");
    n->add_option("--table-width", bench.table_width,
                  "width for an in-process table; every address must fit")
        ->check(CLI::Range(1u, 28u))
        ->capture_default_str();
    n->add_option("--output-dir", bench.output_dir,
                  "keep archives here; a scratch directory is used and removed "
                  "when absent");
    n->add_option("--report", bench.report, "metrics TSV output, - for stdout")
        ->capture_default_str();
    n->add_option("--chunk-packets", bench.chunk_packets,
                  "packets per ingest queue message")
        ->capture_default_str();
    n->callback([&] {
        if (bench.seconds > 0 && n->count("--packets") == 0)
            bench.packets = std::numeric_limits<uint64_t>::max() / 2;
        rc = cmd_bench(bench);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return rc;
}
