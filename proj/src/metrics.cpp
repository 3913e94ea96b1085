#include "hstm/metrics.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <unistd.h>

namespace hstm {

namespace {

uint64_t now_second() {
    using namespace std::chrono;
    return static_cast<uint64_t>(
        duration_cast<seconds>(system_clock::now().time_since_epoch()).count());
}

}  // namespace

void MetricsRegistry::add_packets(uint64_t n) {
    std::lock_guard lock(mu_);
    state_.packets += n;
    uint64_t sec = now_second();
    auto& buckets = state_.packets_per_second;
    if (!buckets.empty() && buckets.back().first == sec)
        buckets.back().second += n;
    else
        buckets.push_back({sec, n});
}

void MetricsRegistry::add_skipped(uint64_t n) {
    std::lock_guard lock(mu_);
    state_.skipped += n;
}

void MetricsRegistry::block_published(uint32_t stream_id) {
    std::lock_guard lock(mu_);
    ++state_.blocks;
    ++state_.blocks_per_stream[stream_id];
}

void MetricsRegistry::window_written(bool partial, double build_seconds) {
    std::lock_guard lock(mu_);
    ++state_.windows;
    if (partial) ++state_.partial_windows;
    state_.last_window_build_seconds = build_seconds;
}

void MetricsRegistry::set_queue_depths(uint64_t reporter, uint64_t writer) {
    std::lock_guard lock(mu_);
    state_.reporter_queue_depth = reporter;
    state_.writer_queue_depth = writer;
}

MetricsSnapshot MetricsRegistry::snapshot() const {
    std::lock_guard lock(mu_);
    MetricsSnapshot out = state_;
    out.rss_bytes = read_rss_bytes();
    return out;
}

uint64_t read_rss_bytes() {
    std::ifstream in("/proc/self/status");
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("VmRSS:", 0) == 0) {
            uint64_t kb = 0;
            if (std::sscanf(line.c_str() + 6, "%llu",
                            reinterpret_cast<unsigned long long*>(&kb)) == 1)
                return kb * 1024;
        }
    }
    return 0;
}

double process_cpu_seconds() {
    std::ifstream in("/proc/self/stat");
    std::string content;
    std::getline(in, content);
    // Field 2 (comm) may contain spaces; skip past its closing parenthesis.
    size_t close = content.rfind(')');
    if (close == std::string::npos) return 0;
    unsigned long long utime = 0, stime = 0;
    // Fields after comm: state is 3rd, utime 14th, stime 15th.
    const char* p = content.c_str() + close + 1;
    int field = 2;
    char state;
    if (std::sscanf(p, " %c", &state) != 1) return 0;
    while (*p && field < 13) {
        if (*p == ' ') ++field;
        ++p;
    }
    if (std::sscanf(p, "%llu %llu", &utime, &stime) != 2) return 0;
    long hz = sysconf(_SC_CLK_TCK);
    if (hz <= 0) hz = 100;
    return double(utime + stime) / double(hz);
}

}  // namespace hstm
