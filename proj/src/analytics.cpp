#include "hstm/analytics.hpp"

#include <algorithm>
#include <json.hpp>

namespace hstm {

namespace {

// Shared row walk: entries are row-major, so per-source tallies stream in one
// pass; per-destination tallies gather (col, value) pairs and sort once.
template <typename PerRow, typename PerCol>
void scan(const TrafficMatrix& m, PerRow&& per_row, PerCol&& per_col) {
    const auto& e = m.entries();
    std::vector<std::pair<uint32_t, std::pair<uint64_t, uint64_t>>> cols;
    cols.reserve(e.size());
    size_t i = 0;
    while (i < e.size()) {
        size_t j = i;
        uint64_t row_sum = 0;
        while (j < e.size() && e[j].row == e[i].row) {
            row_sum = checked_add(row_sum, e[j].count);
            cols.push_back({e[j].col, {e[j].count, 1}});
            ++j;
        }
        per_row(e[i].row, row_sum, static_cast<uint64_t>(j - i));
        i = j;
    }
    std::sort(cols.begin(), cols.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    i = 0;
    while (i < cols.size()) {
        size_t j = i;
        uint64_t col_sum = 0, fanin = 0;
        while (j < cols.size() && cols[j].first == cols[i].first) {
            col_sum = checked_add(col_sum, cols[j].second.first);
            fanin += cols[j].second.second;
            ++j;
        }
        per_col(cols[i].first, col_sum, fanin);
        i = j;
    }
}

}  // namespace

NetworkQuantities compute_quantities(const TrafficMatrix& m) {
    NetworkQuantities q;
    for (const auto& t : m.entries()) {
        q.valid_packets = checked_add(q.valid_packets, t.count);
        ++q.unique_links;
        q.max_link_packets = std::max(q.max_link_packets, t.count);
    }
    scan(
        m,
        [&](uint32_t, uint64_t sum, uint64_t fanout) {
            ++q.unique_sources;
            q.max_source_packets = std::max(q.max_source_packets, sum);
            q.max_source_fanout = std::max(q.max_source_fanout, fanout);
        },
        [&](uint32_t, uint64_t sum, uint64_t fanin) {
            ++q.unique_destinations;
            q.max_destination_packets = std::max(q.max_destination_packets, sum);
            q.max_destination_fanin = std::max(q.max_destination_fanin, fanin);
        });
    return q;
}

NetworkVectors compute_vectors(const TrafficMatrix& m) {
    std::vector<std::pair<uint32_t, uint64_t>> sp, sf, dp, df;
    scan(
        m,
        [&](uint32_t row, uint64_t sum, uint64_t fanout) {
            sp.push_back({row, sum});
            sf.push_back({row, fanout});
        },
        [&](uint32_t col, uint64_t sum, uint64_t fanin) {
            dp.push_back({col, sum});
            df.push_back({col, fanin});
        });
    NetworkVectors v;
    v.source_packets = SparseVector(std::move(sp));
    v.source_fanout = SparseVector(std::move(sf));
    v.destination_packets = SparseVector(std::move(dp));
    v.destination_fanin = SparseVector(std::move(df));
    return v;
}

std::vector<std::vector<TrafficMatrix>> hierarchical_aggregate(
    std::vector<TrafficMatrix> blocks) {
    std::vector<std::vector<TrafficMatrix>> levels;
    if (blocks.empty()) return levels;
    levels.push_back(std::move(blocks));
    while (levels.back().size() > 1) {
        const auto& prev = levels.back();
        std::vector<TrafficMatrix> next;
        next.reserve((prev.size() + 1) / 2);
        for (size_t i = 0; i + 1 < prev.size(); i += 2)
            next.push_back(prev[i].add(prev[i + 1]));
        if (prev.size() % 2) next.push_back(prev.back());
        levels.push_back(std::move(next));
    }
    return levels;
}

std::vector<ReportRow> quantities_report(
    const std::vector<std::vector<TrafficMatrix>>& levels) {
    std::vector<ReportRow> rows;
    for (size_t level = 0; level < levels.size(); ++level)
        for (size_t i = 0; i < levels[level].size(); ++i)
            rows.push_back({static_cast<unsigned>(level), i,
                            compute_quantities(levels[level][i])});
    return rows;
}

std::string format_report(const std::vector<ReportRow>& rows, ReportFormat format) {
    if (format == ReportFormat::tsv) {
        std::string out =
            "level\twindow_index\tnv\tunique_links\tmax_link\tunique_src\t"
            "max_src_pkts\tmax_src_fanout\tunique_dst\tmax_dst_pkts\tmax_dst_fanin\n";
        for (const auto& r : rows) {
            out += std::to_string(r.level);
            for (uint64_t v : {r.index, r.q.valid_packets, r.q.unique_links,
                               r.q.max_link_packets, r.q.unique_sources,
                               r.q.max_source_packets, r.q.max_source_fanout,
                               r.q.unique_destinations, r.q.max_destination_packets,
                               r.q.max_destination_fanin}) {
                out += '\t';
                out += std::to_string(v);
            }
            out += '\n';
        }
        return out;
    }
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        arr.push_back({{"level", r.level},
                       {"window_index", r.index},
                       {"nv", r.q.valid_packets},
                       {"unique_links", r.q.unique_links},
                       {"max_link", r.q.max_link_packets},
                       {"unique_src", r.q.unique_sources},
                       {"max_src_pkts", r.q.max_source_packets},
                       {"max_src_fanout", r.q.max_source_fanout},
                       {"unique_dst", r.q.unique_destinations},
                       {"max_dst_pkts", r.q.max_destination_packets},
                       {"max_dst_fanin", r.q.max_destination_fanin}});
    }
    return arr.dump();
}

}  // namespace hstm
