#include "hstm/connection_log.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hstm {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> out;
    size_t pos = 0;
    while (true) {
        size_t tab = line.find('\t', pos);
        if (tab == std::string_view::npos) {
            out.push_back(line.substr(pos));
            return out;
        }
        out.push_back(line.substr(pos, tab - pos));
        pos = tab + 1;
    }
}

// Largest values first, key ascending within a value; top_k survivors.
std::vector<std::pair<std::string, uint64_t>> top_k_of(
    std::vector<std::pair<std::string, uint64_t>> tallies, uint64_t top_k) {
    std::sort(tallies.begin(), tallies.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (tallies.size() > top_k) tallies.resize(top_k);
    return tallies;
}

void append_table(std::string& out, const std::string& title,
                  const std::vector<std::pair<std::string, uint64_t>>& rows) {
    out += title;
    out += ":\n";
    if (rows.empty()) out += "  (none)\n";
    for (const auto& [key, value] : rows)
        out += "  " + key + "  " + std::to_string(value) + "\n";
}

void append_tsv_section(std::string& out, const std::string& section,
                        const std::vector<std::pair<std::string, uint64_t>>& rows) {
    for (const auto& [key, value] : rows)
        out += section + "\t" + key + "\t" + std::to_string(value) + "\n";
}

}  // namespace

std::vector<LogRecord> parse_log(std::string_view text, const LogParseOptions& options,
                                 uint64_t* skipped_out) {
    size_t pos = 0;
    uint64_t line_no = 0;
    auto next_line = [&](std::string_view& line) {
        if (pos >= text.size()) return false;
        size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = end + 1;
        ++line_no;
        return true;
    };

    std::string_view header;
    if (!next_line(header) || header.empty())
        throw std::runtime_error("log has no header line");
    std::vector<std::string> fields;
    for (auto name : split_tabs(header)) fields.emplace_back(name);

    size_t id_column = fields.size();
    for (size_t i = 0; i < fields.size(); ++i)
        if (fields[i] == options.id_field) id_column = i;

    std::vector<LogRecord> records;
    std::set<std::string, std::less<>> seen_ids;
    uint64_t skipped = 0;
    auto reject = [&] {
        ++skipped;
        if (skipped > options.error_budget)
            throw std::runtime_error("too many malformed log lines: gave up at line " +
                                     std::to_string(line_no) + " after " +
                                     std::to_string(skipped) + " failures");
    };

    std::string_view line;
    while (next_line(line)) {
        if (line.empty()) continue;
        auto values = split_tabs(line);
        if (values.size() != fields.size()) {
            reject();
            continue;
        }
        LogRecord r;
        if (id_column < fields.size()) {
            if (values[id_column].empty()) {
                reject();
                continue;
            }
            r.id = std::string(values[id_column]);
        } else {
            r.id = options.id_prefix + "-" + std::to_string(line_no);
        }
        if (!seen_ids.insert(r.id).second) {
            reject();
            continue;
        }
        for (size_t i = 0; i < fields.size(); ++i) {
            if (i == id_column || values[i].empty()) continue;
            r.fields.emplace(fields[i], std::string(values[i]));
        }
        records.push_back(std::move(r));
    }
    if (skipped_out) *skipped_out = skipped;
    return records;
}

std::vector<LogRecord> parse_log_file(const std::filesystem::path& path,
                                      const LogParseOptions& options,
                                      uint64_t* skipped) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open log file: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_log(buffer.str(), options, skipped);
}

AssocArray explode(const std::vector<LogRecord>& records,
                   const std::vector<std::string>& fields) {
    if (fields.empty())
        throw std::invalid_argument("explode requires at least one field");
    std::vector<std::tuple<std::string, std::string, uint64_t>> entries;
    for (const auto& r : records) {
        for (const auto& field : fields) {
            auto it = r.fields.find(field);
            if (it == r.fields.end()) continue;
            entries.push_back({r.id, encode_column_key(field, it->second), 1});
        }
    }
    return AssocArray::from_entries(std::move(entries));
}

DailyReport daily_report(const std::vector<LogRecord>& records, uint64_t top_k,
                         std::string date) {
    if (top_k < 1) throw std::invalid_argument("top_k must be at least 1");

    DailyReport report;
    report.date = std::move(date);
    report.records = records.size();

    auto a = transpose_multiply(explode(records, {"userID"}),
                                explode(records, {"DstIP"}));
    auto q = array_quantities(a);

    // Tallies carry encoded column keys; reports show the bare values.
    auto strip = [](std::vector<std::pair<std::string, uint64_t>> tallies) {
        for (auto& [key, value] : tallies) key = decode_column_key(key).second;
        return tallies;
    };
    auto users_conn = strip(q.row_sums);
    auto users_dst = strip(q.row_distinct);
    auto dst_conn = strip(q.col_sums);
    auto dst_users = strip(q.col_distinct);

    report.distinct_users = users_conn.size();
    report.distinct_destinations = dst_conn.size();
    report.top_users_by_connections = top_k_of(std::move(users_conn), top_k);
    report.top_users_by_destinations = top_k_of(std::move(users_dst), top_k);
    report.top_destinations_by_connections = top_k_of(std::move(dst_conn), top_k);
    report.top_destinations_by_users = top_k_of(std::move(dst_users), top_k);
    return report;
}

std::string DailyReport::to_text() const {
    std::string out;
    out += "Connection report for " + date + "\n";
    out += "records: " + std::to_string(records) + "\n";
    out += "skipped: " + std::to_string(skipped) + "\n";
    out += "distinct users: " + std::to_string(distinct_users) + "\n";
    out += "distinct destinations: " + std::to_string(distinct_destinations) + "\n";
    append_table(out, "top users by connections", top_users_by_connections);
    append_table(out, "top users by distinct destinations", top_users_by_destinations);
    append_table(out, "top destinations by connections",
                 top_destinations_by_connections);
    append_table(out, "top destinations by distinct users", top_destinations_by_users);
    return out;
}

std::string DailyReport::to_tsv() const {
    std::string out = "section\tkey\tvalue\n";
    out += "summary\tdate\t" + date + "\n";
    out += "summary\trecords\t" + std::to_string(records) + "\n";
    out += "summary\tskipped\t" + std::to_string(skipped) + "\n";
    out += "summary\tdistinct_users\t" + std::to_string(distinct_users) + "\n";
    out += "summary\tdistinct_destinations\t" + std::to_string(distinct_destinations) +
           "\n";
    append_tsv_section(out, "top_users_by_connections", top_users_by_connections);
    append_tsv_section(out, "top_users_by_destinations", top_users_by_destinations);
    append_tsv_section(out, "top_destinations_by_connections",
                       top_destinations_by_connections);
    append_tsv_section(out, "top_destinations_by_users", top_destinations_by_users);
    return out;
}

std::vector<std::filesystem::path> write_daily_report(
    const std::filesystem::path& dir, const DailyReport& report) {
    std::filesystem::create_directories(dir);
    auto txt_path = dir / ("report_" + report.date + ".txt");
    auto tsv_path = dir / ("report_" + report.date + ".tsv");
    {
        std::ofstream out(txt_path, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot create " + txt_path.string());
        out << report.to_text();
    }
    {
        std::ofstream out(tsv_path, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot create " + tsv_path.string());
        out << report.to_tsv();
    }
    return {txt_path, tsv_path};
}

}  // namespace hstm
