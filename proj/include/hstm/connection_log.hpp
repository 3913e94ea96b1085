#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hstm/assoc_array.hpp"

namespace hstm {

// One connection-log event. Field values are raw strings; empty values are
// never stored.
struct LogRecord {
    std::string id;
    std::map<std::string, std::string> fields;

    friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

struct LogParseOptions {
    // Malformed lines tolerated before parsing aborts.
    uint64_t error_budget = 100;
    // Header column used as the record id; when absent, ids are synthesized
    // as <id_prefix>-<line number>.
    std::string id_field = "id";
    std::string id_prefix = "rec";
};

// Parses tab-separated text whose first line names the fields. Lines with the
// wrong field count and duplicate record ids are counted into *skipped and
// dropped. Throws when the header is missing or the budget is exceeded.
std::vector<LogRecord> parse_log(std::string_view text,
                                 const LogParseOptions& options = {},
                                 uint64_t* skipped = nullptr);

std::vector<LogRecord> parse_log_file(const std::filesystem::path& path,
                                      const LogParseOptions& options = {},
                                      uint64_t* skipped = nullptr);

// Event array: one row per record id, one `field|value` column per distinct
// value of the requested fields, every stored entry 1. Requested fields that
// a record lacks contribute nothing. Throws on an empty field list.
AssocArray explode(const std::vector<LogRecord>& records,
                   const std::vector<std::string>& fields);

// Daily tallies over the userID and DstIP fields.
struct DailyReport {
    std::string date;
    uint64_t records = 0;
    uint64_t skipped = 0;
    uint64_t distinct_users = 0;
    uint64_t distinct_destinations = 0;
    std::vector<std::pair<std::string, uint64_t>> top_users_by_connections;
    std::vector<std::pair<std::string, uint64_t>> top_users_by_destinations;
    std::vector<std::pair<std::string, uint64_t>> top_destinations_by_connections;
    std::vector<std::pair<std::string, uint64_t>> top_destinations_by_users;

    std::string to_text() const;
    std::string to_tsv() const;
};

// top_k >= 1; ties resolve to the lexicographically smaller key so reports
// are deterministic.
DailyReport daily_report(const std::vector<LogRecord>& records, uint64_t top_k,
                         std::string date);

// Writes report_<date>.txt and report_<date>.tsv into dir; returns the paths.
std::vector<std::filesystem::path> write_daily_report(
    const std::filesystem::path& dir, const DailyReport& report);

}  // namespace hstm
