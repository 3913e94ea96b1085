#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hstm/traffic_matrix.hpp"

namespace hstm {

// Scalar summary statistics of one traffic matrix. All are exact integer
// counts derived from packet tallies.
struct NetworkQuantities {
    uint64_t valid_packets = 0;       // total packets
    uint64_t unique_links = 0;        // distinct (src, dst) pairs
    uint64_t max_link_packets = 0;    // busiest link
    uint64_t unique_sources = 0;      // distinct sending addresses
    uint64_t max_source_packets = 0;  // busiest source by packets
    uint64_t max_source_fanout = 0;   // most destinations from one source
    uint64_t unique_destinations = 0;
    uint64_t max_destination_packets = 0;
    uint64_t max_destination_fanin = 0;  // most sources into one destination

    friend bool operator==(const NetworkQuantities&, const NetworkQuantities&) = default;
};

// Per-address distributions behind the scalar maxima.
struct NetworkVectors {
    SparseVector source_packets;       // packets sent, by source
    SparseVector source_fanout;        // distinct destinations, by source
    SparseVector destination_packets;  // packets received, by destination
    SparseVector destination_fanin;    // distinct sources, by destination
};

NetworkQuantities compute_quantities(const TrafficMatrix& m);
NetworkVectors compute_vectors(const TrafficMatrix& m);

// Pairwise matrix-sum hierarchy over a window's blocks. Level 0 is the input;
// each level above sums adjacent pairs in arrival order, an odd tail carrying
// up unsummed, until one matrix covers the whole window. The same quantities
// computed per level show how aggregation concentrates traffic.
std::vector<std::vector<TrafficMatrix>> hierarchical_aggregate(
    std::vector<TrafficMatrix> blocks);

struct ReportRow {
    unsigned level = 0;
    uint64_t index = 0;  // position within the level
    NetworkQuantities q;
};

std::vector<ReportRow> quantities_report(const std::vector<std::vector<TrafficMatrix>>& levels);

enum class ReportFormat { tsv, json };

// TSV: a fixed header then one row per entry. JSON: an array of objects with
// the same field names.
std::string format_report(const std::vector<ReportRow>& rows, ReportFormat format);

}  // namespace hstm
