#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace hstm {

// Sparse numeric matrix keyed by strings on both axes. Key lists are strictly
// sorted and duplicate-free; entries are (row, col)-sorted indexes into them;
// zeros are never stored. Immutable after construction.
class AssocArray {
public:
    struct Entry {
        uint32_t row = 0;
        uint32_t col = 0;
        uint64_t value = 0;

        friend bool operator==(const Entry&, const Entry&) = default;
    };

    AssocArray() = default;

    // Duplicate (row, col) pairs accumulate; zero totals are dropped; key
    // lists hold exactly the keys that survive.
    static AssocArray from_entries(
        std::vector<std::tuple<std::string, std::string, uint64_t>> entries);

    const std::vector<std::string>& row_keys() const { return row_keys_; }
    const std::vector<std::string>& col_keys() const { return col_keys_; }
    const std::vector<Entry>& entries() const { return entries_; }
    uint64_t nnz() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    uint64_t at(std::string_view row, std::string_view col) const;  // 0 if absent

    // Same pattern with every value set to 1.
    AssocArray zero_norm() const;

    // Tallies keyed by row/column string, in key order.
    std::vector<std::pair<std::string, uint64_t>> row_sums() const;
    std::vector<std::pair<std::string, uint64_t>> row_counts() const;  // nonzeros per row
    std::vector<std::pair<std::string, uint64_t>> col_sums() const;
    std::vector<std::pair<std::string, uint64_t>> col_counts() const;  // nonzeros per column

    friend bool operator==(const AssocArray&, const AssocArray&) = default;

private:
    std::vector<std::string> row_keys_;
    std::vector<std::string> col_keys_;
    std::vector<Entry> entries_;
};

// aᵀb over the shared row-key universe: result rows are a's columns, result
// columns are b's columns, and each cell sums the products of matching rows.
// For 0/1 inputs this counts records where both column keys occur.
AssocArray transpose_multiply(const AssocArray& a, const AssocArray& b);

// The four standing tallies of a tally array: connections and distinct
// counterparties per row key and per column key.
struct ArrayQuantities {
    std::vector<std::pair<std::string, uint64_t>> row_sums;
    std::vector<std::pair<std::string, uint64_t>> row_distinct;
    std::vector<std::pair<std::string, uint64_t>> col_sums;
    std::vector<std::pair<std::string, uint64_t>> col_distinct;
};

ArrayQuantities array_quantities(const AssocArray& a);

// Column keys pair a field name with a value as `field|value`; literal `|`
// and `\` in either part are escaped with `\`.
std::string encode_column_key(std::string_view field, std::string_view value);
std::pair<std::string, std::string> decode_column_key(std::string_view key);

}  // namespace hstm
