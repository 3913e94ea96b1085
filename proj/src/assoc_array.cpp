#include "hstm/assoc_array.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "hstm/traffic_matrix.hpp"

namespace hstm {

namespace {

// Sorted key list plus index of a key within it.
uint32_t key_index(const std::vector<std::string>& keys, std::string_view key) {
    auto it = std::lower_bound(keys.begin(), keys.end(), key);
    if (it == keys.end() || *it != key) return static_cast<uint32_t>(keys.size());
    return static_cast<uint32_t>(it - keys.begin());
}

std::vector<std::pair<std::string, uint64_t>> tally(
    const std::vector<std::string>& keys, const std::vector<AssocArray::Entry>& entries,
    bool by_row, bool count_only) {
    std::map<uint32_t, uint64_t> sums;
    for (const auto& e : entries) {
        uint32_t k = by_row ? e.row : e.col;
        sums[k] = checked_add(sums[k], count_only ? 1 : e.value);
    }
    std::vector<std::pair<std::string, uint64_t>> out;
    out.reserve(sums.size());
    for (const auto& [k, v] : sums) out.push_back({keys[k], v});
    return out;
}

}  // namespace

AssocArray AssocArray::from_entries(
    std::vector<std::tuple<std::string, std::string, uint64_t>> entries) {
    // Accumulate through a map keyed by strings, then freeze the key lists
    // and re-index. Zero totals disappear before keys are assigned, so the
    // key lists never hold unused keys.
    std::map<std::pair<std::string, std::string>, uint64_t> cells;
    for (auto& [row, col, value] : entries) {
        auto& cell = cells[{std::move(row), std::move(col)}];
        cell = checked_add(cell, value);
    }
    std::erase_if(cells, [](const auto& kv) { return kv.second == 0; });

    AssocArray a;
    for (const auto& [key, value] : cells) {
        a.row_keys_.push_back(key.first);
        a.col_keys_.push_back(key.second);
    }
    std::sort(a.row_keys_.begin(), a.row_keys_.end());
    a.row_keys_.erase(std::unique(a.row_keys_.begin(), a.row_keys_.end()),
                      a.row_keys_.end());
    std::sort(a.col_keys_.begin(), a.col_keys_.end());
    a.col_keys_.erase(std::unique(a.col_keys_.begin(), a.col_keys_.end()),
                      a.col_keys_.end());

    a.entries_.reserve(cells.size());
    for (const auto& [key, value] : cells)
        a.entries_.push_back({key_index(a.row_keys_, key.first),
                              key_index(a.col_keys_, key.second), value});
    // Map order is (row string, col string), which matches index order.
    return a;
}

uint64_t AssocArray::at(std::string_view row, std::string_view col) const {
    uint32_t r = key_index(row_keys_, row);
    uint32_t c = key_index(col_keys_, col);
    if (r == row_keys_.size() || c == col_keys_.size()) return 0;
    auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair{r, c},
                               [](const Entry& e, const std::pair<uint32_t, uint32_t>& k) {
                                   return std::pair{e.row, e.col} < k;
                               });
    if (it == entries_.end() || it->row != r || it->col != c) return 0;
    return it->value;
}

AssocArray AssocArray::zero_norm() const {
    AssocArray z = *this;
    for (auto& e : z.entries_) e.value = 1;
    return z;
}

std::vector<std::pair<std::string, uint64_t>> AssocArray::row_sums() const {
    return tally(row_keys_, entries_, true, false);
}

std::vector<std::pair<std::string, uint64_t>> AssocArray::row_counts() const {
    return tally(row_keys_, entries_, true, true);
}

std::vector<std::pair<std::string, uint64_t>> AssocArray::col_sums() const {
    return tally(col_keys_, entries_, false, false);
}

std::vector<std::pair<std::string, uint64_t>> AssocArray::col_counts() const {
    return tally(col_keys_, entries_, false, true);
}

AssocArray transpose_multiply(const AssocArray& a, const AssocArray& b) {
    // Merge-join the two row-key lists; each shared row contributes the cross
    // product of its entries. Rows private to one side multiply against
    // nothing and drop out, matching multiplication with implicit zeros.
    std::map<std::pair<std::string, std::string>, uint64_t> cells;

    const auto& ae = a.entries();
    const auto& be = b.entries();
    size_t i = 0, j = 0;
    while (i < ae.size() && j < be.size()) {
        const std::string& ra = a.row_keys()[ae[i].row];
        const std::string& rb = b.row_keys()[be[j].row];
        if (ra < rb) {
            ++i;
            continue;
        }
        if (rb < ra) {
            ++j;
            continue;
        }
        size_t i_end = i, j_end = j;
        while (i_end < ae.size() && ae[i_end].row == ae[i].row) ++i_end;
        while (j_end < be.size() && be[j_end].row == be[j].row) ++j_end;
        for (size_t p = i; p < i_end; ++p)
            for (size_t q = j; q < j_end; ++q) {
                uint64_t product = ae[p].value * be[q].value;
                if (ae[p].value != 0 && product / ae[p].value != be[q].value)
                    throw std::overflow_error("tally product exceeds 64 bits");
                auto& cell = cells[{a.col_keys()[ae[p].col], b.col_keys()[be[q].col]}];
                cell = checked_add(cell, product);
            }
        i = i_end;
        j = j_end;
    }

    std::vector<std::tuple<std::string, std::string, uint64_t>> entries;
    entries.reserve(cells.size());
    for (auto& [key, value] : cells)
        entries.push_back({key.first, key.second, value});
    return AssocArray::from_entries(std::move(entries));
}

ArrayQuantities array_quantities(const AssocArray& a) {
    ArrayQuantities q;
    q.row_sums = a.row_sums();
    q.row_distinct = a.row_counts();
    q.col_sums = a.col_sums();
    q.col_distinct = a.col_counts();
    return q;
}

std::string encode_column_key(std::string_view field, std::string_view value) {
    std::string out;
    out.reserve(field.size() + value.size() + 1);
    auto escape_into = [&out](std::string_view text) {
        for (char c : text) {
            if (c == '|' || c == '\\') out.push_back('\\');
            out.push_back(c);
        }
    };
    escape_into(field);
    out.push_back('|');
    escape_into(value);
    return out;
}

std::pair<std::string, std::string> decode_column_key(std::string_view key) {
    std::string field, value;
    std::string* cur = &field;
    bool escaped = false;
    bool split = false;
    for (char c : key) {
        if (escaped) {
            cur->push_back(c);
            escaped = false;
        } else if (c == '\\') {
            escaped = true;
        } else if (c == '|') {
            if (split)
                throw std::invalid_argument("column key has two delimiters: " +
                                            std::string(key));
            split = true;
            cur = &value;
        } else {
            cur->push_back(c);
        }
    }
    if (!split || escaped)
        throw std::invalid_argument("malformed column key: " + std::string(key));
    return {std::move(field), std::move(value)};
}

}  // namespace hstm
