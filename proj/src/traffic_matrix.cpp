#include "hstm/traffic_matrix.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace hstm {

uint64_t checked_add(uint64_t a, uint64_t b) {
    if (a > UINT64_MAX - b) throw std::overflow_error("count overflow in 64-bit accumulation");
    return a + b;
}

SparseVector::SparseVector(std::vector<std::pair<uint32_t, uint64_t>> items)
    : items_(std::move(items)) {
    std::erase_if(items_, [](const auto& p) { return p.second == 0; });
}

uint64_t SparseVector::max_value() const {
    uint64_t m = 0;
    for (const auto& [id, v] : items_) m = std::max(m, v);
    return m;
}

uint64_t SparseVector::sum() const {
    uint64_t s = 0;
    for (const auto& [id, v] : items_) s = checked_add(s, v);
    return s;
}

uint64_t SparseVector::at(uint32_t id) const {
    auto it = std::lower_bound(items_.begin(), items_.end(), id,
                               [](const auto& p, uint32_t key) { return p.first < key; });
    return (it != items_.end() && it->first == id) ? it->second : 0;
}

RangeSet RangeSet::full(uint64_t dim) {
    if (dim == 0 || dim > kAddressSpace) throw std::invalid_argument("RangeSet::full: bad dimension");
    RangeSet r;
    r.intervals_.emplace_back(0, static_cast<uint32_t>(dim - 1));
    return r;
}

void RangeSet::insert(uint32_t lo, uint32_t hi) {
    if (lo > hi) throw std::invalid_argument("RangeSet::insert: lo > hi");
    auto it = std::lower_bound(intervals_.begin(), intervals_.end(), lo,
                               [](const auto& iv, uint32_t key) { return iv.second < key; });
    // step back if the previous interval is adjacent (merge [a,lo-1] with [lo,...])
    if (it != intervals_.begin()) {
        auto prev = std::prev(it);
        if (lo != 0 && prev->second >= lo - 1) it = prev;
    }
    uint32_t new_lo = lo, new_hi = hi;
    auto erase_begin = it;
    while (it != intervals_.end() && (hi == UINT32_MAX || it->first <= hi + 1)) {
        new_lo = std::min(new_lo, it->first);
        new_hi = std::max(new_hi, it->second);
        ++it;
    }
    it = intervals_.erase(erase_begin, it);
    intervals_.insert(it, {new_lo, new_hi});
}

bool RangeSet::contains(uint32_t id) const {
    auto it = std::lower_bound(intervals_.begin(), intervals_.end(), id,
                               [](const auto& iv, uint32_t key) { return iv.second < key; });
    return it != intervals_.end() && it->first <= id;
}

uint64_t RangeSet::cardinality() const {
    uint64_t n = 0;
    for (const auto& [lo, hi] : intervals_) n += uint64_t{hi} - lo + 1;
    return n;
}

namespace {

uint64_t parse_decimal(std::string_view s) {
    uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw std::invalid_argument("range spec: bad number '" + std::string(s) + "'");
    return v;
}

uint32_t parse_address(std::string_view s) {
    if (s.find('.') == std::string_view::npos) {
        uint64_t v = parse_decimal(s);
        if (v > UINT32_MAX) throw std::invalid_argument("range spec: id exceeds 32 bits");
        return static_cast<uint32_t>(v);
    }
    uint32_t addr = 0;
    int octets = 0;
    size_t pos = 0;
    while (octets < 4) {
        size_t dot = s.find('.', pos);
        std::string_view part =
            (dot == std::string_view::npos) ? s.substr(pos) : s.substr(pos, dot - pos);
        uint64_t v = parse_decimal(part);
        if (v > 255) throw std::invalid_argument("range spec: octet out of range");
        addr = (addr << 8) | static_cast<uint32_t>(v);
        ++octets;
        if (dot == std::string_view::npos) break;
        pos = dot + 1;
    }
    if (octets != 4) throw std::invalid_argument("range spec: malformed dotted quad");
    return addr;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

}  // namespace

RangeSet RangeSet::parse(std::string_view spec) {
    RangeSet out;
    if (trim(spec).empty()) throw std::invalid_argument("range spec: empty");
    size_t pos = 0;
    while (pos <= spec.size()) {
        size_t comma = spec.find(',', pos);
        std::string_view item = trim(comma == std::string_view::npos ? spec.substr(pos)
                                                                     : spec.substr(pos, comma - pos));
        if (item.empty()) throw std::invalid_argument("range spec: empty item");
        if (auto slash = item.find('/'); slash != std::string_view::npos) {
            uint32_t base = parse_address(item.substr(0, slash));
            uint64_t bits = parse_decimal(item.substr(slash + 1));
            if (bits > 32) throw std::invalid_argument("range spec: prefix length > 32");
            uint32_t mask = bits == 0 ? 0 : (0xFFFFFFFFu << (32 - bits));
            out.insert(base & mask, (base & mask) | ~mask);
        } else if (auto dash = item.find('-'); dash != std::string_view::npos) {
            uint32_t lo = parse_address(trim(item.substr(0, dash)));
            uint32_t hi = parse_address(trim(item.substr(dash + 1)));
            if (lo > hi) throw std::invalid_argument("range spec: descending range");
            out.insert(lo, hi);
        } else {
            uint32_t id = parse_address(item);
            out.insert(id, id);
        }
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

TrafficMatrix::TrafficMatrix(uint64_t row_dim, uint64_t col_dim)
    : row_dim_(row_dim), col_dim_(col_dim) {
    if (row_dim == 0 || col_dim == 0 || row_dim > kAddressSpace || col_dim > kAddressSpace)
        throw std::invalid_argument("TrafficMatrix: dimensions must be in [1, 2^32]");
}

TrafficMatrix::TrafficMatrix(uint64_t row_dim, uint64_t col_dim, std::vector<Triple> sorted_entries)
    : row_dim_(row_dim), col_dim_(col_dim), entries_(std::move(sorted_entries)) {}

TrafficMatrix TrafficMatrix::from_triples(std::vector<Triple> triples,
                                          uint64_t row_dim, uint64_t col_dim) {
    TrafficMatrix m(row_dim, col_dim);
    for (size_t i = 0; i < triples.size(); ++i) {
        const Triple& t = triples[i];
        if (t.row >= row_dim || t.col >= col_dim)
            throw std::out_of_range("from_triples: triple " + std::to_string(i) + " (" +
                                    std::to_string(t.row) + "," + std::to_string(t.col) + "," +
                                    std::to_string(t.count) + ") outside " +
                                    std::to_string(row_dim) + "x" + std::to_string(col_dim));
    }
    std::sort(triples.begin(), triples.end(), [](const Triple& a, const Triple& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<Triple> merged;
    merged.reserve(triples.size());
    for (const Triple& t : triples) {
        if (!merged.empty() && merged.back().row == t.row && merged.back().col == t.col)
            merged.back().count = checked_add(merged.back().count, t.count);
        else
            merged.push_back(t);
    }
    std::erase_if(merged, [](const Triple& t) { return t.count == 0; });
    merged.shrink_to_fit();
    return TrafficMatrix(row_dim, col_dim, std::move(merged));
}

uint64_t TrafficMatrix::at(uint32_t row, uint32_t col) const {
    Triple key{row, col, 0};
    auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                               [](const Triple& a, const Triple& b) {
                                   return a.row != b.row ? a.row < b.row : a.col < b.col;
                               });
    return (it != entries_.end() && it->row == row && it->col == col) ? it->count : 0;
}

uint64_t TrafficMatrix::sum_all() const {
    uint64_t s = 0;
    for (const Triple& t : entries_) s = checked_add(s, t.count);
    return s;
}

uint64_t TrafficMatrix::max_entry() const {
    uint64_t m = 0;
    for (const Triple& t : entries_) m = std::max(m, t.count);
    return m;
}

TrafficMatrix TrafficMatrix::zero_norm() const {
    std::vector<Triple> out = entries_;
    for (Triple& t : out) t.count = 1;
    return TrafficMatrix(row_dim_, col_dim_, std::move(out));
}

SparseVector TrafficMatrix::row_sums() const {
    std::vector<std::pair<uint32_t, uint64_t>> items;
    for (const Triple& t : entries_) {
        if (!items.empty() && items.back().first == t.row)
            items.back().second = checked_add(items.back().second, t.count);
        else
            items.emplace_back(t.row, t.count);
    }
    return SparseVector(std::move(items));
}

SparseVector TrafficMatrix::col_sums() const {
    std::vector<std::pair<uint32_t, uint64_t>> items;
    items.reserve(entries_.size());
    for (const Triple& t : entries_) items.emplace_back(t.col, t.count);
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<uint32_t, uint64_t>> merged;
    for (const auto& [col, count] : items) {
        if (!merged.empty() && merged.back().first == col)
            merged.back().second = checked_add(merged.back().second, count);
        else
            merged.emplace_back(col, count);
    }
    return SparseVector(std::move(merged));
}

TrafficMatrix TrafficMatrix::add(const TrafficMatrix& other) const {
    if (row_dim_ != other.row_dim_ || col_dim_ != other.col_dim_)
        throw std::invalid_argument("add: dimension mismatch");
    std::vector<Triple> out;
    out.reserve(entries_.size() + other.entries_.size());
    auto a = entries_.begin(), a_end = entries_.end();
    auto b = other.entries_.begin(), b_end = other.entries_.end();
    auto key_less = [](const Triple& x, const Triple& y) {
        return x.row != y.row ? x.row < y.row : x.col < y.col;
    };
    while (a != a_end && b != b_end) {
        if (key_less(*a, *b)) {
            out.push_back(*a++);
        } else if (key_less(*b, *a)) {
            out.push_back(*b++);
        } else {
            out.push_back({a->row, a->col, checked_add(a->count, b->count)});
            ++a;
            ++b;
        }
    }
    out.insert(out.end(), a, a_end);
    out.insert(out.end(), b, b_end);
    return TrafficMatrix(row_dim_, col_dim_, std::move(out));
}

TrafficMatrix TrafficMatrix::subrange(const RangeSet& r) const {
    std::vector<Triple> out;
    for (const Triple& t : entries_)
        if (r.contains(t.row) && r.contains(t.col)) out.push_back(t);
    return TrafficMatrix(row_dim_, col_dim_, std::move(out));
}

TrafficMatrix TrafficMatrix::exclude(const RangeSet& r) const {
    std::vector<Triple> out;
    for (const Triple& t : entries_)
        if (!(r.contains(t.row) && r.contains(t.col))) out.push_back(t);
    return TrafficMatrix(row_dim_, col_dim_, std::move(out));
}

}  // namespace hstm
