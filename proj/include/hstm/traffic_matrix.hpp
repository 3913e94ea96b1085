#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hstm {

// Full IPv4 address space; the production dimension of every traffic matrix.
inline constexpr uint64_t kAddressSpace = uint64_t{1} << 32;

// One stored cell: packet count for a (source, destination) pair.
struct Triple {
    uint32_t row = 0;
    uint32_t col = 0;
    uint64_t count = 0;

    friend bool operator==(const Triple&, const Triple&) = default;
};

// Sparse vector keyed by 32-bit id. Items sorted by id, zero values never stored.
class SparseVector {
public:
    SparseVector() = default;
    // Items must be sorted by id with unique ids; zero values are dropped.
    explicit SparseVector(std::vector<std::pair<uint32_t, uint64_t>> items);

    const std::vector<std::pair<uint32_t, uint64_t>>& items() const { return items_; }
    uint64_t nnz() const { return items_.size(); }
    uint64_t max_value() const;  // 0 for an empty vector
    uint64_t sum() const;
    uint64_t at(uint32_t id) const;  // 0 if absent

    friend bool operator==(const SparseVector&, const SparseVector&) = default;

private:
    std::vector<std::pair<uint32_t, uint64_t>> items_;
};

// Set of 32-bit address ids held as sorted, non-overlapping, inclusive intervals.
class RangeSet {
public:
    RangeSet() = default;

    // Every id in [0, dim).
    static RangeSet full(uint64_t dim = kAddressSpace);

    // Accepted items, comma separated:
    //   dotted quad            10.0.0.1
    //   CIDR block             10.0.0.0/8
    //   decimal id             167772161
    //   inclusive range        1000-2000 or 10.0.0.1-10.0.0.9
    static RangeSet parse(std::string_view spec);

    void insert(uint32_t lo, uint32_t hi);  // inclusive; overlaps are merged
    bool contains(uint32_t id) const;
    bool empty() const { return intervals_.empty(); }
    uint64_t cardinality() const;
    const std::vector<std::pair<uint32_t, uint32_t>>& intervals() const { return intervals_; }

private:
    std::vector<std::pair<uint32_t, uint32_t>> intervals_;
};

// Hypersparse traffic matrix: packet counts keyed by (source, destination).
//
// Storage is a single (row, col, count)-sorted triple list, so memory is
// proportional to nnz and never to the dimensions. Counts are unsigned 64-bit
// and overflow during accumulation is an error, never a wraparound. Instances
// are immutable after construction and safe to share across threads.
class TrafficMatrix {
public:
    TrafficMatrix() = default;  // empty, 2^32 x 2^32
    TrafficMatrix(uint64_t row_dim, uint64_t col_dim);

    // Duplicate (row, col) keys accumulate by summation; zero counts are
    // dropped. Throws std::out_of_range naming the offending triple if an id
    // exceeds its dimension.
    static TrafficMatrix from_triples(std::vector<Triple> triples,
                                      uint64_t row_dim = kAddressSpace,
                                      uint64_t col_dim = kAddressSpace);

    uint64_t row_dim() const { return row_dim_; }
    uint64_t col_dim() const { return col_dim_; }
    uint64_t nnz() const { return entries_.size(); }
    const std::vector<Triple>& entries() const { return entries_; }  // sorted by (row, col)

    uint64_t at(uint32_t row, uint32_t col) const;  // 0 if absent

    // Sum of every stored count; the packet total N_V of a window matrix.
    uint64_t sum_all() const;

    // Largest stored count, 0 for an empty matrix.
    uint64_t max_entry() const;

    // Same sparsity pattern with every stored value set to 1.
    TrafficMatrix zero_norm() const;

    SparseVector row_sums() const;
    SparseVector col_sums() const;

    // Element-wise sum. Throws std::invalid_argument on dimension mismatch.
    TrafficMatrix add(const TrafficMatrix& other) const;

    // Entries with row and col both inside r (the diagonal-projection product
    // of r's 0/1 diagonal matrix on both sides, realized as a filter).
    TrafficMatrix subrange(const RangeSet& r) const;

    // Complement of subrange: subrange(r) + exclude(r) == *this.
    TrafficMatrix exclude(const RangeSet& r) const;

    friend bool operator==(const TrafficMatrix&, const TrafficMatrix&) = default;

private:
    TrafficMatrix(uint64_t row_dim, uint64_t col_dim, std::vector<Triple> sorted_entries);

    uint64_t row_dim_ = kAddressSpace;
    uint64_t col_dim_ = kAddressSpace;
    std::vector<Triple> entries_;
};

// a + b with overflow reported as std::overflow_error instead of wrapping.
uint64_t checked_add(uint64_t a, uint64_t b);

}  // namespace hstm
