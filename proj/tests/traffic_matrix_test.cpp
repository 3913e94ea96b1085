#include "hstm/traffic_matrix.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

#include "test_support.hpp"

using namespace hstm;
using hstm::testing::DenseMatrix;

TEST_SUITE("traffic_matrix") {

TEST_CASE("from_triples accumulates duplicates") {
    auto m = TrafficMatrix::from_triples({{1, 2, 1}, {1, 2, 1}}, 16, 16);
    CHECK(m.nnz() == 1);
    CHECK(m.at(1, 2) == 2);
    CHECK(m.sum_all() == 2);
}

TEST_CASE("from_triples empty input") {
    auto m = TrafficMatrix::from_triples({}, 16, 16);
    CHECK(m.nnz() == 0);
    CHECK(m.sum_all() == 0);
}

TEST_CASE("from_triples drops zero counts but validates their ids") {
    auto m = TrafficMatrix::from_triples({{3, 4, 0}, {1, 1, 2}}, 8, 8);
    CHECK(m.nnz() == 1);
    CHECK(m.at(3, 4) == 0);
    CHECK_THROWS_AS((void)TrafficMatrix::from_triples({{9, 0, 0}}, 8, 8), std::out_of_range);
}

TEST_CASE("from_triples rejects out-of-range ids with the offending triple named") {
    try {
        (void)TrafficMatrix::from_triples({{0, 0, 1}, {4, 200, 1}}, 256, 100);
        FAIL("expected out_of_range");
    } catch (const std::out_of_range& e) {
        std::string msg = e.what();
        CHECK(msg.find("200") != std::string::npos);
    }
}

TEST_CASE("from_triples matches dense accumulation oracle on 10^4 random triples") {
    std::mt19937_64 rng(42);
    auto triples = hstm::testing::random_triples(rng, 10000, 256);
    auto m = TrafficMatrix::from_triples(triples, 256, 256);
    auto d = DenseMatrix::from_triples(triples, 256, 256);
    for (uint32_t r = 0; r < 256; ++r)
        for (uint32_t c = 0; c < 256; ++c)
            REQUIRE(m.at(r, c) == d.cell(r, c));
    CHECK(m.nnz() == d.nnz());
    CHECK(m.sum_all() == d.sum_all());
}

TEST_CASE("sum_all on unit triples") {
    auto m = TrafficMatrix::from_triples(
        {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {4, 5, 1}}, 16, 16);
    CHECK(m.sum_all() == 5);
}

TEST_CASE("zero_norm maps every stored value to 1") {
    auto m = TrafficMatrix::from_triples({{1, 2, 5}}, 8, 8);
    auto z = m.zero_norm();
    CHECK(z.nnz() == 1);
    CHECK(z.at(1, 2) == 1);

    auto empty = TrafficMatrix(8, 8).zero_norm();
    CHECK(empty.nnz() == 0);
}

TEST_CASE("zero_norm sum equals distinct pair count; idempotent") {
    std::mt19937_64 rng(7);
    auto triples = hstm::testing::random_triples(rng, 3000, 64, 8);
    std::set<std::pair<uint32_t, uint32_t>> pairs;
    for (const auto& t : triples)
        if (t.count != 0) pairs.insert({t.row, t.col});
    auto m = TrafficMatrix::from_triples(triples, 64, 64);
    auto z = m.zero_norm();
    CHECK(z.sum_all() == pairs.size());
    CHECK(z.zero_norm() == z);
}

TEST_CASE("row_sums and col_sums on the worked example") {
    auto m = TrafficMatrix::from_triples({{0, 1, 2}, {0, 2, 1}, {3, 1, 4}}, 8, 8);
    auto rs = m.row_sums();
    auto cs = m.col_sums();
    CHECK(rs.items() == std::vector<std::pair<uint32_t, uint64_t>>{{0, 3}, {3, 4}});
    CHECK(cs.items() == std::vector<std::pair<uint32_t, uint64_t>>{{1, 6}, {2, 1}});

    auto empty = TrafficMatrix(8, 8);
    CHECK(empty.row_sums().nnz() == 0);
    CHECK(empty.col_sums().nnz() == 0);
}

TEST_CASE("row/col sums match dense oracle on random matrices") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        auto triples = hstm::testing::random_triples(rng, 500, 128);
        auto m = TrafficMatrix::from_triples(triples, 128, 128);
        auto d = DenseMatrix::from_matrix(m);

        auto rs_vec = m.row_sums();
        auto cs_vec = m.col_sums();
        std::map<uint32_t, uint64_t> rs(rs_vec.items().begin(), rs_vec.items().end());
        std::map<uint32_t, uint64_t> cs(cs_vec.items().begin(), cs_vec.items().end());
        REQUIRE(rs == d.dense_row_sums());
        REQUIRE(cs == d.dense_col_sums());

        // fan-out: zero_norm then row_sums equals per-source distinct destination counts
        auto fan_vec = m.zero_norm().row_sums();
        std::map<uint32_t, uint64_t> fanout(fan_vec.items().begin(), fan_vec.items().end());
        REQUIRE(fanout == d.dense_row_fanout());
    }
}

TEST_CASE("max_entry and vector max/nnz") {
    auto m = TrafficMatrix::from_triples({{0, 1, 2}, {3, 1, 4}}, 8, 8);
    CHECK(m.max_entry() == 4);
    CHECK(TrafficMatrix(8, 8).max_entry() == 0);

    auto rs = m.row_sums();
    CHECK(rs.max_value() == 4);
    CHECK(rs.nnz() == 2);
    CHECK(SparseVector{}.max_value() == 0);
    CHECK(SparseVector{}.nnz() == 0);

    std::mt19937_64 rng(3);
    auto triples = hstm::testing::random_triples(rng, 800, 100);
    auto a = TrafficMatrix::from_triples(triples, 100, 100);
    CHECK(a.max_entry() == DenseMatrix::from_matrix(a).max_cell());
}

TEST_CASE("add identity and small example") {
    auto a = TrafficMatrix::from_triples({{1, 1, 1}}, 8, 8);
    auto empty = TrafficMatrix(8, 8);
    CHECK(a.add(empty) == a);
    CHECK(empty.add(a) == a);

    auto b = TrafficMatrix::from_triples({{1, 1, 2}}, 8, 8);
    auto sum = a.add(b);
    CHECK(sum.nnz() == 1);
    CHECK(sum.at(1, 1) == 3);
}

TEST_CASE("add rejects dimension mismatch") {
    CHECK_THROWS_AS((void)TrafficMatrix(8, 8).add(TrafficMatrix(8, 16)), std::invalid_argument);
}

TEST_CASE("add is conservative and matches dense oracle") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        auto ta = hstm::testing::random_triples(rng, 400, 64);
        auto tb = hstm::testing::random_triples(rng, 400, 64);
        auto a = TrafficMatrix::from_triples(ta, 64, 64);
        auto b = TrafficMatrix::from_triples(tb, 64, 64);
        auto s = a.add(b);
        REQUIRE(s.sum_all() == a.sum_all() + b.sum_all());
        auto da = DenseMatrix::from_matrix(a);
        auto db = DenseMatrix::from_matrix(b);
        for (const auto& t : s.entries())
            REQUIRE(t.count == da.cell(t.row, t.col) + db.cell(t.row, t.col));
        REQUIRE(s.nnz() == TrafficMatrix::from_triples(s.entries(), 64, 64).nnz());
    }
}

TEST_CASE("summing 64 blocks of 2^17 packets yields a 2^23 packet window") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<uint32_t> id(0, (1u << 20) - 1);
    const uint32_t block_packets = 1u << 17;

    std::vector<TrafficMatrix> level;
    level.reserve(64);
    for (int b = 0; b < 64; ++b) {
        std::vector<Triple> triples;
        triples.reserve(block_packets);
        for (uint32_t i = 0; i < block_packets; ++i) triples.push_back({id(rng), id(rng), 1});
        level.push_back(TrafficMatrix::from_triples(std::move(triples)));
        REQUIRE(level.back().sum_all() == 131072);  // 2^17 per block
    }
    // pairwise tree to keep the additions cheap
    while (level.size() > 1) {
        std::vector<TrafficMatrix> next;
        for (size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(level[i].add(level[i + 1]));
        level = std::move(next);
    }
    CHECK(level[0].sum_all() == 8388608);  // 2^23
}

TEST_CASE("subrange keeps exactly in-range rows and cols") {
    auto a = TrafficMatrix::from_triples({{0, 1, 2}, {1, 5, 3}, {6, 6, 1}}, 8, 8);

    CHECK(a.subrange(RangeSet::full(8)) == a);
    CHECK(a.subrange(RangeSet{}).nnz() == 0);

    RangeSet r;
    r.insert(0, 1);
    auto sub = a.subrange(r);
    CHECK(sub.nnz() == 1);
    CHECK(sub.at(0, 1) == 2);  // (1,5): col outside; (6,6): row outside
}

TEST_CASE("subrange equals the dense diagonal-product oracle") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        auto triples = hstm::testing::random_triples(rng, 300, 256);
        auto a = TrafficMatrix::from_triples(triples, 256, 256);
        auto r = hstm::testing::random_range(rng, 256);
        auto sub = a.subrange(r);
        auto oracle = DenseMatrix::from_matrix(a).diagonal_product(r);
        REQUIRE(sub.entries() == oracle.triples());
    }
}

TEST_CASE("exclude complements subrange exactly") {
    auto a = TrafficMatrix::from_triples({{0, 1, 2}, {1, 5, 3}, {6, 6, 1}}, 8, 8);
    CHECK(a.exclude(RangeSet{}) == a);
    CHECK(a.exclude(RangeSet::full(8)).nnz() == 0);

    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 30; ++trial) {
        auto triples = hstm::testing::random_triples(rng, 300, 256);
        auto m = TrafficMatrix::from_triples(triples, 256, 256);
        auto r = hstm::testing::random_range(rng, 256);
        REQUIRE(m.subrange(r).add(m.exclude(r)) == m);
    }
}

TEST_CASE("checked_add reports overflow") {
    CHECK(checked_add(3, 4) == 7);
    CHECK_THROWS_AS((void)checked_add(UINT64_MAX, 1), std::overflow_error);
}

TEST_CASE("RangeSet interval bookkeeping") {
    RangeSet r;
    r.insert(10, 20);
    r.insert(15, 30);  // merge
    r.insert(32, 40);
    CHECK(r.intervals() == std::vector<std::pair<uint32_t, uint32_t>>{{10, 30}, {32, 40}});
    CHECK(r.cardinality() == 21 + 9);
    CHECK(r.contains(10));
    CHECK(r.contains(30));
    CHECK(!r.contains(31));
    CHECK(r.contains(40));
    CHECK(!r.contains(9));

    r.insert(31, 31);  // bridges the gap
    CHECK(r.intervals() == std::vector<std::pair<uint32_t, uint32_t>>{{10, 40}});
}

TEST_CASE("RangeSet::parse accepts CIDR, dotted, decimal, and ranges") {
    auto r = RangeSet::parse("10.0.0.0/8");
    CHECK(r.contains(10u << 24));
    CHECK(r.contains((10u << 24) | 0xFFFFFF));
    CHECK(!r.contains(11u << 24));
    CHECK(r.cardinality() == (uint64_t{1} << 24));

    auto single = RangeSet::parse("167772161");  // 10.0.0.1
    CHECK(single.contains(167772161));
    CHECK(single.cardinality() == 1);

    auto dotted = RangeSet::parse("10.0.0.1");
    CHECK(dotted.contains(167772161));

    auto multi = RangeSet::parse("1000-2000,10.0.0.1-10.0.0.9");
    CHECK(multi.contains(1500));
    CHECK(multi.contains(167772165));
    CHECK(!multi.contains(999));

    CHECK_THROWS_AS((void)RangeSet::parse("10.0.0.0/33"), std::invalid_argument);
    CHECK_THROWS_AS((void)RangeSet::parse("hello"), std::invalid_argument);
    CHECK_THROWS_AS((void)RangeSet::parse("5-2"), std::invalid_argument);
    CHECK_THROWS_AS((void)RangeSet::parse(""), std::invalid_argument);
}

TEST_CASE("full address space matrices accept 32-bit ids") {
    auto m = TrafficMatrix::from_triples({{0xFFFFFFFFu, 0, 1}, {0, 0xFFFFFFFFu, 2}});
    CHECK(m.row_dim() == kAddressSpace);
    CHECK(m.at(0xFFFFFFFFu, 0) == 1);
    CHECK(m.sum_all() == 3);
}

}  // TEST_SUITE
