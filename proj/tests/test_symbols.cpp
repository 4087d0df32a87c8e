// Copyright (c) symreach contributors.
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <thread>

#include "symreach/symbols.hpp"
#include "testing.hpp"

using namespace symreach;

namespace {

IdVector ids(std::initializer_list<std::uint64_t> v) {
    IdVector out;
    for (auto x : v) {
        out.push_back(SymbolId{x});
    }
    return out;
}

/// Independent construction of [I∩J; I\J; J\I] by membership tests.
IdVector align_oracle(const IdVector& I, const IdVector& J) {
    const auto in = [](const IdVector& v, SymbolId s) { return std::find(v.begin(), v.end(), s) != v.end(); };
    IdVector K;
    for (auto s : I) {
        if (in(J, s)) {
            K.push_back(s);
        }
    }
    for (auto s : I) {
        if (!in(J, s)) {
            K.push_back(s);
        }
    }
    for (auto s : J) {
        if (!in(I, s)) {
            K.push_back(s);
        }
    }
    return K;
}

} // namespace

TEST_CASE("fresh_ids: empty request") {
    SymbolProvider p;
    CHECK(p.fresh_ids(0).empty());
}

TEST_CASE("fresh_ids: later ids are disjoint from earlier ones") {
    SymbolProvider p;
    const IdVector a = p.fresh_ids(2);
    const IdVector b = p.fresh_ids(3);
    REQUIRE(b.size() == 3);
    for (auto x : b) {
        CHECK(std::find(a.begin(), a.end(), x) == a.end());
    }
    CHECK(all_distinct(b));
}

TEST_CASE("fresh_ids: concurrent callers never collide") {
    SymbolProvider p;
    constexpr int threads = 8;
    constexpr int per_thread = 1250;
    std::vector<IdVector> got(threads);
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (int k = 0; k < per_thread; ++k) {
                got[t].push_back(p.fresh_ids(1).front());
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    std::set<std::uint64_t> seen;
    for (const auto& v : got) {
        for (auto s : v) {
            seen.insert(s.value);
        }
    }
    CHECK(seen.size() == static_cast<std::size_t>(threads * per_thread));
}

TEST_CASE("align: shared block first, then left-only, then right-only") {
    const Alignment a = align(ids({1, 5, 3}), ids({3, 2}));
    CHECK(a.ids == ids({3, 1, 5, 2}));
    CHECK(a.left_pos == std::vector<std::size_t>{1, 2, 0});
    CHECK(a.right_pos == std::vector<std::size_t>{0, 3});
}

TEST_CASE("align: identical and disjoint inputs") {
    CHECK(align(ids({7}), ids({7})).ids == ids({7}));
    CHECK(align(ids({1}), ids({2})).ids == ids({1, 2}));
    CHECK(align({}, {}).ids.empty());
}

TEST_CASE("align: properties on random id vectors") {
    testing::Rng rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<std::uint64_t> pool(12);
        std::iota(pool.begin(), pool.end(), 1);
        std::shuffle(pool.begin(), pool.end(), rng.engine());
        IdVector I;
        for (int k = 0, n = rng.integer(0, 8); k < n; ++k) {
            I.push_back(SymbolId{pool[static_cast<std::size_t>(k)]});
        }
        std::shuffle(pool.begin(), pool.end(), rng.engine());
        IdVector J;
        for (int k = 0, n = rng.integer(0, 8); k < n; ++k) {
            J.push_back(SymbolId{pool[static_cast<std::size_t>(k)]});
        }

        const Alignment a = align(I, J);
        CHECK(a.ids == align_oracle(I, J));
        CHECK(all_distinct(a.ids));
        std::size_t shared = 0;
        for (auto s : I) {
            shared += std::count(J.begin(), J.end(), s);
        }
        CHECK(a.ids.size() == I.size() + J.size() - shared);
        for (std::size_t k = 0; k < I.size(); ++k) {
            CHECK(a.ids[a.left_pos[k]] == I[k]);
        }
        for (std::size_t k = 0; k < J.size(); ++k) {
            CHECK(a.ids[a.right_pos[k]] == J[k]);
        }

        IdVector forward = a.ids;
        IdVector backward = align(J, I).ids;
        std::sort(forward.begin(), forward.end());
        std::sort(backward.begin(), backward.end());
        CHECK(forward == backward);
    }
}
