// Copyright (c) symreach contributors.
// SPDX-License-Identifier: Apache-2.0
#include "symreach/symbols.hpp"

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <unordered_map>
#include <unordered_set>

namespace symreach {

IdVector SymbolProvider::fresh_ids(std::size_t n) {
    IdVector out;
    if (n == 0) {
        return out;
    }
    const std::uint64_t first = next_.fetch_add(n, std::memory_order_relaxed);
    if (first > std::numeric_limits<std::uint64_t>::max() - n) {
        std::cerr << "symreach: symbol identifier space exhausted\n";
        std::abort();
    }
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.push_back(SymbolId{first + k});
    }
    return out;
}

SymbolId SymbolProvider::fresh_id() { return fresh_ids(1).front(); }

Alignment align(std::span<const SymbolId> left, std::span<const SymbolId> right) {
    Alignment a;
    a.left_pos.resize(left.size());
    a.right_pos.resize(right.size());

    if (std::ranges::equal(left, right)) {
        a.ids.assign(left.begin(), left.end());
        for (std::size_t k = 0; k < left.size(); ++k) {
            a.left_pos[k] = k;
            a.right_pos[k] = k;
        }
        return a;
    }

    std::unordered_map<SymbolId, std::size_t> right_index;
    right_index.reserve(right.size());
    for (std::size_t k = 0; k < right.size(); ++k) {
        right_index.emplace(right[k], k);
    }

    a.ids.reserve(left.size() + right.size());
    std::vector<char> right_shared(right.size(), 0);
    std::vector<char> left_shared(left.size(), 0);
    for (std::size_t k = 0; k < left.size(); ++k) {
        if (auto it = right_index.find(left[k]); it != right_index.end()) {
            left_shared[k] = 1;
            right_shared[it->second] = 1;
            a.left_pos[k] = a.ids.size();
            a.right_pos[it->second] = a.ids.size();
            a.ids.push_back(left[k]);
        }
    }
    for (std::size_t k = 0; k < left.size(); ++k) {
        if (!left_shared[k]) {
            a.left_pos[k] = a.ids.size();
            a.ids.push_back(left[k]);
        }
    }
    for (std::size_t k = 0; k < right.size(); ++k) {
        if (!right_shared[k]) {
            a.right_pos[k] = a.ids.size();
            a.ids.push_back(right[k]);
        }
    }
    return a;
}

bool all_distinct(std::span<const SymbolId> ids) {
    std::unordered_set<SymbolId> seen;
    seen.reserve(ids.size());
    for (auto id : ids) {
        if (!seen.insert(id).second) {
            return false;
        }
    }
    return true;
}

} // namespace symreach
