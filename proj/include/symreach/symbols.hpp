// Copyright (c) symreach contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <vector>

namespace symreach {

/// Identifier of a unit-interval symbol s_i with domain [-1, 1].
struct SymbolId {
    std::uint64_t value{};

    friend constexpr auto operator<=>(SymbolId, SymbolId) = default;
    friend std::ostream& operator<<(std::ostream& os, SymbolId id) { return os << 's' << id.value; }
};

using IdVector = std::vector<SymbolId>;

/// Hands out globally unique symbol identifiers. Thread safe; an id is never
/// issued twice by the same provider.
class SymbolProvider {
  public:
    explicit SymbolProvider(std::uint64_t first_id = 1) : next_(first_id) {}

    SymbolProvider(const SymbolProvider&) = delete;
    SymbolProvider& operator=(const SymbolProvider&) = delete;

    IdVector fresh_ids(std::size_t n);
    SymbolId fresh_id();

    /// Next id that would be issued (for diagnostics and reports).
    [[nodiscard]] std::uint64_t peek() const { return next_.load(std::memory_order_relaxed); }

  private:
    std::atomic<std::uint64_t> next_;
};

/// Common symbol layout of two identifier vectors.
///
/// `ids` is [I∩J; I\J; J\I], each block in order of first appearance in the
/// left operand (the last block in order of the right operand). `left_pos[k]`
/// is the position in `ids` of the k-th entry of the left operand, likewise
/// `right_pos` for the right operand.
struct Alignment {
    IdVector ids;
    std::vector<std::size_t> left_pos;
    std::vector<std::size_t> right_pos;
};

Alignment align(std::span<const SymbolId> left, std::span<const SymbolId> right);

/// True when no identifier occurs twice.
bool all_distinct(std::span<const SymbolId> ids);

} // namespace symreach

template <>
struct std::hash<symreach::SymbolId> {
    std::size_t operator()(symreach::SymbolId id) const noexcept { return std::hash<std::uint64_t>{}(id.value); }
};
