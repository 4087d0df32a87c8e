// Copyright (c) symreach contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "symreach/nn.hpp"
#include "symreach/plant.hpp"
#include "symreach/spolynotope.hpp"
#include "symreach/symbols.hpp"
#include "symreach/szonotope.hpp"

namespace symreach::reach {

enum class EngineKind { affine, poly };

struct Engine {
    EngineKind kind{EngineKind::affine};
    /// Controller options of the polynomial engine; its monomial budget and
    /// degree cap also drive the state reduction.
    nn::PolyOptions poly{};
    /// Bisection depth for goal and avoid checks of the polynomial engine.
    int check_depth{0};
};

/// Avoid region active on steps first..last (inclusive).
struct AvoidSet {
    Polyhedron region;
    std::size_t first_step{};
    std::size_t last_step{};
};

/// Finite-time reach-avoid problem: X(N) inside `goal` and X(t) disjoint
/// from every avoid region active at t, for t = 0..N-1.
struct Problem {
    SZonotope initial;
    nn::Network controller;
    plant::Dynamics dynamics;
    plant::DisturbanceSpec disturbance;
    /// A polyhedron without rows accepts everything.
    Polyhedron goal;
    std::vector<AvoidSet> avoid;
    std::size_t horizon{1};
    std::size_t reduction_order{100};
    /// Plant steps per controller update.
    std::size_t hold{1};
    Engine engine{};

    /// Throws ConfigError or DimensionError.
    void validate() const;
};

enum class Verdict { verified, violated, inconclusive };
std::string_view to_string(Verdict v);

struct Violation {
    std::size_t step{};
    /// True when the over-approximation proves the property false (the set
    /// lies inside an avoid region, or misses the goal entirely).
    bool certified{};
};

struct ReachResult {
    bool ok{true};
    /// Step of the reported violation; nullopt iff ok.
    std::optional<Violation> error;
    /// Reduced sets for steps 0..last computed step (affine engine).
    std::vector<SZonotope> sets;
    /// Same for the polynomial engine.
    std::vector<SPolynotope> poly_sets;
    std::vector<std::vector<Interval>> hulls;
    std::vector<std::size_t> symbol_counts;

    [[nodiscard]] Verdict verdict() const;
    [[nodiscard]] std::size_t steps() const { return hulls.size(); }
};

struct RunOptions {
    /// Symbols never removed by the state reduction (affine engine).
    IdVector protected_ids;
    /// Last step computed and checked (<= horizon); the goal is checked only when it equals the horizon.
    std::optional<std::size_t> horizon_cap;
    /// Stop at the first violation.
    bool stop_at_first_error{true};
};

/// Closed-loop reach-avoid verification. Fresh symbols come from `symbols`,
/// which must be the provider that created the initial set's ids.
ReachResult verify(const Problem& p, SymbolProvider& symbols, const RunOptions& options = {});

struct LastError {
    /// Latest violated step within the cap, if any.
    std::optional<Violation> last;
    /// Set at `last`, or the final computed set when nothing was violated.
    SZonotope witness;
    ReachResult run;
};

/// Runs up to `horizon_cap` steps without stopping early and reports the
/// latest violation (affine engine only).
LastError verify_last_error(const Problem& p, std::size_t horizon_cap, SymbolProvider& symbols,
                            const IdVector& protected_ids = {});

} // namespace symreach::reach
