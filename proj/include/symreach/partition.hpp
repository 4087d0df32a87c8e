// Copyright (c) symreach contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "symreach/nn.hpp"
#include "symreach/reach.hpp"
#include "symreach/symbols.hpp"
#include "symreach/szonotope.hpp"

namespace symreach::partition {

enum class Mode { backward, forward, accuracy };

std::string_view to_string(Mode m);
/// Throws ConfigError for unknown names.
Mode mode_from_string(std::string_view name);

struct Options {
    std::size_t max_splits{0};
    Mode mode{Mode::backward};
    /// Stop once every unsatisfied leaf has an error-block F-radius below this.
    std::optional<double> tol_f;
};

struct Node {
    std::size_t label{};
    std::optional<std::size_t> parent;
    std::vector<std::size_t> children;
    /// Initial set of this subset; its ids are the node's initial symbols.
    SZonotope initial;
    /// Latest (backward) or first (forward) violation found for this subset.
    std::optional<reach::Violation> violation;
    /// Set at the violation step, or the final set when satisfied.
    SZonotope witness;
    /// Frobenius norm of the witness columns over non-initial symbols.
    double error_radius{};
    /// Leaf evaluated over its full horizon without violation.
    bool satisfied{};
    /// Trace of the last evaluation.
    std::vector<std::vector<Interval>> hulls;
};

struct SymbolRatio {
    SymbolId symbol;
    double ratio{};
};

struct Decision {
    std::size_t iteration{};
    std::size_t label{};
    /// Scheduler key of the selected leaf and the extremal key over live leaves.
    double priority{};
    double best_priority{};
    SymbolId symbol;
    std::vector<SymbolRatio> ratios;
    std::pair<std::size_t, std::size_t> children;
};

struct Result {
    bool ok{};
    std::vector<Node> nodes;
    std::vector<std::size_t> leaves;
    std::vector<Decision> log;
    std::size_t splits{};
    std::string stop_reason;

    [[nodiscard]] reach::Verdict verdict() const;
    [[nodiscard]] const Node& node(std::size_t label) const { return nodes.at(label); }
};

/// Initial symbol with the largest ratio ||witness column|| / ||initial column||;
/// ties go to the smaller id. Falls back to the widest initial column when
/// every ratio is zero. Throws ContractError if the initial set has no
/// nonzero column.
SymbolId sym_select(const SZonotope& initial, const SZonotope& witness, std::vector<SymbolRatio>* ratios = nullptr);

std::pair<SZonotope, SZonotope> sym_split(const SZonotope& initial, SymbolId id, SymbolProvider& symbols);

/// Input partitioning driven by the closed-loop reach-avoid verifier
/// (affine engine).
Result run(const reach::Problem& p, const Options& options, SymbolProvider& symbols);

/// Output specification of an isolated network.
struct OpenLoopProperty {
    /// Outputs must lie in this polyhedron; no rows means no constraint.
    Polyhedron goal;
};

/// Same loop with a single network propagation in place of the closed-loop run.
Result run_open_loop(const nn::Network& net, const SZonotope& initial, const OpenLoopProperty& property,
                     const Options& options, SymbolProvider& symbols);

} // namespace symreach::partition
