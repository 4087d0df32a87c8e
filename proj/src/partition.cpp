// Copyright (c) symreach contributors.
// SPDX-License-Identifier: Apache-2.0
#include "symreach/partition.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <string>

#include "symreach/error.hpp"

namespace symreach::partition {

std::string_view to_string(Mode m) {
    switch (m) {
    case Mode::backward:
        return "backward";
    case Mode::forward:
        return "forward";
    case Mode::accuracy:
        return "accuracy";
    }
    return "backward";
}

Mode mode_from_string(std::string_view name) {
    if (name == "backward") {
        return Mode::backward;
    }
    if (name == "forward") {
        return Mode::forward;
    }
    if (name == "accuracy") {
        return Mode::accuracy;
    }
    throw ConfigError("unknown partition mode '" + std::string(name) + "'");
}

reach::Verdict Result::verdict() const {
    if (ok) {
        return reach::Verdict::verified;
    }
    for (const std::size_t l : leaves) {
        const Node& n = nodes[l];
        if (n.violation && n.violation->certified) {
            return reach::Verdict::violated;
        }
    }
    return reach::Verdict::inconclusive;
}

SymbolId sym_select(const SZonotope& initial, const SZonotope& witness, std::vector<SymbolRatio>* ratios) {
    std::optional<SymbolId> best;
    double best_ratio = 0.0;
    std::optional<SymbolId> widest;
    double widest_norm = 0.0;
    if (ratios != nullptr) {
        ratios->clear();
    }
    for (Eigen::Index k = 0; k < initial.num_symbols(); ++k) {
        const SymbolId id = initial.ids()[static_cast<std::size_t>(k)];
        const double r0 = initial.generators().col(k).norm();
        if (r0 == 0.0) {
            continue;
        }
        const double ratio = witness.column(id).norm() / r0;
        if (ratios != nullptr) {
            ratios->push_back({id, ratio});
        }
        if (ratio > 0.0 && (!best || ratio > best_ratio || (ratio == best_ratio && id < *best))) {
            best = id;
            best_ratio = ratio;
        }
        if (!widest || r0 > widest_norm || (r0 == widest_norm && id < *widest)) {
            widest = id;
            widest_norm = r0;
        }
    }
    if (best) {
        return *best;
    }
    if (widest) {
        return *widest;
    }
    throw ContractError("sym_select: initial set has no nonzero generator");
}

std::pair<SZonotope, SZonotope> sym_split(const SZonotope& initial, SymbolId id, SymbolProvider& symbols) {
    return bisect_symbol(initial, id, symbols);
}

namespace {

struct Evaluation {
    std::optional<reach::Violation> violation;
    SZonotope witness;
    bool satisfied{};
    std::vector<std::vector<Interval>> hulls;
};

/// Evaluates one initial subset. The second argument is the last step to
/// check, or nullopt for the whole horizon.
using Evaluator = std::function<Evaluation(const SZonotope&, std::optional<std::size_t>)>;

bool has_nonzero_column(const SZonotope& X) {
    for (Eigen::Index k = 0; k < X.num_symbols(); ++k) {
        if (X.generators().col(k).norm() > 0.0) {
            return true;
        }
    }
    return false;
}

class Scheduler {
  public:
    Scheduler(const Options& options, std::size_t horizon, Evaluator eval, SymbolProvider& symbols)
        : opts_(options), horizon_(horizon), eval_(std::move(eval)), symbols_(symbols) {}

    Result run(const SZonotope& initial) {
        add_node(initial, std::nullopt, std::nullopt);
        res_.leaves.push_back(0);
        for (std::size_t iteration = 0;; ++iteration) {
            if (const auto reason = stop_reason()) {
                res_.stop_reason = *reason;
                break;
            }
            const std::size_t l = select();
            Node& parent = res_.nodes[l];
            if (!has_nonzero_column(parent.initial)) {
                res_.stop_reason = "unsplittable subset";
                break;
            }
            Decision d;
            d.iteration = iteration;
            d.label = l;
            d.priority = priority(parent);
            d.best_priority = d.priority;
            for (const std::size_t k : res_.leaves) {
                d.best_priority = std::max(d.best_priority, priority(res_.nodes[k]));
            }
            d.symbol = sym_select(parent.initial, parent.witness, &d.ratios);

            auto [upper, lower] = sym_split(parent.initial, d.symbol, symbols_);
            // children inherit the parent's violation step as their horizon cap
            std::optional<std::size_t> cap;
            if (opts_.mode == Mode::backward && parent.violation) {
                cap = parent.violation->step;
            }
            const std::size_t a = add_node(std::move(upper), l, cap);
            const std::size_t b = add_node(std::move(lower), l, cap);
            res_.nodes[l].children = {a, b};
            d.children = {a, b};

            std::erase(res_.leaves, l);
            res_.leaves.push_back(a);
            res_.leaves.push_back(b);
            ++res_.splits;
            res_.log.push_back(std::move(d));
        }
        res_.ok = true;
        for (const std::size_t l : res_.leaves) {
            res_.ok = res_.ok && res_.nodes[l].satisfied;
        }
        return std::move(res_);
    }

  private:
    std::size_t add_node(SZonotope initial, std::optional<std::size_t> parent, std::optional<std::size_t> cap) {
        Node n;
        n.label = res_.nodes.size();
        n.parent = parent;
        Evaluation e = eval_(initial, cap);
        if (!e.violation && cap && *cap < horizon_) {
            // clean up to the cap proves nothing about later steps
            e = eval_(initial, std::nullopt);
        }
        n.initial = std::move(initial);
        n.violation = e.violation;
        n.witness = std::move(e.witness);
        n.satisfied = e.satisfied;
        n.hulls = std::move(e.hulls);
        n.error_radius = f_radius(columns_excluding(n.witness, n.initial.ids()));
        res_.nodes.push_back(std::move(n));
        return res_.nodes.back().label;
    }

    /// Larger is selected first.
    [[nodiscard]] double priority(const Node& n) const {
        switch (opts_.mode) {
        case Mode::backward:
            return n.violation ? static_cast<double>(n.violation->step + 1) : 0.0;
        case Mode::forward:
            // argmin of the first violation step; satisfied leaves rank last
            return n.violation ? -static_cast<double>(n.violation->step) : -static_cast<double>(horizon_ + 1);
        case Mode::accuracy:
            return n.error_radius;
        }
        return 0.0;
    }

    [[nodiscard]] std::size_t select() {
        std::size_t best = res_.leaves.front();
        for (const std::size_t l : res_.leaves) {
            const double pl = priority(res_.nodes[l]);
            const double pb = priority(res_.nodes[best]);
            if (pl > pb || (pl == pb && l < best)) {
                best = l;
            }
        }
        return best;
    }

    [[nodiscard]] std::optional<std::string> stop_reason() const {
        bool all_satisfied = true;
        bool all_accurate = opts_.tol_f.has_value();
        for (const std::size_t l : res_.leaves) {
            const Node& n = res_.nodes[l];
            all_satisfied = all_satisfied && n.satisfied;
            if (n.violation && n.violation->certified) {
                return "certified violation";
            }
            if (opts_.tol_f && (opts_.mode == Mode::accuracy || !n.satisfied) && n.error_radius >= *opts_.tol_f) {
                all_accurate = false;
            }
        }
        if (opts_.mode != Mode::accuracy && all_satisfied) {
            return "all subsets satisfied";
        }
        if (all_accurate) {
            return "accuracy tolerance reached";
        }
        if (res_.splits >= opts_.max_splits) {
            return "split budget exhausted";
        }
        return std::nullopt;
    }

    const Options& opts_;
    std::size_t horizon_;
    Evaluator eval_;
    SymbolProvider& symbols_;
    Result res_;
};

} // namespace

Result run(const reach::Problem& p, const Options& options, SymbolProvider& symbols) {
    p.validate();
    if (p.engine.kind != reach::EngineKind::affine) {
        throw ConfigError("partition: requires the affine engine");
    }
    const std::size_t N = p.horizon;
    Evaluator eval = [&p, &symbols, &options, N](const SZonotope& initial, std::optional<std::size_t> cap) {
        reach::Problem sub = p;
        sub.initial = initial;
        Evaluation e;
        if (options.mode == Mode::forward) {
            reach::RunOptions ro;
            ro.protected_ids = initial.ids();
            const reach::ReachResult r = reach::verify(sub, symbols, ro);
            e.violation = r.error;
            e.witness = r.sets.at(r.error ? r.error->step : r.sets.size() - 1);
            e.satisfied = r.ok;
            e.hulls = r.hulls;
            return e;
        }
        reach::LastError le = reach::verify_last_error(sub, cap.value_or(N), symbols, initial.ids());
        e.violation = le.last;
        e.witness = std::move(le.witness);
        e.satisfied = !le.last && le.run.steps() == N + 1;
        e.hulls = std::move(le.run.hulls);
        return e;
    };
    return Scheduler(options, N, std::move(eval), symbols).run(p.initial);
}

Result run_open_loop(const nn::Network& net, const SZonotope& initial, const OpenLoopProperty& property,
                     const Options& options, SymbolProvider& symbols) {
    if (initial.dim() != net.input_dim()) {
        throw DimensionError("run_open_loop: input set dimension mismatch");
    }
    if (property.goal.rows() > 0 && property.goal.dim() != net.output_dim()) {
        throw DimensionError("run_open_loop: property dimension mismatch");
    }
    Evaluator eval = [&net, &property, &symbols](const SZonotope& X, std::optional<std::size_t> /*cap*/) {
        Evaluation e;
        e.witness = nn::propagate_affine(X, net, symbols);
        if (property.goal.rows() > 0 && !contained_in(e.witness, property.goal)) {
            e.violation = reach::Violation{1, disjoint_from(e.witness, property.goal)};
        }
        e.satisfied = !e.violation;
        e.hulls = {interval_hull(X), interval_hull(e.witness)};
        return e;
    };
    return Scheduler(options, 1, std::move(eval), symbols).run(initial);
}

} // namespace symreach::partition
