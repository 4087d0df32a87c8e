// Copyright (c) symreach contributors.
// SPDX-License-Identifier: Apache-2.0
#include "symreach/reach.hpp"

#include <algorithm>
#include <string>

#include "symreach/error.hpp"

namespace symreach::reach {

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::verified:
        return "verified";
    case Verdict::violated:
        return "violated";
    case Verdict::inconclusive:
        return "inconclusive";
    }
    return "inconclusive";
}

Verdict ReachResult::verdict() const {
    if (ok) {
        return Verdict::verified;
    }
    return error && error->certified ? Verdict::violated : Verdict::inconclusive;
}

void Problem::validate() const {
    const auto nx = initial.dim();
    if (nx == 0) {
        throw ConfigError("problem: empty initial set");
    }
    if (horizon == 0) {
        throw ConfigError("problem: horizon must be at least 1");
    }
    if (hold == 0) {
        throw ConfigError("problem: hold must be at least 1");
    }
    if (static_cast<std::size_t>(nx) != dynamics.n_x) {
        throw DimensionError("problem: initial set has dimension " + std::to_string(nx) + ", dynamics expect " +
                             std::to_string(dynamics.n_x));
    }
    if (controller.input_dim() != nx) {
        throw DimensionError("problem: controller expects " + std::to_string(controller.input_dim()) +
                             " inputs, state has " + std::to_string(nx));
    }
    if (static_cast<std::size_t>(controller.output_dim()) != dynamics.n_u) {
        throw DimensionError("problem: controller has " + std::to_string(controller.output_dim()) +
                             " outputs, dynamics expect " + std::to_string(dynamics.n_u));
    }
    if (disturbance.size() != dynamics.n_w) {
        throw DimensionError("problem: disturbance spec has " + std::to_string(disturbance.size()) +
                             " components, dynamics expect " + std::to_string(dynamics.n_w));
    }
    for (const double a : disturbance.amplitudes) {
        if (!(a >= 0.0)) {
            throw ConfigError("problem: disturbance amplitudes must be non-negative");
        }
    }
    dynamics.validate();
    if (goal.rows() > 0 && goal.dim() != nx) {
        throw DimensionError("problem: goal dimension mismatch");
    }
    for (const auto& a : avoid) {
        if (a.region.dim() != nx) {
            throw DimensionError("problem: avoid set dimension mismatch");
        }
        if (a.first_step > a.last_step) {
            throw ConfigError("problem: avoid set with empty step range");
        }
    }
    if (reduction_order < static_cast<std::size_t>(nx)) {
        throw ConfigError("problem: reduction order below state dimension");
    }
    if (engine.kind == EngineKind::poly && (engine.poly.order < 1 || engine.poly.order > 2)) {
        throw ConfigError("problem: polynomial engine order must be 1 or 2");
    }
}

namespace {

struct AffineOps {
    const Problem& p;
    SymbolProvider& symbols;
    const IdVector& keep;

    using Set = SZonotope;

    [[nodiscard]] Set initial() const { return p.initial; }
    Set controller(const Set& X) const { return nn::propagate_affine(X, p.controller, symbols); }
    Set step(const Set& X, const Set& U) const {
        plant::StepOutput out = plant::step_szono(p.dynamics, X, U, p.disturbance, symbols);
        IdVector protect = keep;
        protect.insert(protect.end(), out.disturbance_ids.begin(), out.disturbance_ids.end());
        return symreach::reduce(out.next, p.reduction_order, protect, symbols);
    }
    static bool disjoint(const Set& X, const Polyhedron& A) { return disjoint_from(X, A); }
    static bool contained(const Set& X, const Polyhedron& G) { return contained_in(X, G); }
    static std::vector<Interval> hull(const Set& X) { return interval_hull(X); }
    static std::size_t size(const Set& X) { return static_cast<std::size_t>(X.num_symbols()); }
    static void store(ReachResult& r, Set X) { r.sets.push_back(std::move(X)); }
};

struct PolyOps {
    const Problem& p;
    SymbolProvider& symbols;

    using Set = SPolynotope;

    [[nodiscard]] Set initial() const { return SPolynotope::from_szonotope(p.initial); }
    Set controller(const Set& X) const { return nn::propagate_poly(X, p.controller, p.engine.poly, symbols); }
    Set step(const Set& X, const Set& U) const {
        plant::PolyStepOutput out =
            plant::step_spoly(p.dynamics, X, U, p.disturbance, symbols, p.engine.poly.refine_depth);
        return reduce_monomials(out.next, p.reduction_order, p.engine.poly.max_degree, symbols);
    }
    [[nodiscard]] bool disjoint(const Set& X, const Polyhedron& A) const {
        for (Eigen::Index j = 0; j < A.rows(); ++j) {
            const Eigen::VectorXd h = A.H.row(j).transpose();
            if (-support_bound(-h, X, p.engine.check_depth) > A.r(j)) {
                return true;
            }
        }
        return false;
    }
    [[nodiscard]] bool contained(const Set& X, const Polyhedron& G) const {
        for (Eigen::Index j = 0; j < G.rows(); ++j) {
            const Eigen::VectorXd h = G.H.row(j).transpose();
            if (support_bound(h, X, p.engine.check_depth) > G.r(j)) {
                return false;
            }
        }
        return true;
    }
    [[nodiscard]] std::vector<Interval> hull(const Set& X) const { return interval_hull(X, p.engine.check_depth); }
    static std::size_t size(const Set& X) { return static_cast<std::size_t>(X.num_monomials()); }
    static void store(ReachResult& r, Set X) { r.poly_sets.push_back(std::move(X)); }
};

template <class Ops>
ReachResult run_loop(const Problem& p, const Ops& ops, std::size_t cap, bool stop_early) {
    ReachResult out;
    auto record = [&](std::size_t step, bool certified) {
        out.ok = false;
        if (!out.error || step >= out.error->step) {
            // a certified violation at the same step wins
            const bool cert = certified || (out.error && out.error->step == step && out.error->certified);
            out.error = Violation{step, cert};
        }
    };
    auto push = [&](const typename Ops::Set& X) {
        out.hulls.push_back(ops.hull(X));
        out.symbol_counts.push_back(Ops::size(X));
        Ops::store(out, X);
    };

    typename Ops::Set X = ops.initial();
    typename Ops::Set U;
    push(X);
    for (std::size_t i = 0;; ++i) {
        if (i < p.horizon) {
            for (const auto& a : p.avoid) {
                if (i >= a.first_step && i <= a.last_step && !ops.disjoint(X, a.region)) {
                    record(i, ops.contained(X, a.region));
                }
            }
        }
        if ((stop_early && !out.ok) || i == cap) {
            break;
        }
        try {
            if (i % p.hold == 0) {
                U = ops.controller(X);
            }
            X = ops.step(X, U);
        } catch (const AbstractionError& e) {
            throw AbstractionError("step " + std::to_string(i) + ": " + e.what());
        }
        push(X);
        if (i + 1 == p.horizon && p.goal.rows() > 0 && !ops.contained(X, p.goal)) {
            record(p.horizon, ops.disjoint(X, p.goal));
        }
    }
    return out;
}

std::size_t effective_cap(const Problem& p, const std::optional<std::size_t>& cap) {
    return cap ? std::min(*cap, p.horizon) : p.horizon;
}

} // namespace

ReachResult verify(const Problem& p, SymbolProvider& symbols, const RunOptions& options) {
    p.validate();
    const std::size_t cap = effective_cap(p, options.horizon_cap);
    if (p.engine.kind == EngineKind::poly) {
        return run_loop(p, PolyOps{p, symbols}, cap, options.stop_at_first_error);
    }
    return run_loop(p, AffineOps{p, symbols, options.protected_ids}, cap, options.stop_at_first_error);
}

LastError verify_last_error(const Problem& p, std::size_t horizon_cap, SymbolProvider& symbols,
                            const IdVector& protected_ids) {
    if (p.engine.kind != EngineKind::affine) {
        throw ConfigError("verify_last_error: requires the affine engine");
    }
    RunOptions opts;
    opts.protected_ids = protected_ids;
    opts.horizon_cap = horizon_cap;
    opts.stop_at_first_error = false;
    LastError out;
    out.run = verify(p, symbols, opts);
    out.last = out.run.error;
    const std::size_t at = out.last ? out.last->step : out.run.sets.size() - 1;
    out.witness = out.run.sets.at(at);
    return out;
}

} // namespace symreach::reach
