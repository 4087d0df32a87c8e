// Copyright (c) symreach contributors.
// SPDX-License-Identifier: Apache-2.0
#include "symreach/plant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "symreach/error.hpp"

namespace symreach::plant {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool always(double /*l*/, double /*u*/) { return true; }

/// All x in [l, u] with x = base + 2 k pi.
void periodic_hits(double base, double l, double u, std::vector<double>& out) {
    const double k_lo = std::floor((l - base) / kTwoPi) - 1.0;
    const double k_hi = std::ceil((u - base) / kTwoPi) + 1.0;
    for (double k = k_lo; k <= k_hi; k += 1.0) {
        const double x = base + k * kTwoPi;
        if (x >= l && x <= u) {
            out.push_back(x);
        }
    }
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::vector<UnivariatePrimitive> make_builtins() {
    std::vector<UnivariatePrimitive> p;
    p.push_back({"sin", [](double x) { return std::sin(x); }, [](double x) { return std::cos(x); },
                 [](double a, double l, double u) {
                     std::vector<double> out;
                     const double r = std::acos(std::clamp(a, -1.0, 1.0));
                     periodic_hits(r, l, u, out);
                     periodic_hits(-r, l, u, out);
                     return out;
                 },
                 always});
    p.push_back({"cos", [](double x) { return std::cos(x); }, [](double x) { return -std::sin(x); },
                 [](double a, double l, double u) {
                     std::vector<double> out;
                     const double r = std::asin(std::clamp(-a, -1.0, 1.0));
                     periodic_hits(r, l, u, out);
                     periodic_hits(std::numbers::pi - r, l, u, out);
                     return out;
                 },
                 always});
    p.push_back({"tanh", [](double x) { return std::tanh(x); },
                 [](double x) {
                     const double t = std::tanh(x);
                     return 1.0 - t * t;
                 },
                 [](double a, double /*l*/, double /*u*/) {
                     std::vector<double> out;
                     if (a > 0.0 && a <= 1.0) {
                         const double t = std::sqrt(1.0 - a);
                         if (t < 1.0) {
                             out.push_back(std::atanh(t));
                             out.push_back(-std::atanh(t));
                         }
                     }
                     return out;
                 },
                 always});
    p.push_back({"sigmoid", sigmoid,
                 [](double x) {
                     const double s = sigmoid(x);
                     return s * (1.0 - s);
                 },
                 [](double a, double /*l*/, double /*u*/) {
                     std::vector<double> out;
                     const double disc = 1.0 - 4.0 * a;
                     if (a > 0.0 && disc >= 0.0) {
                         for (const double s : {0.5 * (1.0 + std::sqrt(disc)), 0.5 * (1.0 - std::sqrt(disc))}) {
                             if (s > 0.0 && s < 1.0) {
                                 out.push_back(std::log(s / (1.0 - s)));
                             }
                         }
                     }
                     return out;
                 },
                 always});
    p.push_back({"exp", [](double x) { return std::exp(x); }, [](double x) { return std::exp(x); },
                 [](double a, double /*l*/, double /*u*/) {
                     return a > 0.0 ? std::vector<double>{std::log(a)} : std::vector<double>{};
                 },
                 always});
    p.push_back({"square", [](double x) { return x * x; }, [](double x) { return 2.0 * x; },
                 [](double a, double /*l*/, double /*u*/) { return std::vector<double>{0.5 * a}; }, always});
    p.push_back({"cube", [](double x) { return x * x * x; }, [](double x) { return 3.0 * x * x; },
                 [](double a, double /*l*/, double /*u*/) {
                     if (a < 0.0) {
                         return std::vector<double>{};
                     }
                     const double r = std::sqrt(a / 3.0);
                     return std::vector<double>{r, -r};
                 },
                 always});
    p.push_back({"inv", [](double x) { return 1.0 / x; }, [](double x) { return -1.0 / (x * x); },
                 [](double a, double /*l*/, double /*u*/) {
                     if (a >= 0.0) {
                         return std::vector<double>{};
                     }
                     const double r = std::sqrt(-1.0 / a);
                     return std::vector<double>{r, -r};
                 },
                 [](double l, double u) { return l > 0.0 || u < 0.0; }});
    p.push_back({"identity", [](double x) { return x; }, [](double /*x*/) { return 1.0; },
                 [](double /*a*/, double /*l*/, double /*u*/) { return std::vector<double>{}; }, always});
    return p;
}

} // namespace

const std::vector<UnivariatePrimitive>& builtin_primitives() {
    static const std::vector<UnivariatePrimitive> prims = make_builtins();
    return prims;
}

const UnivariatePrimitive* find_primitive(std::string_view name) {
    for (const auto& p : builtin_primitives()) {
        if (p.name == name) {
            return &p;
        }
    }
    return nullptr;
}

nn::AffineTriplet univariate_triplet(const UnivariatePrimitive& prim, double l, double u) {
    if (!(l <= u) || !std::isfinite(l) || !std::isfinite(u)) {
        throw ContractError("univariate_triplet: invalid range for " + prim.name);
    }
    if (!prim.defined_on(l, u)) {
        throw AbstractionError(prim.name + " is not defined on [" + std::to_string(l) + ", " + std::to_string(u) + "]");
    }
    if (u - l < nn::kDegenerateWidth) {
        const double m = 0.5 * (l + u);
        const double hm = prim.eval(m);
        const double dev = std::max(std::abs(prim.eval(l) - hm), std::abs(prim.eval(u) - hm));
        return {0.0, hm, dev};
    }
    const double alpha = (prim.eval(u) - prim.eval(l)) / (u - l);
    std::vector<double> candidates{l, u};
    for (const double x : prim.stationary_points(alpha, l, u)) {
        if (x >= l && x <= u) {
            candidates.push_back(x);
        }
    }
    double lo_v = prim.eval(candidates.front()) - alpha * candidates.front();
    double hi_v = lo_v;
    for (const double x : candidates) {
        const double v = prim.eval(x) - alpha * x;
        hi_v = std::max(hi_v, v);
        lo_v = std::min(lo_v, v);
    }
    if (!std::isfinite(alpha) || !std::isfinite(lo_v) || !std::isfinite(hi_v)) {
        throw AbstractionError(prim.name + ": non-finite cover on [" + std::to_string(l) + ", " + std::to_string(u) +
                               "]");
    }
    return {alpha, 0.5 * (lo_v + hi_v), 0.5 * (hi_v - lo_v)};
}

namespace {

SZonotope apply_triplet(const SZonotope& Z, const nn::AffineTriplet& t, SymbolProvider& symbols) {
    SZonotope out = t.alpha * Z;
    out += Eigen::VectorXd::Constant(1, t.beta);
    return add(out, SZonotope(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Constant(1, 1, t.gamma),
                              {symbols.fresh_id()}));
}

} // namespace

SZonotope abstract_univariate(const UnivariatePrimitive& prim, const SZonotope& Z, SymbolProvider& symbols) {
    if (Z.dim() != 1) {
        throw DimensionError("abstract_univariate: operand must be one-dimensional");
    }
    const Interval b = bounds_1d(Z);
    return apply_triplet(Z, univariate_triplet(prim, b.lo, b.hi), symbols);
}

// -----------------------------------------------------------------------------
// Expressions
// -----------------------------------------------------------------------------

namespace {

ExprPtr make(auto node) { return std::make_shared<const Expr>(Expr{std::move(node)}); }

const double* as_constant(const ExprPtr& e) {
    if (const auto* c = std::get_if<Constant>(&e->node)) {
        return &c->value;
    }
    return nullptr;
}

void require(const ExprPtr& e) {
    if (!e) {
        throw ContractError("expression: null operand");
    }
}

} // namespace

ExprPtr state(std::size_t i) { return make(Var{VarKind::state, i}); }
ExprPtr input(std::size_t i) { return make(Var{VarKind::input, i}); }
ExprPtr disturbance(std::size_t i) { return make(Var{VarKind::disturbance, i}); }
ExprPtr constant(double v) { return make(Constant{v}); }

ExprPtr operator+(ExprPtr a, ExprPtr b) {
    require(a);
    require(b);
    const double* ca = as_constant(a);
    const double* cb = as_constant(b);
    if (ca && cb) {
        return constant(*ca + *cb);
    }
    return make(Sum{std::move(a), std::move(b)});
}

ExprPtr operator-(ExprPtr a, ExprPtr b) {
    require(a);
    require(b);
    const double* ca = as_constant(a);
    const double* cb = as_constant(b);
    if (ca && cb) {
        return constant(*ca - *cb);
    }
    return make(Difference{std::move(a), std::move(b)});
}

ExprPtr operator-(ExprPtr a) { return -1.0 * std::move(a); }

ExprPtr operator*(double a, ExprPtr b) {
    require(b);
    if (const double* cb = as_constant(b)) {
        return constant(a * *cb);
    }
    if (const auto* s = std::get_if<Scale>(&b->node)) {
        return make(Scale{a * s->factor, s->child});
    }
    return make(Scale{a, std::move(b)});
}

ExprPtr operator*(ExprPtr a, ExprPtr b) {
    require(a);
    require(b);
    if (const double* ca = as_constant(a)) {
        return *ca * std::move(b);
    }
    if (const double* cb = as_constant(b)) {
        return *cb * std::move(a);
    }
    return make(Product{std::move(a), std::move(b)});
}

ExprPtr apply(const UnivariatePrimitive& prim, ExprPtr child) {
    require(child);
    if (const double* c = as_constant(child)) {
        return constant(prim.eval(*c));
    }
    return make(Apply{&prim, std::move(child)});
}

ExprPtr apply(std::string_view prim, ExprPtr child) {
    const UnivariatePrimitive* p = find_primitive(prim);
    if (p == nullptr) {
        throw ConfigError("unknown function '" + std::string(prim) + "'");
    }
    return apply(*p, std::move(child));
}

std::string to_string(const Expr& e) {
    struct Printer {
        std::string operator()(const Var& v) const {
            const char tag = v.kind == VarKind::state ? 'x' : (v.kind == VarKind::input ? 'u' : 'w');
            return tag + std::to_string(v.index + 1);
        }
        std::string operator()(const Constant& c) const {
            std::ostringstream os;
            os << c.value;
            return os.str();
        }
        std::string operator()(const Sum& s) const { return "(" + to_string(*s.lhs) + " + " + to_string(*s.rhs) + ")"; }
        std::string operator()(const Difference& s) const {
            return "(" + to_string(*s.lhs) + " - " + to_string(*s.rhs) + ")";
        }
        std::string operator()(const Scale& s) const {
            std::ostringstream os;
            os << s.factor;
            return os.str() + "*" + to_string(*s.child);
        }
        std::string operator()(const Product& p) const {
            return "(" + to_string(*p.lhs) + " * " + to_string(*p.rhs) + ")";
        }
        std::string operator()(const Apply& a) const { return a.prim->name + "(" + to_string(*a.child) + ")"; }
    };
    return std::visit(Printer{}, e.node);
}

namespace {

void check_indices(const Expr& e, const Dynamics& f) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Var>) {
                const std::size_t limit = n.kind == VarKind::state ? f.n_x : (n.kind == VarKind::input ? f.n_u : f.n_w);
                if (n.index >= limit) {
                    throw ConfigError("dynamics: variable " + to_string(e) + " out of range");
                }
            } else if constexpr (std::is_same_v<T, Scale> || std::is_same_v<T, Apply>) {
                check_indices(*n.child, f);
            } else if constexpr (std::is_same_v<T, Sum> || std::is_same_v<T, Difference> ||
                                 std::is_same_v<T, Product>) {
                check_indices(*n.lhs, f);
                check_indices(*n.rhs, f);
            }
        },
        e.node);
}

} // namespace

void Dynamics::validate() const {
    if (next_state.size() != n_x) {
        throw ConfigError("dynamics: expected " + std::to_string(n_x) + " state equations, got " +
                          std::to_string(next_state.size()));
    }
    for (const auto& e : next_state) {
        if (!e) {
            throw ConfigError("dynamics: missing equation");
        }
        check_indices(*e, *this);
    }
}

double evaluate(const Expr& e, const Eigen::VectorXd& x, const Eigen::VectorXd& u, const Eigen::VectorXd& w) {
    return std::visit(
        [&](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Var>) {
                const Eigen::VectorXd& v = n.kind == VarKind::state ? x : (n.kind == VarKind::input ? u : w);
                return v(static_cast<Eigen::Index>(n.index));
            } else if constexpr (std::is_same_v<T, Constant>) {
                return n.value;
            } else if constexpr (std::is_same_v<T, Sum>) {
                return evaluate(*n.lhs, x, u, w) + evaluate(*n.rhs, x, u, w);
            } else if constexpr (std::is_same_v<T, Difference>) {
                return evaluate(*n.lhs, x, u, w) - evaluate(*n.rhs, x, u, w);
            } else if constexpr (std::is_same_v<T, Scale>) {
                return n.factor * evaluate(*n.child, x, u, w);
            } else if constexpr (std::is_same_v<T, Product>) {
                return evaluate(*n.lhs, x, u, w) * evaluate(*n.rhs, x, u, w);
            } else {
                return n.prim->eval(evaluate(*n.child, x, u, w));
            }
        },
        e.node);
}

Eigen::VectorXd evaluate(const Dynamics& f, const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                         const Eigen::VectorXd& w) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(f.next_state.size()));
    for (std::size_t i = 0; i < f.next_state.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = evaluate(*f.next_state[i], x, u, w);
    }
    return out;
}

// -----------------------------------------------------------------------------
// Symbolic evaluation
// -----------------------------------------------------------------------------

SZonotope DisturbanceSymbols::component(std::size_t i) {
    if (i >= spec_.size()) {
        throw DimensionError("disturbance index out of range");
    }
    if (!w_) {
        const auto n = static_cast<Eigen::Index>(spec_.size());
        Eigen::VectorXd amp(n);
        for (Eigen::Index k = 0; k < n; ++k) {
            amp(k) = std::abs(spec_.amplitudes[static_cast<std::size_t>(k)]);
        }
        w_ = SZonotope::from_box(-amp, amp, symbols_);
        ids_ = w_->ids();
    }
    return w_->row(static_cast<Eigen::Index>(i));
}

SZonotope eval_szono(const Expr& e, const SZonotope& X, const SZonotope& U, DisturbanceSymbols& W,
                     SymbolProvider& symbols) {
    return std::visit(
        [&](const auto& n) -> SZonotope {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Var>) {
                const auto i = static_cast<Eigen::Index>(n.index);
                if (n.kind == VarKind::state) {
                    return X.row(i);
                }
                if (n.kind == VarKind::input) {
                    return U.row(i);
                }
                return W.component(n.index);
            } else if constexpr (std::is_same_v<T, Constant>) {
                return SZonotope::point(Eigen::VectorXd::Constant(1, n.value));
            } else if constexpr (std::is_same_v<T, Sum>) {
                SZonotope a = eval_szono(*n.lhs, X, U, W, symbols);
                return add(a, eval_szono(*n.rhs, X, U, W, symbols));
            } else if constexpr (std::is_same_v<T, Difference>) {
                SZonotope a = eval_szono(*n.lhs, X, U, W, symbols);
                return subtract(a, eval_szono(*n.rhs, X, U, W, symbols));
            } else if constexpr (std::is_same_v<T, Scale>) {
                return n.factor * eval_szono(*n.child, X, U, W, symbols);
            } else if constexpr (std::is_same_v<T, Product>) {
                SZonotope a = eval_szono(*n.lhs, X, U, W, symbols);
                SZonotope b = eval_szono(*n.rhs, X, U, W, symbols);
                return multiply(a, b, symbols);
            } else {
                return abstract_univariate(*n.prim, eval_szono(*n.child, X, U, W, symbols), symbols);
            }
        },
        e.node);
}

StepOutput step_szono(const Dynamics& f, const SZonotope& X, const SZonotope& U, const DisturbanceSpec& w,
                      SymbolProvider& symbols) {
    DisturbanceSymbols W(w, symbols);
    std::vector<SZonotope> parts;
    parts.reserve(f.next_state.size());
    for (const auto& e : f.next_state) {
        parts.push_back(eval_szono(*e, X, U, W, symbols));
    }
    return {vcat(parts), W.ids()};
}

SPolynotope eval_spoly(const Expr& e, const SPolynotope& X, const SPolynotope& U, DisturbanceSymbols& W,
                       SymbolProvider& symbols, int refine_depth) {
    return std::visit(
        [&](const auto& n) -> SPolynotope {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Var>) {
                const auto i = static_cast<Eigen::Index>(n.index);
                if (n.kind == VarKind::state) {
                    return X.row(i);
                }
                if (n.kind == VarKind::input) {
                    return U.row(i);
                }
                return SPolynotope::from_szonotope(W.component(n.index));
            } else if constexpr (std::is_same_v<T, Constant>) {
                return SPolynotope::point(Eigen::VectorXd::Constant(1, n.value));
            } else if constexpr (std::is_same_v<T, Sum>) {
                SPolynotope a = eval_spoly(*n.lhs, X, U, W, symbols, refine_depth);
                return add(a, eval_spoly(*n.rhs, X, U, W, symbols, refine_depth));
            } else if constexpr (std::is_same_v<T, Difference>) {
                SPolynotope a = eval_spoly(*n.lhs, X, U, W, symbols, refine_depth);
                return subtract(a, eval_spoly(*n.rhs, X, U, W, symbols, refine_depth));
            } else if constexpr (std::is_same_v<T, Scale>) {
                return n.factor * eval_spoly(*n.child, X, U, W, symbols, refine_depth);
            } else if constexpr (std::is_same_v<T, Product>) {
                SPolynotope a = eval_spoly(*n.lhs, X, U, W, symbols, refine_depth);
                return multiply(a, eval_spoly(*n.rhs, X, U, W, symbols, refine_depth));
            } else {
                const SPolynotope z = eval_spoly(*n.child, X, U, W, symbols, refine_depth);
                const Interval b = refine_bound(z, refine_depth);
                const nn::AffineTriplet t = univariate_triplet(*n.prim, b.lo, b.hi);
                SPolynotope out = t.alpha * z;
                out += Eigen::VectorXd::Constant(1, t.beta);
                const SPolynotope err(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Constant(1, 1, t.gamma),
                                      {symbols.fresh_id()}, Eigen::MatrixXi::Ones(1, 1));
                return add(out, err);
            }
        },
        e.node);
}

PolyStepOutput step_spoly(const Dynamics& f, const SPolynotope& X, const SPolynotope& U, const DisturbanceSpec& w,
                          SymbolProvider& symbols, int refine_depth) {
    DisturbanceSymbols W(w, symbols);
    std::vector<SPolynotope> parts;
    parts.reserve(f.next_state.size());
    for (const auto& e : f.next_state) {
        parts.push_back(eval_spoly(*e, X, U, W, symbols, refine_depth));
    }
    return {vcat(parts), W.ids()};
}

} // namespace symreach::plant
