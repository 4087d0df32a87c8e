// Copyright (c) symreach contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "symreach/nn.hpp"
#include "symreach/spolynotope.hpp"
#include "symreach/symbols.hpp"
#include "symreach/szonotope.hpp"

namespace symreach::plant {

/// A C^1 scalar function together with an exhaustive enumerator of the
/// solutions of h'(x) = alpha on [l, u]. Missing a solution would make the
/// abstraction unsound, so every primitive ships a closed form.
struct UnivariatePrimitive {
    std::string name;
    std::function<double(double)> eval;
    std::function<double(double)> derivative;
    std::function<std::vector<double>(double alpha, double l, double u)> stationary_points;
    /// Whether the function is defined and C^1 on [l, u].
    std::function<bool(double l, double u)> defined_on;
};

const std::vector<UnivariatePrimitive>& builtin_primitives();
/// nullptr when unknown.
const UnivariatePrimitive* find_primitive(std::string_view name);

/// Secant-slope affine cover of h on [l, u] (alpha = secant slope, beta and
/// gamma from the extrema of h(x) - alpha x over stationary points and ends).
nn::AffineTriplet univariate_triplet(const UnivariatePrimitive& prim, double l, double u);

SZonotope abstract_univariate(const UnivariatePrimitive& prim, const SZonotope& Z, SymbolProvider& symbols);

// -----------------------------------------------------------------------------
// Expressions
// -----------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class VarKind { state, input, disturbance };

struct Var {
    VarKind kind;
    std::size_t index; // zero based
};
struct Constant {
    double value;
};
struct Sum {
    ExprPtr lhs, rhs;
};
struct Difference {
    ExprPtr lhs, rhs;
};
struct Scale {
    double factor;
    ExprPtr child;
};
struct Product {
    ExprPtr lhs, rhs;
};
struct Apply {
    const UnivariatePrimitive* prim;
    ExprPtr child;
};

struct Expr {
    std::variant<Var, Constant, Sum, Difference, Scale, Product, Apply> node;
};

ExprPtr state(std::size_t i);
ExprPtr input(std::size_t i);
ExprPtr disturbance(std::size_t i);
ExprPtr constant(double v);
/// The builders fold constants and turn products with a constant into scalings.
ExprPtr operator+(ExprPtr a, ExprPtr b);
ExprPtr operator-(ExprPtr a, ExprPtr b);
ExprPtr operator-(ExprPtr a);
ExprPtr operator*(ExprPtr a, ExprPtr b);
ExprPtr operator*(double a, ExprPtr b);
ExprPtr apply(const UnivariatePrimitive& prim, ExprPtr child);
/// Throws ConfigError for unknown primitive names.
ExprPtr apply(std::string_view prim, ExprPtr child);

std::string to_string(const Expr& e);

struct DisturbanceSpec {
    /// w_k ranges over amplitude_k * [-1, 1].
    std::vector<double> amplitudes;

    [[nodiscard]] std::size_t size() const { return amplitudes.size(); }
};

/// Discrete-time dynamics x+ = f(x, u, w), one expression per state component.
struct Dynamics {
    std::size_t n_x{};
    std::size_t n_u{};
    std::size_t n_w{};
    std::vector<ExprPtr> next_state;

    /// Throws ConfigError if a variable index is out of range or a component is missing.
    void validate() const;
};

double evaluate(const Expr& e, const Eigen::VectorXd& x, const Eigen::VectorXd& u, const Eigen::VectorXd& w);
Eigen::VectorXd evaluate(const Dynamics& f, const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                         const Eigen::VectorXd& w);

/// Disturbance symbols of one time step, created on first use so that every
/// step gets independent symbols shared by all state components.
class DisturbanceSymbols {
  public:
    DisturbanceSymbols(const DisturbanceSpec& spec, SymbolProvider& symbols) : spec_(spec), symbols_(symbols) {}

    SZonotope component(std::size_t i);
    /// Ids created so far (empty before first use).
    [[nodiscard]] const IdVector& ids() const { return ids_; }

  private:
    const DisturbanceSpec& spec_;
    SymbolProvider& symbols_;
    std::optional<SZonotope> w_;
    IdVector ids_;
};

SZonotope eval_szono(const Expr& e, const SZonotope& X, const SZonotope& U, DisturbanceSymbols& W,
                     SymbolProvider& symbols);

struct StepOutput {
    SZonotope next;
    IdVector disturbance_ids;
};
StepOutput step_szono(const Dynamics& f, const SZonotope& X, const SZonotope& U, const DisturbanceSpec& w,
                      SymbolProvider& symbols);

/// Polynomial nodes are exact; univariate nodes get the affine cover over
/// refine_bound(child, refine_depth).
SPolynotope eval_spoly(const Expr& e, const SPolynotope& X, const SPolynotope& U, DisturbanceSymbols& W,
                       SymbolProvider& symbols, int refine_depth = 2);

struct PolyStepOutput {
    SPolynotope next;
    IdVector disturbance_ids;
};
PolyStepOutput step_spoly(const Dynamics& f, const SPolynotope& X, const SPolynotope& U, const DisturbanceSpec& w,
                          SymbolProvider& symbols, int refine_depth = 2);

} // namespace symreach::plant
