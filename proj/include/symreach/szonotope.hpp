// Copyright (c) symreach contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <span>
#include <utility>
#include <vector>

#include "symreach/symbols.hpp"

namespace symreach {

struct Interval {
    double lo{};
    double hi{};

    [[nodiscard]] double width() const { return hi - lo; }
    [[nodiscard]] double mid() const { return 0.5 * (lo + hi); }
    [[nodiscard]] double radius() const { return 0.5 * (hi - lo); }
    [[nodiscard]] bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
    [[nodiscard]] bool contains(const Interval& o) const { return o.lo >= lo && o.hi <= hi; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// {x : H x <= r}. A polyhedron with no rows is the whole space.
struct Polyhedron {
    Eigen::MatrixXd H;
    Eigen::VectorXd r;

    Polyhedron() = default;
    Polyhedron(Eigen::MatrixXd h, Eigen::VectorXd rhs);

    [[nodiscard]] Eigen::Index rows() const { return H.rows(); }
    [[nodiscard]] Eigen::Index dim() const { return H.cols(); }
    [[nodiscard]] bool contains(const Eigen::VectorXd& x, double tol = 0.0) const;

    /// Axis-aligned box lo <= x <= hi as 2n half-spaces.
    static Polyhedron box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);
    static Polyhedron whole_space(Eigen::Index dim);
};

/// Affine symbolic set c + R s_I over unit-interval symbols.
///
/// Column k of R multiplies symbol ids[k]; ids are pairwise distinct. All
/// operations are pure; the ones that introduce new independent symbols take
/// the session's SymbolProvider.
class SZonotope {
  public:
    SZonotope() = default;
    SZonotope(Eigen::VectorXd center, Eigen::MatrixXd generators, IdVector ids);

    /// Same as the constructor but sums columns carrying the same id.
    static SZonotope canonical(Eigen::VectorXd center, const Eigen::MatrixXd& generators, std::span<const SymbolId> ids);
    static SZonotope point(Eigen::VectorXd center);
    /// Box [lo, hi] with one fresh symbol per dimension.
    static SZonotope from_box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, SymbolProvider& symbols);

    [[nodiscard]] Eigen::Index dim() const { return center_.size(); }
    [[nodiscard]] Eigen::Index num_symbols() const { return generators_.cols(); }
    [[nodiscard]] const Eigen::VectorXd& center() const { return center_; }
    [[nodiscard]] const Eigen::MatrixXd& generators() const { return generators_; }
    [[nodiscard]] const IdVector& ids() const { return ids_; }

    /// Column position of a symbol, or -1.
    [[nodiscard]] Eigen::Index column_of(SymbolId id) const;
    /// Generator column of a symbol (zero if the symbol is absent).
    [[nodiscard]] Eigen::VectorXd column(SymbolId id) const;

    /// Projection onto one dimension.
    [[nodiscard]] SZonotope row(Eigen::Index i) const;

    /// Evaluate c + R sigma for a valuation of the symbols in ids() order.
    [[nodiscard]] Eigen::VectorXd evaluate(const Eigen::VectorXd& valuation) const;

    /// Same set rewritten over `ids`, which must contain every id of *this.
    [[nodiscard]] SZonotope expand_to(const IdVector& ids) const;

    SZonotope operator-() const;
    SZonotope& operator+=(const Eigen::VectorXd& shift);
    SZonotope& operator*=(double factor);

  private:
    Eigen::VectorXd center_;
    Eigen::MatrixXd generators_;
    IdVector ids_;
};

SZonotope linear_image(const Eigen::MatrixXd& M, const SZonotope& X);
SZonotope add(const SZonotope& X, const SZonotope& Y);
SZonotope subtract(const SZonotope& X, const SZonotope& Y);
SZonotope vcat(const SZonotope& X, const SZonotope& Y);
SZonotope vcat(std::span<const SZonotope> parts);

inline SZonotope operator+(const SZonotope& X, const SZonotope& Y) { return add(X, Y); }
inline SZonotope operator-(const SZonotope& X, const SZonotope& Y) { return subtract(X, Y); }
inline SZonotope operator*(const Eigen::MatrixXd& M, const SZonotope& X) { return linear_image(M, X); }
SZonotope operator*(double a, const SZonotope& X);

/// Exact range of a one-dimensional s-zonotope: c -/+ ||R||_1.
Interval bounds_1d(const SZonotope& Z);
std::vector<Interval> interval_hull(const SZonotope& X);

/// Inclusion-preserving product of two 1-D s-zonotopes; one fresh symbol
/// carries the second-order remainder.
SZonotope multiply(const SZonotope& X, const SZonotope& Y, SymbolProvider& symbols);

/// Enclose X in a set over at most q symbols. Symbols in `keep` are never
/// removed; the least significant others (by 2-norm of their generator) are
/// replaced by an axis-aligned box on fresh symbols.
SZonotope reduce(const SZonotope& X, std::size_t q, std::span<const SymbolId> keep, SymbolProvider& symbols);

/// sup over the set of h^T x.
double support(const Eigen::VectorXd& h, const SZonotope& X);

/// Sufficient test for an empty intersection with the polyhedron.
bool disjoint_from(const SZonotope& X, const Polyhedron& A);
/// Exact inclusion test in the polyhedron.
bool contained_in(const SZonotope& X, const Polyhedron& G);

/// Split symbol `id` into its upper half (s -> 0.5 + 0.5 s_j) and lower half
/// (s -> -0.5 + 0.5 s_k).
std::pair<SZonotope, SZonotope> bisect_symbol(const SZonotope& X, SymbolId id, SymbolProvider& symbols);

/// Frobenius norm of a generator matrix.
double f_radius(const Eigen::MatrixXd& M);

/// Columns of X that multiply symbols in `ids`, in `ids` order; absent symbols give zero columns.
Eigen::MatrixXd columns_of(const SZonotope& X, std::span<const SymbolId> ids);
/// Columns of X whose symbols are not in `ids`.
Eigen::MatrixXd columns_excluding(const SZonotope& X, std::span<const SymbolId> ids);

} // namespace symreach
