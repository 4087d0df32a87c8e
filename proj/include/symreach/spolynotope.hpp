// Copyright (c) symreach contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <span>
#include <utility>
#include <vector>

#include "symreach/symbols.hpp"
#include "symreach/szonotope.hpp"

namespace symreach {

/// Sparse exponent signature of one monomial: (symbol, exponent > 0), sorted by symbol.
using Monomial = std::vector<std::pair<SymbolId, int>>;

/// Polynomial symbolic set c + R s_I^E over unit-interval symbols.
///
/// Canonical form: no two columns share an exponent signature, no column is
/// the constant monomial, no coefficient column is identically zero and
/// every listed symbol occurs in some monomial. All operations return
/// canonical values.
class SPolynotope {
  public:
    SPolynotope() = default;
    /// Canonicalizes its input.
    SPolynotope(Eigen::VectorXd center, const Eigen::MatrixXd& generators, const IdVector& ids,
                const Eigen::MatrixXi& exponents);

    static SPolynotope point(Eigen::VectorXd center);
    static SPolynotope from_szonotope(const SZonotope& X);

    [[nodiscard]] Eigen::Index dim() const { return center_.size(); }
    [[nodiscard]] Eigen::Index num_monomials() const { return generators_.cols(); }
    [[nodiscard]] const Eigen::VectorXd& center() const { return center_; }
    [[nodiscard]] const Eigen::MatrixXd& generators() const { return generators_; }
    [[nodiscard]] const IdVector& ids() const { return ids_; }
    [[nodiscard]] const Eigen::MatrixXi& exponents() const { return exponents_; }

    [[nodiscard]] Monomial monomial(Eigen::Index col) const;
    [[nodiscard]] int degree(Eigen::Index col) const;
    [[nodiscard]] int max_degree() const;
    /// Coefficient column of a monomial (zero if absent).
    [[nodiscard]] Eigen::VectorXd coefficient(const Monomial& m) const;

    [[nodiscard]] SPolynotope row(Eigen::Index i) const;
    /// Evaluate for a valuation of ids() (in that order).
    [[nodiscard]] Eigen::VectorXd evaluate(const Eigen::VectorXd& valuation) const;

    /// Exact conversion; throws if some monomial has degree above one.
    [[nodiscard]] SZonotope to_szonotope() const;

    SPolynotope operator-() const;
    SPolynotope& operator+=(const Eigen::VectorXd& shift);
    SPolynotope& operator*=(double factor);

    friend bool operator==(const SPolynotope& a, const SPolynotope& b);

  private:
    friend class TermAccumulator;
    Eigen::VectorXd center_;
    Eigen::MatrixXd generators_;
    IdVector ids_;
    Eigen::MatrixXi exponents_;
};

SPolynotope linear_image(const Eigen::MatrixXd& M, const SPolynotope& P);
SPolynotope add(const SPolynotope& P, const SPolynotope& Q);
SPolynotope subtract(const SPolynotope& P, const SPolynotope& Q);
SPolynotope vcat(const SPolynotope& P, const SPolynotope& Q);
SPolynotope vcat(std::span<const SPolynotope> parts);
/// Exact product of two 1-D polynotopes.
SPolynotope multiply(const SPolynotope& P, const SPolynotope& Q);
/// Exact m-th power of a 1-D polynotope, m >= 1.
SPolynotope pow(const SPolynotope& P, int m);

inline SPolynotope operator+(const SPolynotope& P, const SPolynotope& Q) { return add(P, Q); }
inline SPolynotope operator-(const SPolynotope& P, const SPolynotope& Q) { return subtract(P, Q); }
inline SPolynotope operator*(const Eigen::MatrixXd& M, const SPolynotope& P) { return linear_image(M, P); }
SPolynotope operator*(double a, const SPolynotope& P);

/// Natural interval extension of a 1-D polynotope. A monomial ranges over
/// [0, 1] when all its exponents are even, over [-1, 1] otherwise.
Interval interval_bound(const SPolynotope& P);
std::vector<Interval> interval_hull(const SPolynotope& P, int depth = 0);

/// Branch-and-bound refinement of interval_bound: the symbol domain box is
/// bisected `depth` times along the most influential symbol. The result
/// encloses the exact range and is never wider than interval_bound.
Interval refine_bound(const SPolynotope& P, int depth);

/// Upper bound of h^T x over the set, via refine_bound of the projection.
double support_bound(const Eigen::VectorXd& h, const SPolynotope& P, int depth = 0);

/// Keep the `budget` monomials of degree <= max_degree with the largest
/// coefficient 2-norm; enclose every other monomial in a center shift plus
/// one fresh independent symbol per dimension.
SPolynotope reduce_monomials(const SPolynotope& P, std::size_t budget, int max_degree, SymbolProvider& symbols);

} // namespace symreach
