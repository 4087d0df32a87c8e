// Copyright (c) symreach contributors.
// SPDX-License-Identifier: Apache-2.0
#include "symreach/szonotope.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "symreach/error.hpp"

namespace symreach {

namespace {

void require_same_dim(const SZonotope& X, const SZonotope& Y, const char* op) {
    if (X.dim() != Y.dim()) {
        throw DimensionError(std::string(op) + ": dimension mismatch (" + std::to_string(X.dim()) + " vs " +
                             std::to_string(Y.dim()) + ")");
    }
}

void require_1d(const SZonotope& X, const char* op) {
    if (X.dim() != 1) {
        throw DimensionError(std::string(op) + ": expected a one-dimensional s-zonotope");
    }
}

} // namespace

// -----------------------------------------------------------------------------
// Polyhedron
// -----------------------------------------------------------------------------

Polyhedron::Polyhedron(Eigen::MatrixXd h, Eigen::VectorXd rhs) : H(std::move(h)), r(std::move(rhs)) {
    if (H.rows() != r.size()) {
        throw DimensionError("polyhedron: H has " + std::to_string(H.rows()) + " rows but r has " +
                             std::to_string(r.size()) + " entries");
    }
}

bool Polyhedron::contains(const Eigen::VectorXd& x, double tol) const {
    return rows() == 0 || ((H * x - r).array() <= tol).all();
}

Polyhedron Polyhedron::box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
    if (lo.size() != hi.size()) {
        throw DimensionError("polyhedron box: bound sizes differ");
    }
    const Eigen::Index n = lo.size();
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2 * n, n);
    Eigen::VectorXd r(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        H(2 * i, i) = 1.0;
        r(2 * i) = hi(i);
        H(2 * i + 1, i) = -1.0;
        r(2 * i + 1) = -lo(i);
    }
    return {std::move(H), std::move(r)};
}

Polyhedron Polyhedron::whole_space(Eigen::Index dim) { return {Eigen::MatrixXd::Zero(0, dim), Eigen::VectorXd(0)}; }

// -----------------------------------------------------------------------------
// SZonotope
// -----------------------------------------------------------------------------

SZonotope::SZonotope(Eigen::VectorXd center, Eigen::MatrixXd generators, IdVector ids)
    : center_(std::move(center)), generators_(std::move(generators)), ids_(std::move(ids)) {
    if (generators_.cols() == 0 && generators_.rows() == 0) {
        generators_.resize(center_.size(), 0);
    }
    if (generators_.rows() != center_.size()) {
        throw DimensionError("s-zonotope: generator rows (" + std::to_string(generators_.rows()) +
                             ") differ from center size (" + std::to_string(center_.size()) + ")");
    }
    if (static_cast<std::size_t>(generators_.cols()) != ids_.size()) {
        throw DimensionError("s-zonotope: " + std::to_string(generators_.cols()) + " generator columns but " +
                             std::to_string(ids_.size()) + " identifiers");
    }
    if (!all_distinct(ids_)) {
        throw ContractError("s-zonotope: duplicate symbol identifiers");
    }
}

SZonotope SZonotope::canonical(Eigen::VectorXd center, const Eigen::MatrixXd& generators,
                               std::span<const SymbolId> ids) {
    if (static_cast<std::size_t>(generators.cols()) != ids.size()) {
        throw DimensionError("s-zonotope: generator/identifier count mismatch");
    }
    std::unordered_map<SymbolId, Eigen::Index> pos;
    IdVector out_ids;
    std::vector<Eigen::Index> target(ids.size());
    for (std::size_t k = 0; k < ids.size(); ++k) {
        auto [it, inserted] = pos.emplace(ids[k], static_cast<Eigen::Index>(out_ids.size()));
        if (inserted) {
            out_ids.push_back(ids[k]);
        }
        target[k] = it->second;
    }
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(center.size(), static_cast<Eigen::Index>(out_ids.size()));
    for (std::size_t k = 0; k < ids.size(); ++k) {
        R.col(target[k]) += generators.col(static_cast<Eigen::Index>(k));
    }
    return {std::move(center), std::move(R), std::move(out_ids)};
}

SZonotope SZonotope::point(Eigen::VectorXd center) {
    const Eigen::Index n = center.size();
    return {std::move(center), Eigen::MatrixXd(n, 0), {}};
}

SZonotope SZonotope::from_box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, SymbolProvider& symbols) {
    if (lo.size() != hi.size()) {
        throw DimensionError("box: bound sizes differ");
    }
    if ((lo.array() > hi.array()).any()) {
        throw ContractError("box: lower bound above upper bound");
    }
    const Eigen::Index n = lo.size();
    std::vector<Eigen::Index> wide;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (hi(i) > lo(i)) {
            wide.push_back(i);
        }
    }
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(wide.size()));
    for (std::size_t k = 0; k < wide.size(); ++k) {
        R(wide[k], static_cast<Eigen::Index>(k)) = 0.5 * (hi(wide[k]) - lo(wide[k]));
    }
    return {0.5 * (lo + hi), std::move(R), symbols.fresh_ids(wide.size())};
}

Eigen::Index SZonotope::column_of(SymbolId id) const {
    auto it = std::ranges::find(ids_, id);
    return it == ids_.end() ? -1 : static_cast<Eigen::Index>(it - ids_.begin());
}

Eigen::VectorXd SZonotope::column(SymbolId id) const {
    const Eigen::Index k = column_of(id);
    return k < 0 ? Eigen::VectorXd::Zero(dim()) : Eigen::VectorXd(generators_.col(k));
}

SZonotope SZonotope::row(Eigen::Index i) const {
    if (i < 0 || i >= dim()) {
        throw DimensionError("s-zonotope: row index out of range");
    }
    return {center_.segment(i, 1), generators_.row(i), ids_};
}

Eigen::VectorXd SZonotope::evaluate(const Eigen::VectorXd& valuation) const {
    if (valuation.size() != num_symbols()) {
        throw DimensionError("s-zonotope: valuation size mismatch");
    }
    return center_ + generators_ * valuation;
}

SZonotope SZonotope::expand_to(const IdVector& ids) const {
    std::unordered_map<SymbolId, Eigen::Index> pos;
    for (std::size_t k = 0; k < ids.size(); ++k) {
        pos.emplace(ids[k], static_cast<Eigen::Index>(k));
    }
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(dim(), static_cast<Eigen::Index>(ids.size()));
    for (std::size_t k = 0; k < ids_.size(); ++k) {
        auto it = pos.find(ids_[k]);
        if (it == pos.end()) {
            throw ContractError("s-zonotope: expand_to target misses a symbol");
        }
        R.col(it->second) = generators_.col(static_cast<Eigen::Index>(k));
    }
    return {center_, std::move(R), ids};
}

SZonotope SZonotope::operator-() const { return {-center_, -generators_, ids_}; }

SZonotope& SZonotope::operator+=(const Eigen::VectorXd& shift) {
    if (shift.size() != dim()) {
        throw DimensionError("s-zonotope: shift size mismatch");
    }
    center_ += shift;
    return *this;
}

SZonotope& SZonotope::operator*=(double factor) {
    center_ *= factor;
    generators_ *= factor;
    return *this;
}

// -----------------------------------------------------------------------------
// Algebra
// -----------------------------------------------------------------------------

SZonotope linear_image(const Eigen::MatrixXd& M, const SZonotope& X) {
    if (M.cols() != X.dim()) {
        throw DimensionError("linear_image: matrix has " + std::to_string(M.cols()) + " columns, set has dimension " +
                             std::to_string(X.dim()));
    }
    return {M * X.center(), M * X.generators(), X.ids()};
}

SZonotope operator*(double a, const SZonotope& X) {
    SZonotope out = X;
    out *= a;
    return out;
}

SZonotope add(const SZonotope& X, const SZonotope& Y) {
    require_same_dim(X, Y, "add");
    const Alignment a = align(X.ids(), Y.ids());
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(X.dim(), static_cast<Eigen::Index>(a.ids.size()));
    for (std::size_t k = 0; k < a.left_pos.size(); ++k) {
        R.col(static_cast<Eigen::Index>(a.left_pos[k])) += X.generators().col(static_cast<Eigen::Index>(k));
    }
    for (std::size_t k = 0; k < a.right_pos.size(); ++k) {
        R.col(static_cast<Eigen::Index>(a.right_pos[k])) += Y.generators().col(static_cast<Eigen::Index>(k));
    }
    return {X.center() + Y.center(), std::move(R), a.ids};
}

SZonotope subtract(const SZonotope& X, const SZonotope& Y) { return add(X, -Y); }

SZonotope vcat(const SZonotope& X, const SZonotope& Y) {
    const Alignment a = align(X.ids(), Y.ids());
    const Eigen::Index nx = X.dim();
    const Eigen::Index ny = Y.dim();
    Eigen::VectorXd c(nx + ny);
    c << X.center(), Y.center();
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(nx + ny, static_cast<Eigen::Index>(a.ids.size()));
    for (std::size_t k = 0; k < a.left_pos.size(); ++k) {
        R.col(static_cast<Eigen::Index>(a.left_pos[k])).head(nx) = X.generators().col(static_cast<Eigen::Index>(k));
    }
    for (std::size_t k = 0; k < a.right_pos.size(); ++k) {
        R.col(static_cast<Eigen::Index>(a.right_pos[k])).tail(ny) = Y.generators().col(static_cast<Eigen::Index>(k));
    }
    return {std::move(c), std::move(R), a.ids};
}

SZonotope vcat(std::span<const SZonotope> parts) {
    if (parts.empty()) {
        return SZonotope::point(Eigen::VectorXd(0));
    }
    // Gather the union of ids once instead of re-aligning pairwise.
    IdVector ids;
    std::unordered_map<SymbolId, Eigen::Index> pos;
    Eigen::Index n = 0;
    for (const auto& P : parts) {
        n += P.dim();
        for (auto id : P.ids()) {
            if (pos.emplace(id, static_cast<Eigen::Index>(ids.size())).second) {
                ids.push_back(id);
            }
        }
    }
    Eigen::VectorXd c(n);
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(ids.size()));
    Eigen::Index row = 0;
    for (const auto& P : parts) {
        c.segment(row, P.dim()) = P.center();
        for (std::size_t k = 0; k < P.ids().size(); ++k) {
            R.block(row, pos[P.ids()[k]], P.dim(), 1) = P.generators().col(static_cast<Eigen::Index>(k));
        }
        row += P.dim();
    }
    return {std::move(c), std::move(R), std::move(ids)};
}

Interval bounds_1d(const SZonotope& Z) {
    require_1d(Z, "bounds_1d");
    const double c = Z.center()(0);
    const double rad = Z.generators().row(0).lpNorm<1>();
    return {c - rad, c + rad};
}

std::vector<Interval> interval_hull(const SZonotope& X) {
    std::vector<Interval> out;
    out.reserve(static_cast<std::size_t>(X.dim()));
    for (Eigen::Index i = 0; i < X.dim(); ++i) {
        const double c = X.center()(i);
        const double rad = X.generators().row(i).lpNorm<1>();
        out.push_back({c - rad, c + rad});
    }
    return out;
}

SZonotope multiply(const SZonotope& X, const SZonotope& Y, SymbolProvider& symbols) {
    require_1d(X, "multiply");
    require_1d(Y, "multiply");
    const Alignment a = align(X.ids(), Y.ids());
    const auto K = static_cast<Eigen::Index>(a.ids.size());
    Eigen::VectorXd r = Eigen::VectorXd::Zero(K);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(K);
    for (std::size_t k = 0; k < a.left_pos.size(); ++k) {
        r(static_cast<Eigen::Index>(a.left_pos[k])) = X.generators()(0, static_cast<Eigen::Index>(k));
    }
    for (std::size_t k = 0; k < a.right_pos.size(); ++k) {
        g(static_cast<Eigen::Index>(a.right_pos[k])) = Y.generators()(0, static_cast<Eigen::Index>(k));
    }
    const double cx = X.center()(0);
    const double cy = Y.center()(0);

    const Eigen::ArrayXd rg = r.array() * g.array();
    const double c_l = cx * cy + 0.5 * rg.sum();
    double m = 0.5 * rg.abs().sum();

    // Cross terms only involve symbols present in either factor with a nonzero coefficient.
    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < K; ++i) {
        if (r(i) != 0.0 || g(i) != 0.0) {
            active.push_back(i);
        }
    }
    for (std::size_t i = 0; i < active.size(); ++i) {
        const double ri = r(active[i]);
        const double gi = g(active[i]);
        for (std::size_t j = i + 1; j < active.size(); ++j) {
            m += std::abs(ri * g(active[j]) + r(active[j]) * gi);
        }
    }

    Eigen::MatrixXd R(1, K + 1);
    R.leftCols(K) = (cx * g + cy * r).transpose();
    R(0, K) = m;
    IdVector ids = a.ids;
    ids.push_back(symbols.fresh_id());
    return {Eigen::VectorXd::Constant(1, c_l), std::move(R), std::move(ids)};
}

SZonotope reduce(const SZonotope& X, std::size_t q, std::span<const SymbolId> keep, SymbolProvider& symbols) {
    const auto p = static_cast<std::size_t>(X.num_symbols());
    if (p <= q) {
        return X;
    }
    const std::unordered_set<SymbolId> protected_ids(keep.begin(), keep.end());
    const Eigen::Index n = X.dim();

    std::vector<Eigen::Index> kept_protected;
    std::vector<Eigen::Index> candidates;
    for (std::size_t k = 0; k < p; ++k) {
        const auto col = static_cast<Eigen::Index>(k);
        if (protected_ids.contains(X.ids()[k])) {
            kept_protected.push_back(col);
        } else if (!X.generators().col(col).isZero(0.0)) {
            candidates.push_back(col);
        }
    }

    auto assemble = [&](const std::vector<Eigen::Index>& cols, const Eigen::VectorXd& box) {
        std::vector<Eigen::Index> sorted = cols;
        std::ranges::sort(sorted);
        std::vector<Eigen::Index> box_rows;
        for (Eigen::Index i = 0; i < box.size(); ++i) {
            if (box(i) != 0.0) {
                box_rows.push_back(i);
            }
        }
        const auto total = static_cast<Eigen::Index>(sorted.size() + box_rows.size());
        Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, total);
        IdVector ids;
        ids.reserve(static_cast<std::size_t>(total));
        Eigen::Index out = 0;
        for (Eigen::Index col : sorted) {
            R.col(out++) = X.generators().col(col);
            ids.push_back(X.ids()[static_cast<std::size_t>(col)]);
        }
        const IdVector fresh = symbols.fresh_ids(box_rows.size());
        for (std::size_t k = 0; k < box_rows.size(); ++k) {
            R(box_rows[k], out++) = box(box_rows[k]);
            ids.push_back(fresh[k]);
        }
        return SZonotope(X.center(), std::move(R), std::move(ids));
    };

    if (kept_protected.size() + candidates.size() <= q) {
        std::vector<Eigen::Index> all = kept_protected;
        all.insert(all.end(), candidates.begin(), candidates.end());
        return assemble(all, Eigen::VectorXd::Zero(n));
    }

    const std::size_t reserved = kept_protected.size() + static_cast<std::size_t>(n);
    if (q < reserved) {
        throw ContractError("reduce: order " + std::to_string(q) + " cannot hold " +
                            std::to_string(kept_protected.size()) + " protected symbols plus a " + std::to_string(n) +
                            "-dimensional box");
    }
    const std::size_t keep_count = q - reserved;

    std::vector<std::pair<double, Eigen::Index>> ranked;
    ranked.reserve(candidates.size());
    for (Eigen::Index col : candidates) {
        ranked.emplace_back(X.generators().col(col).norm(), col);
    }
    // Largest norm first; among equal norms the newer (larger) id survives.
    std::ranges::sort(ranked, [&](const auto& a, const auto& b) {
        if (a.first != b.first) {
            return a.first > b.first;
        }
        return X.ids()[static_cast<std::size_t>(a.second)] > X.ids()[static_cast<std::size_t>(b.second)];
    });

    std::vector<Eigen::Index> survivors = kept_protected;
    Eigen::VectorXd box = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < ranked.size(); ++k) {
        if (k < keep_count) {
            survivors.push_back(ranked[k].second);
        } else {
            box += X.generators().col(ranked[k].second).cwiseAbs();
        }
    }
    return assemble(survivors, box);
}

double support(const Eigen::VectorXd& h, const SZonotope& X) {
    if (h.size() != X.dim()) {
        throw DimensionError("support: direction size mismatch");
    }
    return h.dot(X.center()) + (h.transpose() * X.generators()).lpNorm<1>();
}

bool disjoint_from(const SZonotope& X, const Polyhedron& A) {
    if (A.rows() > 0 && A.dim() != X.dim()) {
        throw DimensionError("disjoint_from: polyhedron dimension mismatch");
    }
    for (Eigen::Index j = 0; j < A.rows(); ++j) {
        const Eigen::VectorXd h = A.H.row(j).transpose();
        if (-support(-h, X) > A.r(j)) {
            return true;
        }
    }
    return false;
}

bool contained_in(const SZonotope& X, const Polyhedron& G) {
    if (G.rows() > 0 && G.dim() != X.dim()) {
        throw DimensionError("contained_in: polyhedron dimension mismatch");
    }
    for (Eigen::Index j = 0; j < G.rows(); ++j) {
        const Eigen::VectorXd h = G.H.row(j).transpose();
        if (support(h, X) > G.r(j)) {
            return false;
        }
    }
    return true;
}

std::pair<SZonotope, SZonotope> bisect_symbol(const SZonotope& X, SymbolId id, SymbolProvider& symbols) {
    const Eigen::Index k = X.column_of(id);
    if (k < 0) {
        throw ContractError("bisect_symbol: symbol is not part of the set");
    }
    const Eigen::VectorXd half = 0.5 * X.generators().col(k);
    const SymbolId upper_id = symbols.fresh_id();
    const SymbolId lower_id = symbols.fresh_id();

    Eigen::MatrixXd R = X.generators();
    R.col(k) = half;
    IdVector upper_ids = X.ids();
    IdVector lower_ids = X.ids();
    upper_ids[static_cast<std::size_t>(k)] = upper_id;
    lower_ids[static_cast<std::size_t>(k)] = lower_id;
    return {SZonotope(X.center() + half, R, std::move(upper_ids)),
            SZonotope(X.center() - half, R, std::move(lower_ids))};
}

double f_radius(const Eigen::MatrixXd& M) { return M.norm(); }

Eigen::MatrixXd columns_of(const SZonotope& X, std::span<const SymbolId> ids) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(X.dim(), static_cast<Eigen::Index>(ids.size()));
    for (std::size_t k = 0; k < ids.size(); ++k) {
        const Eigen::Index col = X.column_of(ids[k]);
        if (col >= 0) {
            out.col(static_cast<Eigen::Index>(k)) = X.generators().col(col);
        }
    }
    return out;
}

Eigen::MatrixXd columns_excluding(const SZonotope& X, std::span<const SymbolId> ids) {
    const std::unordered_set<SymbolId> skip(ids.begin(), ids.end());
    std::vector<Eigen::Index> cols;
    for (std::size_t k = 0; k < X.ids().size(); ++k) {
        if (!skip.contains(X.ids()[k])) {
            cols.push_back(static_cast<Eigen::Index>(k));
        }
    }
    Eigen::MatrixXd out(X.dim(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) {
        out.col(static_cast<Eigen::Index>(k)) = X.generators().col(cols[k]);
    }
    return out;
}

} // namespace symreach
