// Copyright (c) symreach contributors.
// SPDX-License-Identifier: Apache-2.0
#include "symreach/spolynotope.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "symreach/error.hpp"

namespace symreach {

namespace {

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const noexcept {
        std::size_t h = 0x9e3779b97f4a7c15ULL;
        for (const auto& [id, e] : m) {
            h ^= std::hash<std::uint64_t>{}(id.value * 31 + static_cast<std::uint64_t>(e)) + 0x9e3779b97f4a7c15ULL +
                 (h << 6) + (h >> 2);
        }
        return h;
    }
};

Monomial multiply_monomials(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.reserve(a.size() + b.size());
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
            out.push_back(*ia++);
        } else if (ia == a.end() || ib->first < ia->first) {
            out.push_back(*ib++);
        } else {
            out.emplace_back(ia->first, ia->second + ib->second);
            ++ia;
            ++ib;
        }
    }
    return out;
}

bool all_even(const Monomial& m) {
    return std::ranges::all_of(m, [](const auto& t) { return t.second % 2 == 0; });
}

void require_1d(const SPolynotope& P, const char* op) {
    if (P.dim() != 1) {
        throw DimensionError(std::string(op) + ": expected a one-dimensional s-polynotope");
    }
}

Interval scale(const Interval& x, double a) { return a >= 0.0 ? Interval{a * x.lo, a * x.hi} : Interval{a * x.hi, a * x.lo}; }

Interval interval_pow(const Interval& x, int e) {
    if (e % 2 == 1 || x.lo >= 0.0) {
        return {std::pow(x.lo, e), std::pow(x.hi, e)};
    }
    if (x.hi <= 0.0) {
        return {std::pow(x.hi, e), std::pow(x.lo, e)};
    }
    return {0.0, std::pow(std::max(-x.lo, x.hi), e)};
}

Interval interval_mul(const Interval& a, const Interval& b) {
    const double p1 = a.lo * b.lo;
    const double p2 = a.lo * b.hi;
    const double p3 = a.hi * b.lo;
    const double p4 = a.hi * b.hi;
    return {std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4})};
}

/// Interval evaluation of a 1-D polynotope with symbol k ranging over box[k].
Interval eval_box(const SPolynotope& P, const std::vector<Interval>& box) {
    double lo = P.center()(0);
    double hi = lo;
    const Eigen::MatrixXi& E = P.exponents();
    for (Eigen::Index k = 0; k < P.num_monomials(); ++k) {
        Interval m{1.0, 1.0};
        for (Eigen::Index r = 0; r < E.rows(); ++r) {
            if (E(r, k) > 0) {
                m = interval_mul(m, interval_pow(box[static_cast<std::size_t>(r)], E(r, k)));
            }
        }
        const Interval t = scale(m, P.generators()(0, k));
        lo += t.lo;
        hi += t.hi;
    }
    return {lo, hi};
}

Interval refine_rec(const SPolynotope& P, std::vector<Interval>& box, int depth) {
    const Interval here = eval_box(P, box);
    if (depth <= 0 || box.empty()) {
        return here;
    }
    const Eigen::MatrixXi& E = P.exponents();
    Eigen::Index best = -1;
    double best_score = 0.0;
    for (Eigen::Index r = 0; r < E.rows(); ++r) {
        double s = 0.0;
        for (Eigen::Index k = 0; k < E.cols(); ++k) {
            s += std::abs(P.generators()(0, k)) * E(r, k);
        }
        s *= box[static_cast<std::size_t>(r)].width();
        if (s > best_score) {
            best_score = s;
            best = r;
        }
    }
    if (best < 0) {
        return here;
    }
    const Interval saved = box[static_cast<std::size_t>(best)];
    const double mid = saved.mid();
    box[static_cast<std::size_t>(best)] = {saved.lo, mid};
    const Interval a = refine_rec(P, box, depth - 1);
    box[static_cast<std::size_t>(best)] = {mid, saved.hi};
    const Interval b = refine_rec(P, box, depth - 1);
    box[static_cast<std::size_t>(best)] = saved;
    return {std::max(here.lo, std::min(a.lo, b.lo)), std::min(here.hi, std::max(a.hi, b.hi))};
}

} // namespace

// Collects (monomial, coefficient column) terms and emits a canonical polynotope.
class TermAccumulator {
  public:
    explicit TermAccumulator(Eigen::Index n) : n_(n), center_(Eigen::VectorXd::Zero(n)) {}

    void prefer(const IdVector& ids) {
        for (auto id : ids) {
            if (seen_.insert(id).second) {
                order_.push_back(id);
            }
        }
    }

    void add_center(const Eigen::VectorXd& c, Eigen::Index row_offset = 0) {
        center_.segment(row_offset, c.size()) += c;
    }

    /// Adds `len` coefficients (one per row starting at row_offset) to monomial m.
    template <typename Column>
    void add(const Monomial& m, const Column& coef, Eigen::Index row_offset = 0) {
        if (m.empty()) {
            add_center(coef, row_offset);
            return;
        }
        auto [it, inserted] = index_.try_emplace(m, monos_.size());
        if (inserted) {
            monos_.push_back(m);
            coefs_.resize(coefs_.size() + static_cast<std::size_t>(n_), 0.0);
        }
        double* slot = coefs_.data() + it->second * static_cast<std::size_t>(n_) + row_offset;
        for (Eigen::Index i = 0; i < coef.size(); ++i) {
            slot[i] += coef(i);
        }
    }

    void add_scalar(const Monomial& m, double coef) {
        Eigen::Matrix<double, 1, 1> c;
        c(0) = coef;
        add(m, c);
    }

    SPolynotope finish() {
        std::vector<std::size_t> live;
        std::unordered_set<SymbolId> used;
        for (std::size_t k = 0; k < monos_.size(); ++k) {
            const double* col = coefs_.data() + k * static_cast<std::size_t>(n_);
            if (std::any_of(col, col + n_, [](double v) { return v != 0.0; })) {
                live.push_back(k);
                for (const auto& [id, e] : monos_[k]) {
                    used.insert(id);
                }
            }
        }
        IdVector ids;
        for (auto id : order_) {
            if (used.contains(id)) {
                ids.push_back(id);
            }
        }
        if (ids.size() != used.size()) {
            IdVector extra;
            const std::unordered_set<SymbolId> listed(ids.begin(), ids.end());
            for (auto id : used) {
                if (!listed.contains(id)) {
                    extra.push_back(id);
                }
            }
            std::ranges::sort(extra);
            ids.insert(ids.end(), extra.begin(), extra.end());
        }
        std::unordered_map<SymbolId, Eigen::Index> row_of;
        for (std::size_t r = 0; r < ids.size(); ++r) {
            row_of.emplace(ids[r], static_cast<Eigen::Index>(r));
        }

        SPolynotope P;
        P.center_ = center_;
        P.ids_ = std::move(ids);
        P.generators_.resize(n_, static_cast<Eigen::Index>(live.size()));
        P.exponents_ = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(P.ids_.size()), static_cast<Eigen::Index>(live.size()));
        for (std::size_t j = 0; j < live.size(); ++j) {
            const auto col = static_cast<Eigen::Index>(j);
            const double* src = coefs_.data() + live[j] * static_cast<std::size_t>(n_);
            for (Eigen::Index i = 0; i < n_; ++i) {
                P.generators_(i, col) = src[i];
            }
            for (const auto& [id, e] : monos_[live[j]]) {
                P.exponents_(row_of.at(id), col) = e;
            }
        }
        return P;
    }

  private:
    Eigen::Index n_;
    Eigen::VectorXd center_;
    std::unordered_map<Monomial, std::size_t, MonomialHash> index_;
    std::vector<Monomial> monos_;
    std::vector<double> coefs_;
    IdVector order_;
    std::unordered_set<SymbolId> seen_;
};

// -----------------------------------------------------------------------------
// SPolynotope
// -----------------------------------------------------------------------------

SPolynotope::SPolynotope(Eigen::VectorXd center, const Eigen::MatrixXd& generators, const IdVector& ids,
                         const Eigen::MatrixXi& exponents) {
    const Eigen::Index n = center.size();
    const Eigen::Index p = generators.cols();
    if (generators.rows() != n && !(p == 0 && generators.rows() == 0)) {
        throw DimensionError("s-polynotope: generator rows differ from center size");
    }
    if (exponents.cols() != p || exponents.rows() != static_cast<Eigen::Index>(ids.size())) {
        if (!(p == 0 && exponents.size() == 0)) {
            throw DimensionError("s-polynotope: exponent matrix must be " + std::to_string(ids.size()) + "x" +
                                 std::to_string(p));
        }
    }
    if ((exponents.array() < 0).any()) {
        throw ContractError("s-polynotope: negative exponent");
    }
    if (!all_distinct(ids)) {
        throw ContractError("s-polynotope: duplicate symbol identifiers");
    }
    TermAccumulator acc(n);
    acc.prefer(ids);
    acc.add_center(center);
    for (Eigen::Index k = 0; k < p; ++k) {
        Monomial m;
        for (Eigen::Index r = 0; r < exponents.rows(); ++r) {
            if (exponents(r, k) > 0) {
                m.emplace_back(ids[static_cast<std::size_t>(r)], exponents(r, k));
            }
        }
        std::ranges::sort(m);
        acc.add(m, generators.col(k));
    }
    *this = acc.finish();
}

SPolynotope SPolynotope::point(Eigen::VectorXd center) {
    const Eigen::Index n = center.size();
    return {std::move(center), Eigen::MatrixXd(n, 0), {}, Eigen::MatrixXi(0, 0)};
}

SPolynotope SPolynotope::from_szonotope(const SZonotope& X) {
    const auto p = X.num_symbols();
    return {X.center(), X.generators(), X.ids(), Eigen::MatrixXi::Identity(p, p)};
}

Monomial SPolynotope::monomial(Eigen::Index col) const {
    Monomial m;
    for (Eigen::Index r = 0; r < exponents_.rows(); ++r) {
        if (exponents_(r, col) > 0) {
            m.emplace_back(ids_[static_cast<std::size_t>(r)], exponents_(r, col));
        }
    }
    std::ranges::sort(m);
    return m;
}

int SPolynotope::degree(Eigen::Index col) const { return exponents_.rows() == 0 ? 0 : exponents_.col(col).sum(); }

int SPolynotope::max_degree() const {
    int d = 0;
    for (Eigen::Index k = 0; k < num_monomials(); ++k) {
        d = std::max(d, degree(k));
    }
    return d;
}

Eigen::VectorXd SPolynotope::coefficient(const Monomial& m) const {
    if (m.empty()) {
        return center_;
    }
    for (Eigen::Index k = 0; k < num_monomials(); ++k) {
        if (monomial(k) == m) {
            return generators_.col(k);
        }
    }
    return Eigen::VectorXd::Zero(dim());
}

SPolynotope SPolynotope::row(Eigen::Index i) const {
    if (i < 0 || i >= dim()) {
        throw DimensionError("s-polynotope: row index out of range");
    }
    return {center_.segment(i, 1), generators_.row(i), ids_, exponents_};
}

Eigen::VectorXd SPolynotope::evaluate(const Eigen::VectorXd& valuation) const {
    if (valuation.size() != static_cast<Eigen::Index>(ids_.size())) {
        throw DimensionError("s-polynotope: valuation size mismatch");
    }
    Eigen::VectorXd out = center_;
    for (Eigen::Index k = 0; k < num_monomials(); ++k) {
        double m = 1.0;
        for (Eigen::Index r = 0; r < exponents_.rows(); ++r) {
            if (exponents_(r, k) > 0) {
                m *= std::pow(valuation(r), exponents_(r, k));
            }
        }
        out += m * generators_.col(k);
    }
    return out;
}

SZonotope SPolynotope::to_szonotope() const {
    IdVector ids;
    for (Eigen::Index k = 0; k < num_monomials(); ++k) {
        const Monomial m = monomial(k);
        if (m.size() != 1 || m.front().second != 1) {
            throw ContractError("to_szonotope: polynotope has a nonlinear monomial");
        }
        ids.push_back(m.front().first);
    }
    return {center_, generators_, std::move(ids)};
}

SPolynotope SPolynotope::operator-() const { return {-center_, -generators_, ids_, exponents_}; }

SPolynotope& SPolynotope::operator+=(const Eigen::VectorXd& shift) {
    if (shift.size() != dim()) {
        throw DimensionError("s-polynotope: shift size mismatch");
    }
    center_ += shift;
    return *this;
}

SPolynotope& SPolynotope::operator*=(double factor) {
    *this = SPolynotope(center_ * factor, generators_ * factor, ids_, exponents_);
    return *this;
}

bool operator==(const SPolynotope& a, const SPolynotope& b) {
    return a.ids_ == b.ids_ && a.center_.size() == b.center_.size() && a.center_ == b.center_ &&
           a.generators_.rows() == b.generators_.rows() && a.generators_.cols() == b.generators_.cols() &&
           a.generators_ == b.generators_ && a.exponents_.rows() == b.exponents_.rows() &&
           a.exponents_.cols() == b.exponents_.cols() && a.exponents_ == b.exponents_;
}

// -----------------------------------------------------------------------------
// Algebra
// -----------------------------------------------------------------------------

SPolynotope linear_image(const Eigen::MatrixXd& M, const SPolynotope& P) {
    if (M.cols() != P.dim()) {
        throw DimensionError("linear_image: matrix has " + std::to_string(M.cols()) + " columns, set has dimension " +
                             std::to_string(P.dim()));
    }
    return {M * P.center(), M * P.generators(), P.ids(), P.exponents()};
}

SPolynotope operator*(double a, const SPolynotope& P) {
    SPolynotope out = P;
    out *= a;
    return out;
}

SPolynotope add(const SPolynotope& P, const SPolynotope& Q) {
    if (P.dim() != Q.dim()) {
        throw DimensionError("add: dimension mismatch");
    }
    TermAccumulator acc(P.dim());
    acc.prefer(P.ids());
    acc.prefer(Q.ids());
    acc.add_center(P.center() + Q.center());
    for (Eigen::Index k = 0; k < P.num_monomials(); ++k) {
        acc.add(P.monomial(k), P.generators().col(k));
    }
    for (Eigen::Index k = 0; k < Q.num_monomials(); ++k) {
        acc.add(Q.monomial(k), Q.generators().col(k));
    }
    return acc.finish();
}

SPolynotope subtract(const SPolynotope& P, const SPolynotope& Q) { return add(P, -Q); }

SPolynotope vcat(std::span<const SPolynotope> parts) {
    Eigen::Index n = 0;
    for (const auto& P : parts) {
        n += P.dim();
    }
    TermAccumulator acc(n);
    Eigen::Index row = 0;
    for (const auto& P : parts) {
        acc.prefer(P.ids());
        acc.add_center(P.center(), row);
        for (Eigen::Index k = 0; k < P.num_monomials(); ++k) {
            acc.add(P.monomial(k), P.generators().col(k), row);
        }
        row += P.dim();
    }
    return acc.finish();
}

SPolynotope vcat(const SPolynotope& P, const SPolynotope& Q) {
    const std::vector<SPolynotope> parts{P, Q};
    return vcat(parts);
}

SPolynotope multiply(const SPolynotope& P, const SPolynotope& Q) {
    require_1d(P, "multiply");
    require_1d(Q, "multiply");
    std::vector<Monomial> pm{Monomial{}};
    std::vector<double> pc{P.center()(0)};
    for (Eigen::Index k = 0; k < P.num_monomials(); ++k) {
        pm.push_back(P.monomial(k));
        pc.push_back(P.generators()(0, k));
    }
    std::vector<Monomial> qm{Monomial{}};
    std::vector<double> qc{Q.center()(0)};
    for (Eigen::Index k = 0; k < Q.num_monomials(); ++k) {
        qm.push_back(Q.monomial(k));
        qc.push_back(Q.generators()(0, k));
    }
    TermAccumulator acc(1);
    acc.prefer(P.ids());
    acc.prefer(Q.ids());
    for (std::size_t i = 0; i < pm.size(); ++i) {
        if (pc[i] == 0.0) {
            continue;
        }
        for (std::size_t j = 0; j < qm.size(); ++j) {
            if (qc[j] != 0.0) {
                acc.add_scalar(multiply_monomials(pm[i], qm[j]), pc[i] * qc[j]);
            }
        }
    }
    return acc.finish();
}

SPolynotope pow(const SPolynotope& P, int m) {
    require_1d(P, "pow");
    if (m < 1) {
        throw ContractError("pow: exponent must be positive");
    }
    SPolynotope out = P;
    for (int k = 1; k < m; ++k) {
        out = multiply(out, P);
    }
    return out;
}

// -----------------------------------------------------------------------------
// Bounds and reduction
// -----------------------------------------------------------------------------

Interval interval_bound(const SPolynotope& P) {
    require_1d(P, "interval_bound");
    const std::vector<Interval> box(P.ids().size(), Interval{-1.0, 1.0});
    return eval_box(P, box);
}

Interval refine_bound(const SPolynotope& P, int depth) {
    require_1d(P, "refine_bound");
    std::vector<Interval> box(P.ids().size(), Interval{-1.0, 1.0});
    return refine_rec(P, box, depth);
}

std::vector<Interval> interval_hull(const SPolynotope& P, int depth) {
    std::vector<Interval> out;
    out.reserve(static_cast<std::size_t>(P.dim()));
    for (Eigen::Index i = 0; i < P.dim(); ++i) {
        out.push_back(refine_bound(P.row(i), depth));
    }
    return out;
}

double support_bound(const Eigen::VectorXd& h, const SPolynotope& P, int depth) {
    if (h.size() != P.dim()) {
        throw DimensionError("support_bound: direction size mismatch");
    }
    return refine_bound(linear_image(h.transpose(), P), depth).hi;
}

SPolynotope reduce_monomials(const SPolynotope& P, std::size_t budget, int max_degree, SymbolProvider& symbols) {
    const Eigen::Index p = P.num_monomials();
    std::vector<std::pair<double, Eigen::Index>> eligible;
    bool any_over_degree = false;
    for (Eigen::Index k = 0; k < p; ++k) {
        if (P.degree(k) <= max_degree) {
            eligible.emplace_back(P.generators().col(k).norm(), k);
        } else {
            any_over_degree = true;
        }
    }
    if (!any_over_degree && static_cast<std::size_t>(p) <= budget) {
        return P;
    }
    std::ranges::stable_sort(eligible, [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<char> kept(static_cast<std::size_t>(p), 0);
    for (std::size_t k = 0; k < eligible.size() && k < budget; ++k) {
        kept[static_cast<std::size_t>(eligible[k].second)] = 1;
    }

    const Eigen::Index n = P.dim();
    Eigen::VectorXd center = P.center();
    Eigen::VectorXd radius = Eigen::VectorXd::Zero(n);
    TermAccumulator acc(n);
    acc.prefer(P.ids());
    for (Eigen::Index k = 0; k < p; ++k) {
        const Monomial m = P.monomial(k);
        if (kept[static_cast<std::size_t>(k)]) {
            acc.add(m, P.generators().col(k));
        } else if (all_even(m)) {
            center += 0.5 * P.generators().col(k);
            radius += 0.5 * P.generators().col(k).cwiseAbs();
        } else {
            radius += P.generators().col(k).cwiseAbs();
        }
    }
    acc.add_center(center);
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (radius(i) > 0.0) {
            rows.push_back(i);
        }
    }
    const IdVector fresh = symbols.fresh_ids(rows.size());
    acc.prefer(fresh);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        Eigen::VectorXd col = Eigen::VectorXd::Zero(n);
        col(rows[k]) = radius(rows[k]);
        acc.add(Monomial{{fresh[k], 1}}, col);
    }
    return acc.finish();
}

} // namespace symreach
