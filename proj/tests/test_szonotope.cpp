// Copyright (c) symreach contributors.
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "symreach/error.hpp"
#include "symreach/szonotope.hpp"
#include "testing.hpp"

using namespace symreach;
using testing::Rng;

namespace {

SymbolId sid(std::uint64_t v) { return SymbolId{v}; }

SZonotope z1(double c, std::initializer_list<double> gens, std::initializer_list<std::uint64_t> ids) {
    Eigen::MatrixXd R(1, static_cast<Eigen::Index>(gens.size()));
    Eigen::Index k = 0;
    for (double g : gens) {
        R(0, k++) = g;
    }
    IdVector I;
    for (auto i : ids) {
        I.push_back(SymbolId{i});
    }
    return {Eigen::VectorXd::Constant(1, c), R, I};
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index k = 0;
    for (double x : v) {
        out(k++) = x;
    }
    return out;
}

} // namespace

TEST_CASE("construction rejects mismatched sizes and duplicate ids") {
    CHECK_THROWS_AS(SZonotope(vec({0}), Eigen::MatrixXd::Ones(1, 2), {sid(1)}), DimensionError);
    CHECK_THROWS_AS(SZonotope(vec({0}), Eigen::MatrixXd::Ones(1, 2), {sid(1), sid(1)}), ContractError);
    const SZonotope c = SZonotope::canonical(vec({0}), Eigen::MatrixXd::Ones(1, 2), IdVector{sid(1), sid(1)});
    CHECK(c.num_symbols() == 1);
    CHECK(c.generators()(0, 0) == 2.0);
}

TEST_CASE("linear_image") {
    const SZonotope X = z1(1, {3}, {5});
    const SZonotope Y = linear_image(Eigen::MatrixXd::Constant(1, 1, 2.0), X);
    CHECK(Y.center()(0) == 2.0);
    CHECK(Y.generators()(0, 0) == 6.0);
    CHECK(Y.ids() == IdVector{sid(5)});

    CHECK(linear_image(Eigen::MatrixXd::Identity(1, 1), X).generators() == X.generators());
    const SZonotope Z = linear_image(Eigen::MatrixXd::Zero(1, 1), X);
    CHECK(Z.center()(0) == 0.0);
    CHECK(Z.generators().isZero(0.0));
    CHECK(Z.ids() == X.ids());
    CHECK_THROWS_AS(linear_image(Eigen::MatrixXd::Zero(2, 2), X), DimensionError);
}

TEST_CASE("add: dependency cancellation, identity and worked successor assembly") {
    const SZonotope a = z1(0, {1}, {1});
    const SZonotope b = z1(0, {-1}, {1});
    const SZonotope s = add(a, b);
    CHECK(s.ids() == IdVector{sid(1)});
    CHECK(s.generators()(0, 0) == 0.0);

    const SZonotope X = z1(0.3, {1, 2}, {4, 7});
    const SZonotope zero = SZonotope::point(vec({0}));
    const SZonotope id = add(X, zero);
    CHECK(id.center() == X.center());
    CHECK(id.generators() == X.generators());
    CHECK(id.ids() == X.ids());

    // sin part, controller and disturbance of the one-dimensional worked example
    const SZonotope sin_part = z1(0.45, {0.42, 0.03}, {1, 4});
    const SZonotope control = z1(0.1, {0.2, -0.1, 0.0}, {1, 2, 3});
    const SZonotope dist = z1(0.0, {0.1}, {5});
    const SZonotope next = sin_part - control + dist;
    CHECK(next.center()(0) == doctest::Approx(0.35).epsilon(1e-15));
    CHECK(next.column(sid(1))(0) == doctest::Approx(0.22).epsilon(1e-15));
    CHECK(next.column(sid(2))(0) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(next.column_of(sid(3)) >= 0);
    CHECK(next.column(sid(3))(0) == 0.0);
    CHECK(next.column(sid(4))(0) == doctest::Approx(0.03).epsilon(1e-15));
    CHECK(next.column(sid(5))(0) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(next.num_symbols() == 5);

    CHECK_THROWS_AS(add(X, SZonotope::point(vec({0, 0}))), DimensionError);
}

TEST_CASE("vcat") {
    const SZonotope shared = vcat(z1(1, {1}, {1}), z1(2, {1}, {1}));
    CHECK(shared.center() == vec({1, 2}));
    REQUIRE(shared.num_symbols() == 1);
    CHECK(shared.generators().col(0) == vec({1, 1}));

    const SZonotope disjoint = vcat(z1(1, {1}, {1}), z1(2, {1}, {2}));
    REQUIRE(disjoint.num_symbols() == 2);
    CHECK(disjoint.generators() == Eigen::MatrixXd::Identity(2, 2));

    const SZonotope with_point = vcat(z1(1, {1}, {1}), SZonotope::point(vec({4})));
    CHECK(with_point.center() == vec({1, 4}));
    CHECK(with_point.generators().col(0) == vec({1, 0}));
}

TEST_CASE("bounds_1d") {
    const Interval a = bounds_1d(z1(1, {2, -1}, {1, 2}));
    CHECK(a.lo == -2.0);
    CHECK(a.hi == 4.0);
    const Interval b = bounds_1d(z1(0.5, {0.5}, {1}));
    CHECK(b.lo == 0.0);
    CHECK(b.hi == 1.0);
    const Interval c = bounds_1d(SZonotope::point(vec({3})));
    CHECK(c.lo == 3.0);
    CHECK(c.hi == 3.0);
    CHECK_THROWS_AS(bounds_1d(SZonotope::point(vec({1, 2}))), DimensionError);

    const auto hull = interval_hull(vcat(z1(1, {2, -1}, {1, 2}), z1(0.5, {0.5}, {1})));
    REQUIRE(hull.size() == 2);
    CHECK(hull[0] == Interval{-2, 4});
    CHECK(hull[1] == Interval{0, 1});
}

TEST_CASE("multiply: square, independent factors and zero factor") {
    SymbolProvider p(100);
    const SZonotope sq = multiply(z1(0, {1}, {1}), z1(0, {1}, {1}), p);
    CHECK(sq.center()(0) == 0.5);
    CHECK(sq.column(sid(1))(0) == 0.0);
    REQUIRE(sq.num_symbols() == 2);
    CHECK(sq.ids()[1] == sid(100));
    CHECK(sq.generators()(0, 1) == 0.5);
    CHECK(bounds_1d(sq) == Interval{0, 1});

    const SZonotope prod = multiply(z1(1, {1}, {1}), z1(1, {1}, {2}), p);
    CHECK(prod.center()(0) == 1.0);
    CHECK(prod.column(sid(1))(0) == 1.0);
    CHECK(prod.column(sid(2))(0) == 1.0);
    CHECK(prod.generators()(0, prod.num_symbols() - 1) == 1.0);
    CHECK(bounds_1d(prod) == Interval{-2, 4});

    const SZonotope zero = multiply(z1(2, {1, 3}, {1, 2}), SZonotope::point(vec({0})), p);
    CHECK(zero.center()(0) == 0.0);
    CHECK(zero.generators().isZero(0.0));
}

TEST_CASE("multiply: coefficients match the product formula on random operands") {
    Rng rng(3);
    SymbolProvider p;
    const IdVector pool = p.fresh_ids(6);
    for (int trial = 0; trial < 200; ++trial) {
        // overlapping supports over a shared pool
        IdVector ix(pool.begin(), pool.begin() + 4);
        IdVector iy(pool.begin() + 2, pool.end());
        const SZonotope X(rng.vector(1), rng.matrix(1, 4), ix);
        const SZonotope Y(rng.vector(1), rng.matrix(1, 4), iy);
        const SZonotope Z = multiply(X, Y, p);

        // dense coefficients over the pool
        Eigen::VectorXd r = Eigen::VectorXd::Zero(6);
        Eigen::VectorXd g = Eigen::VectorXd::Zero(6);
        for (int k = 0; k < 6; ++k) {
            r(k) = X.column(pool[static_cast<std::size_t>(k)])(0);
            g(k) = Y.column(pool[static_cast<std::size_t>(k)])(0);
        }
        const double cx = X.center()(0);
        const double cy = Y.center()(0);
        double c = cx * cy;
        double m = 0.0;
        for (int i = 0; i < 6; ++i) {
            c += 0.5 * r(i) * g(i);
            m += 0.5 * std::abs(r(i) * g(i));
            for (int j = i + 1; j < 6; ++j) {
                m += std::abs(r(i) * g(j) + r(j) * g(i));
            }
        }
        CHECK(Z.center()(0) == doctest::Approx(c).epsilon(1e-12));
        for (int k = 0; k < 6; ++k) {
            CHECK(Z.column(pool[static_cast<std::size_t>(k)])(0) ==
                  doctest::Approx(cx * g(k) + cy * r(k)).epsilon(1e-12));
        }
        CHECK(Z.generators()(0, Z.num_symbols() - 1) == doctest::Approx(m).epsilon(1e-12));

        // soundness at sampled valuations
        for (int s = 0; s < 50; ++s) {
            const Eigen::VectorXd v = rng.valuation(6);
            const double exact = X.evaluate(testing::restrict_valuation(X.ids(), pool, v))(0) *
                                 Y.evaluate(testing::restrict_valuation(Y.ids(), pool, v))(0);
            const double lin = Z.center()(0) +
                               Z.generators().leftCols(Z.num_symbols() - 1).row(0).dot(
                                   testing::restrict_valuation(
                                       IdVector(Z.ids().begin(), Z.ids().end() - 1), pool, v));
            CHECK(std::abs(exact - lin) <= Z.generators()(0, Z.num_symbols() - 1) + 1e-9);
        }
    }
}

TEST_CASE("reduce: identity when no reduction is needed") {
    SymbolProvider p(50);
    const SZonotope X(vec({0, 0}), (Eigen::MatrixXd(2, 2) << 1, 0.01, 0, 0.01).finished(), {sid(1), sid(2)});
    const SZonotope Y = reduce(X, 3, {}, p);
    CHECK(Y.ids() == X.ids());
    CHECK(Y.generators() == X.generators());
    CHECK(p.peek() == 50);
}

TEST_CASE("reduce: dropped columns are boxed on fresh symbols") {
    SymbolProvider p(50);
    const SZonotope X(vec({0, 0}), (Eigen::MatrixXd(2, 4) << 1, 0.01, 0.02, 0, 0, 0.01, 0, 0.005).finished(),
                      {sid(1), sid(2), sid(3), sid(4)});
    const SZonotope Y = reduce(X, 3, {}, p);
    REQUIRE(Y.num_symbols() == 3);
    CHECK(Y.ids()[0] == sid(1));
    CHECK(Y.generators().col(0) == vec({1, 0}));
    CHECK(Y.ids()[1] == sid(50));
    CHECK(Y.ids()[2] == sid(51));
    CHECK(Y.generators()(0, 1) == doctest::Approx(0.03).epsilon(1e-15));
    CHECK(Y.generators()(1, 1) == 0.0);
    CHECK(Y.generators()(0, 2) == 0.0);
    CHECK(Y.generators()(1, 2) == doctest::Approx(0.015).epsilon(1e-15));
}

TEST_CASE("reduce: protected symbols survive and an impossible order is rejected") {
    SymbolProvider p(100);
    Eigen::MatrixXd R(1, 5);
    R << 0.001, 5, 4, 3, 2;
    const SZonotope X(vec({0}), R, {sid(1), sid(2), sid(3), sid(4), sid(5)});
    const SZonotope Y = reduce(X, 3, IdVector{sid(1)}, p);
    CHECK(Y.num_symbols() <= 3);
    CHECK(Y.column_of(sid(1)) >= 0);
    CHECK(Y.column_of(sid(2)) >= 0);
    CHECK(Y.column_of(sid(3)) < 0);
    CHECK(bounds_1d(Y) == bounds_1d(X));
    CHECK_THROWS_AS(reduce(X, 1, IdVector{sid(1)}, p), ContractError);
}

TEST_CASE("reduce: equal norms drop the older symbol first") {
    SymbolProvider p(100);
    Eigen::MatrixXd R(1, 3);
    R << 1, 1, 1;
    const SZonotope X(vec({0}), R, {sid(3), sid(1), sid(2)});
    const SZonotope Y = reduce(X, 2, {}, p);
    CHECK(Y.column_of(sid(3)) >= 0);
    CHECK(Y.column_of(sid(1)) < 0);
    CHECK(Y.column_of(sid(2)) < 0);
}

TEST_CASE("reduce: support dominance on random sets") {
    Rng rng(5);
    SymbolProvider p;
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = static_cast<Eigen::Index>(rng.integer(1, 4));
        const auto m = static_cast<Eigen::Index>(rng.integer(1, 12));
        const SZonotope X = testing::random_szonotope(rng, n, m, p);
        const auto q = static_cast<std::size_t>(rng.integer(static_cast<int>(n), static_cast<int>(n) + 8));
        const SZonotope Y = reduce(X, q, {}, p);
        CHECK(static_cast<std::size_t>(Y.num_symbols()) <= std::max(q, static_cast<std::size_t>(m)));
        if (static_cast<std::size_t>(m) > q) {
            CHECK(static_cast<std::size_t>(Y.num_symbols()) <= q);
        }
        for (int d = 0; d < 100; ++d) {
            const Eigen::VectorXd h = rng.direction(n);
            CHECK(testing::support_oracle(h, X) <= testing::support_oracle(h, Y) + 1e-12);
        }
    }
}

TEST_CASE("support") {
    const SZonotope X(vec({1, 2}), (Eigen::MatrixXd(2, 3) << 1, 0, 0.5, 0, 2, 0.1).finished(),
                      {sid(1), sid(2), sid(3)});
    CHECK(support(vec({1, 0}), X) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(support(vec({0, 0}), X) == 0.0);
    const Eigen::VectorXd h = vec({0.3, -0.7});
    const double inf = -support(-h, X);
    CHECK(inf == doctest::Approx(h.dot(X.center()) - (h.transpose() * X.generators()).cwiseAbs().sum()));
}

TEST_CASE("disjoint_from and contained_in") {
    SymbolProvider p;
    const SZonotope unit = SZonotope::from_box(vec({0}), vec({1}), p);
    CHECK(disjoint_from(unit, Polyhedron(Eigen::MatrixXd::Ones(1, 1), vec({-1}))));
    CHECK_FALSE(disjoint_from(unit, Polyhedron(Eigen::MatrixXd::Ones(1, 1), vec({0.5}))));

    const SZonotope sq = SZonotope::from_box(vec({0, 0}), vec({1, 1}), p);
    CHECK(disjoint_from(sq, Polyhedron(Eigen::MatrixXd::Ones(1, 2), vec({-0.1}))));
    CHECK_FALSE(disjoint_from(sq, Polyhedron::whole_space(2)));

    const Polyhedron G = Polyhedron::box(vec({-2, -2}), vec({2, 2}));
    CHECK(contained_in(sq, G));
    CHECK_FALSE(contained_in(SZonotope::from_box(vec({0, 0}), vec({3, 1}), p), G));
    CHECK(contained_in(sq, Polyhedron::whole_space(2)));
}

TEST_CASE("bisect_symbol") {
    SymbolProvider p(10);
    const SZonotope X = z1(0.5, {0.5}, {1});
    const auto [upper, lower] = bisect_symbol(X, sid(1), p);
    CHECK(upper.center()(0) == 0.75);
    CHECK(upper.generators()(0, 0) == 0.25);
    CHECK(upper.ids() == IdVector{sid(10)});
    CHECK(lower.center()(0) == 0.25);
    CHECK(lower.generators()(0, 0) == 0.25);
    CHECK(lower.ids() == IdVector{sid(11)});
    CHECK(bounds_1d(upper) == Interval{0.5, 1});
    CHECK(bounds_1d(lower) == Interval{0, 0.5});

    const SZonotope zc = z1(1, {0, 2}, {1, 2});
    const auto [za, zb] = bisect_symbol(zc, sid(1), p);
    CHECK(za.center() == zb.center());
    CHECK(za.generators() == zb.generators());

    const SZonotope two(vec({0, 1}), (Eigen::MatrixXd(2, 2) << 1, 2, 3, 4).finished(), {sid(1), sid(2)});
    const auto [ta, tb] = bisect_symbol(two, sid(2), p);
    CHECK(ta.generators().col(0) == two.generators().col(0));
    CHECK(ta.ids()[0] == sid(1));
    CHECK(ta.generators().col(1) == vec({1, 2}));
    CHECK(tb.generators().col(1) == vec({1, 2}));

    CHECK_THROWS_AS(bisect_symbol(X, sid(99), p), ContractError);
}

TEST_CASE("bisect_symbol: union of hulls equals the parent hull") {
    Rng rng(8);
    SymbolProvider p;
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = static_cast<Eigen::Index>(rng.integer(1, 3));
        const SZonotope X = testing::random_szonotope(rng, n, 3, p);
        const SymbolId target = X.ids()[static_cast<std::size_t>(rng.integer(0, 2))];
        const auto [a, b] = bisect_symbol(X, target, p);
        const auto hx = interval_hull(X);
        const auto ha = interval_hull(a);
        const auto hb = interval_hull(b);
        for (std::size_t d = 0; d < hx.size(); ++d) {
            CHECK(std::abs(std::min(ha[d].lo, hb[d].lo) - hx[d].lo) <= 1e-12);
            CHECK(std::abs(std::max(ha[d].hi, hb[d].hi) - hx[d].hi) <= 1e-12);
        }
    }
}

TEST_CASE("f_radius") {
    CHECK(f_radius(Eigen::MatrixXd::Zero(2, 2)) == 0.0);
    CHECK(f_radius(Eigen::MatrixXd::Identity(2, 2)) == doctest::Approx(std::sqrt(2.0)));
    CHECK(f_radius((Eigen::MatrixXd(2, 1) << 3, 4).finished()) == 5.0);
}

TEST_CASE("columns_of and columns_excluding") {
    const SZonotope X(vec({0}), (Eigen::MatrixXd(1, 3) << 1, 2, 3).finished(), {sid(1), sid(2), sid(3)});
    const IdVector wanted{sid(3), sid(9)};
    const Eigen::MatrixXd A = columns_of(X, wanted);
    CHECK(A(0, 0) == 3.0);
    CHECK(A(0, 1) == 0.0);
    const Eigen::MatrixXd B = columns_excluding(X, wanted);
    REQUIRE(B.cols() == 2);
    CHECK(B(0, 0) == 1.0);
    CHECK(B(0, 1) == 2.0);
}

TEST_CASE("soundness oracle: exact operations agree with pointwise evaluation") {
    Rng rng(21);
    SymbolProvider p;
    const IdVector pool = p.fresh_ids(8);
    const auto pick = [&](int count) {
        IdVector v = pool;
        std::shuffle(v.begin(), v.end(), rng.engine());
        v.resize(static_cast<std::size_t>(count));
        return v;
    };
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = static_cast<Eigen::Index>(rng.integer(1, 3));
        const SZonotope X(rng.vector(n), rng.matrix(n, 4), pick(4));
        const SZonotope Y(rng.vector(n), rng.matrix(n, 3), pick(3));
        const Eigen::MatrixXd M = rng.matrix(2, n);
        const SZonotope S = add(X, Y);
        const SZonotope L = linear_image(M, X);
        const SZonotope V = vcat(X, Y);
        for (int s = 0; s < 100; ++s) {
            const Eigen::VectorXd v = rng.valuation(8);
            const Eigen::VectorXd x = X.evaluate(testing::restrict_valuation(X.ids(), pool, v));
            const Eigen::VectorXd y = Y.evaluate(testing::restrict_valuation(Y.ids(), pool, v));
            CHECK((S.evaluate(testing::restrict_valuation(S.ids(), pool, v)) - (x + y)).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK((L.evaluate(testing::restrict_valuation(L.ids(), pool, v)) - M * x).cwiseAbs().maxCoeff() <= 1e-12);
            Eigen::VectorXd xy(2 * n);
            xy << x, y;
            CHECK((V.evaluate(testing::restrict_valuation(V.ids(), pool, v)) - xy).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK(testing::support_excess(rng, x + y, S, 10) <= 1e-9);
        }
        // cancellation
        CHECK(add(X, linear_image(-Eigen::MatrixXd::Identity(n, n), X)).generators().isZero(0.0));
        // subadditivity, with equality for disjoint supports
        for (int d = 0; d < 20; ++d) {
            const Eigen::VectorXd h = rng.direction(n);
            CHECK(support(h, S) <= support(h, X) + support(h, Y) + 1e-12);
        }
        const SZonotope Yd(rng.vector(n), rng.matrix(n, 2), p.fresh_ids(2));
        const Eigen::VectorXd h = rng.direction(n);
        CHECK(support(h, add(X, Yd)) == doctest::Approx(support(h, X) + support(h, Yd)).epsilon(1e-12));
    }
}

TEST_CASE("soundness oracle: products and reductions dominate sampled points") {
    Rng rng(22);
    SymbolProvider p;
    const IdVector pool = p.fresh_ids(5);
    for (int trial = 0; trial < 100; ++trial) {
        const SZonotope X(rng.vector(1), rng.matrix(1, 3), IdVector(pool.begin(), pool.begin() + 3));
        const SZonotope Y(rng.vector(1), rng.matrix(1, 3), IdVector(pool.begin() + 2, pool.end()));
        const SZonotope Z = multiply(X, Y, p);
        const SZonotope W = vcat(X, Y);
        const SZonotope R = reduce(W, 3, {}, p);
        for (int s = 0; s < 200; ++s) {
            const Eigen::VectorXd v = rng.valuation(5);
            const double x = X.evaluate(testing::restrict_valuation(X.ids(), pool, v))(0);
            const double y = Y.evaluate(testing::restrict_valuation(Y.ids(), pool, v))(0);
            CHECK(testing::support_excess(rng, vec({x * y}), Z, 4) <= 1e-9);
            CHECK(testing::support_excess(rng, vec({x, y}), R, 100) <= 1e-9);
        }
    }
}
