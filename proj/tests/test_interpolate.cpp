#include <doctest.h>

#include <cmath>
#include <set>

#include "lcc/interpolate.hpp"
#include "lcc/poly.hpp"
#include "lcc/subcube.hpp"
#include "lcc/util.hpp"

using namespace lcc;
using namespace lcc::interp;
using groups::GroupSpec;
using groups::GroupValue;

TEST_CASE("integer_solve examples") {
    // Parity obstruction: 2c = 1 has no integral solution.
    IntegerMatrix m(1, 1);
    m.at(0, 0) = 2;
    CHECK(!integer_solve(m, {mpz_class(1)}).has_value());
    CHECK(integer_solve(m, {mpz_class(6)}).value() == IntVector{mpz_class(3)});

    // Identity system returns the right-hand side.
    IntegerMatrix id = IntegerMatrix::identity(4);
    IntVector beta = {mpz_class(3), mpz_class(-1), mpz_class(0), mpz_class(12)};
    CHECK(integer_solve(id, beta).value() == beta);

    // Inconsistent zero row.
    IntegerMatrix z(2, 1);
    z.at(0, 0) = 1;
    z.at(1, 0) = 0;
    CHECK(!integer_solve(z, {mpz_class(1), mpz_class(5)}).has_value());
    CHECK(integer_solve(z, {mpz_class(1), mpz_class(0)}).has_value());
}

TEST_CASE("integer_solve on random planted systems") {
    SplitRng rng(6021);
    for (int rep = 0; rep < 60; ++rep) {
        std::size_t rows = 2 + rng.uniform(4);
        std::size_t cols = 2 + rng.uniform(5);
        IntegerMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                m.at(i, j) = static_cast<long>(rng.uniform(11)) - 5;
        IntVector planted(cols);
        for (auto& v : planted) v = static_cast<long>(rng.uniform(9)) - 4;
        IntVector beta(rows, 0);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) beta[i] += m.at(i, j) * planted[j];

        auto solved = integer_solve(m, beta);
        REQUIRE(solved.has_value());
        // The returned solution need not equal the planted one, but must
        // reproduce the right-hand side exactly.
        for (std::size_t i = 0; i < rows; ++i) {
            mpz_class acc = 0;
            for (std::size_t j = 0; j < cols; ++j) acc += m.at(i, j) * (*solved)[j];
            CHECK(acc == beta[i]);
        }
    }
}

TEST_CASE("kummer valuation examples") {
    CHECK(kummer_valuation(4, 2, 2) == 1);  // C(4,2) = 6 = 2 * 3
    CHECK(kummer_valuation(9, 3, 3) == 1);  // C(9,3) = 84 = 2^2 * 3 * 7
    for (long a = 0; a <= 20; ++a) CHECK(kummer_valuation(a, 0, 5) == 0);
    CHECK_THROWS_AS(kummer_valuation(10, 2, 4), std::invalid_argument);
    CHECK_THROWS_AS(kummer_valuation(2, 5, 3), std::invalid_argument);
}

TEST_CASE("kummer equals the factorization-based valuation") {
    for (long a = 0; a <= 60; ++a) {
        for (long b = 0; b <= a; ++b) {
            mpz_class binom = binomial(a, b);
            for (long p : {2, 3, 5}) {
                unsigned direct = (binom == 1) ? 0 : padic_valuation(binom, p);
                CHECK(kummer_valuation(a, b, p) == direct);
            }
        }
    }
}

TEST_CASE("digit sums") {
    CHECK(digit_sum(9, 3) == 1);
    CHECK(digit_sum(6, 3) == 2);
    CHECK(digit_sum(255, 2) == 8);
    CHECK(digit_sum(0, 7) == 0);
}

TEST_CASE("interpolating set base cases") {
    // d = 0, k = 10: slack 0 forces exact balance; a single weight-5 point.
    auto s0 = WeightedInterpolatingSet::build(0, 10);
    REQUIRE(s0.points().size() == 1);
    CHECK(s0.points()[0].weight() == 5);
    CHECK(s0.slack() == 0);
    CHECK(s0.balance_holds());

    // d = 1, k = 20: unit weights, every point within one of weight 10.
    auto s1 = WeightedInterpolatingSet::build(1, 20);
    CHECK(s1.total_weight() == 20);
    CHECK(s1.slack() == 1);
    for (const auto& p : s1.points()) {
        CHECK(p.weight() >= 9);
        CHECK(p.weight() <= 11);
    }
    mpz_class bound = mpz_class(2 * 21) * 1; // (2(r+1))^d * m^d
    CHECK(mpz_class(static_cast<unsigned long>(s1.points().size())) <= bound);

    // d = 1, k = 40: two blocks, W = 60, slack 1, |S| <= 84.
    auto s2 = WeightedInterpolatingSet::build(1, 40);
    CHECK(s2.total_weight() == 60);
    CHECK(s2.slack() == 1);
    CHECK(s2.points().size() <= 84);
    CHECK(s2.balance_holds());

    CHECK_THROWS_AS(WeightedInterpolatingSet::build(1, 30), std::invalid_argument);
    CHECK_THROWS_AS(WeightedInterpolatingSet::build(1, 0), std::invalid_argument);
}

TEST_CASE("interpolating set hits every nonzero polynomial (sampled)") {
    SplitRng rng(31337);
    for (std::uint32_t d : {1u, 2u}) {
        std::uint32_t k = 10 * (d + 1);
        auto set = cached_interpolating_set(d, k);
        for (const char* group : {"Z%2", "Z%3", "Z%4", "Z"}) {
            auto spec = GroupSpec::parse(group);
            for (int rep = 0; rep < 60; ++rep) {
                auto q = poly::random_poly(k, d, spec,
                                           poly::RandomPolyModel::dense(), rng);
                if (q.is_zero()) continue;
                bool hit = false;
                for (const auto& u : set->points())
                    if (!q.evaluate(u).is_zero()) {
                        hit = true;
                        break;
                    }
                CHECK(hit);
            }
        }
    }
}

TEST_CASE("moment identity for interpolation coefficients") {
    SplitRng rng(90210);
    auto set = cached_interpolating_set(1, 20);
    auto basis = poly::monomial_basis(20, 1);

    // b in S: any valid coefficients must still satisfy the moment rows.
    const CubePoint& inside = set->points()[2];
    auto c_in = set->coefficients_for(inside);
    for (const auto& m : basis) {
        mpz_class acc = 0;
        for (std::size_t u = 0; u < set->points().size(); ++u)
            if (m.evaluates_one(set->points()[u])) acc += c_in[u];
        CHECK(acc == (m.evaluates_one(inside) ? 1 : 0));
    }

    // b = 0: sum c_u Q(u) = Q(0) over several groups; the x1 moment row
    // collapses to "sum of c_u over points containing x1 is zero".
    CubePoint zero(20);
    auto c0 = set->coefficients_for(zero);
    {
        mpz_class acc = 0;
        for (std::size_t u = 0; u < set->points().size(); ++u)
            if (set->points()[u].bit(0)) acc += c0[u];
        CHECK(acc == 0);
        mpz_class total = 0;
        for (const auto& cu : c0) total += cu;
        CHECK(total == 1); // empty-monomial moment row
    }
    for (const char* group : {"Z%5", "Z"}) {
        auto spec = GroupSpec::parse(group);
        for (int rep = 0; rep < 100; ++rep) {
            auto q = poly::random_poly(20, 1, spec, poly::RandomPolyModel::dense(), rng);
            GroupValue acc = GroupValue::zero(spec);
            for (std::size_t u = 0; u < set->points().size(); ++u)
                if (c0[u] != 0)
                    acc = acc + groups::int_scale(c0[u], q.evaluate(set->points()[u]));
            CHECK(acc == q.evaluate(zero));
        }
    }
}

TEST_CASE("moment identity at degree 2") {
    SplitRng rng(111);
    auto set = cached_interpolating_set(2, 30);
    CubePoint b(30);
    for (std::uint32_t i = 0; i < 30; ++i) b.set(i, (i * 7) % 3 == 1);
    auto c = set->coefficients_for(b);
    for (const char* group : {"Q", "Z%4"}) {
        auto spec = GroupSpec::parse(group);
        for (int rep = 0; rep < 25; ++rep) {
            auto q = poly::random_poly(30, 2, spec,
                                       poly::RandomPolyModel::with_sparsity(40), rng);
            GroupValue acc = GroupValue::zero(spec);
            for (std::size_t u = 0; u < set->points().size(); ++u)
                if (c[u] != 0)
                    acc = acc + groups::int_scale(c[u], q.evaluate(set->points()[u]));
            CHECK(acc == q.evaluate(b));
        }
    }
}

TEST_CASE("slice coefficients for exponent 2") {
    auto sc = slice_coefficients(1, 2);
    CHECK(sc.k == 8);
    CHECK(binomial(9, 8) == 9);   // odd
    CHECK(binomial(8, 7) == 8);   // divisible by 2
    CHECK(sc.unit == 1);
    CHECK(sc.query_count() == 9);

    // Exhaustive identity on the slice: sum_b c_b Q(b) = Q(0^16).
    auto spec = GroupSpec::cyclic(2);
    SplitRng rng(5150);
    std::vector<CubePoint> support;
    for_each_slice_point(16, 8, [&](const CubePoint& b) {
        if (sc.coefficient_nonzero(b)) support.push_back(b);
    });
    CHECK(mpz_class(static_cast<unsigned long>(support.size())) == sc.query_count());
    for (int rep = 0; rep < 50; ++rep) {
        auto q = poly::random_poly(16, 1, spec, poly::RandomPolyModel::dense(), rng);
        GroupValue acc = GroupValue::zero(spec);
        for (const auto& b : support)
            acc = acc + groups::int_scale(sc.unit, q.evaluate(b));
        CHECK(acc == q.evaluate(CubePoint(16)));
    }
}

TEST_CASE("slice coefficients for exponent 3") {
    auto sc = slice_coefficients(1, 3);
    CHECK(sc.k == 27);
    CHECK(binomial(28, 27) == 28);
    CHECK(kummer_valuation(28, 27, 3) == 0);
    CHECK(binomial(27, 26) == 27);
    CHECK(kummer_valuation(27, 26, 3) >= 1);
    CHECK((sc.unit * 28) % 3 == 1);

    auto spec = GroupSpec::cyclic(3);
    SplitRng rng(60);
    // Nonzero-coefficient points: weight 27 supported on the first 28 coords.
    std::vector<CubePoint> support;
    for (std::uint32_t hole = 0; hole < 28; ++hole) {
        CubePoint b(54);
        for (std::uint32_t i = 0; i < 28; ++i) b.set(i, i != hole);
        support.push_back(b);
    }
    for (int rep = 0; rep < 50; ++rep) {
        auto q = poly::random_poly(54, 1, spec, poly::RandomPolyModel::dense(), rng);
        GroupValue acc = GroupValue::zero(spec);
        for (const auto& b : support)
            acc = acc + groups::int_scale(sc.unit, q.evaluate(b));
        CHECK(acc == q.evaluate(CubePoint(54)));
    }
}

TEST_CASE("slice coefficients for composite exponents") {
    auto sc4 = slice_coefficients(1, 4);
    CHECK(sc4.k == 64);
    CHECK((sc4.unit * binomial(65, 64)) % 4 == 1);

    auto sc6 = slice_coefficients(2, 6);
    CHECK(sc6.k == 64 * 27); // 2^(3*2) * 3^3: s = 2 for p = 2 since 2^1 = d
    mpz_class c = binomial(sc6.k + 2, sc6.k);
    CHECK((sc6.unit * c) % 6 == 1);

    CHECK_THROWS_AS(slice_coefficients(1, 1), std::invalid_argument);
}

TEST_CASE("lifted set points approach uniform marginals as k grows") {
    // Under h ~ (w_j / W), coordinate i of the lift of y is 1 with
    // probability sum_{j in y} w_j / W, inside 1/2 +- t/W by the balance
    // band. The exact worst-case bias shrinks as k grows; a Monte-Carlo
    // marginal for one point validates the sampler against the formula.
    double worst_bias_20 = 0, worst_bias_40 = 0;
    for (std::uint32_t k : {20u, 40u}) {
        auto set = interp::cached_interpolating_set(1, k);
        double& worst = k == 20 ? worst_bias_20 : worst_bias_40;
        mpq_class w_total(set->total_weight());
        for (const auto& y : set->points()) {
            mpq_class bias = mpq_class(set->weighted_sum(y)) / w_total - mpq_class(1, 2);
            worst = std::max(worst, std::abs(bias.get_d()));
        }
        mpq_class band = mpq_class(set->slack()) / w_total;
        CHECK(worst <= band.get_d() + 1e-15);
    }
    CHECK(worst_bias_40 < worst_bias_20);

    // Sampler agreement: empirical marginal of the first lifted coordinate.
    auto set = interp::cached_interpolating_set(1, 20);
    const CubePoint& y = set->points()[0];
    mpq_class expected = mpq_class(set->weighted_sum(y)) / mpq_class(set->total_weight());
    SplitRng rng(2718);
    const int trials = 20000;
    int ones = 0;
    for (int t = 0; t < trials; ++t) {
        auto emb = subcube::sample_weighted_embedding(CubePoint(4), 20, set->weights(), rng);
        if (emb.lift(y).bit(0)) ++ones;
    }
    double sigma = std::sqrt(0.25 / trials);
    CHECK(std::abs(static_cast<double>(ones) / trials - expected.get_d()) < 4 * sigma);
}

TEST_CASE("interpolating set caching returns one instance") {
    auto a = cached_interpolating_set(1, 20);
    auto b = cached_interpolating_set(1, 20);
    CHECK(a.get() == b.get());
}
