#include <doctest.h>

#include <map>

#include "lcc/poly.hpp"
#include "lcc/subcube.hpp"
#include "lcc/util.hpp"

using namespace lcc;
using namespace lcc::poly;
using groups::GroupSpec;
using groups::GroupValue;

namespace {

MultilinearPoly parse(std::uint32_t n, std::uint32_t d, const char* group,
                      const std::string& text) {
    return MultilinearPoly::parse_text(n, d, GroupSpec::parse(group), text);
}

} // namespace

TEST_CASE("evaluation examples") {
    auto p = parse(4, 2, "Z", "1*x1*x2");
    CHECK(p.evaluate(CubePoint::from_bits("1100")).to_string() == "1");
    CHECK(p.evaluate(CubePoint::from_bits("1010")).is_zero());

    auto zero = MultilinearPoly(3, 2, GroupSpec::integers());
    CHECK(zero.evaluate(CubePoint::from_bits("101")).is_zero());

    auto q = parse(3, 2, "Z", "2 + 3*x1 + -1*x1*x3");
    CHECK(q.evaluate(CubePoint::from_bits("101")).to_string() == "4");
}

TEST_CASE("subtraction and sparsity") {
    auto p = parse(3, 2, "Z", "1*x1 + 1*x2*x3");
    CHECK((p - p).is_zero());
    CHECK(p.sparsity() == 2);
    CHECK(MultilinearPoly(3, 2, GroupSpec::integers()).degree() == 0);
    CHECK(p.degree() == 2);
}

TEST_CASE("canonical form drops cancelled terms") {
    auto p = parse(2, 1, "Z", "1*x1 + 1*x2");
    auto q = parse(2, 1, "Z", "1*x1");
    auto diff = p - q;
    CHECK(diff.sparsity() == 1);
    CHECK(diff == parse(2, 1, "Z", "1*x2"));
    // Z_2: x1 + x1 = 0 on construction.
    auto doubled = parse(2, 1, "Z%2", "1*x1 + 1*x1");
    CHECK(doubled.is_zero());
}

TEST_CASE("restriction examples") {
    // Identity embedding restricts to the same polynomial.
    auto p = parse(3, 2, "Z", "2 + 3*x1 + -1*x1*x3");
    auto id = subcube::SubcubeEmbedding::identity(3);
    CHECK(p.restrict_to_subcube(id) == p);

    // x1 + x2 over Z_2 with both variables glued: 2 y1 = 0.
    auto q = parse(2, 1, "Z%2", "1*x1 + 1*x2");
    subcube::SubcubeEmbedding glue(CubePoint(2), {0, 0}, 1);
    CHECK(q.restrict_to_subcube(glue).is_zero());
}

TEST_CASE("restriction commutes with evaluation") {
    SplitRng rng(5);
    for (const char* group : {"Z", "Z%4", "Z%2 x Z%3"}) {
        auto spec = GroupSpec::parse(group);
        for (int rep = 0; rep < 10; ++rep) {
            std::uint32_t n = 5, k = 3;
            auto p = random_poly(n, 2, spec, RandomPolyModel::dense(), rng);
            CubePoint a(n);
            for (std::uint32_t i = 0; i < n; ++i) a.set(i, rng.coin());
            std::vector<std::uint32_t> h(n);
            for (auto& v : h) v = static_cast<std::uint32_t>(rng.uniform(k));
            subcube::SubcubeEmbedding c(a, h, k);
            auto q = p.restrict_to_subcube(c);
            CHECK(q.degree() <= p.degree());
            for_each_point(k, [&](const CubePoint& y) {
                CHECK(q.evaluate(y) == p.evaluate(c.lift(y)));
            });
        }
    }
}

TEST_CASE("distance examples") {
    auto p = parse(3, 3, "Z%2", "1*x1*x2*x3");
    auto zero = MultilinearPoly(3, 3, GroupSpec::cyclic(2));
    CHECK(distance(p, p) == 0);
    CHECK(distance(p, zero) == mpq_class(1, 8));

    auto x1 = parse(1, 1, "Z%2", "1*x1");
    auto not_x1 = parse(1, 1, "Z%2", "1 + 1*x1");
    CHECK(distance(x1, not_x1) == 1);
}

TEST_CASE("DLSZ on small cubes: distinct polynomials differ on >= 2^-d") {
    // Exhaustive over Z_2 for n <= 4, d <= 2 via truth tables.
    auto spec = GroupSpec::cyclic(2);
    for (std::uint32_t n : {3u, 4u}) {
        for (std::uint32_t d : {1u, 2u}) {
            auto basis = monomial_basis(n, d);
            std::uint64_t count = std::uint64_t(1) << basis.size();
            std::uint64_t size = std::uint64_t(1) << n;
            std::vector<std::uint64_t> tables;
            tables.reserve(count);
            for (std::uint64_t c = 0; c < count; ++c) {
                std::uint64_t tbl = 0;
                for (std::uint64_t x = 0; x < size; ++x) {
                    int v = 0;
                    for (std::size_t m = 0; m < basis.size(); ++m)
                        if (((c >> m) & 1) && (basis[m].mask64() & ~x) == 0) v ^= 1;
                    if (v) tbl |= std::uint64_t(1) << x;
                }
                tables.push_back(tbl);
            }
            std::uint64_t min_diff = size;
            for (std::size_t i = 0; i < tables.size(); ++i)
                for (std::size_t j = i + 1; j < tables.size(); ++j)
                    min_diff = std::min<std::uint64_t>(
                        min_diff, __builtin_popcountll(tables[i] ^ tables[j]));
            CHECK(min_diff * (std::uint64_t(1) << d) >= size);
        }
    }
}

TEST_CASE("leading monomial under graded lex") {
    auto p = parse(4, 2, "Z", "1*x1*x3 + 1*x2");
    CHECK(p.leading_monomial() == Monomial({0, 2}));

    auto q = parse(4, 2, "Z", "1*x1*x4 + 1*x2*x3");
    CHECK(q.leading_monomial() == Monomial({0, 3}));

    auto c = parse(4, 2, "Z", "5");
    CHECK(c.leading_monomial() == Monomial::empty());

    CHECK_THROWS_AS(MultilinearPoly(2, 1, GroupSpec::integers()).leading_monomial(),
                    std::invalid_argument);
}

TEST_CASE("slice nonzero counts") {
    auto p = parse(4, 1, "Z", "1*x1 + -1*x2");
    CHECK(slice_nonzero_count(p, 2) == 4);
    CHECK(binomial(4 - 2, 2 - 1) == 2); // the DLSZ slice bound it must beat

    auto c = parse(4, 1, "Z", "7");
    CHECK(slice_nonzero_count(c, 2) == 6);

    // x1 + x2 over Z_2 vanishes on every weight-1... no: on the weight-2
    // slice of n=2 it vanishes (both bits set).
    auto q = parse(2, 1, "Z%2", "1*x1 + 1*x2");
    CHECK(slice_nonzero_count(q, 2) == 0);
}

TEST_CASE("slice DLSZ bound on random polynomials") {
    SplitRng rng(17);
    int checked = 0;
    for (int rep = 0; rep < 300; ++rep) {
        std::uint32_t n = 6 + static_cast<std::uint32_t>(rng.uniform(7)); // 6..12
        std::uint32_t d = 1 + static_cast<std::uint32_t>(rng.uniform(2));
        std::uint32_t k_lo = d, k_hi = n - d;
        if (k_lo > k_hi) continue;
        std::uint32_t k = k_lo + static_cast<std::uint32_t>(rng.uniform(k_hi - k_lo + 1));
        auto spec = rng.coin() ? GroupSpec::cyclic(2) : GroupSpec::parse("Z%3");
        auto p = random_poly(n, d, spec, RandomPolyModel::dense(), rng);
        std::uint64_t cnt = slice_nonzero_count(p, k);
        if (cnt == 0) continue;
        CHECK(mpz_class(cnt) >= binomial(n - 2 * d, static_cast<long>(k) - d));
        ++checked;
    }
    CHECK(checked > 100);
}

TEST_CASE("random models") {
    SplitRng rng(23);
    auto spec = GroupSpec::cyclic(5);
    CHECK(random_poly(6, 2, spec, RandomPolyModel::with_sparsity(0), rng).is_zero());
    auto s3 = random_poly(6, 2, spec, RandomPolyModel::with_sparsity(3), rng);
    CHECK(s3.sparsity() == 3);

    auto batch = random_disjoint_lm_batch(12, 2, 5, 1, spec, rng);
    REQUIRE(batch.size() == 5);
    for (std::size_t i = 0; i < batch.size(); ++i) {
        for (std::size_t j = i + 1; j < batch.size(); ++j) {
            auto mi = batch[i].leading_monomial();
            auto mj = batch[j].leading_monomial();
            for (auto v : mi.vars()) CHECK(!mj.contains(v));
        }
    }
    CHECK_THROWS_AS(random_disjoint_lm_batch(5, 2, 3, 0, spec, rng),
                    std::invalid_argument);
}

TEST_CASE("uniform-dense model is uniform over small polynomial space") {
    // n=2, d=1 over Z_2: 8 polynomials, chi-square over many seeds.
    auto spec = GroupSpec::cyclic(2);
    std::map<std::string, int> counts;
    const int trials = 8000;
    SplitRng rng(99);
    for (int i = 0; i < trials; ++i) {
        auto p = random_poly(2, 1, spec, RandomPolyModel::dense(), rng);
        counts[p.to_text()]++;
    }
    REQUIRE(counts.size() == 8);
    double expected = trials / 8.0;
    double chi2 = 0;
    for (const auto& [text, c] : counts) {
        double dev = c - expected;
        chi2 += dev * dev / expected;
    }
    CHECK(chi2 < 24.3); // chi-square 7 dof, far tail (p ~ 0.001)
}

TEST_CASE("poly text round trip") {
    SplitRng rng(31);
    for (const char* group : {"Z", "Q", "Z%4", "Z%2 x Z%3"}) {
        auto spec = GroupSpec::parse(group);
        for (int i = 0; i < 20; ++i) {
            auto p = random_poly(5, 2, spec, RandomPolyModel::dense(), rng);
            CHECK(MultilinearPoly::parse_text(5, 2, spec, p.to_text()) == p);
        }
    }
}

TEST_CASE("evaluate_table matches pointwise evaluation") {
    SplitRng rng(41);
    auto spec = GroupSpec::parse("Z%6");
    auto p = random_poly(8, 2, spec, RandomPolyModel::dense(), rng);
    auto table = p.evaluate_table();
    for_each_point(8, [&](const CubePoint& x) {
        CHECK(table[x.index()] == p.evaluate(x));
    });
}
