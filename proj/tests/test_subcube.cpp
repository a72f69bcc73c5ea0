#include <doctest.h>

#include <map>
#include <set>

#include "lcc/poly.hpp"
#include "lcc/subcube.hpp"

using namespace lcc;
using namespace lcc::subcube;

TEST_CASE("lift basics") {
    SplitRng rng(1);
    CubePoint a = CubePoint::from_bits("10110");
    auto c = sample_uniform_embedding(a, 3, rng);
    CHECK(c.lift(CubePoint(3)) == a);

    // Constant hash, zero base: the all-ones cube point lifts to all ones.
    SubcubeEmbedding constant(CubePoint(5), {0, 0, 0, 0, 0}, 1);
    CHECK(constant.lift(CubePoint::from_bits("1")) == CubePoint::from_bits("11111"));
}

TEST_CASE("lift is an xor homomorphism up to the base point") {
    SplitRng rng(2);
    for (int rep = 0; rep < 20; ++rep) {
        CubePoint a(8);
        for (std::uint32_t i = 0; i < 8; ++i) a.set(i, rng.coin());
        auto c = sample_uniform_embedding(a, 4, rng);
        for (int s = 0; s < 20; ++s) {
            CubePoint y(4), yp(4);
            for (std::uint32_t i = 0; i < 4; ++i) {
                y.set(i, rng.coin());
                yp.set(i, rng.coin());
            }
            CHECK((c.lift(y ^ yp) ^ c.lift(y) ^ c.lift(yp)) == a);
        }
    }
}

TEST_CASE("weighted embedding point mass gives a constant hash") {
    SplitRng rng(3);
    auto c = sample_weighted_embedding(CubePoint(6), 3,
                                       {mpz_class(0), mpz_class(1), mpz_class(0)}, rng);
    for (auto v : c.map) CHECK(v == 1);
}

TEST_CASE("weighted embedding rejects bad weights") {
    SplitRng rng(3);
    CHECK_THROWS_AS(sample_weighted_embedding(CubePoint(6), 2,
                                              {mpz_class(-1), mpz_class(2)}, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(sample_weighted_embedding(CubePoint(6), 2, {mpz_class(1)}, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(sample_weighted_embedding(CubePoint(6), 2,
                                              {mpz_class(0), mpz_class(0)}, rng),
                    std::invalid_argument);
}

TEST_CASE("weighted embedding matches the weight distribution") {
    SplitRng rng(4);
    std::vector<mpz_class> weights = {1, 2, 5};
    std::map<std::uint32_t, int> counts;
    const int trials = 4000;
    for (int i = 0; i < trials; ++i) {
        auto c = sample_weighted_embedding(CubePoint(1), 3, weights, rng);
        counts[c.map[0]]++;
    }
    double chi2 = 0;
    for (std::uint32_t j = 0; j < 3; ++j) {
        double expected = trials * weights[j].get_d() / 8.0;
        double dev = counts[j] - expected;
        chi2 += dev * dev / expected;
    }
    CHECK(chi2 < 13.8); // 2 dof far tail
}

TEST_CASE("spanned subcube invariants") {
    SplitRng rng(5);
    for (int rep = 0; rep < 25; ++rep) {
        std::uint32_t n = 8, k = 3;
        CubePoint a(n), b(n);
        for (std::uint32_t i = 0; i < n; ++i) {
            a.set(i, rng.coin());
            b.set(i, rng.coin());
        }
        auto c = sample_uniform_embedding(a, k, rng);
        auto spanned = span_subcube(c, b, rng);

        CHECK(spanned.w.weight() == k);
        CHECK(spanned.outer.lift(spanned.w) == b);
        CHECK(spanned.outer.base == a);

        // Every point of the inner cube appears in the outer cube.
        std::set<CubePoint> outer_points;
        for_each_point(2 * k, [&](const CubePoint& z) {
            outer_points.insert(spanned.outer.lift(z));
        });
        for_each_point(k, [&](const CubePoint& y) {
            CHECK(outer_points.count(c.lift(y)) == 1);
        });
    }
}

TEST_CASE("span with b = a reproduces the inner cube along sigma") {
    SplitRng rng(6);
    std::uint32_t n = 6, k = 2;
    CubePoint a(n);
    for (std::uint32_t i = 0; i < n; ++i) a.set(i, rng.coin());
    auto c = sample_uniform_embedding(a, k, rng);
    auto spanned = span_subcube(c, a, rng);
    CHECK(spanned.outer.lift(spanned.w) == a);
    // With v = 0 every coordinate uses sigma(j): embedding z -> x only reads
    // the first-half labels, so the inner cube is recovered exactly.
    for_each_point(k, [&](const CubePoint& y) {
        CubePoint z(2 * k);
        for (std::uint32_t j = 0; j < k; ++j) z.set(spanned.sigma[j], y.bit(j));
        CHECK(spanned.outer.lift(z) == c.lift(y));
    });
}

TEST_CASE("pairing identification restricts consistently") {
    // Restricting through C^b and then pairing equals restricting to the
    // inner cube directly; checked by exhaustive evaluation.
    SplitRng rng(7);
    auto spec = groups::GroupSpec::parse("Z%4");
    for (int rep = 0; rep < 10; ++rep) {
        std::uint32_t n = 7, k = 3;
        CubePoint a(n), b(n);
        for (std::uint32_t i = 0; i < n; ++i) {
            a.set(i, rng.coin());
            b.set(i, rng.coin());
        }
        auto c = sample_uniform_embedding(a, k, rng);
        auto spanned = span_subcube(c, b, rng);
        auto p = poly::random_poly(n, 2, spec, poly::RandomPolyModel::dense(), rng);

        auto on_outer = p.restrict_to_subcube(spanned.outer);
        SubcubeEmbedding pairing_embed(CubePoint(2 * k), spanned.pairing(), k);
        auto paired = on_outer.restrict_to_subcube(pairing_embed);
        auto direct = p.restrict_to_subcube(c);
        CHECK(paired == direct);
    }
}

TEST_CASE("two-to-one maps have fibers of size two") {
    SplitRng rng(8);
    for (std::uint32_t two_k : {2u, 4u, 8u, 12u}) {
        auto rho = random_two_to_one(two_k, rng);
        std::map<std::uint32_t, int> fiber;
        for (auto v : rho) fiber[v]++;
        CHECK(fiber.size() == two_k / 2);
        for (const auto& [j, cnt] : fiber) CHECK(cnt == 2);
    }
    CHECK_THROWS_AS(random_two_to_one(3, rng), std::invalid_argument);
    auto unique_pairing = random_two_to_one(2, rng);
    CHECK(unique_pairing == std::vector<std::uint32_t>{0, 0});
}

TEST_CASE("two-to-one pairings are uniform on [4]") {
    SplitRng rng(9);
    std::map<std::vector<std::uint32_t>, int> counts;
    const int trials = 3000;
    for (int i = 0; i < trials; ++i) counts[random_two_to_one(4, rng)]++;
    REQUIRE(counts.size() == 3);
    double chi2 = 0;
    for (const auto& [rho, c] : counts) {
        double dev = c - trials / 3.0;
        chi2 += dev * dev / (trials / 3.0);
    }
    CHECK(chi2 < 13.8);
}

TEST_CASE("subcube sampling concentrates with growing k") {
    // Density of a fixed random set on random subcubes approaches the true
    // density as the dimension grows (trend only, no constants asserted).
    SplitRng rng(10);
    std::uint32_t n = 14;
    std::set<std::uint64_t> target;
    for_each_point(n, [&](const CubePoint& x) {
        if (SplitRng::mix(777, x.hash()) & 1) target.insert(x.index());
    });
    double mu = static_cast<double>(target.size()) / (1 << n);

    std::vector<double> mean_dev;
    for (std::uint32_t k : {3u, 6u, 9u}) {
        double total = 0;
        const int trials = 60;
        for (int t = 0; t < trials; ++t) {
            CubePoint a(n);
            for (std::uint32_t i = 0; i < n; ++i) a.set(i, rng.coin());
            auto c = sample_uniform_embedding(a, k, rng);
            std::uint64_t hit = 0;
            for_each_point(k, [&](const CubePoint& y) {
                if (target.count(c.lift(y).index())) ++hit;
            });
            total += std::abs(static_cast<double>(hit) / (1 << k) - mu);
        }
        mean_dev.push_back(total / trials);
    }
    CHECK(mean_dev[2] < mean_dev[0]);
}
