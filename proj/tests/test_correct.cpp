#include <doctest.h>

#include <map>
#include <set>

#include "lcc/correct.hpp"
#include "lcc/subcube.hpp"
#include "lcc/util.hpp"

using namespace lcc;
using namespace lcc::correct;
using groups::GroupSpec;
using groups::GroupValue;
using oracle::CorruptionSpec;
using oracle::make_corrupted_oracle;
using oracle::make_poly_oracle;
using poly::MultilinearPoly;

namespace {

MultilinearPoly parse(std::uint32_t n, std::uint32_t d, const char* group,
                      const std::string& text) {
    return MultilinearPoly::parse_text(n, d, GroupSpec::parse(group), text);
}

CubePoint random_point(std::uint32_t n, SplitRng& rng) {
    CubePoint x(n);
    for (std::uint32_t i = 0; i < n; ++i) x.set(i, rng.coin());
    return x;
}

} // namespace

TEST_CASE("choose_k rounds up to a multiple of 10(d+1)") {
    CHECK(choose_k(32, 1, 4.0) == 40);  // ceil(4*2*5) = 40
    CHECK(choose_k(64, 1, 4.0) == 60);  // ceil(4*2*6) = 48 -> 60
    CHECK(choose_k(64, 2, 1.0) == 30);  // ceil(1*3*6) = 18 -> 30
    CHECK(choose_k(2, 1, 0.1) == 20);   // floor at 10(d+1)
}

TEST_CASE("majority-logic decode recovers exact tables") {
    SplitRng rng(2024);
    for (const char* group : {"Z", "Z%4", "Z%2 x Z%3"}) {
        auto spec = GroupSpec::parse(group);
        for (int rep = 0; rep < 10; ++rep) {
            auto p = poly::random_poly(5, 2, spec, poly::RandomPolyModel::dense(), rng);
            auto decoded = brute_force_unique_decode(p.evaluate_table(), 5, spec, 2,
                                                     mpq_class(1, 8));
            REQUIRE(decoded.has_value());
            CHECK(*decoded == p);
        }
    }
}

TEST_CASE("majority-logic decode corrects planted errors below the radius") {
    SplitRng rng(88);
    auto spec = GroupSpec::integers();
    for (int rep = 0; rep < 15; ++rep) {
        auto p = poly::random_poly(6, 1, spec, poly::RandomPolyModel::dense(), rng);
        auto table = p.evaluate_table();
        // 3 planted errors out of 64: rate < 1/4.
        std::set<std::uint64_t> bad;
        while (bad.size() < 3) bad.insert(rng.uniform(64));
        for (auto idx : bad)
            table[idx] = table[idx] + groups::canonical_nonzero(spec);
        auto decoded = brute_force_unique_decode(table, 6, spec, 1, mpq_class(1, 4));
        REQUIRE(decoded.has_value());
        CHECK(*decoded == p);
    }
}

TEST_CASE("majority-logic decode rejects tables beyond the radius") {
    // Majority of three bits has distance exactly 1/4 from every affine
    // function over Z_2 (verified by enumeration below), so unique decoding
    // at radius 1/4 must report absence.
    auto spec = GroupSpec::cyclic(2);
    std::vector<GroupValue> table;
    for (std::uint64_t x = 0; x < 8; ++x)
        table.push_back(GroupValue::from_integer(spec, __builtin_popcountll(x) >= 2));

    std::uint64_t best = 8;
    auto basis = poly::monomial_basis(3, 1);
    for (std::uint64_t coeffs = 0; coeffs < 16; ++coeffs) {
        std::uint64_t diff = 0;
        for (std::uint64_t x = 0; x < 8; ++x) {
            int v = 0;
            for (std::size_t m = 0; m < basis.size(); ++m)
                if (((coeffs >> m) & 1) && (basis[m].mask64() & ~x) == 0) v ^= 1;
            if (v != (__builtin_popcountll(x) >= 2 ? 1 : 0)) ++diff;
        }
        best = std::min(best, diff);
    }
    CHECK(best == 2); // exactly the unique radius, not strictly inside

    CHECK(!brute_force_unique_decode(table, 3, spec, 1, mpq_class(1, 4)).has_value());
}

TEST_CASE("majority-logic decoder equals exhaustive nearest search (k = 3)") {
    auto spec = GroupSpec::cyclic(2);
    for (std::uint32_t d : {1u, 2u}) {
        auto basis = poly::monomial_basis(3, d);
        std::vector<std::uint64_t> poly_tables(std::uint64_t(1) << basis.size(), 0);
        for (std::uint64_t c = 0; c < poly_tables.size(); ++c)
            for (std::uint64_t x = 0; x < 8; ++x) {
                int v = 0;
                for (std::size_t m = 0; m < basis.size(); ++m)
                    if (((c >> m) & 1) && (basis[m].mask64() & ~x) == 0) v ^= 1;
                if (v) poly_tables[c] |= std::uint64_t(1) << x;
            }
        std::uint64_t radius_points = 8 >> (d + 1); // 2^k / 2^(d+1)

        for (std::uint64_t tbl = 0; tbl < 256; ++tbl) {
            // Exhaustive nearest polynomial.
            std::uint64_t best = 64, best_c = 0;
            for (std::uint64_t c = 0; c < poly_tables.size(); ++c) {
                std::uint64_t dist = __builtin_popcountll(poly_tables[c] ^ tbl);
                if (dist < best) {
                    best = dist;
                    best_c = c;
                }
            }
            std::vector<GroupValue> table;
            for (std::uint64_t x = 0; x < 8; ++x)
                table.push_back(GroupValue::from_integer(spec, (tbl >> x) & 1));
            auto decoded = brute_force_unique_decode(table, 3, spec, d,
                                                     mpq_class(1, 1 << (d + 1)));
            if (best < radius_points) {
                REQUIRE(decoded.has_value());
                std::vector<std::pair<poly::Monomial, GroupValue>> terms;
                for (std::size_t m = 0; m < basis.size(); ++m)
                    if ((best_c >> m) & 1)
                        terms.emplace_back(basis[m], GroupValue::from_integer(spec, 1));
                CHECK(*decoded ==
                      MultilinearPoly::from_terms(3, d, spec, std::move(terms)));
            } else {
                CHECK(!decoded.has_value());
            }
        }
    }
}

TEST_CASE("correct_low_error returns P(a) on clean oracles") {
    SplitRng rng(5);
    for (const char* group : {"Z", "Z%3"}) {
        auto spec = GroupSpec::parse(group);
        auto p = poly::random_poly(32, 1, spec, poly::RandomPolyModel::dense(), rng);
        auto f = make_poly_oracle(p);
        for (int rep = 0; rep < 8; ++rep) {
            CorrectorConfig cfg;
            cfg.d = 1;
            cfg.seed = rng.next();
            CubePoint a = random_point(32, rng);
            std::uint64_t before = f->query_count();
            CHECK(correct_low_error(f, a, cfg) == p.evaluate(a));
            CHECK(f->query_count() - before == low_error_query_count(32, cfg));
        }
    }
}

TEST_CASE("correct_low_error on constant polynomials ignores the hash") {
    auto spec = GroupSpec::parse("Z%5");
    auto p = parse(16, 1, "Z%5", "3");
    auto f = make_poly_oracle(p);
    SplitRng rng(77);
    for (int rep = 0; rep < 20; ++rep) {
        CorrectorConfig cfg;
        cfg.d = 1;
        cfg.seed = rng.next();
        CHECK(correct_low_error(f, random_point(16, rng), cfg) ==
              GroupValue::from_integer(spec, 3));
    }
}

TEST_CASE("low-error success is monotone in the corruption rate") {
    // Same seeds and nested iid error sets: a trial that survives a larger
    // rate survives every smaller one, so success counts are non-increasing.
    SplitRng rng(4242);
    auto spec = GroupSpec::integers();
    auto p = poly::random_poly(16, 1, spec, poly::RandomPolyModel::dense(), rng);
    const int trials = 80;
    std::vector<int> successes;
    for (const auto& rate :
         {mpq_class(0), mpq_class(1, 100), mpq_class(1, 20), mpq_class(1, 5)}) {
        auto f = make_corrupted_oracle(
            p, rate == 0 ? CorruptionSpec::none() : CorruptionSpec::iid(rate), 999);
        int ok = 0;
        for (int t = 0; t < trials; ++t) {
            CorrectorConfig cfg;
            cfg.d = 1;
            cfg.seed = 1000 + t;
            CubePoint a(16);
            if (correct_low_error(f, a, cfg) == p.evaluate(a)) ++ok;
        }
        successes.push_back(ok);
    }
    CHECK(successes[0] == trials); // zero corruption: deterministic success
    for (std::size_t i = 1; i < successes.size(); ++i)
        CHECK(successes[i] <= successes[i - 1]);
}

TEST_CASE("error reduction is exact on clean oracles and counts queries") {
    SplitRng rng(31);
    auto spec = GroupSpec::parse("Z%4");
    auto p = poly::random_poly(12, 1, spec, poly::RandomPolyModel::dense(), rng);
    auto f = make_poly_oracle(p);
    auto g = error_reduce(f, 1, {5}, 7);
    for (int rep = 0; rep < 30; ++rep) {
        CubePoint x = random_point(12, rng);
        std::uint64_t before = f->query_count();
        CHECK(g->query(x) == p.evaluate(x));
        CHECK(f->query_count() - before == 32); // 2^5 inner queries per call
    }
    // Cascades multiply the per-query cost.
    auto g2 = error_reduce(f, 1, {4, 6}, 8);
    std::uint64_t before = f->query_count();
    g2->query(CubePoint(12));
    CHECK(f->query_count() - before == 1u << 10);
}

TEST_CASE("error reduction shrinks constant error to sampling noise") {
    // n = 16, d = 1, iid rate 0.2 < 1/4; a single full-width stage leaves a
    // virtual oracle whose sampled disagreement with P is below 1/1000.
    SplitRng rng(606);
    auto spec = GroupSpec::integers();
    auto p = poly::random_poly(16, 1, spec, poly::RandomPolyModel::dense(), rng);
    auto f = make_corrupted_oracle(p, CorruptionSpec::iid(mpq_class(1, 5)), 11);
    auto g = error_reduce(f, 1, {14}, 13);
    const int samples = 1000;
    std::vector<CubePoint> xs;
    for (int s = 0; s < samples; ++s) xs.push_back(random_point(16, rng));
    std::vector<std::uint8_t> bad(samples, 0);
    parallel_for(samples, [&](std::size_t s) {
        if (!(g->query(xs[s]) == p.evaluate(xs[s]))) bad[s] = 1;
    });
    int wrong = 0;
    for (auto b : bad) wrong += b;
    CHECK(wrong <= 1);
}

TEST_CASE("unique_local_correct composes exactly and succeeds at rate 0.15") {
    SplitRng rng(909);
    auto spec = GroupSpec::integers();
    auto p = poly::random_poly(16, 1, spec, poly::RandomPolyModel::dense(), rng);

    CorrectorConfig cfg;
    cfg.d = 1;
    cfg.er_stage_dims = {10};

    // Clean oracle: always P(a), query count matches the formula.
    {
        auto f = make_poly_oracle(p);
        cfg.seed = 1;
        CubePoint a = random_point(16, rng);
        std::uint64_t before = f->query_count();
        CHECK(unique_local_correct(f, a, cfg) == p.evaluate(a));
        CHECK(f->query_count() - before == composed_query_count(16, cfg));
    }

    auto f = make_corrupted_oracle(p, CorruptionSpec::iid(mpq_class(3, 20)), 21);
    int ok = 0;
    const int trials = 40;
    for (int t = 0; t < trials; ++t) {
        cfg.seed = 5000 + t;
        CubePoint a = random_point(16, rng);
        if (unique_local_correct(f, a, cfg) == p.evaluate(a)) ++ok;
    }
    CHECK(ok >= 3 * trials / 4);
}

TEST_CASE("two-stage cascade reduces error further than its first stage") {
    SplitRng rng(8181);
    auto spec = GroupSpec::cyclic(2);
    auto p = poly::random_poly(14, 1, spec, poly::RandomPolyModel::dense(), rng);
    auto f = make_corrupted_oracle(p, CorruptionSpec::iid(mpq_class(1, 5)), 3);
    auto g1 = error_reduce(f, 1, {6}, 5);
    auto g2 = error_reduce(f, 1, {6, 10}, 5);
    const int samples = 120;
    std::vector<CubePoint> xs;
    for (int s = 0; s < samples; ++s) xs.push_back(random_point(14, rng));
    std::vector<std::uint8_t> bad1(samples, 0), bad2(samples, 0);
    parallel_for(samples, [&](std::size_t s) {
        if (!(g1->query(xs[s]) == p.evaluate(xs[s]))) bad1[s] = 1;
        if (!(g2->query(xs[s]) == p.evaluate(xs[s]))) bad2[s] = 1;
    });
    int wrong1 = 0, wrong2 = 0;
    for (int s = 0; s < samples; ++s) {
        wrong1 += bad1[s];
        wrong2 += bad2[s];
    }
    CHECK(wrong2 <= wrong1);
    CHECK(wrong2 <= samples / 20);
}

TEST_CASE("torsion corrector is exact on clean oracles") {
    SplitRng rng(303);
    auto spec = GroupSpec::cyclic(2);
    auto p = poly::random_poly(24, 1, spec, poly::RandomPolyModel::dense(), rng);
    auto f = make_poly_oracle(p);
    for (int rep = 0; rep < 25; ++rep) {
        CubePoint a = random_point(24, rng);
        std::uint64_t before = f->query_count();
        CHECK(const_torsion_correct(f, a, 1, 2, rng.next()) == p.evaluate(a));
        CHECK(f->query_count() - before == 9); // C(9,8) slice queries
    }
}

TEST_CASE("torsion corrector validates the exponent") {
    auto z = parse(8, 1, "Z", "1*x1");
    auto fz = make_poly_oracle(z);
    CHECK_THROWS_AS(const_torsion_correct(fz, CubePoint(8), 1, 2, 1),
                    std::invalid_argument);
    auto z4 = parse(8, 1, "Z%4", "1*x1");
    auto f4 = make_poly_oracle(z4);
    CHECK_THROWS_AS(const_torsion_correct(f4, CubePoint(8), 1, 2, 1),
                    std::invalid_argument);
    // Z_2 under exponent 4 is fine: 2 divides 4.
    auto z2 = parse(8, 1, "Z%2", "1*x1");
    auto f2 = make_poly_oracle(z2);
    CHECK(const_torsion_correct(f2, CubePoint(8), 1, 4, 1) ==
          GroupValue::zero(GroupSpec::cyclic(2)));
}

TEST_CASE("torsion slice queries are marginally uniform") {
    // Under a uniform hash, each balanced slice point lifts to a uniform
    // point of {0,1}^n: chi-square over the 64 cells of n = 6.
    std::uint32_t n = 6;
    auto sc = interp::slice_coefficients(1, 2);
    CubePoint b(2 * sc.k);
    for (std::uint32_t i = 0; i < sc.k; ++i) b.set(i, true); // weight k
    std::map<std::uint64_t, int> counts;
    const int trials = 64000;
    SplitRng rng(12345);
    for (int t = 0; t < trials; ++t) {
        auto emb = subcube::sample_uniform_embedding(CubePoint(n), 2 * sc.k, rng);
        counts[emb.lift(b).index()]++;
    }
    double expected = trials / 64.0;
    double chi2 = 0;
    for (std::uint64_t cell = 0; cell < 64; ++cell) {
        double dev = counts[cell] - expected;
        chi2 += dev * dev / expected;
    }
    CHECK(chi2 < 124); // 63 dof, p ~ 1e-5 tail
}

TEST_CASE("error reduction validates stage dimensions") {
    auto p = parse(8, 2, "Z", "1*x1*x2");
    auto f = make_poly_oracle(p);
    CHECK_THROWS_AS(error_reduce(f, 2, {2}, 1)->query(CubePoint(8)),
                    std::invalid_argument);
}
