#include <doctest.h>

#include <cmath>

#include "lcc/lab.hpp"
#include "lcc/util.hpp"

using namespace lcc;
using namespace lcc::lab;

TEST_CASE("johnson eigenvalue closed form") {
    // beta_0 is the graph degree C(k,d)^2.
    for (std::uint32_t k : {2u, 3u, 4u, 6u}) {
        for (std::uint32_t d = 0; d <= k; ++d) {
            mpz_class deg = binomial(k, d) * binomial(k, d);
            CHECK(johnson_eigenvalue(k, d, 0) == deg);
        }
    }
    // J(4,2,1): spectrum {4, 0 (x3), -2 (x2)} --- the octahedron.
    CHECK(johnson_eigenvalue(2, 1, 0) == 4);
    CHECK(johnson_eigenvalue(2, 1, 1) == 0);
    CHECK(johnson_eigenvalue(2, 1, 2) == -2);
    CHECK(johnson_multiplicity(4, 0) == 1);
    CHECK(johnson_multiplicity(4, 1) == 3);
    CHECK(johnson_multiplicity(4, 2) == 2);
}

TEST_CASE("johnson multiplicities sum to the slice size") {
    for (std::uint32_t k = 1; k <= 6; ++k) {
        mpz_class total = 0;
        for (std::uint32_t s = 0; s <= k; ++s) total += johnson_multiplicity(2 * k, s);
        CHECK(total == binomial(2 * k, k));
    }
}

TEST_CASE("formula spectrum equals numeric diagonalization") {
    for (std::uint32_t two_k : {4u, 6u, 8u}) {
        for (std::uint32_t d = 0; d <= two_k / 2; ++d) {
            auto res = johnson_spectrum_check(two_k, d, 1e-9);
            INFO("2k=", two_k, " d=", d, " deviation=", res.max_deviation);
            CHECK(res.pass);
        }
    }
}

TEST_CASE("slice sampling deviations decrease with k") {
    auto rep = slice_sampling_experiment({4, 10}, mpq_class(1, 2), 80, 4242);
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[1][1] < rep.rows[0][1]);
    CHECK(rep.pass);

    // Structured set {x1 != x2}: empty intersection frequency tracks 1/(2k-1).
    for (const auto& row : rep.rows) {
        double freq = row[2], expect = row[3];
        double sigma = std::sqrt(expect * (1 - expect) / 80.0);
        CHECK(std::abs(freq - expect) < 5 * sigma + 0.02);
    }
}

TEST_CASE("entire-slice set has zero deviation") {
    auto rep = slice_sampling_experiment({6}, mpq_class(1), 20, 7);
    CHECK(rep.rows[0][1] == 0.0);
}

TEST_CASE("anticoncentration clears the slack bound") {
    auto rep = anticoncentration_experiment(1, {25, 100}, 4000, 10.0, 99);
    CHECK(rep.pass);
    for (const auto& row : rep.rows) {
        // Degree 1, dense sparsity s: nonzero probability approaches 1.
        CHECK(row[1] >= 0.5);
    }
    auto rep2 = anticoncentration_experiment(2, {25, 100}, 4000, 10.0, 99);
    CHECK(rep2.pass);
    // Structured chain family sits near 2^-(d-1) for d = 2.
    for (const auto& row : rep2.rows) CHECK(std::abs(row[3] - 0.5) < 0.1);
}

TEST_CASE("single-monomial polynomial vanishes off exactly 2^-d of the cube") {
    // Sparsity 1 pins the nonzero probability to 2^-d exactly; measured
    // frequency must concentrate around it.
    auto rep = anticoncentration_experiment(2, {1}, 20000, 10.0, 5);
    double measured = rep.rows[0][1];
    CHECK(std::abs(measured - 0.25) < 0.02);
}

TEST_CASE("tail bound experiment matches the exact binomial and decreases") {
    auto rep = tail_bound_experiment(1, {10, 20, 40}, 0.1, 8000, 2, 31);
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.pass);
    for (const auto& row : rep.rows) {
        double measured = row[1], exact = row[2];
        double sigma = std::sqrt(exact * (1 - exact) / 8000.0);
        CHECK(std::abs(measured - exact) < 4 * sigma + 1e-6);
    }
    // t = 1: the tail event is a single vanishing, frequency <= 1 - 2^-d + tol.
    auto tiny = tail_bound_experiment(1, {1}, 0.0, 4000, 2, 31);
    CHECK(tiny.rows[0][1] <= 0.5 + 0.03);
}

TEST_CASE("list size experiment finds stitched lists and respects the cap") {
    auto spec = groups::GroupSpec::cyclic(2);
    auto rep = list_size_experiment(
        4, 1, spec, {mpq_class(1, 10), mpq_class(1, 4), mpq_class(1, 2)}, 15, 64, 77);
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.pass);
    // eps = 1/10: the stitched function is close to at least two polynomials.
    CHECK(rep.rows[0][2] >= 2);
    // eps = 1/2 (radius zero): any table keeps at most one polynomial.
    CHECK(rep.rows[2][3] <= 1);
    // Lists never exceeded the cap (the run would have thrown).
    for (const auto& row : rep.rows) CHECK(row[3] <= 64);
}

TEST_CASE("reports are pure functions of parameters and seed") {
    auto a = slice_sampling_experiment({4}, mpq_class(1, 2), 30, 11);
    auto b = slice_sampling_experiment({4}, mpq_class(1, 2), 30, 11);
    CHECK(a.to_json() == b.to_json());
    CHECK(a.to_csv() == b.to_csv());
    auto c = slice_sampling_experiment({4}, mpq_class(1, 2), 30, 12);
    CHECK(a.to_json() != c.to_json());
}

TEST_CASE("csv output is rectangular with a header") {
    auto rep = tail_bound_experiment(1, {10}, 0.1, 500, 2, 1);
    auto csv = rep.to_csv();
    CHECK(csv.find("t,measured_tail_freq,exact_binomial_tail\n") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}
