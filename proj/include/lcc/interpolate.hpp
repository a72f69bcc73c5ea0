#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "lcc/cube.hpp"
#include "lcc/groups.hpp"
#include "lcc/poly.hpp"

namespace lcc::interp {

/// Dense integer matrix with arbitrary-precision entries.
struct IntegerMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<mpz_class> a;

    IntegerMatrix() = default;
    IntegerMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

    mpz_class& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    const mpz_class& at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

    static IntegerMatrix identity(std::size_t n);
};

using IntVector = std::vector<mpz_class>;

/// Integral solution c of M c = beta, or absent when none exists.
///
/// Diagonalizes M by unimodular row/column operations (Smith-style, with
/// partial pivoting on the smallest nonzero entry to contain coefficient
/// growth) and solves through the diagonal: a solution exists iff each
/// pivot divides the transformed right-hand side and the zero rows match.
std::optional<IntVector> integer_solve(const IntegerMatrix& m, const IntVector& beta);

/// Pre-diagonalized system for solving M c = beta repeatedly.
class DiagonalizedSystem {
public:
    explicit DiagonalizedSystem(IntegerMatrix m);
    std::optional<IntVector> solve(const IntVector& beta) const;
    std::size_t rank() const { return rank_; }

private:
    std::size_t rows_, cols_, rank_;
    IntegerMatrix u_;           // rows x rows
    IntegerMatrix v_;           // cols x cols
    std::vector<mpz_class> diag_;
};

/// The weight-balanced interpolating set for degree-d polynomials on
/// {0,1}^k, k a positive multiple of 10(d+1).
///
/// Coordinates are arranged in m = k/r blocks of r = 10(d+1); block i
/// carries weight 2^(i-1) per coordinate. Every point of the set lies in
/// the band |sum w_j y_j - W/2| <= t with t = ceil(d/2), and evaluations on
/// the set determine any degree-d polynomial everywhere via integral
/// coefficients (moment identity per monomial).
class WeightedInterpolatingSet {
public:
    static WeightedInterpolatingSet build(std::uint32_t d, std::uint32_t k);

    std::uint32_t d() const { return d_; }
    std::uint32_t k() const { return k_; }
    std::uint32_t block_size() const { return r_; }
    std::uint32_t block_count() const { return m_; }
    const mpz_class& total_weight() const { return total_weight_; }
    const mpz_class& slack() const { return slack_; }
    const std::vector<CubePoint>& points() const { return points_; }
    const std::vector<mpz_class>& weights() const { return weights_; }

    /// sum_j w_j y_j.
    mpz_class weighted_sum(const CubePoint& y) const;

    /// |sum w y - W/2| <= t for every point of the set.
    bool balance_holds() const;

    /// Integral c with sum_u c_u m(u) = m(b) for every monomial m of degree
    /// <= d; consequently sum c_u Q(u) = Q(b) for every degree-<= d
    /// polynomial over every Abelian group. Throws if the solver reports no
    /// solution (a construction bug, not an input condition).
    IntVector coefficients_for(const CubePoint& b) const;

private:
    WeightedInterpolatingSet() = default;

    std::uint32_t d_ = 0, k_ = 0, r_ = 0, m_ = 0;
    mpz_class total_weight_, slack_;
    std::vector<CubePoint> points_;
    std::vector<mpz_class> weights_;

    // Lazy solver state: moment matrices over growing column subsets.
    struct SolverState;
    std::shared_ptr<SolverState> solver_;
    void ensure_solver() const;
};

using InterpolatingSetPtr = std::shared_ptr<const WeightedInterpolatingSet>;

/// Process-wide cache of built sets, keyed by (d, k).
InterpolatingSetPtr cached_interpolating_set(std::uint32_t d, std::uint32_t k);

/// Interpolation data on the weight-k slice of {0,1}^{2k} for torsion
/// groups of exponent M: c_b = A on the points whose support avoids the
/// last k-d coordinates and 0 elsewhere, with A * C(k+d,k) = 1 (mod M).
struct SliceCoefficients {
    std::uint32_t d = 0;
    mpz_class exponent;                  // M
    std::uint32_t k = 0;                 // prod p_j^{3 r_j s_j}
    mpz_class unit;                      // A
    std::vector<std::pair<mpz_class, unsigned>> factors; // of M

    /// c_b for |b| = k in {0,1}^{2k}: `unit` when the support of b lies in
    /// the first k+d coordinates, zero otherwise.
    bool coefficient_nonzero(const CubePoint& b) const;

    /// Number of slice points with nonzero coefficient: C(k+d, k).
    mpz_class query_count() const;
};

/// Builds the slice coefficients; verifies the divisibility facts
/// (p_j not dividing C(k+d,k), p_j^{r_j} | C(k+d-i,k-i)) via Kummer's
/// valuation and aborts with a diagnostic if any fails.
SliceCoefficients slice_coefficients(std::uint32_t d, const mpz_class& exponent_m);

/// p-adic valuation of C(a, b) from base-p digit sums:
/// (S_p(b) + S_p(a-b) - S_p(a)) / (p-1). p must be prime.
mpz_class kummer_valuation(const mpz_class& a, const mpz_class& b, const mpz_class& p);

} // namespace lcc::interp
