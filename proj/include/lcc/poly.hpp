#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "lcc/cube.hpp"
#include "lcc/groups.hpp"
#include "lcc/rng.hpp"

namespace lcc::subcube {
struct SubcubeEmbedding;
}

namespace lcc::poly {

/// A multilinear monomial: a strictly increasing set of variable indices
/// (0-based internally, printed 1-based as x_1, x_2, ...).
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(std::vector<std::uint32_t> vars);

    static Monomial empty() { return Monomial(); }
    static Monomial single(std::uint32_t v) { return Monomial({v}); }

    std::uint32_t degree() const { return static_cast<std::uint32_t>(vars_.size()); }
    const std::vector<std::uint32_t>& vars() const { return vars_; }
    bool contains(std::uint32_t v) const;

    /// True when every variable of the monomial is set in x.
    bool evaluates_one(const CubePoint& x) const {
        for (std::uint32_t v : vars_)
            if (!x.bit(v)) return false;
        return true;
    }

    /// Support as a bit mask (all variables < 64 required).
    std::uint64_t mask64() const;

    bool operator==(const Monomial& o) const { return vars_ == o.vars_; }
    bool operator!=(const Monomial& o) const { return vars_ != o.vars_; }

    /// Storage order: by degree, then lexicographic on the index vector.
    bool operator<(const Monomial& o) const;

    /// Graded lexicographic order: higher total degree wins; on equal
    /// degree, at the least index where the monomials differ, the one
    /// containing that variable is larger. Returns <0, 0, >0.
    static int graded_lex_compare(const Monomial& a, const Monomial& b);

    std::string to_string() const;

private:
    std::vector<std::uint32_t> vars_;
};

/// All multilinear monomials over n variables of degree <= d, in storage
/// order. This is the spanning set B_d.
std::vector<Monomial> monomial_basis(std::uint32_t n, std::uint32_t d);

/// Multilinear polynomial of degree <= d from {0,1}^n to an Abelian group.
///
/// The term map is canonical: no zero coefficients are stored, keys are
/// sorted, and two polynomials are equal as functions iff their term lists
/// are equal.
class MultilinearPoly {
public:
    MultilinearPoly() = default;
    MultilinearPoly(std::uint32_t n, std::uint32_t d, groups::GroupSpecPtr spec);

    static MultilinearPoly from_terms(
        std::uint32_t n, std::uint32_t d, groups::GroupSpecPtr spec,
        std::vector<std::pair<Monomial, groups::GroupValue>> terms);

    std::uint32_t n() const { return n_; }
    std::uint32_t degree_bound() const { return d_; }
    const groups::GroupSpecPtr& spec() const { return spec_; }
    const std::vector<std::pair<Monomial, groups::GroupValue>>& terms() const {
        return terms_;
    }

    bool is_zero() const { return terms_.empty(); }
    std::uint32_t sparsity() const { return static_cast<std::uint32_t>(terms_.size()); }

    /// Largest term degree; 0 for the zero polynomial by convention.
    std::uint32_t degree() const;

    groups::GroupValue coefficient(const Monomial& m) const;

    groups::GroupValue evaluate(const CubePoint& x) const;

    /// Full evaluation table indexed by point index (n <= 26).
    std::vector<groups::GroupValue> evaluate_table() const;

    /// The polynomial Q over k variables with Q(y) = P(x(y)) for the given
    /// embedding; substitutes x_i = y_{h(i)} xor a_i and re-multilinearizes.
    MultilinearPoly restrict_to_subcube(const subcube::SubcubeEmbedding& c) const;

    /// Graded-lex maximal monomial with nonzero coefficient; error on zero.
    Monomial leading_monomial() const;

    MultilinearPoly operator+(const MultilinearPoly& o) const;
    MultilinearPoly operator-(const MultilinearPoly& o) const;
    bool operator==(const MultilinearPoly& o) const;
    bool operator!=(const MultilinearPoly& o) const { return !(*this == o); }

    /// Term-sum text form, e.g. "2 + 3*x1 + -1*x1*x3".
    std::string to_text() const;
    static MultilinearPoly parse_text(std::uint32_t n, std::uint32_t d,
                                      const groups::GroupSpecPtr& spec,
                                      const std::string& text);

private:
    std::uint32_t n_ = 0;
    std::uint32_t d_ = 0;
    groups::GroupSpecPtr spec_;
    std::vector<std::pair<Monomial, groups::GroupValue>> terms_; // sorted, no zeros
};

/// Exact fraction of {0,1}^n where the evaluations differ. Enumerates the
/// whole cube; n is capped (default 24) since this feeds exhaustive checks.
mpq_class distance(const MultilinearPoly& p, const MultilinearPoly& q,
                   std::uint32_t enumeration_cap = 24);

/// |{a : |a| = k, P(a) != 0}| by enumeration of the slice.
std::uint64_t slice_nonzero_count(const MultilinearPoly& p, std::uint32_t k);

struct RandomPolyModel {
    enum class Kind { uniform_dense, sparsity };
    Kind kind = Kind::uniform_dense;
    std::uint32_t sparsity = 0;

    static RandomPolyModel dense() { return {Kind::uniform_dense, 0}; }
    static RandomPolyModel with_sparsity(std::uint32_t s) { return {Kind::sparsity, s}; }
};

/// Seeded, reproducible random polynomial.
/// uniform_dense: every basis coefficient drawn independently (zero allowed).
/// sparsity: exactly s distinct monomials with nonzero coefficients.
MultilinearPoly random_poly(std::uint32_t n, std::uint32_t d,
                            const groups::GroupSpecPtr& spec,
                            const RandomPolyModel& model, SplitRng& rng);

/// t polynomials with pairwise-disjoint leading monomials. Polynomial i has
/// leading monomial on its own block of d variables plus `tail_terms` random
/// monomials of strictly smaller degree over the same block. Requires n >= t*d.
std::vector<MultilinearPoly> random_disjoint_lm_batch(
    std::uint32_t n, std::uint32_t d, std::uint32_t t, std::uint32_t tail_terms,
    const groups::GroupSpecPtr& spec, SplitRng& rng);

} // namespace lcc::poly
