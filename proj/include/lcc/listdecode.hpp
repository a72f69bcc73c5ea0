#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "lcc/correct.hpp"
#include "lcc/cube.hpp"
#include "lcc/groups.hpp"
#include "lcc/oracle.hpp"
#include "lcc/poly.hpp"
#include "lcc/subcube.hpp"

namespace lcc::listdec {

/// Advice produced by the preprocessing phase: a subcube, the permutation
/// used to span it to dimension 2k, and one member of the brute-force list
/// on that subcube.
struct AdviceTriple {
    subcube::SubcubeEmbedding c;
    std::vector<std::uint32_t> sigma;
    poly::MultilinearPoly q;
    std::uint32_t iteration = 0; // which advice repetition produced it
};

struct ListConfig {
    std::uint32_t d = 1;
    mpq_class epsilon = mpq_class(1, 5); // list radius is 1/2^d - epsilon
    std::uint32_t k_list = 6;            // advice cube dimension
    std::uint32_t ell = 4;               // repetition count
    std::uint32_t list_cap = 64;         // abort diagnostic when exceeded
    std::uint64_t enumeration_cap = std::uint64_t(1) << 22;
    std::uint64_t seed = 0;
    /// Candidates for planted-candidate mode (infinite coefficient groups);
    /// polynomials over the ambient n variables.
    std::vector<poly::MultilinearPoly> planted_candidates;

    /// Radius used on subcubes by both phases: 1/2^d - epsilon/2.
    mpq_class cube_radius() const {
        mpq_class r(1, mpz_class(1) << d);
        r -= epsilon / 2;
        r.canonicalize();
        return r;
    }
};

/// All degree-<=d polynomials within `radius` of the table (inclusive), in
/// canonical order. Enumerates the finite coefficient space; throws when
/// the space exceeds `enumeration_cap` or the list exceeds `list_cap`.
std::vector<poly::MultilinearPoly> brute_force_list_decode(
    const std::vector<groups::GroupValue>& table, std::uint32_t k, std::uint32_t d,
    const mpq_class& radius, const groups::GroupSpecPtr& spec,
    std::uint64_t enumeration_cap = std::uint64_t(1) << 22,
    std::uint32_t list_cap = 1u << 20);

/// Planted-candidate mode: filters the supplied candidates by distance.
std::vector<poly::MultilinearPoly> list_decode_candidates(
    const std::vector<groups::GroupValue>& table, std::uint32_t k,
    const std::vector<poly::MultilinearPoly>& candidates, const mpq_class& radius);

namespace detail {
/// Distances to every affine form over Z_2 in one Walsh-Hadamard transform;
/// the generic enumerator is the independent cross-check for this path.
std::vector<poly::MultilinearPoly> z2_affine_list_decode(
    const std::vector<std::uint8_t>& bits, std::uint32_t k, const mpq_class& radius,
    std::uint32_t list_cap);

/// Plain odometer scan over the whole coefficient space (no fast paths).
std::vector<poly::MultilinearPoly> generic_list_decode(
    const std::vector<groups::GroupValue>& table, std::uint32_t k, std::uint32_t d,
    const mpq_class& radius, const groups::GroupSpecPtr& spec,
    std::uint64_t enumeration_cap, std::uint32_t list_cap);
}

/// Preprocessing phase: ell iterations, each sampling a uniform subcube of
/// dimension k_list, brute-force listing f restricted to it at radius
/// 1/2^d - epsilon/2, and pairing the results with a random permutation.
/// Costs exactly ell * 2^k_list queries.
std::vector<AdviceTriple> build_advice(const oracle::OraclePtr& f,
                                       const ListConfig& cfg);

/// Approximation phase: spans the advice cube with b, queries the whole
/// 2k-dimensional spanned cube (2^{2k} queries), list-decodes, and returns
/// R(w) for the canonically least listed R whose restriction to the advice
/// cube (under the pairing identification) equals the advice polynomial;
/// group zero when none matches. Deterministic given the triple.
groups::GroupValue psi_evaluate(const oracle::OraclePtr& f, const AdviceTriple& triple,
                                const CubePoint& b, const ListConfig& cfg);

/// Ψ as a virtual oracle.
oracle::OraclePtr make_psi_oracle(const oracle::OraclePtr& f, const AdviceTriple& triple,
                                  const ListConfig& cfg);

/// The composed local list corrector: one output oracle per advice triple,
/// each applying the unique corrector on top of the triple's Ψ. At most
/// ell * list_cap output oracles.
std::vector<oracle::OraclePtr> local_list_correct(
    const oracle::OraclePtr& f, const ListConfig& cfg,
    const correct::CorrectorConfig& corrector_cfg);

} // namespace lcc::listdec
