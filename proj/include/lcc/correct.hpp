#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "lcc/cube.hpp"
#include "lcc/groups.hpp"
#include "lcc/interpolate.hpp"
#include "lcc/oracle.hpp"
#include "lcc/poly.hpp"

namespace lcc::correct {

/// Parameters for the unique-decoding correctors. The analysis pins these
/// only asymptotically, so they surface here as knobs.
struct CorrectorConfig {
    std::uint32_t d = 1;
    /// Multiplier in k = ceil(A * (d+1) * log2 n), rounded up to a multiple
    /// of 10(d+1).
    double a_const = 4.0;
    /// Subcube dimensions of the error-reduction cascade, applied in order.
    /// Empty selects the default two-stage schedule {d+7, d+11}.
    std::vector<std::uint32_t> er_stage_dims;
    std::uint64_t seed = 0;
    /// Overrides the k formula when nonzero (must be a multiple of 10(d+1)).
    std::uint32_t k_override = 0;

    std::vector<std::uint32_t> stages() const {
        if (!er_stage_dims.empty()) return er_stage_dims;
        return {d + 7, d + 11};
    }
};

/// Interpolating-set dimension for ambient dimension n.
std::uint32_t choose_k(std::uint32_t n, std::uint32_t d, double a_const);

/// Sub-constant-error corrector: lifts the weight-balanced interpolating
/// set through a hash sampled from the weight distribution and returns the
/// integral combination of the queried values. Exactly |S| queries, all on
/// the lifted set. Returns P(a) whenever no queried point is corrupted.
groups::GroupValue correct_low_error(const oracle::OraclePtr& f, const CubePoint& a,
                                     const CorrectorConfig& cfg);

/// Majority-logic (Reed-style) unique decoder over any Abelian group.
///
/// Recovers coefficients level by level, top degree first: each coefficient
/// is the plurality over all assignments of the alternating sum of the
/// table on the corresponding subcube, and recovered levels are peeled off.
/// Returns the polynomial when its final distance to the table is strictly
/// below `radius`, absent otherwise. Plurality ties break toward the
/// canonically least group value.
std::optional<poly::MultilinearPoly> brute_force_unique_decode(
    const std::vector<groups::GroupValue>& table, std::uint32_t k,
    const groups::GroupSpecPtr& spec, std::uint32_t d, const mpq_class& radius);

/// Error reduction by subcube restriction + local unique decoding: the
/// returned virtual oracle samples, per input x, a uniform embedding of
/// dimension stage_dims[i] based at x, decodes the restricted table, and
/// answers with the decoded value at x. Stages cascade in order; one
/// virtual query costs prod 2^stage_dims[i] inner queries.
oracle::OraclePtr error_reduce(const oracle::OraclePtr& f, std::uint32_t d,
                               const std::vector<std::uint32_t>& stage_dims,
                               std::uint64_t seed);

/// Composed corrector: error-reduction cascade followed by the
/// sub-constant-error corrector. Handles any error rate below the unique
/// decoding radius 1/2^(d+1).
groups::GroupValue unique_local_correct(const oracle::OraclePtr& f, const CubePoint& a,
                                        const CorrectorConfig& cfg);

/// Constant-query corrector for torsion groups of exponent M: samples a
/// uniform hash into 2k dimensions and combines the weight-k slice points
/// whose slice coefficient is nonzero (C(k+d,k) queries; zero-coefficient
/// points are skipped).
groups::GroupValue const_torsion_correct(const oracle::OraclePtr& f, const CubePoint& a,
                                         std::uint32_t d, const mpz_class& exponent_m,
                                         std::uint64_t seed);

/// Exact query count of unique_local_correct for the given config:
/// |S| * prod 2^stage_dims.
std::uint64_t composed_query_count(std::uint32_t n, const CorrectorConfig& cfg);

std::uint64_t low_error_query_count(std::uint32_t n, const CorrectorConfig& cfg);

} // namespace lcc::correct
