#include "lcc/correct.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "lcc/rng.hpp"
#include "lcc/subcube.hpp"
#include "lcc/util.hpp"

namespace lcc::correct {

using groups::GroupSpecPtr;
using groups::GroupValue;
using oracle::OraclePtr;

std::uint32_t choose_k(std::uint32_t n, std::uint32_t d, double a_const) {
    if (n < 2) throw std::invalid_argument("choose_k: n must be at least 2");
    std::uint32_t r = 10 * (d + 1);
    double raw = a_const * (d + 1) * std::log2(static_cast<double>(n));
    std::uint32_t k = static_cast<std::uint32_t>(std::ceil(raw));
    if (k < r) k = r;
    if (k % r != 0) k += r - (k % r);
    return k;
}

namespace {

std::uint32_t resolve_k(std::uint32_t n, const CorrectorConfig& cfg) {
    if (cfg.k_override != 0) {
        if (cfg.k_override % (10 * (cfg.d + 1)) != 0)
            throw std::invalid_argument("k_override must be a multiple of 10(d+1)");
        return cfg.k_override;
    }
    return choose_k(n, cfg.d, cfg.a_const);
}

} // namespace

GroupValue correct_low_error(const OraclePtr& f, const CubePoint& a,
                             const CorrectorConfig& cfg) {
    if (a.size() != f->dim())
        throw std::invalid_argument("correct_low_error: point dimension mismatch");
    std::uint32_t k = resolve_k(f->dim(), cfg);
    auto set = interp::cached_interpolating_set(cfg.d, k);
    interp::IntVector c0 = set->coefficients_for(CubePoint(k));

    SplitRng rng(cfg.seed);
    auto embedding = subcube::sample_weighted_embedding(a, k, set->weights(), rng);

    GroupValue acc = GroupValue::zero(f->spec());
    const auto& points = set->points();
    for (std::size_t u = 0; u < points.size(); ++u) {
        if (c0[u] == 0) {
            // Still query: the algorithm reads the whole lifted set.
            f->query(embedding.lift(points[u]));
            continue;
        }
        acc.accumulate(groups::int_scale(c0[u], f->query(embedding.lift(points[u]))));
    }
    return acc;
}

namespace {

/// Most frequent vote; ties break toward the canonically least value.
/// Small integer and residue payloads go through a hash count, everything
/// else through a sort.
GroupValue plurality(std::vector<GroupValue>& votes, const GroupSpecPtr& spec) {
    bool small_ints =
        spec->kind() == groups::GroupSpec::Kind::integers ||
        spec->kind() == groups::GroupSpec::Kind::cyclic;
    if (small_ints) {
        std::unordered_map<long, std::uint32_t> counts;
        counts.reserve(votes.size() / 4 + 8);
        bool fits = true;
        for (const auto& v : votes) {
            const mpz_class& z = v.integer_payload();
            if (!z.fits_slong_p()) {
                fits = false;
                break;
            }
            ++counts[z.get_si()];
        }
        if (fits) {
            long best_value = 0;
            std::uint32_t best_count = 0;
            bool first = true;
            for (const auto& [value, count] : counts) {
                if (first || count > best_count ||
                    (count == best_count && value < best_value)) {
                    best_value = value;
                    best_count = count;
                    first = false;
                }
            }
            return GroupValue::from_integer(spec, best_value);
        }
    }
    std::sort(votes.begin(), votes.end(), groups::canonical_less);
    std::size_t best_start = 0, best_len = 0;
    std::size_t i = 0;
    while (i < votes.size()) {
        std::size_t j = i;
        while (j < votes.size() && votes[j] == votes[i]) ++j;
        if (j - i > best_len) {
            best_len = j - i;
            best_start = i;
        }
        i = j;
    }
    return votes[best_start];
}

} // namespace

std::optional<poly::MultilinearPoly> brute_force_unique_decode(
    const std::vector<GroupValue>& table, std::uint32_t k, const GroupSpecPtr& spec,
    std::uint32_t d, const mpq_class& radius) {
    if (k > 26 || table.size() != (std::uint64_t(1) << k))
        throw std::invalid_argument("unique decode: bad table size");

    std::vector<GroupValue> work = table;
    std::vector<std::pair<poly::Monomial, GroupValue>> recovered;

    for (std::uint32_t level = std::min(d, k);; --level) {
        auto monomials = poly::monomial_basis(k, level);
        // Keep only the degree == level ones.
        std::vector<std::pair<poly::Monomial, GroupValue>> layer;
        for (const auto& m : monomials) {
            if (m.degree() != level) continue;
            std::uint64_t mask = m.mask64();
            std::uint64_t outside = ((k == 64 ? ~0ULL : (std::uint64_t(1) << k) - 1)) & ~mask;

            // Plurality over all assignments of the complement coordinates of
            // the alternating sum over sub-patterns of the monomial.
            std::vector<GroupValue> votes;
            votes.reserve(std::uint64_t(1) << (k - level));
            for (std::uint64_t rho = outside;; rho = (rho - 1) & outside) {
                GroupValue sum = GroupValue::zero(spec);
                for (std::uint64_t t = mask;; t = (t - 1) & mask) {
                    std::uint32_t flipped = level - __builtin_popcountll(t);
                    sum.accumulate(work[rho | t], (flipped & 1) != 0);
                    if (t == 0) break;
                }
                votes.push_back(std::move(sum));
                if (rho == 0) break;
            }
            GroupValue coeff = plurality(votes, spec);
            if (!coeff.is_zero()) layer.emplace_back(m, std::move(coeff));
        }
        // Peel this level off the working table.
        for (const auto& [m, c] : layer) {
            std::uint64_t mask = m.mask64();
            std::uint64_t size = table.size();
            for (std::uint64_t x = 0; x < size; ++x)
                if ((mask & ~x) == 0) work[x].accumulate(c, true);
            recovered.emplace_back(m, c);
        }
        if (level == 0) break;
    }

    auto decoded =
        poly::MultilinearPoly::from_terms(k, d, spec, std::move(recovered));
    // Residual distance of the decoded polynomial to the input table.
    std::uint64_t wrong = 0;
    auto decoded_table = decoded.evaluate_table();
    for (std::size_t i = 0; i < table.size(); ++i)
        if (!(decoded_table[i] == table[i])) ++wrong;
    mpq_class dist(wrong, 1);
    dist /= mpq_class(table.size());
    dist.canonicalize();
    if (dist < radius) return decoded;
    return std::nullopt;
}

namespace {

OraclePtr error_reduce_stage(const OraclePtr& f, std::uint32_t d,
                             std::uint32_t stage_dim, std::uint64_t seed) {
    if (stage_dim < d + 1)
        throw std::invalid_argument("error_reduce: stage dimension must exceed d");
    GroupSpecPtr spec = f->spec();
    std::uint32_t n = f->dim();
    // Acceptance radius 1/2, not the unique radius: when the restricted
    // distance drifts past 1/2^(d+1) (small effective dimension after a
    // non-surjective hash), the plurality decode still recovers the
    // restriction and beats the raw table value.
    mpq_class radius(1, 2);
    oracle::FunctionOracle::Fn fn = [f, d, stage_dim, seed, spec,
                                     radius](const CubePoint& x) {
        // Per-point randomness: the virtual oracle is a pure function of
        // (seed, x), so repeated queries agree and replay is exact.
        SplitRng rng(SplitRng::mix(seed, x.hash()));
        auto embedding = subcube::sample_uniform_embedding(x, stage_dim, rng);
        std::uint64_t size = std::uint64_t(1) << stage_dim;
        std::vector<GroupValue> table;
        table.reserve(size);
        for (std::uint64_t idx = 0; idx < size; ++idx)
            table.push_back(f->query(embedding.lift(CubePoint::from_mask(stage_dim, idx))));
        auto decoded = brute_force_unique_decode(table, stage_dim, spec, d, radius);
        if (!decoded) return table[0]; // x itself; lift(0) = x
        return decoded->evaluate(CubePoint(stage_dim));
    };
    return oracle::make_virtual_oracle(n, spec, std::move(fn), "error-reduced");
}

} // namespace

OraclePtr error_reduce(const OraclePtr& f, std::uint32_t d,
                       const std::vector<std::uint32_t>& stage_dims,
                       std::uint64_t seed) {
    OraclePtr cur = f;
    std::uint64_t stage_tag = 0;
    for (std::uint32_t dim : stage_dims)
        cur = error_reduce_stage(cur, d, dim, SplitRng::mix(seed, ++stage_tag));
    return cur;
}

GroupValue unique_local_correct(const OraclePtr& f, const CubePoint& a,
                                const CorrectorConfig& cfg) {
    SplitRng rng(cfg.seed);
    OraclePtr reduced = error_reduce(f, cfg.d, cfg.stages(), rng.split(1).base_seed());
    CorrectorConfig inner = cfg;
    inner.seed = rng.split(2).base_seed();
    return correct_low_error(reduced, a, inner);
}

GroupValue const_torsion_correct(const OraclePtr& f, const CubePoint& a,
                                 std::uint32_t d, const mpz_class& exponent_m,
                                 std::uint64_t seed) {
    auto group_exp = f->spec()->exponent();
    if (!group_exp || !mpz_divisible_p(exponent_m.get_mpz_t(), group_exp->get_mpz_t()))
        throw std::invalid_argument(
            "const_torsion_correct: group exponent must divide M");
    if (a.size() != f->dim())
        throw std::invalid_argument("const_torsion_correct: point dimension mismatch");

    interp::SliceCoefficients sc = interp::slice_coefficients(d, exponent_m);
    std::uint32_t two_k = 2 * sc.k;

    SplitRng rng(seed);
    auto embedding = subcube::sample_uniform_embedding(a, two_k, rng);

    // Nonzero-coefficient slice points: weight k, support within the first
    // k+d coordinates. Enumerate by the d complementary zero positions.
    GroupValue acc = GroupValue::zero(f->spec());
    std::vector<std::uint32_t> zeros(d);
    auto query_point = [&](const std::vector<std::uint32_t>& zero_positions) {
        CubePoint b(two_k);
        for (std::uint32_t i = 0; i < sc.k + d; ++i) b.set(i, true);
        for (std::uint32_t z : zero_positions) b.set(z, false);
        acc.accumulate(f->query(embedding.lift(b)));
    };
    if (d == 0) {
        query_point({});
    } else {
        for (std::uint32_t i = 0; i < d; ++i) zeros[i] = i;
        for (;;) {
            query_point(zeros);
            int i = static_cast<int>(d) - 1;
            while (i >= 0 && zeros[i] == sc.k + d - d + i) --i;
            if (i < 0) break;
            ++zeros[i];
            for (std::uint32_t j = i + 1; j < d; ++j) zeros[j] = zeros[j - 1] + 1;
        }
    }
    return groups::int_scale(sc.unit, acc);
}

std::uint64_t low_error_query_count(std::uint32_t n, const CorrectorConfig& cfg) {
    std::uint32_t k = cfg.k_override ? cfg.k_override : choose_k(n, cfg.d, cfg.a_const);
    return interp::cached_interpolating_set(cfg.d, k)->points().size();
}

std::uint64_t composed_query_count(std::uint32_t n, const CorrectorConfig& cfg) {
    std::uint64_t q = low_error_query_count(n, cfg);
    for (std::uint32_t dim : cfg.stages()) q <<= dim;
    return q;
}

} // namespace lcc::correct
