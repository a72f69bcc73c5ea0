#include "lcc/listdecode.hpp"

#include <algorithm>
#include <stdexcept>

#include "lcc/rng.hpp"
#include "lcc/util.hpp"

namespace lcc::listdec {

using groups::GroupSpecPtr;
using groups::GroupValue;
using oracle::OraclePtr;
using poly::MultilinearPoly;

namespace {

bool poly_canonical_less(const MultilinearPoly& a, const MultilinearPoly& b) {
    const auto& ta = a.terms();
    const auto& tb = b.terms();
    for (std::size_t i = 0; i < std::min(ta.size(), tb.size()); ++i) {
        if (ta[i].first != tb[i].first) return ta[i].first < tb[i].first;
        int c = groups::canonical_compare(ta[i].second, tb[i].second);
        if (c) return c < 0;
    }
    return ta.size() < tb.size();
}

/// mismatches <= radius * 2^k, exactly.
bool within_radius(std::uint64_t mismatches, std::uint32_t k, const mpq_class& radius) {
    mpq_class lhs(mismatches, 1);
    lhs /= mpq_class(mpz_class(1) << k);
    lhs.canonicalize();
    return lhs <= radius;
}

/// All elements of a finite group in canonical order.
std::vector<GroupValue> all_elements(const GroupSpecPtr& spec) {
    switch (spec->kind()) {
        case groups::GroupSpec::Kind::cyclic: {
            if (!spec->modulus().fits_ulong_p())
                throw std::invalid_argument("group too large to enumerate");
            std::uint64_t m = mpz_get_ui(spec->modulus().get_mpz_t());
            std::vector<GroupValue> out;
            out.reserve(m);
            for (std::uint64_t i = 0; i < m; ++i)
                out.push_back(GroupValue::from_integer(spec, mpz_class(i)));
            return out;
        }
        case groups::GroupSpec::Kind::product: {
            std::vector<GroupValue> out;
            std::vector<std::vector<GroupValue>> factor_elems;
            for (const auto& f : spec->factors()) factor_elems.push_back(all_elements(f));
            std::vector<std::size_t> idx(factor_elems.size(), 0);
            for (;;) {
                std::vector<GroupValue> parts;
                for (std::size_t i = 0; i < idx.size(); ++i)
                    parts.push_back(factor_elems[i][idx[i]]);
                out.push_back(GroupValue::tuple(spec, std::move(parts)));
                std::size_t p = 0;
                while (p < idx.size() && ++idx[p] == factor_elems[p].size()) {
                    idx[p] = 0;
                    ++p;
                }
                if (p == idx.size()) break;
            }
            return out;
        }
        default:
            throw std::invalid_argument(
                "list decoding needs a finite group (use planted-candidate mode)");
    }
}

} // namespace

namespace detail {

std::vector<MultilinearPoly> generic_list_decode(
    const std::vector<GroupValue>& table, std::uint32_t k, std::uint32_t d,
    const mpq_class& radius, const GroupSpecPtr& spec, std::uint64_t enumeration_cap,
    std::uint32_t list_cap) {
    auto basis = poly::monomial_basis(k, d);
    auto elems = all_elements(spec);
    const std::uint64_t g_ord = elems.size();

    // Candidate space size g^|basis| against the cap.
    mpz_class space = 1;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        space *= g_ord;
        if (space > enumeration_cap)
            throw std::invalid_argument("list decoding: enumeration cap exceeded");
    }

    const std::uint64_t size = std::uint64_t(1) << k;
    if (table.size() != size)
        throw std::invalid_argument("list decoding: bad table size");

    // Points covering each basis monomial, for incremental updates.
    std::vector<std::vector<std::uint32_t>> cover(basis.size());
    for (std::size_t m = 0; m < basis.size(); ++m) {
        std::uint64_t mask = basis[m].mask64();
        for (std::uint64_t x = 0; x < size; ++x)
            if ((mask & ~x) == 0) cover[m].push_back(static_cast<std::uint32_t>(x));
    }

    // Odometer over coefficient tuples, zero polynomial first. The running
    // candidate table and mismatch count are updated per coefficient bump.
    std::vector<std::size_t> digit(basis.size(), 0);
    std::vector<GroupValue> cand(size, GroupValue::zero(spec));
    std::uint64_t mismatches = 0;
    for (std::uint64_t x = 0; x < size; ++x)
        if (!table[x].is_zero()) ++mismatches;

    std::vector<MultilinearPoly> out;
    auto record = [&]() {
        if (!within_radius(mismatches, k, radius)) return;
        std::vector<std::pair<poly::Monomial, GroupValue>> terms;
        for (std::size_t m = 0; m < basis.size(); ++m)
            if (digit[m] != 0) terms.emplace_back(basis[m], elems[digit[m]]);
        out.push_back(MultilinearPoly::from_terms(k, d, spec, std::move(terms)));
        if (out.size() > list_cap)
            throw std::runtime_error("list decoding: list cap exceeded");
    };

    record();
    for (;;) {
        // Advance the odometer; roll over positions past their last element.
        std::size_t pos = 0;
        while (pos < basis.size()) {
            std::size_t old = digit[pos];
            std::size_t next = (old + 1) % g_ord;
            digit[pos] = next;
            GroupValue delta = elems[next] - elems[old];
            for (std::uint32_t x : cover[pos]) {
                bool was = cand[x] == table[x];
                cand[x].accumulate(delta);
                bool now = cand[x] == table[x];
                if (was && !now) ++mismatches;
                else if (!was && now) --mismatches;
            }
            if (next != 0) break;
            ++pos;
        }
        if (pos == basis.size()) break; // odometer wrapped to all zeros
        record();
    }
    std::sort(out.begin(), out.end(), poly_canonical_less);
    return out;
}

std::vector<MultilinearPoly> z2_affine_list_decode(const std::vector<std::uint8_t>& bits,
                                                   std::uint32_t k,
                                                   const mpq_class& radius,
                                                   std::uint32_t list_cap) {
    const std::uint64_t size = std::uint64_t(1) << k;
    if (bits.size() != size) throw std::invalid_argument("z2 list decode: bad table");
    auto spec = groups::GroupSpec::cyclic(2);

    // a[x] = (-1)^f(x); after the transform a[S] = 2^k - 2*dist(f, parity_S).
    std::vector<std::int64_t> a(size);
    for (std::uint64_t x = 0; x < size; ++x) a[x] = bits[x] ? -1 : 1;
    for (std::uint32_t bit = 0; bit < k; ++bit) {
        std::uint64_t step = std::uint64_t(1) << bit;
        for (std::uint64_t x = 0; x < size; ++x) {
            if (x & step) continue;
            std::int64_t u = a[x], v = a[x | step];
            a[x] = u + v;
            a[x | step] = u - v;
        }
    }

    // Inclusive threshold on mismatch counts.
    mpz_class thr_num = radius.get_num() << k;
    mpz_class thr = thr_num / radius.get_den();
    std::int64_t threshold = thr.fits_slong_p() ? thr.get_si() : static_cast<std::int64_t>(size);

    std::vector<MultilinearPoly> out;
    GroupValue one = GroupValue::from_integer(spec, 1);
    auto push = [&](std::uint64_t mask, bool constant) {
        std::vector<std::pair<poly::Monomial, GroupValue>> terms;
        if (constant) terms.emplace_back(poly::Monomial::empty(), one);
        for (std::uint32_t v = 0; v < k; ++v)
            if ((mask >> v) & 1) terms.emplace_back(poly::Monomial::single(v), one);
        out.push_back(MultilinearPoly::from_terms(k, 1, spec, std::move(terms)));
        if (out.size() > list_cap)
            throw std::runtime_error("list decoding: list cap exceeded");
    };
    for (std::uint64_t mask = 0; mask < size; ++mask) {
        std::int64_t dist0 = (static_cast<std::int64_t>(size) - a[mask]) / 2;
        if (dist0 <= threshold) push(mask, false);
        if (static_cast<std::int64_t>(size) - dist0 <= threshold) push(mask, true);
    }
    std::sort(out.begin(), out.end(), poly_canonical_less);
    return out;
}

} // namespace detail

std::vector<MultilinearPoly> brute_force_list_decode(
    const std::vector<GroupValue>& table, std::uint32_t k, std::uint32_t d,
    const mpq_class& radius, const GroupSpecPtr& spec, std::uint64_t enumeration_cap,
    std::uint32_t list_cap) {
    auto order = spec->order();
    if (!order)
        throw std::invalid_argument(
            "list decoding needs a finite group (use planted-candidate mode)");
    mpz_class space = 1;
    std::size_t basis_size = poly::monomial_basis(k, d).size();
    for (std::size_t i = 0; i < basis_size; ++i) {
        space *= *order;
        if (space > enumeration_cap)
            throw std::invalid_argument("list decoding: enumeration cap exceeded");
    }
    if (spec->kind() == groups::GroupSpec::Kind::cyclic && spec->modulus() == 2 &&
        d == 1) {
        std::vector<std::uint8_t> bits(table.size());
        for (std::size_t i = 0; i < table.size(); ++i)
            bits[i] = static_cast<std::uint8_t>(groups::residue_u64(table[i]));
        return detail::z2_affine_list_decode(bits, k, radius, list_cap);
    }
    return detail::generic_list_decode(table, k, d, radius, spec, enumeration_cap, list_cap);
}

std::vector<MultilinearPoly> list_decode_candidates(
    const std::vector<GroupValue>& table, std::uint32_t k,
    const std::vector<MultilinearPoly>& candidates, const mpq_class& radius) {
    std::vector<MultilinearPoly> out;
    for (const auto& cand : candidates) {
        if (cand.n() != k) throw std::invalid_argument("candidate dimension mismatch");
        std::uint64_t mismatches = 0;
        auto ct = cand.evaluate_table();
        for (std::size_t i = 0; i < table.size(); ++i)
            if (!(ct[i] == table[i])) ++mismatches;
        if (within_radius(mismatches, k, radius)) out.push_back(cand);
    }
    std::sort(out.begin(), out.end(), poly_canonical_less);
    out.erase(std::unique(out.begin(), out.end(),
                          [](const MultilinearPoly& a, const MultilinearPoly& b) {
                              return a == b;
                          }),
              out.end());
    return out;
}

namespace {

/// Table of f on the embedded cube, counted queries; raw lane when present.
std::vector<GroupValue> query_cube(const OraclePtr& f,
                                   const subcube::SubcubeEmbedding& c) {
    const std::uint64_t size = std::uint64_t(1) << c.dim;
    std::vector<GroupValue> out;
    out.reserve(size);
    for (std::uint64_t idx = 0; idx < size; ++idx)
        out.push_back(f->query(c.lift(CubePoint::from_mask(c.dim, idx))));
    return out;
}

/// Restrictions of the planted candidates to an embedded cube, deduped.
std::vector<MultilinearPoly> restricted_candidates(
    const std::vector<MultilinearPoly>& planted, const subcube::SubcubeEmbedding& c) {
    std::vector<MultilinearPoly> out;
    for (const auto& p : planted) out.push_back(p.restrict_to_subcube(c));
    std::sort(out.begin(), out.end(), poly_canonical_less);
    out.erase(std::unique(out.begin(), out.end(),
                          [](const MultilinearPoly& a, const MultilinearPoly& b) {
                              return a == b;
                          }),
              out.end());
    return out;
}

std::vector<MultilinearPoly> list_on_cube(const OraclePtr& f,
                                          const subcube::SubcubeEmbedding& c,
                                          const ListConfig& cfg) {
    mpq_class radius = cfg.cube_radius();
    if (!cfg.planted_candidates.empty()) {
        auto table = query_cube(f, c);
        return list_decode_candidates(table, c.dim,
                                      restricted_candidates(cfg.planted_candidates, c),
                                      radius);
    }
    // Fast lane for Z_2 linear lists: read residues without allocations.
    if (f->spec()->kind() == groups::GroupSpec::Kind::cyclic &&
        f->spec()->modulus() == 2 && cfg.d == 1 &&
        c.dim < 63 && (std::uint64_t(1) << (c.dim + 1)) <= cfg.enumeration_cap) {
        const std::uint64_t size = std::uint64_t(1) << c.dim;
        std::vector<std::uint8_t> bits(size);
        // Gray-order lifting: flipping one cube coordinate flips a fixed
        // disjoint set of ambient coordinates.
        if (c.ambient_dim() <= 64) {
            std::vector<std::uint64_t> block(c.dim, 0);
            for (std::uint32_t i = 0; i < c.ambient_dim(); ++i)
                block[c.map[i]] |= std::uint64_t(1) << i;
            std::uint64_t cur = c.base.index();
            std::uint64_t prev_gray = 0;
            std::uint32_t n = c.ambient_dim();
            for (std::uint64_t idx = 0; idx < size; ++idx) {
                std::uint64_t gray = idx ^ (idx >> 1);
                std::uint64_t changed = gray ^ prev_gray;
                if (changed) cur ^= block[__builtin_ctzll(changed)];
                prev_gray = gray;
                bits[gray] = static_cast<std::uint8_t>(
                    f->query_u64(CubePoint::from_mask(n, cur)));
            }
        } else {
            for (std::uint64_t idx = 0; idx < size; ++idx)
                bits[idx] = static_cast<std::uint8_t>(
                    f->query_u64(c.lift(CubePoint::from_mask(c.dim, idx))));
        }
        return detail::z2_affine_list_decode(bits, c.dim, radius, cfg.list_cap);
    }
    auto table = query_cube(f, c);
    return brute_force_list_decode(table, c.dim, cfg.d, radius, f->spec(),
                                   cfg.enumeration_cap, cfg.list_cap);
}

} // namespace

std::vector<AdviceTriple> build_advice(const OraclePtr& f, const ListConfig& cfg) {
    SplitRng root(cfg.seed);
    std::vector<AdviceTriple> triples;
    for (std::uint32_t it = 0; it < cfg.ell; ++it) {
        SplitRng rng = root.split(it + 1);
        CubePoint a(f->dim());
        for (std::uint32_t i = 0; i < f->dim(); ++i) a.set(i, rng.coin());
        auto c = subcube::sample_uniform_embedding(a, cfg.k_list, rng);
        auto list = list_on_cube(f, c, cfg);
        auto sigma = subcube::random_permutation(2 * cfg.k_list, rng);
        for (auto& q : list) triples.push_back({c, sigma, std::move(q), it});
    }
    return triples;
}

GroupValue psi_evaluate(const OraclePtr& f, const AdviceTriple& triple,
                        const CubePoint& b, const ListConfig& cfg) {
    auto spanned = subcube::span_subcube(triple.c, b, triple.sigma);
    auto list = list_on_cube(f, spanned.outer, cfg);

    // Identify the inner cube inside the spanned cube via the 2-to-1 pairing
    // and match restrictions against the advice polynomial.
    auto rho = spanned.pairing();
    subcube::SubcubeEmbedding inner(CubePoint(2 * triple.c.dim), rho, triple.c.dim);
    for (const auto& r : list) {
        if (r.restrict_to_subcube(inner) == triple.q) return r.evaluate(spanned.w);
    }
    return GroupValue::zero(f->spec());
}

OraclePtr make_psi_oracle(const OraclePtr& f, const AdviceTriple& triple,
                          const ListConfig& cfg) {
    auto trip = std::make_shared<AdviceTriple>(triple);
    auto config = std::make_shared<ListConfig>(cfg);
    return oracle::make_virtual_oracle(
        f->dim(), f->spec(),
        [f, trip, config](const CubePoint& b) {
            return psi_evaluate(f, *trip, b, *config);
        },
        "psi");
}

std::vector<OraclePtr> local_list_correct(const OraclePtr& f, const ListConfig& cfg,
                                          const correct::CorrectorConfig& corrector_cfg) {
    auto triples = build_advice(f, cfg);
    std::vector<OraclePtr> out;
    out.reserve(triples.size());
    for (std::size_t t = 0; t < triples.size(); ++t) {
        OraclePtr psi = make_psi_oracle(f, triples[t], cfg);
        correct::CorrectorConfig base = corrector_cfg;
        std::uint64_t tag = SplitRng::mix(cfg.seed ^ 0x11c0de, t);
        out.push_back(oracle::make_virtual_oracle(
            f->dim(), f->spec(),
            [psi, base, tag](const CubePoint& x) {
                correct::CorrectorConfig cc = base;
                cc.seed = SplitRng::mix(tag, x.hash());
                return correct::unique_local_correct(psi, x, cc);
            },
            "list-corrected"));
    }
    return out;
}

} // namespace lcc::listdec
