#include "lcc/subcube.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace lcc::subcube {

SubcubeEmbedding::SubcubeEmbedding(CubePoint a, std::vector<std::uint32_t> h,
                                   std::uint32_t k)
    : base(std::move(a)), map(std::move(h)), dim(k) {
    if (map.size() != base.size())
        throw std::invalid_argument("embedding: |h| must equal n");
    for (std::uint32_t j : map)
        if (j >= dim) throw std::invalid_argument("embedding: h value out of range");
}

CubePoint SubcubeEmbedding::lift(const CubePoint& y) const {
    if (y.size() != dim) throw std::invalid_argument("lift: wrong point dimension");
    CubePoint x = base;
    for (std::uint32_t i = 0; i < map.size(); ++i)
        if (y.bit(map[i])) x.flip(i);
    return x;
}

SubcubeEmbedding SubcubeEmbedding::identity(std::uint32_t n) {
    std::vector<std::uint32_t> h(n);
    std::iota(h.begin(), h.end(), 0);
    return SubcubeEmbedding(CubePoint(n), std::move(h), n);
}

SubcubeEmbedding sample_uniform_embedding(const CubePoint& a, std::uint32_t k,
                                          SplitRng& rng) {
    if (k == 0) throw std::invalid_argument("embedding dimension must be positive");
    std::vector<std::uint32_t> h(a.size());
    for (auto& v : h) v = static_cast<std::uint32_t>(rng.uniform(k));
    return SubcubeEmbedding(a, std::move(h), k);
}

SubcubeEmbedding sample_weighted_embedding(const CubePoint& a, std::uint32_t k,
                                           const std::vector<mpz_class>& weights,
                                           SplitRng& rng) {
    if (weights.size() != k)
        throw std::invalid_argument("weighted embedding: need one weight per block");
    mpz_class total = 0;
    for (const auto& w : weights) {
        if (w < 0) throw std::invalid_argument("weights must be nonnegative");
        total += w;
    }
    if (total == 0) throw std::invalid_argument("weights must not all vanish");
    if (!total.fits_ulong_p())
        throw std::invalid_argument("weighted embedding: total weight too large");
    std::uint64_t w_total = mpz_get_ui(total.get_mpz_t());

    std::vector<std::uint64_t> cumulative(k);
    std::uint64_t acc = 0;
    for (std::uint32_t j = 0; j < k; ++j) {
        acc += mpz_get_ui(weights[j].get_mpz_t());
        cumulative[j] = acc;
    }

    std::vector<std::uint32_t> h(a.size());
    for (auto& v : h) {
        std::uint64_t r = rng.uniform(w_total);
        v = static_cast<std::uint32_t>(
            std::upper_bound(cumulative.begin(), cumulative.end(), r) -
            cumulative.begin());
    }
    return SubcubeEmbedding(a, std::move(h), k);
}

std::vector<std::uint32_t> SpannedSubcube::pairing() const {
    std::uint32_t k = inner_dim();
    std::vector<std::uint32_t> rho(2 * k);
    for (std::uint32_t j = 0; j < k; ++j) {
        rho[sigma[j]] = j;
        rho[sigma[j + k]] = j;
    }
    return rho;
}

SpannedSubcube span_subcube(const SubcubeEmbedding& c, const CubePoint& b,
                            const std::vector<std::uint32_t>& sigma) {
    std::uint32_t k = c.dim;
    std::uint32_t n = c.ambient_dim();
    if (b.size() != n) throw std::invalid_argument("span: point dimension mismatch");
    if (sigma.size() != 2 * static_cast<std::size_t>(k))
        throw std::invalid_argument("span: sigma must permute [2k]");

    CubePoint v = c.base ^ b;
    std::vector<std::uint32_t> hp(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        std::uint32_t j = c.map[i];
        hp[i] = v.bit(i) ? sigma[j + k] : sigma[j];
    }

    CubePoint w(2 * k);
    for (std::uint32_t j = 0; j < k; ++j) w.set(sigma[j + k], true);

    SpannedSubcube out;
    out.outer = SubcubeEmbedding(c.base, std::move(hp), 2 * k);
    out.w = std::move(w);
    out.sigma = sigma;

    if (out.w.weight() != k || out.outer.lift(out.w) != b)
        throw std::logic_error("span: construction invariant violated");
    return out;
}

SpannedSubcube span_subcube(const SubcubeEmbedding& c, const CubePoint& b,
                            SplitRng& rng) {
    return span_subcube(c, b, random_permutation(2 * c.dim, rng));
}

std::vector<std::uint32_t> random_permutation(std::uint32_t n, SplitRng& rng) {
    std::vector<std::uint32_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    for (std::uint32_t i = n; i > 1; --i)
        std::swap(p[i - 1], p[rng.uniform(i)]);
    return p;
}

std::vector<std::uint32_t> random_two_to_one(std::uint32_t two_k, SplitRng& rng) {
    if (two_k == 0 || two_k % 2 != 0)
        throw std::invalid_argument("random_two_to_one: input must be even and positive");
    std::uint32_t k = two_k / 2;
    std::vector<std::uint32_t> perm = random_permutation(two_k, rng);

    // Pair consecutive entries of a uniform permutation, then relabel pairs
    // canonically by their smallest element.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs(k);
    for (std::uint32_t j = 0; j < k; ++j) {
        std::uint32_t a = perm[2 * j], b = perm[2 * j + 1];
        pairs[j] = {std::min(a, b), std::max(a, b)};
    }
    std::sort(pairs.begin(), pairs.end());

    std::vector<std::uint32_t> rho(two_k);
    for (std::uint32_t j = 0; j < k; ++j) {
        rho[pairs[j].first] = j;
        rho[pairs[j].second] = j;
    }
    return rho;
}

} // namespace lcc::subcube
