#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "lcc/cube.hpp"
#include "lcc/rng.hpp"

namespace lcc::subcube {

/// Embedding of {0,1}^k into {0,1}^n given by a base point a and a total
/// map h: [n] -> [k]; the image of y is x(y)_i = y_{h(i)} xor a_i. The
/// embedding always maps 0^k to a. h need not be surjective and k may
/// exceed n.
struct SubcubeEmbedding {
    CubePoint base;                 // a, length n
    std::vector<std::uint32_t> map; // h, size n, values in [0, k)
    std::uint32_t dim = 0;          // k

    SubcubeEmbedding() = default;
    SubcubeEmbedding(CubePoint a, std::vector<std::uint32_t> h, std::uint32_t k);

    std::uint32_t ambient_dim() const { return base.size(); }

    CubePoint lift(const CubePoint& y) const;

    static SubcubeEmbedding identity(std::uint32_t n);
};

/// h(i) drawn iid uniform on [0, k).
SubcubeEmbedding sample_uniform_embedding(const CubePoint& a, std::uint32_t k,
                                          SplitRng& rng);

/// h(i) drawn iid with P[h(i) = j] = weights[j] / sum(weights), exactly.
SubcubeEmbedding sample_weighted_embedding(const CubePoint& a, std::uint32_t k,
                                           const std::vector<mpz_class>& weights,
                                           SplitRng& rng);

/// The dimension-2k subcube spanned by a dimension-k embedding and a point b,
/// built from a permutation sigma of [2k]. Contains every point of the inner
/// cube, and the weight-k point w lifts to b.
struct SpannedSubcube {
    SubcubeEmbedding outer;          // dim 2k, same base point
    CubePoint w;                     // |w| = k, outer.lift(w) = b
    std::vector<std::uint32_t> sigma;

    std::uint32_t inner_dim() const { return outer.dim / 2; }

    /// The 2-to-1 map rho: [2k] -> [k] identifying the inner cube inside the
    /// outer one: rho(sigma(j)) = rho(sigma(j+k)) = j.
    std::vector<std::uint32_t> pairing() const;
};

SpannedSubcube span_subcube(const SubcubeEmbedding& c, const CubePoint& b,
                            const std::vector<std::uint32_t>& sigma);
SpannedSubcube span_subcube(const SubcubeEmbedding& c, const CubePoint& b,
                            SplitRng& rng);

std::vector<std::uint32_t> random_permutation(std::uint32_t n, SplitRng& rng);

/// Uniformly random 2-to-1 map [2k] -> [k]: every fiber has size exactly 2,
/// and the induced unordered pairing is uniform. Fibers are labeled
/// canonically (the pair with the smallest untouched element gets the next
/// index), so the map is a pure function of the pairing.
std::vector<std::uint32_t> random_two_to_one(std::uint32_t two_k, SplitRng& rng);

} // namespace lcc::subcube
