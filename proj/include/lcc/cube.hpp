#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lcc {

/// A point of {0,1}^n, bit-packed. Dimensions up to 64 are stored inline
/// (no heap traffic); larger dimensions spill into a vector.
class CubePoint {
public:
    CubePoint() : n_(0), w0_(0) {}
    explicit CubePoint(std::uint32_t n) : n_(n), w0_(0) {
        if (n > 64) rest_.assign((n + 63) / 64 - 1, 0);
    }

    static CubePoint from_mask(std::uint32_t n, std::uint64_t mask) {
        if (n > 64) throw std::invalid_argument("from_mask: n > 64");
        CubePoint p(n);
        p.w0_ = n == 64 ? mask : (mask & ((std::uint64_t(1) << n) - 1));
        return p;
    }

    /// Parses "0101..." with bit i of the string giving coordinate i+1.
    static CubePoint from_bits(const std::string& bits) {
        CubePoint p(static_cast<std::uint32_t>(bits.size()));
        for (std::size_t i = 0; i < bits.size(); ++i) {
            if (bits[i] == '1') p.set(static_cast<std::uint32_t>(i), true);
            else if (bits[i] != '0') throw std::invalid_argument("bad bit string: " + bits);
        }
        return p;
    }

    std::uint32_t size() const { return n_; }

    bool bit(std::uint32_t i) const {
        return (word(i >> 6) >> (i & 63)) & 1;
    }

    void set(std::uint32_t i, bool v) {
        std::uint64_t& w = word_ref(i >> 6);
        std::uint64_t m = std::uint64_t(1) << (i & 63);
        w = v ? (w | m) : (w & ~m);
    }

    void flip(std::uint32_t i) { word_ref(i >> 6) ^= std::uint64_t(1) << (i & 63); }

    std::uint32_t weight() const {
        std::uint32_t c = __builtin_popcountll(w0_);
        for (std::uint64_t w : rest_) c += __builtin_popcountll(w);
        return c;
    }

    /// Index of the point when read as a little-endian integer (n <= 64).
    std::uint64_t index() const {
        if (n_ > 64) throw std::invalid_argument("index: n > 64");
        return w0_;
    }

    CubePoint operator^(const CubePoint& o) const {
        CubePoint r = *this;
        r.w0_ ^= o.w0_;
        for (std::size_t i = 0; i < rest_.size(); ++i) r.rest_[i] ^= o.rest_[i];
        return r;
    }

    bool operator==(const CubePoint& o) const {
        return n_ == o.n_ && w0_ == o.w0_ && rest_ == o.rest_;
    }
    bool operator!=(const CubePoint& o) const { return !(*this == o); }

    bool operator<(const CubePoint& o) const {
        if (n_ != o.n_) return n_ < o.n_;
        if (w0_ != o.w0_) return w0_ < o.w0_;
        return rest_ < o.rest_;
    }

    std::string to_string() const {
        std::string s(n_, '0');
        for (std::uint32_t i = 0; i < n_; ++i)
            if (bit(i)) s[i] = '1';
        return s;
    }

    std::uint64_t hash() const {
        std::uint64_t h = 0x9E3779B97F4A7C15ULL ^ n_;
        auto mix = [&h](std::uint64_t w) {
            h ^= w + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
            h *= 0xBF58476D1CE4E5B9ULL;
        };
        mix(w0_);
        for (std::uint64_t w : rest_) mix(w);
        return h;
    }

private:
    std::uint64_t word(std::size_t i) const { return i == 0 ? w0_ : rest_[i - 1]; }
    std::uint64_t& word_ref(std::size_t i) { return i == 0 ? w0_ : rest_[i - 1]; }

    std::uint32_t n_;
    std::uint64_t w0_;
    std::vector<std::uint64_t> rest_;
};

struct CubePointHash {
    std::size_t operator()(const CubePoint& p) const { return p.hash(); }
};

/// Calls fn once per point of {0,1}^n in index order (n <= 30).
template <typename Fn>
void for_each_point(std::uint32_t n, Fn&& fn) {
    if (n > 30) throw std::invalid_argument("for_each_point: n too large");
    std::uint64_t total = std::uint64_t(1) << n;
    for (std::uint64_t idx = 0; idx < total; ++idx) fn(CubePoint::from_mask(n, idx));
}

/// Calls fn once per point of Hamming weight w in {0,1}^n (n <= 63),
/// in increasing mask order (Gosper's hack).
template <typename Fn>
void for_each_slice_point(std::uint32_t n, std::uint32_t w, Fn&& fn) {
    if (n > 63) throw std::invalid_argument("for_each_slice_point: n too large");
    if (w > n) return;
    if (w == 0) {
        fn(CubePoint(n));
        return;
    }
    std::uint64_t v = (std::uint64_t(1) << w) - 1;
    std::uint64_t limit = std::uint64_t(1) << n;
    while (v < limit) {
        fn(CubePoint::from_mask(n, v));
        std::uint64_t t = v | (v - 1);
        v = (t + 1) | (((~t & (t + 1)) - 1) >> (__builtin_ctzll(v) + 1));
    }
}

} // namespace lcc
