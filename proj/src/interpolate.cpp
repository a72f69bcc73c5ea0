#include "lcc/interpolate.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "lcc/util.hpp"

namespace lcc::interp {

IntegerMatrix IntegerMatrix::identity(std::size_t n) {
    IntegerMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

namespace {

// Quotient nearest to a/b for b > 0; the remainder ends up in [-b/2, b/2].
mpz_class nearest_quotient(const mpz_class& a, const mpz_class& b) {
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (2 * r > b) q += 1;
    return q;
}

} // namespace

DiagonalizedSystem::DiagonalizedSystem(IntegerMatrix m)
    : rows_(m.rows), cols_(m.cols), rank_(0),
      u_(IntegerMatrix::identity(m.rows)), v_(IntegerMatrix::identity(m.cols)) {
    IntegerMatrix& d = m;

    auto swap_rows = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t c = 0; c < cols_; ++c) std::swap(d.at(a, c), d.at(b, c));
        for (std::size_t c = 0; c < rows_; ++c) std::swap(u_.at(a, c), u_.at(b, c));
    };
    auto swap_cols = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t r = 0; r < rows_; ++r) std::swap(d.at(r, a), d.at(r, b));
        for (std::size_t r = 0; r < cols_; ++r) std::swap(v_.at(r, a), v_.at(r, b));
    };
    auto negate_row = [&](std::size_t r) {
        for (std::size_t c = 0; c < cols_; ++c) d.at(r, c) = -d.at(r, c);
        for (std::size_t c = 0; c < rows_; ++c) u_.at(r, c) = -u_.at(r, c);
    };
    // row a -= q * row t
    auto row_op = [&](std::size_t a, std::size_t t, const mpz_class& q) {
        for (std::size_t c = 0; c < cols_; ++c)
            mpz_submul(d.at(a, c).get_mpz_t(), q.get_mpz_t(), d.at(t, c).get_mpz_t());
        for (std::size_t c = 0; c < rows_; ++c)
            mpz_submul(u_.at(a, c).get_mpz_t(), q.get_mpz_t(), u_.at(t, c).get_mpz_t());
    };
    // col a -= q * col t
    auto col_op = [&](std::size_t a, std::size_t t, const mpz_class& q) {
        for (std::size_t r = 0; r < rows_; ++r)
            mpz_submul(d.at(r, a).get_mpz_t(), q.get_mpz_t(), d.at(r, t).get_mpz_t());
        for (std::size_t r = 0; r < cols_; ++r)
            mpz_submul(v_.at(r, a).get_mpz_t(), q.get_mpz_t(), v_.at(r, t).get_mpz_t());
    };

    std::size_t limit = std::min(rows_, cols_);
    for (std::size_t t = 0; t < limit; ++t) {
        // Smallest nonzero entry of the working submatrix becomes the pivot.
        std::size_t pi = rows_, pj = cols_;
        mpz_class best;
        for (std::size_t i = t; i < rows_; ++i) {
            for (std::size_t j = t; j < cols_; ++j) {
                const mpz_class& e = d.at(i, j);
                if (e == 0) continue;
                mpz_class mag = abs(e);
                if (pi == rows_ || mag < best) {
                    best = mag;
                    pi = i;
                    pj = j;
                }
            }
        }
        if (pi == rows_) break; // submatrix is zero
        swap_rows(t, pi);
        swap_cols(t, pj);
        if (d.at(t, t) < 0) negate_row(t);

        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < rows_; ++i) {
                if (d.at(i, t) == 0) continue;
                mpz_class q = nearest_quotient(d.at(i, t), d.at(t, t));
                if (q != 0) row_op(i, t, q);
                if (d.at(i, t) != 0) {
                    // Remainder is strictly smaller than the pivot: promote it.
                    swap_rows(t, i);
                    if (d.at(t, t) < 0) negate_row(t);
                    clean = false;
                }
            }
            for (std::size_t j = t + 1; j < cols_; ++j) {
                if (d.at(t, j) == 0) continue;
                mpz_class q = nearest_quotient(d.at(t, j), d.at(t, t));
                if (q != 0) col_op(j, t, q);
                if (d.at(t, j) != 0) {
                    swap_cols(t, j);
                    if (d.at(t, t) < 0) negate_row(t);
                    clean = false;
                }
            }
            if (clean) break;
        }
        ++rank_;
    }

    diag_.resize(limit);
    for (std::size_t t = 0; t < limit; ++t) diag_[t] = d.at(t, t);
}

std::optional<IntVector> DiagonalizedSystem::solve(const IntVector& beta) const {
    if (beta.size() != rows_) throw std::invalid_argument("solve: rhs size mismatch");
    // y = U * beta
    IntVector y(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
        mpz_class acc = 0;
        for (std::size_t j = 0; j < rows_; ++j)
            if (beta[j] != 0)
                mpz_addmul(acc.get_mpz_t(), u_.at(i, j).get_mpz_t(), beta[j].get_mpz_t());
        y[i] = acc;
    }
    // Solvable iff pivots divide and zero rows vanish.
    IntVector z(cols_, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
        if (i < rank_) {
            mpz_class q, r;
            mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), y[i].get_mpz_t(),
                        diag_[i].get_mpz_t());
            if (r != 0) return std::nullopt;
            z[i] = q;
        } else if (y[i] != 0) {
            return std::nullopt;
        }
    }
    // c = V * z (z vanishes beyond the rank).
    IntVector c(cols_, 0);
    for (std::size_t i = 0; i < cols_; ++i) {
        mpz_class acc = 0;
        for (std::size_t j = 0; j < rank_; ++j)
            if (z[j] != 0)
                mpz_addmul(acc.get_mpz_t(), v_.at(i, j).get_mpz_t(), z[j].get_mpz_t());
        c[i] = acc;
    }
    return c;
}

std::optional<IntVector> integer_solve(const IntegerMatrix& m, const IntVector& beta) {
    return DiagonalizedSystem(m).solve(beta);
}

// ---------------------------------------------------------------------------
// Weight-balanced interpolating set
// ---------------------------------------------------------------------------

namespace {

/// Points of {0,1}^r with weights in [a, a+deg] hitting every nonzero
/// degree-<=deg polynomial: free assignments on each small variable set A,
/// the remaining coordinates set to 1^a 0^(r-|A|-a).
void hamming_ball_family(std::uint32_t r, std::uint32_t a, std::uint32_t deg,
                         std::set<CubePoint>& out) {
    if (a + deg > r)
        throw std::logic_error("interpolating set: interval leaves [0, r]");
    std::vector<std::uint32_t> subset;
    // Enumerate subsets A of [r] with |A| <= deg, by size.
    std::vector<std::uint32_t> stack;
    auto emit = [&](const std::vector<std::uint32_t>& A) {
        std::uint32_t size = static_cast<std::uint32_t>(A.size());
        for (std::uint32_t pattern = 0; pattern < (1u << size); ++pattern) {
            CubePoint p(r);
            std::vector<bool> in_a(r, false);
            for (std::uint32_t i = 0; i < size; ++i) {
                in_a[A[i]] = true;
                if ((pattern >> i) & 1) p.set(A[i], true);
            }
            std::uint32_t ones = a;
            for (std::uint32_t v = 0; v < r && ones > 0; ++v) {
                if (!in_a[v]) {
                    p.set(v, true);
                    --ones;
                }
            }
            out.insert(p);
        }
    };
    std::vector<std::uint32_t> comb;
    emit(comb); // A empty
    for (std::uint32_t size = 1; size <= deg; ++size) {
        comb.assign(size, 0);
        for (std::uint32_t i = 0; i < size; ++i) comb[i] = i;
        for (;;) {
            emit(comb);
            int i = static_cast<int>(size) - 1;
            while (i >= 0 && comb[i] == r - size + i) --i;
            if (i < 0) break;
            ++comb[i];
            for (std::uint32_t j = i + 1; j < size; ++j) comb[j] = comb[j - 1] + 1;
        }
    }
}

} // namespace

struct WeightedInterpolatingSet::SolverState {
    std::mutex mu;
    std::vector<poly::Monomial> basis;
    std::vector<std::size_t> col_order;
    // Diagonalized subsystems over growing prefixes of col_order.
    std::vector<std::pair<std::size_t, std::unique_ptr<DiagonalizedSystem>>> systems;
    bool ready = false;
};

WeightedInterpolatingSet WeightedInterpolatingSet::build(std::uint32_t d,
                                                         std::uint32_t k) {
    const std::uint32_t r = 10 * (d + 1);
    if (k == 0 || k % r != 0)
        throw std::invalid_argument(
            "interpolating set: k must be a positive multiple of 10(d+1)");
    const std::uint32_t m = k / r;
    const std::uint32_t t = (d + 1) / 2; // ceil(d/2)

    // levels[l][j]: points of {0,1}^(l*r) in the weight band that hit every
    // nonzero degree-<=j polynomial. Level 0 holds the empty assignment.
    std::vector<std::vector<std::set<CubePoint>>> levels(m + 1);
    levels[0].assign(d + 1, std::set<CubePoint>{CubePoint(0)});

    auto half_weight = [&](std::uint32_t level) {
        // W_l / 2 = (r/2) * (2^l - 1); r is even so this is integral.
        mpz_class w = (mpz_class(1) << level) - 1;
        return mpz_class(w * (r / 2));
    };

    for (std::uint32_t l = 1; l <= m; ++l) {
        levels[l].assign(d + 1, std::set<CubePoint>{});
        for (std::uint32_t j = 0; j <= d; ++j) {
            std::set<CubePoint>& out = levels[l][j];
            for (std::uint32_t jp = 0; jp <= j; ++jp) {
                for (const CubePoint& b : levels[l - 1][j - jp]) {
                    // tau = weighted sum of b minus W_{l-1}/2 in its layout.
                    mpz_class wsum = 0;
                    for (std::uint32_t i = 0; i < b.size(); ++i)
                        if (b.bit(i)) wsum += mpz_class(1) << (i / r);
                    mpz_class tau = wsum - half_weight(l - 1);
                    // New block weights lie in [r/2 - 2 tau - t, ...]; take
                    // the lowest jp+1 values of the interval.
                    mpz_class lo_z = r / 2 - 2 * tau - t;
                    if (lo_z < 0 || lo_z + d > r)
                        throw std::logic_error("interpolating set: band escaped");
                    std::uint32_t a = static_cast<std::uint32_t>(lo_z.get_ui());

                    std::set<CubePoint> block_points;
                    hamming_ball_family(r, a, jp, block_points);
                    for (const CubePoint& z : block_points) {
                        CubePoint merged(l * r);
                        for (std::uint32_t i = 0; i < r; ++i)
                            if (z.bit(i)) merged.set(i, true);
                        for (std::uint32_t i = 0; i < b.size(); ++i)
                            if (b.bit(i)) merged.set(i + r, true);
                        out.insert(merged);
                    }
                }
            }
        }
    }

    WeightedInterpolatingSet s;
    s.d_ = d;
    s.k_ = k;
    s.r_ = r;
    s.m_ = m;
    s.slack_ = t;
    s.weights_.resize(k);
    s.total_weight_ = 0;
    for (std::uint32_t i = 0; i < k; ++i) {
        s.weights_[i] = mpz_class(1) << (i / r);
        s.total_weight_ += s.weights_[i];
    }
    s.points_.assign(levels[m][d].begin(), levels[m][d].end());
    s.solver_ = std::make_shared<SolverState>();

    if (!s.balance_holds())
        throw std::logic_error("interpolating set: balance invariant violated");
    mpz_class size_bound = 1;
    for (std::uint32_t i = 0; i < d; ++i) size_bound *= 2 * (r + 1) * m;
    if (mpz_class(static_cast<unsigned long>(s.points_.size())) > size_bound)
        throw std::logic_error("interpolating set: size bound violated");
    return s;
}

mpz_class WeightedInterpolatingSet::weighted_sum(const CubePoint& y) const {
    if (y.size() != k_) throw std::invalid_argument("weighted_sum: wrong dimension");
    mpz_class acc = 0;
    for (std::uint32_t i = 0; i < k_; ++i)
        if (y.bit(i)) acc += weights_[i];
    return acc;
}

bool WeightedInterpolatingSet::balance_holds() const {
    for (const auto& y : points_) {
        mpz_class dev = 2 * weighted_sum(y) - total_weight_; // 2*(sum - W/2)
        if (abs(dev) > 2 * slack_) return false;
    }
    return true;
}

void WeightedInterpolatingSet::ensure_solver() const {
    if (!solver_) throw std::logic_error("interpolating set: missing solver state");
}

namespace {

constexpr std::uint64_t kRankPrime = (std::uint64_t(1) << 61) - 1;

std::uint64_t mulmod61(std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(a) * b) % kRankPrime);
}

/// Greedy column ordering: rank-contributing columns first (checked mod a
/// large prime), remaining columns afterwards in their original order.
std::vector<std::size_t> greedy_column_order(
    const std::vector<poly::Monomial>& basis, const std::vector<CubePoint>& points) {
    const std::size_t rows = basis.size();
    std::vector<std::vector<std::uint64_t>> echelon; // reduced columns
    std::vector<std::size_t> pivot_of;               // pivot row per echelon vector
    std::vector<std::size_t> selected, deferred;

    std::vector<std::uint64_t> col(rows);
    for (std::size_t cidx = 0; cidx < points.size(); ++cidx) {
        for (std::size_t ridx = 0; ridx < rows; ++ridx)
            col[ridx] = basis[ridx].evaluates_one(points[cidx]) ? 1 : 0;
        // Reduce against the echelon.
        for (std::size_t e = 0; e < echelon.size(); ++e) {
            std::uint64_t factor = col[pivot_of[e]];
            if (factor == 0) continue;
            std::uint64_t inv_pivot = echelon[e][pivot_of[e]];
            // factor / pivot via Fermat inverse.
            std::uint64_t inv = 1, base = inv_pivot, exp = kRankPrime - 2;
            while (exp) {
                if (exp & 1) inv = mulmod61(inv, base);
                base = mulmod61(base, base);
                exp >>= 1;
            }
            std::uint64_t scale = mulmod61(factor, inv);
            for (std::size_t rdx = 0; rdx < rows; ++rdx) {
                std::uint64_t sub = mulmod61(scale, echelon[e][rdx]);
                col[rdx] = (col[rdx] + kRankPrime - sub) % kRankPrime;
            }
        }
        std::size_t pivot = rows;
        for (std::size_t rdx = 0; rdx < rows; ++rdx)
            if (col[rdx] != 0) {
                pivot = rdx;
                break;
            }
        if (pivot < rows && echelon.size() < rows) {
            echelon.push_back(col);
            pivot_of.push_back(pivot);
            selected.push_back(cidx);
        } else {
            deferred.push_back(cidx);
        }
    }
    selected.insert(selected.end(), deferred.begin(), deferred.end());
    return selected;
}

} // namespace

IntVector WeightedInterpolatingSet::coefficients_for(const CubePoint& b) const {
    if (b.size() != k_)
        throw std::invalid_argument("coefficients_for: wrong target dimension");
    ensure_solver();
    SolverState& st = *solver_;
    std::lock_guard<std::mutex> lock(st.mu);

    if (!st.ready) {
        st.basis = poly::monomial_basis(k_, d_);
        st.col_order = greedy_column_order(st.basis, points_);
        st.ready = true;
    }
    const std::size_t rows = st.basis.size();
    const std::size_t cols = points_.size();

    IntVector beta(rows);
    for (std::size_t i = 0; i < rows; ++i)
        beta[i] = st.basis[i].evaluates_one(b) ? 1 : 0;

    for (std::size_t want = std::min(rows, cols);; want = std::min(cols, want * 2)) {
        // Find or build the diagonalized system over the first `want` columns.
        DiagonalizedSystem* sys = nullptr;
        for (auto& [sz, ptr] : st.systems)
            if (sz == want) sys = ptr.get();
        if (!sys) {
            IntegerMatrix m(rows, want);
            for (std::size_t j = 0; j < want; ++j) {
                const CubePoint& u = points_[st.col_order[j]];
                for (std::size_t i = 0; i < rows; ++i)
                    m.at(i, j) = st.basis[i].evaluates_one(u) ? 1 : 0;
            }
            st.systems.emplace_back(want,
                                    std::make_unique<DiagonalizedSystem>(std::move(m)));
            sys = st.systems.back().second.get();
        }
        auto partial = sys->solve(beta);
        if (partial) {
            IntVector full(cols, 0);
            for (std::size_t j = 0; j < want; ++j) full[st.col_order[j]] = (*partial)[j];
            return full;
        }
        if (want >= cols)
            throw std::logic_error(
                "interpolating set: no integral coefficients (construction bug)");
    }
}

namespace {

std::mutex g_cache_mu;
std::map<std::pair<std::uint32_t, std::uint32_t>, InterpolatingSetPtr> g_cache;

} // namespace

InterpolatingSetPtr cached_interpolating_set(std::uint32_t d, std::uint32_t k) {
    std::lock_guard<std::mutex> lock(g_cache_mu);
    auto key = std::make_pair(d, k);
    auto it = g_cache.find(key);
    if (it != g_cache.end()) return it->second;
    auto set = std::make_shared<WeightedInterpolatingSet>(
        WeightedInterpolatingSet::build(d, k));
    g_cache.emplace(key, set);
    return set;
}

// ---------------------------------------------------------------------------
// Torsion-group slice coefficients
// ---------------------------------------------------------------------------

mpz_class kummer_valuation(const mpz_class& a, const mpz_class& b, const mpz_class& p) {
    if (!is_prime(p)) throw std::invalid_argument("kummer_valuation: p must be prime");
    if (b < 0 || b > a) throw std::invalid_argument("kummer_valuation: need 0 <= b <= a");
    mpz_class num = digit_sum(b, p) + digit_sum(a - b, p) - digit_sum(a, p);
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(),
                mpz_class(p - 1).get_mpz_t());
    if (r != 0) throw std::logic_error("kummer_valuation: digit sum not divisible");
    return q;
}

bool SliceCoefficients::coefficient_nonzero(const CubePoint& b) const {
    if (b.size() != 2 * k)
        throw std::invalid_argument("slice coefficient: point must live in {0,1}^{2k}");
    for (std::uint32_t i = k + d; i < 2 * k; ++i)
        if (b.bit(i)) return false;
    return true;
}

mpz_class SliceCoefficients::query_count() const {
    return binomial(static_cast<long>(k) + d, static_cast<long>(k));
}

SliceCoefficients slice_coefficients(std::uint32_t d, const mpz_class& exponent_m) {
    if (exponent_m < 2)
        throw std::invalid_argument("slice_coefficients: exponent must be >= 2");
    SliceCoefficients sc;
    sc.d = d;
    sc.exponent = exponent_m;
    sc.factors = factorize(exponent_m);

    mpz_class k = 1;
    for (const auto& [p, r] : sc.factors) {
        unsigned s = 1;
        mpz_class power;
        for (;; ++s) {
            mpz_pow_ui(power.get_mpz_t(), p.get_mpz_t(), r * s);
            if (power > d) break;
        }
        mpz_class contrib;
        mpz_pow_ui(contrib.get_mpz_t(), p.get_mpz_t(), 3 * r * s);
        k *= contrib;
    }
    if (!k.fits_uint_p())
        throw std::invalid_argument("slice_coefficients: k too large for this build");
    sc.k = static_cast<std::uint32_t>(k.get_ui());

    // Divisibility facts behind the interpolation identity.
    for (const auto& [p, r] : sc.factors) {
        if (kummer_valuation(k + d, d, p) != 0) {
            std::ostringstream msg;
            msg << "slice_coefficients: p=" << p << " divides C(k+d,k), k=" << sc.k;
            throw std::logic_error(msg.str());
        }
        for (std::uint32_t i = 1; i <= d; ++i) {
            if (kummer_valuation(k + d - i, d, p) < r) {
                std::ostringstream msg;
                msg << "slice_coefficients: p^" << r << " misses C(k+d-i,k-i), i=" << i;
                throw std::logic_error(msg.str());
            }
        }
    }

    // A * C(k+d,k) = 1 (mod M) by extended gcd; coprimality was just verified.
    mpz_class ckd = binomial(sc.k + d, sc.k);
    mpz_class g, a_coef, m_coef;
    mpz_gcdext(g.get_mpz_t(), a_coef.get_mpz_t(), m_coef.get_mpz_t(), ckd.get_mpz_t(),
               exponent_m.get_mpz_t());
    if (g != 1) throw std::logic_error("slice_coefficients: gcd(C(k+d,k), M) != 1");
    mpz_fdiv_r(sc.unit.get_mpz_t(), a_coef.get_mpz_t(), exponent_m.get_mpz_t());
    return sc;
}

} // namespace lcc::interp
