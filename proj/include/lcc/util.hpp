#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace lcc {

/// Exact binomial coefficient; zero when b < 0 or b > a.
mpz_class binomial(long a, long b);

/// n written in base p, summed digit-wise.
mpz_class digit_sum(const mpz_class& n, const mpz_class& p);

bool is_prime(const mpz_class& n);

/// Trial-division factorization, smallest prime first: [(p, multiplicity)].
std::vector<std::pair<mpz_class, unsigned>> factorize(const mpz_class& n);

/// p-adic valuation of n (n != 0).
unsigned padic_valuation(mpz_class n, const mpz_class& p);

/// Runs fn(i) for i in [0, count) on up to `threads` workers.
/// fn must be safe to call concurrently for distinct i.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  unsigned threads = 0);

unsigned default_thread_count();

/// floor(log2(n)) for n >= 1.
inline unsigned floor_log2(std::uint64_t n) {
    unsigned r = 0;
    while (n >>= 1) ++r;
    return r;
}

inline std::string rational_to_string(const mpq_class& q) {
    return q.get_str();
}

inline mpq_class rational_from_string(const std::string& s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    q.canonicalize();
    return q;
}

} // namespace lcc
