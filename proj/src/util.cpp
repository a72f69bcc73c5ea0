#include "lcc/util.hpp"

#include <atomic>
#include <thread>

namespace lcc {

mpz_class binomial(long a, long b) {
    if (b < 0 || b > a) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(a), static_cast<unsigned long>(b));
    return r;
}

mpz_class digit_sum(const mpz_class& n, const mpz_class& p) {
    mpz_class rest = n, s = 0, digit;
    while (rest > 0) {
        mpz_fdiv_qr(rest.get_mpz_t(), digit.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t());
        s += digit;
    }
    return s;
}

bool is_prime(const mpz_class& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 30) != 0;
}

std::vector<std::pair<mpz_class, unsigned>> factorize(const mpz_class& n) {
    if (n < 1) throw std::invalid_argument("factorize: n must be positive");
    std::vector<std::pair<mpz_class, unsigned>> out;
    mpz_class rest = n;
    mpz_class p = 2;
    while (p * p <= rest) {
        if (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
            unsigned mult = 0;
            while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
                rest /= p;
                ++mult;
            }
            out.emplace_back(p, mult);
        }
        p = (p == 2) ? mpz_class(3) : mpz_class(p + 2);
    }
    if (rest > 1) out.emplace_back(rest, 1);
    return out;
}

unsigned padic_valuation(mpz_class n, const mpz_class& p) {
    if (n == 0) throw std::invalid_argument("padic_valuation: n must be nonzero");
    unsigned v = 0;
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
        n /= p;
        ++v;
    }
    return v;
}

unsigned default_thread_count() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  unsigned threads) {
    if (threads == 0) threads = default_thread_count();
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    unsigned spawn = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    pool.reserve(spawn);
    for (unsigned t = 0; t < spawn; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failed.load() && error) std::rethrow_exception(error);
}

} // namespace lcc
