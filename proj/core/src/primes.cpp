#include "e2sieve/primes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "e2sieve/errors.hpp"

namespace e2sieve {

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
    std::vector<std::uint32_t> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    for (std::uint32_t p = 2; p <= limit; ++p) {
        if (composite[p]) continue;
        primes.push_back(p);
        for (std::uint64_t m = static_cast<std::uint64_t>(p) * p; m <= limit; m += p)
            composite[static_cast<std::size_t>(m)] = true;
    }
    return primes;
}

std::vector<std::uint32_t> spf_table(std::uint32_t limit) {
    std::vector<std::uint32_t> spf(static_cast<std::size_t>(limit) + 1, 0);
    std::vector<std::uint32_t> primes;
    for (std::uint32_t i = 2; i <= limit; ++i) {
        if (spf[i] == 0) {
            spf[i] = i;
            primes.push_back(i);
        }
        for (std::uint32_t p : primes) {
            if (p > spf[i]) break;
            std::uint64_t m = static_cast<std::uint64_t>(p) * i;
            if (m > limit) break;
            spf[static_cast<std::size_t>(m)] = p;
        }
    }
    return spf;
}

std::vector<std::int8_t> mobius_table(std::uint32_t limit) {
    auto spf = spf_table(limit);
    std::vector<std::int8_t> mu(static_cast<std::size_t>(limit) + 1, 0);
    if (limit >= 1) mu[1] = 1;
    for (std::uint32_t n = 2; n <= limit; ++n) {
        std::uint32_t p = spf[n];
        std::uint32_t m = n / p;
        mu[n] = (m % p == 0) ? 0 : static_cast<std::int8_t>(-mu[m]);
    }
    return mu;
}

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // This base set is deterministic for all n < 2^64.
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

namespace {

// Brent's cycle variant of Pollard rho; n must be odd composite > 1.
std::uint64_t brent_rho(std::uint64_t n) {
    if (n % 2 == 0) return 2;
    std::uint64_t c = 1;
    for (;;) {
        std::uint64_t x = 2, y = 2, d = 1;
        std::uint64_t q = 1;
        int power = 1, lam = 1;
        auto f = [&](std::uint64_t v) { return (mulmod_u64(v, v, n) + c) % n; };
        while (d == 1) {
            if (power == lam) {
                x = y;
                power *= 2;
                lam = 0;
            }
            y = f(y);
            ++lam;
            std::uint64_t diff = x > y ? x - y : y - x;
            if (diff == 0) break;
            q = mulmod_u64(q, diff, n);
            if (lam % 64 == 0) {
                d = std::gcd(q, n);
                if (d != 1 && d != n) return d;
                if (d == n) break;
            }
        }
        std::uint64_t g = std::gcd(q, n);
        if (g != 1 && g != n) return g;
        ++c;  // cycle degenerated; retry with a different increment
    }
}

void factor_rec(std::uint64_t n, std::vector<std::uint64_t>& primes) {
    if (n < 2) return;
    if (is_prime_u64(n)) {
        primes.push_back(n);
        return;
    }
    std::uint64_t d = brent_rho(n);
    factor_rec(d, primes);
    factor_rec(n / d, primes);
}

}  // namespace

std::vector<std::pair<std::uint64_t, unsigned>> factorize_u64(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, unsigned>> out;
    if (n < 2) return out;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
        if (n % p) continue;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    for (std::uint64_t p = 17; p < 100'000 && p * p <= n; p += 2) {
        if (n % p) continue;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1) {
        std::vector<std::uint64_t> rest;
        factor_rec(n, rest);
        std::sort(rest.begin(), rest.end());
        for (std::size_t i = 0; i < rest.size();) {
            std::size_t j = i;
            while (j < rest.size() && rest[j] == rest[i]) ++j;
            out.emplace_back(rest[i], static_cast<unsigned>(j - i));
            i = j;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (auto& [p, e] : factorize_u64(n)) out.push_back(p);
    return out;
}

std::uint32_t prime_count_up_to(std::uint32_t k) {
    auto ps = primes_up_to(k);
    return static_cast<std::uint32_t>(ps.size());
}

std::uint64_t nth_prime(std::uint32_t n) {
    if (n == 0) throw PreconditionError("nth_prime: index is 1-based");
    // Overshoot bound p_n < n(log n + log log n) for n >= 6, padded.
    std::uint64_t bound = 64;
    if (n >= 6) {
        double nn = static_cast<double>(n);
        double b = nn * (std::log(nn) + std::log(std::log(nn))) * 1.2;
        bound = static_cast<std::uint64_t>(b) + 16;
    }
    for (;;) {
        auto ps = primes_up_to(static_cast<std::uint32_t>(bound));
        if (ps.size() >= n) return ps[n - 1];
        bound *= 2;
    }
}

}  // namespace e2sieve
