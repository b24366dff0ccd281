#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "e2sieve/errors.hpp"

namespace e2sieve {

// Exact omega / big-omega / least-prime-factor tables over [lo, hi),
// built by segmented sieving with the primes up to sqrt(hi).
struct FactorTable {
    std::uint64_t lo = 0, hi = 0;  // [lo, hi)
    std::vector<std::uint8_t> omega;          // distinct prime factors
    std::vector<std::uint8_t> big_omega;      // with multiplicity
    std::vector<std::uint32_t> least_factor;  // 0 for n = 1 and for primes > 2^32

    std::uint64_t size() const { return hi - lo; }

    void check_range(std::uint64_t n) const {
        if (n < lo || n >= hi)
            throw PreconditionError("value outside factor-table coverage");
    }
    std::uint8_t omega_at(std::uint64_t n) const {
        check_range(n);
        return omega[n - lo];
    }
    std::uint8_t big_omega_at(std::uint64_t n) const {
        check_range(n);
        return big_omega[n - lo];
    }
    // Smallest prime factor of n; 1 has none (returns 1).  The stored value
    // 0 escapes 32 bits: it marks n itself prime and larger than 2^32.
    std::uint64_t least_factor_at(std::uint64_t n) const {
        check_range(n);
        const std::uint32_t v = least_factor[n - lo];
        if (v != 0) return v;
        return omega[n - lo] == 0 ? 1 : n;
    }
    bool is_prime(std::uint64_t n) const { return big_omega_at(n) == 1; }
};

// Guard: hi - lo <= max_span (default 10^8 entries, ~600 MB of tables).
FactorTable build_factor_table(std::uint64_t lo, std::uint64_t hi,
                               std::uint64_t max_span = 100000000);

// ---------------------------------------------------------------------------
// E2 numbers: products of two distinct primes.  A flag admits p^2 for
// sensitivity studies (off by default).
struct E2Options {
    std::uint64_t min_factor = 0;  // keep only n = p1 p2 with p1 > min_factor
    bool mod4 = false;             // require p1 = p2 = 1 (mod 4)
    bool allow_square = false;     // admit p^2 as well
};

// True iff n passes the E2 test; on success *p1 <= *p2 and p1*p2 = n.
bool e2_classify(const FactorTable& t, const E2Options& o, std::uint64_t n,
                 std::uint64_t* p1, std::uint64_t* p2);

// Visits E2 numbers in table order (ascending): fn(n, p1, p2).
template <class Fn>
void for_each_e2(const FactorTable& t, const E2Options& o, Fn&& fn) {
    for (std::uint64_t n = t.lo; n < t.hi; ++n) {
        std::uint64_t p1 = 0, p2 = 0;
        if (e2_classify(t, o, n, &p1, &p2)) fn(n, p1, p2);
    }
}

// ---------------------------------------------------------------------------
// Gap statistics over the E2 numbers below `limit` (exclusive).
struct GapStats {
    std::uint64_t count = 0;           // E2 numbers seen
    std::uint64_t first = 0, last = 0;
    std::map<std::uint64_t, std::uint64_t> histogram;  // gap -> occurrences
    // Consecutive pairs (q_n, q_{n+1}) realizing the requested gap.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> instances;
};

GapStats e2_gaps(std::uint64_t limit, const E2Options& o,
                 std::uint64_t instance_gap = 0,
                 std::size_t max_instances = 100);

// Number of indices n with q_{n+nu} - q_n <= window among E2 numbers below
// limit (both endpoints below limit).
std::uint64_t nu_block_count(std::uint64_t limit, const E2Options& o,
                             unsigned nu, std::uint64_t window);

// Starting points n < limit with n + off an E2 number for every requested
// offset; at most max_hits are returned.
std::vector<std::uint64_t> find_e2_patterns(std::uint64_t limit,
                                            const E2Options& o,
                                            std::vector<std::uint64_t> offsets,
                                            std::size_t max_hits = 100);

// ---------------------------------------------------------------------------
// The counting weight beta: beta(n) = 1 iff n = p1 p2 with
// y_floor < p1, p1^2 <= big_n < p2^2.  All comparisons exact in integers;
// a real cutoff Y enters through y_floor = floor(Y).
struct BetaConfig {
    std::uint64_t big_n = 0;   // N
    std::uint64_t y_floor = 1; // floor(Y), 1 <= Y <= N^(1/4)
    bool mod4 = false;         // restrict both primes to 1 (mod 4)
};

bool beta_value(const FactorTable& t, const BetaConfig& c, std::uint64_t n);

// Counts over the dyadic window (x, 2x]:
//   pi_beta:          n = a (mod q) with beta(n) = 1
//   pi_beta_coprime:  (n, u) = 1 with beta(n) = 1
//   pi_flat:          primes p = a (mod q)
std::uint64_t pi_beta(std::uint64_t x, std::uint64_t q, std::uint64_t a,
                      const BetaConfig& c);
std::uint64_t pi_beta_coprime(std::uint64_t x, std::uint64_t u,
                              const BetaConfig& c);
std::uint64_t pi_flat(std::uint64_t x, std::uint64_t q, std::uint64_t a);

}  // namespace e2sieve
