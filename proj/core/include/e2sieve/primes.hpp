#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace e2sieve {

// Primes p <= limit, ascending.
std::vector<std::uint32_t> primes_up_to(std::uint32_t limit);

// Smallest-prime-factor table for 0..limit (spf[0] = spf[1] = 0).
// Linear sieve; memory 4 bytes per entry.
std::vector<std::uint32_t> spf_table(std::uint32_t limit);

// Mobius function for 0..limit via the spf table.
std::vector<std::int8_t> mobius_table(std::uint32_t limit);

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

// Distinct prime factors of n, ascending, by trial division (n's least
// factor is found in O(sqrt n); intended for n with no factor > ~2^40).
std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n);

// Full factorization (prime, exponent), ascending primes.
std::vector<std::pair<std::uint64_t, unsigned>> factorize_u64(std::uint64_t n);

// pi(k): number of primes <= k.
std::uint32_t prime_count_up_to(std::uint32_t k);

// The n-th prime, 1-indexed (nth_prime(1) = 2).
std::uint64_t nth_prime(std::uint32_t n);

}  // namespace e2sieve
