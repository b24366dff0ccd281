#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "e2sieve/errors.hpp"

namespace e2sieve {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(long num, long den = 1) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline Rat make_rat(const Int& num, const Int& den) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

// Parses "p", "p/q", or "-p/q"; q must be positive after canonicalization.
Rat rat_from_string(const std::string& s);

std::string rat_to_string(const Rat& q);

inline double to_double(const Rat& q) { return q.get_d(); }

Int factorial(unsigned long n);
Int binomial(unsigned long n, unsigned long k);

// Floor of n^(1/2) for 64-bit n, exact.
std::uint64_t isqrt_u64(std::uint64_t n);

}  // namespace e2sieve
