#pragma once

#include <cstdint>
#include <vector>

#include "e2sieve/factor_table.hpp"

namespace e2sieve {

// Level-of-distribution diagnostics for the primes and for beta-marked
// E2 numbers: the window error terms
//
//   Delta(y; q, a)   = #{marked v in (y, 2y] : v = a (mod q)} - T(y) / phi(q)
//
// where T(y) is the total window count (all marked values for the prime
// stream; only values coprime to q for the beta stream, matching the
// normalization the beta counting functions use), and the sup statistic
//
//   Delta*(x; q) = max_{0 < y <= x} max_{(a,q)=1} |Delta(y; q, a)|.
//
// For x <= 10^4 the maximum is evaluated exactly over all real y (the
// statistic is piecewise constant with breakpoints at v/2 and v for each
// marked value v).  For larger x it is sampled on a grid of at most 64
// window positions per modulus -- the dyadic points x/2^i plus a spread of
// count change-points inside the widest segment (x/2, x] -- and the result
// is a lower bound on the true maximum, flagged `exact = false`.

enum class MarkKind { primes, beta };

struct DeltaStarReport {
    double value = 0.0;         // max (or sampled max) of |Delta|
    bool exact = false;         // true when every change-point was visited
    std::uint64_t samples = 0;  // number of window positions evaluated
};

struct BVTerm {
    std::uint64_t q = 0;
    double weight = 0.0;  // mu^2(q) h^omega(q)
    double dstar = 0.0;   // Delta*(x; q)
};

struct BVReport {
    std::uint64_t x = 0;
    double big_q = 0.0;       // the modulus cutoff Q
    double h = 0.0;           // divisor-weight base
    double sum = 0.0;         // sum over squarefree q <= Q of weight * dstar
    double normalized = 0.0;  // sum / x
    std::vector<BVTerm> terms;  // per-q breakdown (when requested)
};

// Delta*(x; q) for the prime stream.  Preconditions: x >= 1, q >= 1.
// Resource guard: x <= 10^8.
DeltaStarReport delta_star(std::uint64_t x, std::uint64_t q);

// Delta*(x; q) for the beta stream (E2 numbers whose factors straddle
// sqrt(cfg.big_n) with the small factor above cfg.y_floor).
DeltaStarReport delta_beta_star(std::uint64_t x, std::uint64_t q,
                                const BetaConfig& cfg);

// Weighted Bombieri--Vinogradov-style sum
//     sum_{q <= Q, q squarefree} h^omega(q) Delta*(x; q)
// with the empty-product convention h^omega(1) = 1 (so h = 0 keeps only
// q = 1, whose Delta* vanishes identically).  Preconditions: x >= 1,
// 0 <= Q <= x, h >= 0.  Resource guards: x <= 10^8, Q <= 10^5.
// cfg is required for kind == beta and ignored otherwise.
BVReport bv_sum(std::uint64_t x, double big_q, double h, MarkKind kind,
                const BetaConfig* cfg = nullptr, bool keep_terms = false);

// The sorted list of marked values in (0, 2x] backing the statistics above;
// exposed for oracle tests.  Prime stream: all primes <= 2x.  Beta stream:
// all n <= 2x with beta(n) = 1.
std::vector<std::uint64_t> marked_values(std::uint64_t x, MarkKind kind,
                                         const BetaConfig* cfg = nullptr);

}  // namespace e2sieve
