#pragma once

#include "e2sieve/exact_constant.hpp"
#include "e2sieve/j_integrals.hpp"
#include "e2sieve/linear_forms.hpp"
#include "e2sieve/polynomial.hpp"
#include "e2sieve/rational.hpp"

namespace e2sieve {

// Threshold constants for simultaneous E2 values among k linear forms, the
// exact minimal-k search by sign-certified positivity of the detection
// constant, and the standard prime-shift tuple construction.

// Variants: plain E2 detection; detection inside short intervals
// [N, N + N^{7/12+eps}] (which forces the level ratio to 60); E2 values
// that are sums of two squares, p1 = p2 = 1 (mod 4) (which costs a factor
// 4 on nu); and the combination of the last two.
enum class BoundVariant { e2, short_interval, two_squares, both };

struct BoundQuery {
    int nu = 1;           // nu + 1 forms take E2 values simultaneously
    Rat b = Rat(4);       // level ratio B = 2/theta, 2 < B <= 60
    BoundVariant variant = BoundVariant::e2;
    void validate() const;
};

// Leading-order values with the o(1) term (a function of nu tending to 0
// as nu -> infinity) set to zero -- hence `heuristic` is always true and
// the numbers are order-of-magnitude guides, not certified bounds.
// Both families collapse to two formulas in the effective parameters
// B_eff (60 for the short-interval variants, B otherwise) and nu_eff
// (4 nu for the two-squares variants, nu otherwise):
//   k_threshold  = 4 e^{-gamma} / B_eff * exp(B_eff nu_eff / 4)
//   gap_diameter = e^{-gamma} nu_eff   * exp(B_eff nu_eff / 4)
struct BoundConstants {
    double k_threshold = 0.0;   // forms needed for nu+1 simultaneous values
    double gap_diameter = 0.0;  // window holding nu consecutive E2 numbers
    double b_effective = 0.0;
    int nu_effective = 0;
    bool heuristic = true;
};

BoundConstants leading_constant(const BoundQuery& query);

// Minimal-k search: the smallest k with positive detection constant
//   J(k) = k(k-1)/B (J1 + J2 + J3) - nu J0
// under the chosen polynomial family.  The boundary values are certified
// by the exact sign test (no floating-point decision): J(k) > 0 >= J(k-1).
enum class PFamily {
    monomial_sqrt_k,  // P = x^l / l! with l = floor(sqrt(k))
    fixed,            // caller-supplied P used for every k
};

struct MinKResult {
    int k = 0;
    ExactConstant j_at_k;     // certified positive
    ExactConstant j_below;    // certified <= 0 (k-1 with the same family)
    Poly p_at_k;              // the polynomial the family chose at k
    Poly p_below;
};

// Throws PreconditionError when no k within the search guard (10^4 for the
// fixed family; 1024 for the monomial family, whose degree grows as
// sqrt(k)) has positive J.  The two-squares variants substitute
// nu -> 4 nu; the short-interval variants force B = 60.
MinKResult min_k(int nu, const Rat& b, const Rat& eta, PFamily family,
                 const Poly& fixed_p = Poly(),
                 BoundVariant variant = BoundVariant::e2);

// The admissible k-tuple {n + p_{pi(k)+1}, ..., n + p_{pi(k)+k}}: the k
// primes immediately above k as shifts.  No prime p <= k can cover all
// residues (the shifts avoid 0 mod p), so admissibility is structural;
// it is asserted before returning.
LinearTuple tuple_of_primes(int k);

}  // namespace e2sieve
