#pragma once

#include <cstdint>
#include <vector>

#include "e2sieve/linear_forms.hpp"
#include "e2sieve/polynomial.hpp"
#include "e2sieve/rational.hpp"

namespace e2sieve {

// Parameters of the sieve weight system: a normalized tuple, the level R
// (all weights vanish at d >= R; strict inequality throughout), and the
// polynomial P that defines the smooth choice of y_r.
struct SieveParams {
    NormalizedTuple tuple;
    std::uint64_t level = 2;  // R
    Poly poly;                // P

    void validate() const;  // level >= 2 and poly admissible for sieving
};

// ---------------------------------------------------------------------------
// Multiplicative functions on squarefree d coprime to A (k = tuple size):
//   f(d)   = prod_{p|d} p/k
//   f1(d)  = prod_{p|d} (p-k)/k
//   f*(d)  = prod_{p|d} (p-1)/(k-1)
//   f1*(d) = prod_{p|d} (p-k)/(k-1)
// Every prime factor of d exceeds k (primes <= k divide A), so f1 and f1*
// are strictly positive; this is checked, not assumed.
Rat f_value(const NormalizedTuple& t, std::uint64_t d);
Rat f1_value(const NormalizedTuple& t, std::uint64_t d);
Rat fstar_value(const NormalizedTuple& t, std::uint64_t d);
Rat f1star_value(const NormalizedTuple& t, std::uint64_t d);

// mask[m] = 1 iff 1 <= m < R, m squarefree and coprime to A (index 0 is 0).
std::vector<std::uint8_t> support_mask(const NormalizedTuple& t, std::uint64_t R);

// ---------------------------------------------------------------------------
// Generic transforms over a scalar S (double for production, Rat for exact
// identity checks; both instantiations are provided by the library).
// Vectors are indexed by d in [0, R); entries off the support are zero.
// The ambient singular-series factor is divided out of every quantity here;
// all identities below are homogeneous in it.

// lambda_hat[d] = mu(d) f(d) sum_{d|m, m on support} y[m]/f1(m).
template <class S>
std::vector<S> lambda_from_y(const NormalizedTuple& t, std::uint64_t R,
                             const std::vector<S>& y);

// Forward transform: y[r] = mu(r) f1(r) sum_{r|m, m on support} lambda_hat[m]/f(m).
// Left inverse of lambda_from_y (exact round trip in rational arithmetic).
template <class S>
std::vector<S> y_from_lambda(const NormalizedTuple& t, std::uint64_t R,
                             const std::vector<S>& lambda_hat);

// ystar[r] = mu^2(r) (r/phi(r)) sum_{m >= 1, mr on support} y[mr]/phi(m).
template <class S>
std::vector<S> y_star_from_y(const NormalizedTuple& t, std::uint64_t R,
                             const std::vector<S>& y);

// T_delta computed two independent ways; delta must be squarefree and
// coprime to A.  The two agree exactly in rational arithmetic.
//
// Bilinear form, directly from the weights (O(R^2) pairs; cross-check only,
// guarded at R <= 5000):
//   sum_{d,e on support} lambda_hat[d] lambda_hat[e] / f*(lcm(d,e,delta)/delta)
template <class S>
S t_delta_bilinear(const NormalizedTuple& t, std::uint64_t R,
                   const std::vector<S>& lambda_hat, std::uint64_t delta);

// Diagonalized form, from the transformed weights:
//   sum_{r on support, (r,delta)=1} mu^2(r)/f1*(r) *
//       (sum_{s|delta} mu(s) ystar[rs])^2      (ystar[j] = 0 for j >= R)
template <class S>
S t_delta_diagonal(const NormalizedTuple& t, std::uint64_t R,
                   const std::vector<S>& ystar, std::uint64_t delta);

// ---------------------------------------------------------------------------
// Production path (double precision, compensated summation).

struct WeightTable {
    std::uint64_t level = 0;          // R
    std::vector<std::uint8_t> valid;  // support mask, size R
    std::vector<double> lambda_hat;   // size R, zero off the support
    double max_abs = 0.0;             // max_d |lambda_hat[d]|
};

// y_r = P(log(R/r)/log R) on the support, else 0.
std::vector<double> production_y(const SieveParams& p);
double y_r_value(const SieveParams& p, std::uint64_t r);

// Builds the full weight table (guard: R <= 10^7).
WeightTable lambda_table(const SieveParams& p);

// y*_r for the production y (same support conventions).
std::vector<double> y_star_table(const SieveParams& p);

// max_d |lambda_hat[d]| / (log R)^k
double max_lambda_ratio(const SieveParams& p, const WeightTable& table);

// ---------------------------------------------------------------------------
// G*(u) = sum_{r<u, r squarefree, (r,A)=1} mu^2(r)/f1*(r).
// Exact rational value (guard: u <= 2*10^5); numeric version for large u.
Rat g_star(const NormalizedTuple& t, std::uint64_t u);
double g_star_numeric(const NormalizedTuple& t, std::uint64_t u);

// L(r) = 1 + sum_{p|r} log(p)/p.  Transcendental, hence double by design.
double l_r(std::uint64_t r);

// Fitted constant of the linear approximation to y*:
//   c = max over r on the support of
//       |y*_r - (phi(A)/A)(log R) * Pint(log(R/r)/log R)| / L(r)
// where Pint is the antiderivative of P with Pint(0) = 0.  Used as a
// report-style stability check across levels.
double y_star_fit_constant(const SieveParams& p);

}  // namespace e2sieve
