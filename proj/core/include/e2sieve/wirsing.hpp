#pragma once

#include <cstdint>

#include "e2sieve/polynomial.hpp"
#include "e2sieve/rational.hpp"

namespace e2sieve {

// Mean values of nonnegative multiplicative functions of sieve dimension
// kappa: for gamma with 0 <= gamma(p)/p <= 1 - 1/A1 and
// sum_{w<=p<z} gamma(p) log(p)/p = kappa log(z/w) + O(1), the function
// g(d) = prod_{p|d} gamma(p)/(p - gamma(p)) satisfies
//
//   sum_{d<z} mu^2(d) g(d)  =  c * (log z)^kappa / Gamma(kappa+1) * {1+O(L/log z)}
//
// with c = prod_p (1 - gamma(p)/p)^{-1} (1 - 1/p)^kappa, and the weighted
// variant with a factor F(log(z/d)/log z) replaces
// 1/Gamma(kappa+1) by [int_0^1 F(1-x) x^{kappa-1} dx] / Gamma(kappa).
// This harness evaluates both sides numerically and reports the relative
// error; it is the empirical backstop for every main-term computation in
// the sieve modules.

// The three gamma shapes the sieve machinery uses.  Primes dividing
// `excluded` always have gamma(p) = 0 (they are off the support).
//   constant_k_off_a : gamma(p) = k,                kappa = k
//   totient_like     : gamma(p) = p(k-1)/(p-1),     kappa = k - 1
//   unit             : gamma(p) = 1, excluded = 1,  kappa = 1
// constant_k_off_a makes g = 1/f1 and totient_like makes g = 1/f1* for a
// normalized tuple whose constant is `excluded`.
enum class GammaKind { constant_k_off_a, totient_like, unit };

struct GammaSpec {
    GammaKind kind = GammaKind::unit;
    int k = 1;                   // dimension parameter (ignored for unit)
    std::uint64_t excluded = 1;  // gamma vanishes on primes dividing this

    double kappa() const;
    // gamma(p) for prime p; 0 when p | excluded.
    double gamma_at(std::uint64_t p) const;
    // g(p) = gamma(p)/(p - gamma(p)) as an exact rational; 0 off support.
    Rat g_at(std::uint64_t p) const;
    // Throws PreconditionError when kappa <= 0 or the dimension condition
    // gamma(p) < p fails at any small non-excluded prime.
    void validate() const;
};

struct WirsingReport {
    std::uint64_t z = 0;
    double lhs = 0.0;      // the exact-accumulated sum
    double main = 0.0;     // c * (log z)^kappa / Gamma-factor [* integral]
    double rel_err = 0.0;  // |lhs/main - 1|
    double kappa = 0.0;
    double c_gamma = 0.0;
};

// Truncated Euler product for c (primes up to 10^6); the omitted tail is
// O(1/(P log P))-small for all built-in shapes.
double c_gamma(const GammaSpec& spec);

// Unweighted mean value.  Preconditions: z >= 2, valid spec.
// Resource guard: z <= 10^8.
WirsingReport wirsing_sum(const GammaSpec& spec, std::uint64_t z);

// Weighted mean value with polynomial weight F(log(z/d)/log z).
WirsingReport wirsing_weighted(const GammaSpec& spec, std::uint64_t z,
                               const Poly& F);

// Exact rational left-hand side for oracle tests (guard: z <= 10^5).  Only
// the unweighted sum has an exact form: the weight argument log(z/d)/log z
// is not rational.
Rat wirsing_sum_exact(const GammaSpec& spec, std::uint64_t z);

// int_0^1 F(1-x) x^{kappa-1} dx as an exact rational (integer kappa only,
// which covers every built-in shape).
Rat wirsing_weight_integral(const GammaSpec& spec, const Poly& F);

}  // namespace e2sieve
