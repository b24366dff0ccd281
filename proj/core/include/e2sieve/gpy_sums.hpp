#pragma once

#include <cstdint>
#include <vector>

#include "e2sieve/factor_table.hpp"
#include "e2sieve/weights.hpp"

namespace e2sieve {

// Comparison of a computed detection sum over (N, 2N] against its predicted
// main term.  Weights carry the singular-series normalization of the weights
// module; the predictions divide the series value back out once, so `ratio`
// equals the unnormalized comparison.  Predictions are evaluated at
// b = log N / log R, the finite-N value of the level ratio.
struct SumReport {
    double exact = 0.0;      // the computed sum
    double main_term = 0.0;  // theorem prediction at b
    double ratio = 0.0;      // exact / main_term (0 when main_term == 0)
    std::uint64_t n_base = 0;  // N
    std::uint64_t level = 0;   // R
    int k = 0;
    double b = 0.0;            // log N / log R
    std::vector<double> components;  // per-form pieces where applicable
};

struct Winner {
    std::uint64_t n = 0;
    std::vector<int> forms;  // indices of the forms passing the detector
};

struct CombinedReport {
    SumReport report;  // combined sum, prediction, ratio
    double s0 = 0.0;   // the subtracted square sum (same pass)
    std::uint64_t winner_count = 0;  // all n with >= nu+1 detected forms
    std::vector<Winner> winners;     // ascending sample, capped
};

// S0 = sum_{N<n<=2N} (sum_{d | P_L(n), d < R} lambda_hat_d)^2, via segmented
// accumulation over the root progressions of each d.
SumReport s0_exact(const SieveParams& p, std::uint64_t N);

// S1_j = sum_{N<n<=2N} beta(L_j(n)) (sum lambda_hat_d)^2; the prime variant
// uses the prime indicator instead of beta.
SumReport s1_exact(const SieveParams& p, std::uint64_t N, int j,
                   const BetaConfig& cfg);
SumReport spi_exact(const SieveParams& p, std::uint64_t N, int j);

// Combined detector  S = sum_j S1_j [+ sum_j Spi_j] - nu * S0  in a single
// pass.  Winners are the n with at least nu+1 forms detected (beta-numbers,
// or beta-or-prime when with_primes); a positive sum forces a nonempty
// winner list.
CombinedReport s_combined(const SieveParams& p, std::uint64_t N, unsigned nu,
                          const BetaConfig& cfg, bool with_primes,
                          std::size_t max_winners = 1000);

// M_j(u) = #{N < n <= 2N : u | P_L(n), beta(L_j(n)) = 1}.  u must be
// squarefree, coprime to A, with every prime factor below R.
std::uint64_t m_count(const SieveParams& p, int j, std::uint64_t u,
                      std::uint64_t N, const BetaConfig& cfg);

// ---------------------------------------------------------------------------
// Exact big-rational engine for oracle comparisons (guard: N <= 2*10^5).
// Takes the weight vector explicitly (index d in [0, R)) so tests control it.
Rat s0_exact_rat(const NormalizedTuple& t, std::uint64_t R,
                 const std::vector<Rat>& lambda_hat, std::uint64_t N);
Rat s1_exact_rat(const NormalizedTuple& t, std::uint64_t R,
                 const std::vector<Rat>& lambda_hat, std::uint64_t N, int j,
                 const BetaConfig& cfg);
Rat spi_exact_rat(const NormalizedTuple& t, std::uint64_t R,
                  const std::vector<Rat>& lambda_hat, std::uint64_t N, int j);

}  // namespace e2sieve
