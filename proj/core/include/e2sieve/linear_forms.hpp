#pragma once

#include <cstdint>
#include <vector>

#include "e2sieve/rational.hpp"

namespace e2sieve {

// One linear form a*n + b with a >= 1 and gcd(a, b) = 1.
struct LinearForm {
    std::int64_t a = 1;
    std::int64_t b = 0;
    friend bool operator==(const LinearForm&, const LinearForm&) = default;
};

// A tuple of k >= 2 pairwise-distinct linear forms.
class LinearTuple {
  public:
    explicit LinearTuple(std::vector<LinearForm> forms);
    const std::vector<LinearForm>& forms() const { return forms_; }
    int k() const { return static_cast<int>(forms_.size()); }
    // Product of the forms evaluated at n, as a big integer.
    Int product_at(const Int& n) const;

  private:
    std::vector<LinearForm> forms_;
};

// Number of residues n mod p with p | (a_1 n + b_1)...(a_k n + b_k).
// Always <= min(k, p); equals p only for degenerate inputs, which the
// LinearTuple invariant (gcd(a,b) = 1) excludes.
std::uint64_t nu_p(const LinearTuple& t, std::uint64_t p);

// The tuple constant: product of all slopes times the product over pairs
// of |a_i b_j - a_j b_i|.  Zero never occurs for distinct coprime forms.
Int constant_A(const LinearTuple& t);

// Sorted distinct primes dividing constant_A, obtained by factoring each
// slope and each pairwise resultant separately (never the full product).
std::vector<std::uint64_t> support_of_A(const LinearTuple& t);

// True iff nu_p < p for every prime p.  Only p <= k require a check:
// nu_p <= k < p holds automatically beyond that.
bool is_admissible(const LinearTuple& t);

// An admissible tuple rewritten through n -> A*n + B so that every prime
// dividing the new slopes misses every form value.
class NormalizedTuple {
  public:
    NormalizedTuple(LinearTuple tuple, Int A, Int shift_B, std::vector<std::uint64_t> support);
    const LinearTuple& tuple() const { return tuple_; }
    int k() const { return tuple_.k(); }
    const Int& A() const { return A_; }
    const Int& shift_B() const { return shift_B_; }
    // Primes dividing A (equivalently: dividing every normalized slope).
    const std::vector<std::uint64_t>& a_support() const { return support_; }
    bool divides_A(std::uint64_t p) const;
    bool coprime_to_A(std::uint64_t d) const;

  private:
    LinearTuple tuple_;
    Int A_;
    Int shift_B_;
    std::vector<std::uint64_t> support_;
};

// Applies the substitution n -> A*n + B with A the tuple constant and B the
// least nonnegative CRT representative (mod rad A) of the least nonnegative
// residue n_p avoiding every root mod p, for each prime p | A.  Throws
// PreconditionError for inadmissible tuples, ResourceError if the rewritten
// coefficients overflow 64 bits.
NormalizedTuple normalize(const LinearTuple& t);

struct SingularSeriesValue {
    double value = 0.0;
    double error_bound = 0.0;  // absolute bound on the truncation error
    std::uint64_t cutoff = 0;
};

inline constexpr std::uint64_t kDefaultSeriesCutoff = 1'000'000;

// Euler product in the normalized shape: (1 - 1/p)^{-k} over p | A times
// (1 - k/p)(1 - 1/p)^{-k} over p <= cutoff, p coprime to A.  The tail bound
// exponentiates sum_{p > cutoff} 2k^2/p^2 <= 2k^2/(cutoff log cutoff),
// rigorous once cutoff > 2k^2.  Rejects cutoff < k.
SingularSeriesValue singular_series(const NormalizedTuple& t,
                                    std::uint64_t cutoff = kDefaultSeriesCutoff);

// Generic Euler product (1 - nu_p/p)(1 - 1/p)^{-k} over p <= cutoff, with
// every prime of the tuple-constant support included even beyond the cutoff
// so the same tail bound applies (nu_p = k off the support).
SingularSeriesValue singular_series_raw(const LinearTuple& t,
                                        std::uint64_t cutoff = kDefaultSeriesCutoff);

// Sorted residues r mod d with d | product of forms at r, for squarefree d
// coprime to A.  CRT product of the per-prime root sets; size is
// multiplicative and at most k^omega(d).  d = 1 yields {0}.
std::vector<std::uint64_t> roots_mod(const NormalizedTuple& t, std::uint64_t d);

}  // namespace e2sieve
