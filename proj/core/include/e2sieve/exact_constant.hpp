#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "e2sieve/rational.hpp"

namespace e2sieve {

// A number of the form  r + sum_p c_p * log p  with r, c_p rational and p
// prime.  log's of arbitrary positive rationals are folded into this basis
// by factoring numerator and denominator, which makes the representation
// canonical: since the log p are linearly independent over Q, two values are
// equal iff their representations match, and the value is zero iff the
// representation is empty.  That gives decidable equality and a terminating
// exact sign test.
class ExactConstant {
  public:
    ExactConstant() = default;
    explicit ExactConstant(Rat rational);

    static ExactConstant log_prime(std::uint64_t p, const Rat& coeff = Rat(1));
    // coeff * log(q) for rational q > 0, decomposed into prime logs.
    static ExactConstant log_rational(const Rat& q, const Rat& coeff = Rat(1));

    const Rat& rational_part() const { return rational_; }
    const std::map<std::uint64_t, Rat>& log_coeffs() const { return logs_; }

    ExactConstant operator+(const ExactConstant& o) const;
    ExactConstant operator-(const ExactConstant& o) const;
    ExactConstant operator-() const;
    ExactConstant operator*(const Rat& s) const;
    bool operator==(const ExactConstant& o) const;

    bool is_zero() const { return rational_ == 0 && logs_.empty(); }
    // -1, 0, or +1, decided rigorously: MPFR enclosures at doubling
    // precision; termination is guaranteed because a nonzero value is
    // bounded away from zero and a zero value has the empty representation.
    int sign() const;

    // Evaluation through MPFR with >= 30 significant digits carried for
    // every log p, rounded to double at the end.
    double numeric() const;
    // Decimal expansion with the requested number of significant digits.
    std::string numeric_string(unsigned digits = 30) const;
    // Canonical text, e.g. "41/60*log(3) + 1/2".
    std::string to_string() const;

  private:
    Rat rational_;
    std::map<std::uint64_t, Rat> logs_;  // prime -> coefficient, no zero entries
    void prune();
};

}  // namespace e2sieve
