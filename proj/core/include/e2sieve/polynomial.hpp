#pragma once

#include <string>
#include <vector>

#include "e2sieve/rational.hpp"

namespace e2sieve {

// Dense univariate polynomial over Q, coefficients stored low-order first.
// Arbitrary degree; the user-facing sieve-polynomial guard is enforced
// separately (validate_sieve_polynomial) so internal intermediates of high
// degree stay legal.
class Poly {
  public:
    Poly() = default;  // zero polynomial
    explicit Poly(std::vector<Rat> coeffs);
    static Poly constant(const Rat& c);
    static Poly monomial(unsigned degree, const Rat& coeff);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }  // -1 if zero
    bool is_zero() const { return coeffs_.empty(); }
    Rat coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Rat(0); }
    const std::vector<Rat>& coeffs() const { return coeffs_; }

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const Rat& s) const;
    bool operator==(const Poly& o) const { return coeffs_ == o.coeffs_; }

    Rat eval(const Rat& x) const;
    double eval_double(double x) const;

    Poly derivative() const;
    // Antiderivative with value 0 at 0.
    Poly antiderivative() const;
    Rat integrate(const Rat& lo, const Rat& hi) const;
    // P(c0 + c1*x).
    Poly compose_linear(const Rat& c0, const Rat& c1) const;

    std::string to_string() const;  // human-readable, e.g. "1 + 6*x"

  private:
    void trim();
    std::vector<Rat> coeffs_;
};

// Parses "c0,c1,..." with rational entries into a polynomial.
Poly poly_from_csv(const std::string& csv);

// Enforces the user-facing guard: nonzero, degree <= 32.
void validate_sieve_polynomial(const Poly& p);

}  // namespace e2sieve
