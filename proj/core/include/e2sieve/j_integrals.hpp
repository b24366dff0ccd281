#pragma once

#include "e2sieve/exact_constant.hpp"
#include "e2sieve/polynomial.hpp"
#include "e2sieve/rational.hpp"

namespace e2sieve {

// Parameter block for the main-term integrals: tuple size k >= 2, level
// ratio B > 2, lower cutoff exponent eta >= 0, subtraction multiplicity
// nu >= 0, and the weight polynomial P (nonzero, degree <= 32).
struct JInputs {
    int k = 2;
    Rat B = Rat(4);
    Rat eta = Rat(0);
    int nu = 1;
    Poly P;
    void validate() const;
};

// integral_0^1 P(1-x)^2 x^(k-1) dx.
Rat j0(int k, const Poly& P);

// integral_0^1 Pt(1-x)^2 x^(k-2) dx, with Pt the antiderivative of P
// vanishing at 0.
Rat j_varpi(int k, const Poly& P);

// The window [B*eta, 1] of the outer integral is empty when B*eta >= 1;
// j1 and j2 are then exactly zero (callers may warn).
bool j_window_empty(const Rat& B, const Rat& eta);

// integral_{B eta}^1  B/(y(B-y)) integral_0^{1-y} (Pt(1-x) - Pt(1-x-y))^2
//   x^(k-2) dx dy, evaluated in closed form.
ExactConstant j1(int k, const Rat& B, const Rat& eta, const Poly& P);

// Same outer kernel against integral_{1-y}^1 Pt(1-x)^2 x^(k-2) dx.
ExactConstant j2(int k, const Rat& B, const Rat& eta, const Poly& P);

// integral_1^{B/2} B/(y(B-y)) dy * j_varpi = j_varpi * log(B-1).
ExactConstant j3(int k, const Rat& B, const Poly& P);

// Detection constant k(k-1)/B * (J1 + J2 + J3 [+ J_varpi]) - nu * J0;
// positive iff the underlying combined sum is positive for large N.
ExactConstant j_total(const JInputs& in, bool with_primes);

// Double-precision versions for irrational B and eta (log-scale ratios).
double j1_numeric(int k, double B, double eta, const Poly& P);
double j2_numeric(int k, double B, double eta, const Poly& P);
double j3_numeric(int k, double B, const Poly& P);
double j_total_numeric(int k, double B, double eta, int nu, const Poly& P, bool with_primes);

// Beta moment integral_0^1 x^m (1-x)^n dx = m! n! / (m+n+1)!.
Rat beta_moment(unsigned m, unsigned n);

// Monomial closed forms for P = x^l / l!.
Rat a_kl(unsigned k, unsigned l);   // C(2l+2, l+1) / (k+2l+1)!
Rat a0_kl(unsigned k, unsigned l);  // C(2l, l) / (k+2l)!

// Partial harmonic sum 1 + 1/2 + ... + 1/n.
Rat harmonic_l(unsigned n);

// Finite product-ratio sum sum_{j=1}^{l+1} (1/j) prod_{i=0}^{j-1}
// (l+1-i)/(2l+2-i); tends to log 2 as l grows.
Rat c_ell(unsigned l);

// Asymptotic main term A(k,l) * log(B e^gamma k / 4).  Note A(k,l)
// underflows double for large k; see asymptotic_ratio for a stable form.
double asymptotic_j_main(unsigned k, unsigned l, double B);

// numeric((J1+J2+J3)/(k-2)! / A(k,l)) / log(B e^gamma k/4) for the
// monomial P = x^l/l! at eta = 0; tends to 1 as k grows.
double asymptotic_ratio(unsigned k, unsigned l, const Rat& B);

}  // namespace e2sieve
