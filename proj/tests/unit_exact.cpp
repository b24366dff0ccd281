// Exact-arithmetic foundations: rationals, polynomials, prime utilities,
// and the log-prime constant ring.  Oracles are independent of the library
// paths under test (trial division, Horner re-evaluation, std::log).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "e2sieve/errors.hpp"
#include "e2sieve/exact_constant.hpp"
#include "e2sieve/polynomial.hpp"
#include "e2sieve/primes.hpp"
#include "e2sieve/rational.hpp"

using namespace e2sieve;

namespace {

Rat random_rat(std::mt19937_64& rng) {
    long num = static_cast<long>(rng() % 41) - 20;
    long den = static_cast<long>(rng() % 19) + 1;
    return make_rat(num, den);
}

Poly random_poly(std::mt19937_64& rng, int max_deg) {
    std::vector<Rat> c(1 + rng() % (max_deg + 1));
    for (auto& x : c) x = random_rat(rng);
    return Poly(c);
}

}  // namespace

TEST_CASE("make_rat canonicalizes") {
    CHECK(make_rat(2, 4) == make_rat(1, 2));
    CHECK(make_rat(-2, 4) == make_rat(-1, 2));
    CHECK(make_rat(3, -6) == make_rat(-1, 2));
    CHECK(make_rat(0, 7) == Rat(0));
    CHECK(to_double(make_rat(1, 2)) == doctest::Approx(0.5));
}

TEST_CASE("rational string round trip") {
    for (const char* s : {"0", "1", "-1", "7/3", "-22/7", "1000000007"}) {
        Rat q = rat_from_string(s);
        CHECK(rat_to_string(q) == s);
        CHECK(rat_from_string(rat_to_string(q)) == q);
    }
    CHECK(rat_from_string("4/6") == make_rat(2, 3));
    CHECK(rat_from_string(" 3/4 ") == make_rat(3, 4));
    CHECK_THROWS_AS(rat_from_string(""), PreconditionError);
    CHECK_THROWS_AS(rat_from_string("1/0"), PreconditionError);
    CHECK_THROWS_AS(rat_from_string("a/b"), PreconditionError);
    CHECK_THROWS_AS(rat_from_string("1/2/3"), PreconditionError);
}

TEST_CASE("factorial and binomial") {
    CHECK(factorial(0) == 1);
    CHECK(factorial(1) == 1);
    CHECK(factorial(10) == 3628800);
    Int f = 1;
    for (unsigned long n = 1; n <= 30; ++n) {
        f *= static_cast<long>(n);
        CHECK(factorial(n) == f);
    }
    for (unsigned long n = 0; n <= 20; ++n) {
        CHECK(binomial(n, 0) == 1);
        CHECK(binomial(n, n) == 1);
        for (unsigned long k = 1; k < n; ++k)
            CHECK(binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k));
    }
    CHECK(binomial(52, 5) == 2598960);
}

TEST_CASE("isqrt_u64 exact") {
    auto ok = [](std::uint64_t n) {
        std::uint64_t r = isqrt_u64(n);
        bool lower = r * r <= n;
        bool upper = (r + 1 > 0xFFFFFFFFull) || (r + 1) * (r + 1) > n;
        return lower && upper;
    };
    for (std::uint64_t n = 0; n <= 3000; ++n) CHECK(ok(n));
    for (std::uint64_t r : {65536ull, 1000003ull, 4294967295ull}) {
        CHECK(isqrt_u64(r * r) == r);
        CHECK(isqrt_u64(r * r - 1) == r - 1);
        if (r < 4294967295ull) CHECK(isqrt_u64(r * r + 1) == r);
    }
    CHECK(ok(0xFFFFFFFFFFFFFFFFull));
}

TEST_CASE("polynomial algebra identities (seeded)") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        Poly p = random_poly(rng, 4), q = random_poly(rng, 4), r = random_poly(rng, 3);
        Rat x = random_rat(rng);
        CHECK((p + q).eval(x) == p.eval(x) + q.eval(x));
        CHECK((p - q).eval(x) == p.eval(x) - q.eval(x));
        CHECK((p * q).eval(x) == p.eval(x) * q.eval(x));
        CHECK(((p + q) * r) == (p * r + q * r));
        Rat s = random_rat(rng);
        CHECK((p * s).eval(x) == p.eval(x) * s);
        // compose_linear is evaluation of the shifted argument
        Rat c0 = random_rat(rng), c1 = random_rat(rng);
        CHECK(p.compose_linear(c0, c1).eval(x) == p.eval(c0 + c1 * x));
    }
}

TEST_CASE("calculus: derivative, antiderivative, integrate") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        Poly p = random_poly(rng, 5);
        CHECK(p.antiderivative().derivative() == p);
        CHECK(p.antiderivative().eval(Rat(0)) == Rat(0));
        Rat lo = random_rat(rng), hi = random_rat(rng);
        Poly ad = p.antiderivative();
        CHECK(p.integrate(lo, hi) == ad.eval(hi) - ad.eval(lo));
    }
    Poly one_plus_6x = poly_from_csv("1,6");
    CHECK(one_plus_6x.integrate(Rat(0), Rat(1)) == Rat(4));
    CHECK(one_plus_6x.to_string() == "1 + 6*x");
}

TEST_CASE("poly csv parsing and the sieve guard") {
    Poly p = poly_from_csv("1/2,-3/4,0,2");
    CHECK(p.degree() == 3);
    CHECK(p.coeff(0) == make_rat(1, 2));
    CHECK(p.coeff(1) == make_rat(-3, 4));
    CHECK(p.coeff(3) == Rat(2));
    CHECK(poly_from_csv("0,0,1").degree() == 2);
    CHECK(poly_from_csv("0").is_zero());
    CHECK_THROWS_AS(poly_from_csv(""), PreconditionError);
    CHECK_THROWS_AS(poly_from_csv("1,,2"), PreconditionError);
    CHECK_THROWS_AS(poly_from_csv("x"), PreconditionError);

    CHECK_THROWS_AS(validate_sieve_polynomial(Poly()), PreconditionError);
    CHECK_THROWS_AS(validate_sieve_polynomial(Poly::monomial(33, Rat(1))), PreconditionError);
    CHECK_NOTHROW(validate_sieve_polynomial(Poly::monomial(32, Rat(1))));
}

TEST_CASE("eval_double tracks exact eval") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        Poly p = random_poly(rng, 6);
        double x = static_cast<double>(rng() % 100) / 50.0 - 1.0;
        Rat xr(x);  // binary double is exactly representable
        CHECK(p.eval_double(x) == doctest::Approx(to_double(p.eval(xr))).epsilon(1e-12));
    }
}

TEST_CASE("primes_up_to and tables vs trial division") {
    auto ps = primes_up_to(100);
    std::vector<std::uint32_t> known{2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                     43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
    CHECK(ps == known);
    CHECK(primes_up_to(1).empty());

    auto spf = spf_table(3000);
    auto mu = mobius_table(3000);
    for (std::uint32_t n = 2; n <= 3000; ++n) {
        std::uint32_t lf = 0;
        for (std::uint32_t d = 2; d * d <= n; ++d)
            if (n % d == 0) { lf = d; break; }
        if (lf == 0) lf = n;
        CHECK(spf[n] == lf);
        // Mobius by explicit factorization
        std::uint32_t m = n;
        int mob = 1;
        for (std::uint32_t d = 2; d * d <= m && mob != 0; ++d) {
            if (m % d) continue;
            m /= d;
            mob = -mob;
            if (m % d == 0) mob = 0;
        }
        if (mob != 0 && m > 1) mob = -mob;
        CHECK(static_cast<int>(mu[n]) == mob);
    }
}

TEST_CASE("is_prime_u64 deterministic") {
    auto spf = spf_table(10000);
    for (std::uint32_t n = 2; n <= 10000; ++n)
        CHECK(is_prime_u64(n) == (spf[n] == n));
    CHECK(is_prime_u64(2305843009213693951ull));  // 2^61 - 1
    CHECK_FALSE(is_prime_u64(3215031751ull));     // strong pseudoprime to 2,3,5,7
    CHECK_FALSE(is_prime_u64(1ull));
    CHECK(is_prime_u64(18446744073709551557ull));  // largest 64-bit prime
}

TEST_CASE("factorization helpers") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        std::uint64_t n = 2 + rng() % 1000000;
        auto fac = factorize_u64(n);
        Int prod = 1;
        std::uint64_t prev = 0;
        for (auto [p, e] : fac) {
            CHECK(is_prime_u64(p));
            CHECK(p > prev);
            prev = p;
            for (unsigned i = 0; i < e; ++i) prod *= static_cast<unsigned long>(p);
        }
        CHECK(prod == static_cast<unsigned long>(n));
        auto dist = distinct_prime_factors(n);
        CHECK(dist.size() == fac.size());
        for (std::size_t i = 0; i < dist.size(); ++i) CHECK(dist[i] == fac[i].first);
    }
    CHECK(nth_prime(1) == 2);
    CHECK(nth_prime(25) == 97);
    CHECK(nth_prime(10000) == 104729);
    CHECK(prime_count_up_to(97) == 25);
    CHECK(prime_count_up_to(100) == 25);
    CHECK(prime_count_up_to(2) == 1);
}

TEST_CASE("exact constants: canonical form and field ops") {
    ExactConstant two_log2 = ExactConstant::log_prime(2, Rat(2));
    CHECK(ExactConstant::log_rational(Rat(4)) == two_log2);
    CHECK((ExactConstant::log_prime(2) - ExactConstant::log_rational(Rat(2))).is_zero());
    CHECK(ExactConstant::log_rational(Rat(1)).is_zero());

    // log(143/108) = log 11 + log 13 - 2 log 2 - 3 log 3
    ExactConstant lhs = ExactConstant::log_rational(make_rat(143, 108));
    ExactConstant rhs = ExactConstant::log_prime(11) + ExactConstant::log_prime(13) -
                        ExactConstant::log_prime(2, Rat(2)) - ExactConstant::log_prime(3, Rat(3));
    CHECK(lhs == rhs);

    ExactConstant a = ExactConstant(make_rat(1, 2)) + ExactConstant::log_prime(3, make_rat(41, 60));
    CHECK(a.rational_part() == make_rat(1, 2));
    CHECK(a.log_coeffs().at(3) == make_rat(41, 60));
    CHECK((a - a).is_zero());
    CHECK((a + (-a)).is_zero());
    CHECK((a * Rat(0)).is_zero());
    CHECK((a * Rat(2)).log_coeffs().at(3) == make_rat(41, 30));
    CHECK(a.to_string() == "1/2 + 41/60*log(3)");
}

TEST_CASE("exact constants: rigorous sign") {
    CHECK(ExactConstant(Rat(0)).sign() == 0);
    CHECK(ExactConstant(make_rat(-1, 1000000007)).sign() == -1);
    CHECK(ExactConstant::log_prime(2).sign() == 1);
    CHECK((ExactConstant::log_prime(2) - ExactConstant::log_rational(Rat(2))).sign() == 0);

    // A genuinely small nonzero value: 1e6 (log 2 - 0.693147) is ~0.18...
    // sharper: r + c log 2 with r/c = -693147180559945309/1e18 differs from
    // -log 2 in the 19th digit.
    ExactConstant tight =
        ExactConstant(make_rat(Int("-693147180559945309"), Int("1000000000000000000"))) +
        ExactConstant::log_prime(2);
    CHECK(tight.sign() == 1);  // log 2 = 0.6931471805599453094... > cutoff
    ExactConstant tight2 =
        ExactConstant(make_rat(Int("-693147180559945310"), Int("1000000000000000000"))) +
        ExactConstant::log_prime(2);
    CHECK(tight2.sign() == -1);
}

TEST_CASE("exact constants: numeric evaluation") {
    CHECK(ExactConstant::log_prime(2).numeric() ==
          doctest::Approx(std::numbers::ln2).epsilon(1e-15));
    ExactConstant c = ExactConstant(make_rat(852438101, 5598720)) +
                      ExactConstant::log_prime(2, make_rat(5464, 5)) +
                      ExactConstant::log_prime(3, make_rat(65609, 40)) +
                      ExactConstant::log_prime(11, make_rat(-2732, 5)) +
                      ExactConstant::log_prime(13, make_rat(-2732, 5));
    CHECK(c.numeric() == doctest::Approx(0.00016493330185924).epsilon(1e-9));
    CHECK(c.sign() == 1);
    std::string s30 = ExactConstant::log_prime(2).numeric_string(30);
    CHECK(s30.substr(0, 12) == "0.6931471805");
}
