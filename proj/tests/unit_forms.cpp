// Linear-form tuples: parsing grammar, admissibility, normalization into the
// equal-slope shape, the Euler-product constant, and root enumeration.
// Oracles: direct residue enumeration mod p, brute-force divisibility, and
// cross-relations between the raw and normalized Euler products.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <numeric>
#include <vector>

#include "e2sieve/errors.hpp"
#include "e2sieve/linear_forms.hpp"
#include "e2sieve/primes.hpp"
#include "e2sieve/tuple_parse.hpp"

using namespace e2sieve;

namespace {

LinearTuple twin() { return parse_tuple("n,n+2"); }
LinearTuple triple() { return parse_tuple("n,n+2,n+6"); }

// Residues n in [0, p) with p | prod(a_i n + b_i), by enumeration.
std::uint64_t nu_p_brute(const LinearTuple& t, std::uint64_t p) {
    std::uint64_t count = 0;
    for (std::uint64_t n = 0; n < p; ++n) {
        Int prod = t.product_at(Int(static_cast<unsigned long>(n)));
        if (mpz_divisible_ui_p(prod.get_mpz_t(), static_cast<unsigned long>(p))) ++count;
    }
    return count;
}

}  // namespace

TEST_CASE("form parsing grammar") {
    CHECK(parse_form("n") == LinearForm{1, 0});
    CHECK(parse_form("n+2") == LinearForm{1, 2});
    CHECK(parse_form("n-4") == LinearForm{1, -4});
    CHECK(parse_form("2n+1") == LinearForm{2, 1});
    CHECK(parse_form("48*n - 7") == LinearForm{48, -7});
    CHECK(parse_form("  3 * n + 11 ") == LinearForm{3, 11});

    CHECK_THROWS_AS(parse_form(""), PreconditionError);
    CHECK_THROWS_AS(parse_form("n+"), PreconditionError);
    CHECK_THROWS_AS(parse_form("2m+1"), PreconditionError);
    CHECK_THROWS_AS(parse_form("0n+1"), PreconditionError);
    CHECK_THROWS_AS(parse_form("2n+4"), PreconditionError);  // gcd(2,4) > 1
    CHECK_THROWS_AS(parse_form("-n+1"), PreconditionError);
    CHECK_THROWS_AS(parse_form("99999999999999999999n+1"), PreconditionError);
}

TEST_CASE("tuple parsing and rendering") {
    LinearTuple t = parse_tuple(" n , n+2 , n+6 ");
    CHECK(t.k() == 3);
    CHECK(tuple_to_string(t) == "n,n+2,n+6");
    CHECK(form_to_string(LinearForm{2, 3}) == "2n+3");
    CHECK(form_to_string(LinearForm{1, 0}) == "n");
    CHECK(form_to_string(LinearForm{1, -6}) == "n-6");
    for (const char* s : {"n", "n+2", "2n+1", "48n-7", "5n+12"})
        CHECK(form_to_string(parse_form(s)) == s);

    CHECK_THROWS_AS(parse_tuple("n"), PreconditionError);          // k < 2
    CHECK_THROWS_AS(parse_tuple("n,n"), PreconditionError);        // duplicate
    CHECK_THROWS_AS(parse_tuple("n,n+2,"), PreconditionError);     // trailing comma
    CHECK_THROWS_AS(parse_tuple(""), PreconditionError);
}

TEST_CASE("nu_p equals residue enumeration") {
    std::vector<LinearTuple> tuples{twin(), triple(), parse_tuple("n,n+4,n+6"),
                                    parse_tuple("2n+1,2n+3"), parse_tuple("3n+1,4n+3,5n+7")};
    for (const auto& t : tuples)
        for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53})
            CHECK(nu_p(t, p) == nu_p_brute(t, p));
}

TEST_CASE("admissibility knowns") {
    CHECK(is_admissible(twin()));
    CHECK(is_admissible(triple()));
    CHECK(is_admissible(parse_tuple("n,n+4,n+6")));
    CHECK_FALSE(is_admissible(parse_tuple("n,n+1")));      // full system mod 2
    CHECK_FALSE(is_admissible(parse_tuple("n,n+2,n+4")));  // full system mod 3
}

TEST_CASE("tuple constant and its support") {
    CHECK(constant_A(twin()) == 2);
    CHECK(constant_A(triple()) == 48);  // |2| * |6| * |4|
    CHECK(support_of_A(twin()) == std::vector<std::uint64_t>{2});
    CHECK(support_of_A(triple()) == std::vector<std::uint64_t>{2, 3});
    // slopes contribute too: {2n+1, 3n+1} has A = 2*3*|2*1-3*1| = 6
    CHECK(constant_A(parse_tuple("2n+1,3n+1")) == 6);
}

TEST_CASE("normalization: pinned shapes") {
    NormalizedTuple nt2 = normalize(twin());
    CHECK(nt2.A() == 2);
    CHECK(nt2.shift_B() == 1);
    CHECK(tuple_to_string(nt2.tuple()) == "2n+1,2n+3");

    NormalizedTuple nt3 = normalize(triple());
    CHECK(nt3.A() == 48);
    CHECK(nt3.shift_B() == 5);
    CHECK(tuple_to_string(nt3.tuple()) == "48n+5,48n+7,48n+11");
    CHECK(nt3.a_support() == std::vector<std::uint64_t>{2, 3});

    CHECK_THROWS_AS(normalize(parse_tuple("n,n+1")), PreconditionError);
}

TEST_CASE("normalization: equal-slope shape invariants") {
    for (const auto& t : {twin(), triple(), parse_tuple("n,n+4,n+6"),
                          parse_tuple("n,n+6,n+12"), parse_tuple("n,n+2,n+6,n+8")}) {
        NormalizedTuple nt = normalize(t);
        Int A = nt.A();
        for (const auto& f : nt.tuple().forms()) {
            // every slope is A itself and every intercept is coprime to A
            CHECK(Int(static_cast<long>(f.a)) == A);
            Int g;
            Int b_abs = abs(Int(static_cast<long>(f.b)));
            mpz_gcd(g.get_mpz_t(), A.get_mpz_t(), b_abs.get_mpz_t());
            CHECK(g == 1);
        }
        // no prime <= k escapes the support, so sieve support starts above k
        auto ps = primes_up_to(static_cast<std::uint32_t>(nt.k()));
        for (auto p : ps) CHECK(nt.divides_A(p));
        // membership helpers agree with the support list
        for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull}) {
            bool in_support = false;
            for (auto q : nt.a_support()) in_support = in_support || q == p;
            CHECK(nt.divides_A(p) == in_support);
        }
        CHECK(nt.coprime_to_A(1));
        // normalized values sit on the original progression: A n + B hits
        // the original form values
        Int n0(7);
        Int shifted = nt.A() * n0 + nt.shift_B();
        CHECK(nt.tuple().product_at(n0) == t.product_at(shifted));
    }
}

TEST_CASE("roots_mod: counts and membership") {
    NormalizedTuple nt = normalize(triple());
    for (std::uint64_t d : {1ull, 5ull, 7ull, 11ull, 35ull, 77ull, 91ull}) {
        auto roots = roots_mod(nt, d);
        // multiplicative count: prod over p | d of nu_p
        std::uint64_t expect = 1;
        for (auto p : distinct_prime_factors(d)) expect *= nu_p(nt.tuple(), p);
        CHECK(roots.size() == expect);
        // each listed residue really divides, every other residue does not
        std::uint64_t hits = 0;
        for (std::uint64_t r = 0; r < d; ++r) {
            Int prod = nt.tuple().product_at(Int(static_cast<unsigned long>(r)));
            bool divides = mpz_divisible_ui_p(prod.get_mpz_t(), static_cast<unsigned long>(d));
            bool listed = false;
            for (auto x : roots) listed = listed || x == r;
            CHECK(divides == listed);
            hits += divides;
        }
        CHECK(hits == roots.size());
    }
    CHECK(roots_mod(nt, 1) == std::vector<std::uint64_t>{0});
}

TEST_CASE("singular series: frozen values and convergence") {
    NormalizedTuple nt2 = normalize(twin());
    NormalizedTuple nt3 = normalize(triple());

    SingularSeriesValue tw = singular_series(nt2, 1000000);
    // 4 * prod_{p>2} (1 - 1/(p-1)^2) = twin constant in the equal-slope
    // normalization: 2 * 1.32032363169...
    CHECK(tw.value == doctest::Approx(2.64064726338).epsilon(1e-6));
    CHECK(tw.error_bound < 1e-4);

    SingularSeriesValue tr = singular_series(nt3, 1000000);
    CHECK(tr.value == doctest::Approx(17.1494953).epsilon(1e-6));

    // error bound shrinks and successive truncations stay inside it
    SingularSeriesValue lo = singular_series(nt3, 10000);
    SingularSeriesValue hi = singular_series(nt3, 1000000);
    CHECK(hi.error_bound < lo.error_bound);
    CHECK(std::abs(lo.value - hi.value) <= lo.error_bound);
    CHECK(hi.cutoff == 1000000);
    CHECK_THROWS_AS(singular_series(nt3, 2), PreconditionError);
}

TEST_CASE("singular series: raw vs normalized cross-relation") {
    // normalized = raw * prod_{p | A} p / (p - nu_p): the normalized product
    // replaces the finite factors at the support primes by (1-1/p)^{-k}.
    for (const auto& t : {twin(), triple(), parse_tuple("n,n+4,n+6")}) {
        NormalizedTuple nt = normalize(t);
        SingularSeriesValue raw = singular_series_raw(t, 500000);
        SingularSeriesValue norm = singular_series(nt, 500000);
        double factor = 1.0;
        for (auto p : nt.a_support())
            factor *= static_cast<double>(p) / (static_cast<double>(p) - static_cast<double>(nu_p(t, p)));
        CHECK(norm.value == doctest::Approx(raw.value * factor).epsilon(1e-9));
    }
    // raw series of an inadmissible tuple vanishes (a factor is exactly 0)
    SingularSeriesValue dead = singular_series_raw(parse_tuple("n,n+1"), 1000);
    CHECK(dead.value == 0.0);
}

TEST_CASE("product_at") {
    CHECK(triple().product_at(Int(1)) == Int(1 * 3 * 7));
    CHECK(triple().product_at(Int(0)) == Int(0));
    NormalizedTuple nt = normalize(triple());
    CHECK(nt.tuple().product_at(Int(0)) == Int(5 * 7 * 11));
}

TEST_CASE("default cutoff constant") {
    CHECK(kDefaultSeriesCutoff == 1000000);
}
