// Factor tables, the two-prime-factor stream, gap statistics, and the beta
// counting weight.  Oracle throughout: trial division / explicit enumeration.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "e2sieve/errors.hpp"
#include "e2sieve/factor_table.hpp"
#include "e2sieve/primes.hpp"

using namespace e2sieve;

namespace {

struct Factored {
    std::uint8_t omega = 0, big_omega = 0;
    std::uint64_t least = 0;
};

Factored slow_factor(std::uint64_t n) {
    Factored r;
    std::uint64_t m = n;
    for (std::uint64_t p = 2; p * p <= m; ++p) {
        if (m % p) continue;
        if (r.least == 0) r.least = p;
        ++r.omega;
        while (m % p == 0) {
            ++r.big_omega;
            m /= p;
        }
    }
    if (m > 1) {
        if (r.least == 0) r.least = m;
        ++r.omega;
        ++r.big_omega;
    }
    if (n == 1) r.least = 1;
    return r;
}

bool e2_brute(std::uint64_t n, const E2Options& o, std::uint64_t* p1, std::uint64_t* p2) {
    auto f = factorize_u64(n);
    if (f.size() == 2 && f[0].second == 1 && f[1].second == 1) {
        *p1 = f[0].first;
        *p2 = f[1].first;
    } else if (f.size() == 1 && f[0].second == 2 && o.allow_square) {
        *p1 = *p2 = f[0].first;
    } else {
        return false;
    }
    if (*p1 <= o.min_factor) return false;
    if (o.mod4 && (*p1 % 4 != 1 || *p2 % 4 != 1)) return false;
    return true;
}

}  // namespace

TEST_CASE("factor table vs trial division") {
    FactorTable t = build_factor_table(2, 5000);
    for (std::uint64_t n = 2; n < 5000; ++n) {
        Factored f = slow_factor(n);
        CHECK(t.omega_at(n) == f.omega);
        CHECK(t.big_omega_at(n) == f.big_omega);
        CHECK(t.least_factor_at(n) == f.least);
        CHECK(t.is_prime(n) == is_prime_u64(n));
    }
    CHECK_THROWS_AS(t.omega_at(1), PreconditionError);
    CHECK_THROWS_AS(t.omega_at(5000), PreconditionError);
}

TEST_CASE("segmented window vs trial division") {
    std::uint64_t lo = 1000000, hi = 1002000;
    FactorTable t = build_factor_table(lo, hi);
    CHECK(t.size() == hi - lo);
    for (std::uint64_t n = lo; n < hi; ++n) {
        Factored f = slow_factor(n);
        CHECK(t.omega_at(n) == f.omega);
        CHECK(t.big_omega_at(n) == f.big_omega);
        CHECK(t.least_factor_at(n) == f.least);
    }
}

TEST_CASE("span guard") {
    CHECK_THROWS_AS(build_factor_table(2, 200000000), ResourceError);
    CHECK_NOTHROW(build_factor_table(2, 1000, 2000));
}

TEST_CASE("e2 classification vs brute force across option combinations") {
    FactorTable t = build_factor_table(2, 4000);
    std::vector<E2Options> opts;
    for (std::uint64_t mf : {0ull, 2ull, 10ull})
        for (bool m4 : {false, true})
            for (bool sq : {false, true}) opts.push_back(E2Options{mf, m4, sq});
    for (const auto& o : opts) {
        for (std::uint64_t n = 2; n < 4000; ++n) {
            std::uint64_t a = 0, b = 0, c = 0, d = 0;
            bool lib = e2_classify(t, o, n, &a, &b);
            bool brute = e2_brute(n, o, &c, &d);
            CHECK(lib == brute);
            if (lib) {
                CHECK(a == c);
                CHECK(b == d);
                CHECK(a * b == n);
                CHECK(a <= b);
            }
        }
    }
}

TEST_CASE("first members of the stream") {
    FactorTable t = build_factor_table(2, 60);
    std::vector<std::uint64_t> seq;
    for_each_e2(t, E2Options{}, [&](std::uint64_t n, std::uint64_t, std::uint64_t) {
        seq.push_back(n);
    });
    CHECK(seq == std::vector<std::uint64_t>{6, 10, 14, 15, 21, 22, 26, 33, 34, 35, 38, 39,
                                            46, 51, 55, 57, 58});
}

TEST_CASE("gap statistics oracle") {
    std::uint64_t limit = 20000;
    E2Options o;
    GapStats gs = e2_gaps(limit, o, 1, 10);

    FactorTable t = build_factor_table(2, limit);
    std::vector<std::uint64_t> seq;
    for_each_e2(t, o, [&](std::uint64_t n, std::uint64_t, std::uint64_t) {
        if (n < limit) seq.push_back(n);
    });
    CHECK(gs.count == seq.size());
    CHECK(gs.first == seq.front());
    CHECK(gs.last == seq.back());

    std::map<std::uint64_t, std::uint64_t> hist;
    for (std::size_t i = 1; i < seq.size(); ++i) ++hist[seq[i] - seq[i - 1]];
    CHECK(gs.histogram == hist);

    CHECK(gs.instances.size() == 10);  // gap-1 pairs are plentiful
    for (auto [a, b] : gs.instances) {
        CHECK(b - a == 1);
        std::uint64_t x = 0, y = 0;
        CHECK(e2_classify(t, o, a, &x, &y));
        CHECK(e2_classify(t, o, b, &x, &y));
    }
}

TEST_CASE("nu-block counts") {
    std::uint64_t limit = 5000;
    E2Options o;
    FactorTable t = build_factor_table(2, limit);
    std::vector<std::uint64_t> seq;
    for_each_e2(t, o, [&](std::uint64_t n, std::uint64_t, std::uint64_t) {
        if (n < limit) seq.push_back(n);
    });
    for (unsigned nu : {1u, 2u, 3u}) {
        for (std::uint64_t window : {2ull, 6ull, 12ull}) {
            std::uint64_t brute = 0;
            for (std::size_t i = 0; i + nu < seq.size(); ++i)
                if (seq[i + nu] - seq[i] <= window) ++brute;
            CHECK(nu_block_count(limit, o, nu, window) == brute);
        }
    }
}

TEST_CASE("pattern search") {
    E2Options o;
    auto hits = find_e2_patterns(2000, o, {0, 2, 6}, 100);
    REQUIRE_FALSE(hits.empty());
    CHECK(hits[0] == 33);  // 33 = 3*11, 35 = 5*7, 39 = 3*13
    FactorTable t = build_factor_table(2, 2100);
    std::vector<std::uint64_t> brute;
    for (std::uint64_t n = 2; n < 2000; ++n) {
        bool all = true;
        for (std::uint64_t off : {0ull, 2ull, 6ull}) {
            std::uint64_t a = 0, b = 0;
            all = all && e2_classify(t, o, n + off, &a, &b);
        }
        if (all) brute.push_back(n);
    }
    CHECK(hits == brute);
    // max_hits cap respected
    auto capped = find_e2_patterns(2000, o, {0, 2, 6}, 2);
    CHECK(capped.size() == 2);
    CHECK(capped[0] == brute[0]);
    CHECK(capped[1] == brute[1]);
}

TEST_CASE("beta weight oracle") {
    std::uint64_t big_n = 10000;
    FactorTable t = build_factor_table(2, 2 * big_n + 1);
    for (std::uint64_t y_floor : {1ull, 7ull}) {
        for (bool m4 : {false, true}) {
            BetaConfig c{big_n, y_floor, m4};
            for (std::uint64_t n = 2; n <= 2 * big_n; ++n) {
                auto f = factorize_u64(n);
                bool expect = f.size() == 2 && f[0].second == 1 && f[1].second == 1;
                if (expect) {
                    std::uint64_t p1 = f[0].first, p2 = f[1].first;
                    expect = p1 > y_floor && p1 * p1 <= big_n && p2 * p2 > big_n;
                    if (m4) expect = expect && p1 % 4 == 1 && p2 % 4 == 1;
                }
                CHECK(beta_value(t, c, n) == expect);
            }
        }
    }
}

TEST_CASE("progression counts over the dyadic window") {
    std::uint64_t x = 3000;
    BetaConfig c{4000, 1, false};
    FactorTable t = build_factor_table(2, 2 * x + 1);
    for (std::uint64_t q : {1ull, 3ull, 4ull, 7ull}) {
        for (std::uint64_t a = 0; a < q; ++a) {
            std::uint64_t brute_beta = 0, brute_pi = 0;
            for (std::uint64_t n = x + 1; n <= 2 * x; ++n) {
                if (n % q != a) continue;
                if (beta_value(t, c, n)) ++brute_beta;
                if (is_prime_u64(n)) ++brute_pi;
            }
            CHECK(pi_beta(x, q, a, c) == brute_beta);
            CHECK(pi_flat(x, q, a) == brute_pi);
        }
        std::uint64_t brute_cop = 0;
        for (std::uint64_t n = x + 1; n <= 2 * x; ++n) {
            std::uint64_t g = std::gcd(n, q);
            if (g == 1 && beta_value(t, c, n)) ++brute_cop;
        }
        CHECK(pi_beta_coprime(x, q, c) == brute_cop);
    }
}
