// Distribution-in-progressions diagnostics.  Oracle: recompute the window
// statistic from the marked-value list by visiting every change point, which
// is exactly what the sup over real window positions reduces to.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "e2sieve/distribution.hpp"
#include "e2sieve/errors.hpp"
#include "e2sieve/factor_table.hpp"
#include "e2sieve/primes.hpp"

using namespace e2sieve;

namespace {

std::uint64_t phi_u64(std::uint64_t q) {
    std::uint64_t r = q;
    for (auto p : distinct_prime_factors(q)) r -= r / p;
    return q == 1 ? 1 : r;
}

// |Delta(y; q, a)| maximized over all y <= x and residues (a, q) = 1, by
// scanning every change point v/2 and v of the piecewise-constant counts.
double delta_star_brute(std::uint64_t x, std::uint64_t q,
                        const std::vector<std::uint64_t>& marked, bool coprime_total) {
    std::vector<double> ys;
    for (auto v : marked) {
        ys.push_back(static_cast<double>(v) / 2.0);
        ys.push_back(static_cast<double>(v));
    }
    ys.push_back(static_cast<double>(x));
    double best = 0.0;
    for (double y : ys) {
        if (y > static_cast<double>(x) || y < 1.0) continue;
        // counts in (y, 2y]
        std::uint64_t total = 0;
        std::vector<std::uint64_t> per(q, 0);
        for (auto v : marked) {
            double vd = static_cast<double>(v);
            if (vd > y && vd <= 2.0 * y) {
                if (!coprime_total || std::gcd(v, q) == 1) ++total;
                ++per[v % q];
            }
        }
        for (std::uint64_t a = 0; a < q; ++a) {
            if (std::gcd(a, q) != 1) continue;
            double delta = static_cast<double>(per[a]) -
                           static_cast<double>(total) / static_cast<double>(phi_u64(q));
            best = std::max(best, std::abs(delta));
        }
    }
    return best;
}

}  // namespace

TEST_CASE("marked value lists") {
    std::uint64_t x = 2000;
    auto pr = marked_values(x, MarkKind::primes);
    auto ps = primes_up_to(static_cast<std::uint32_t>(2 * x));
    REQUIRE(pr.size() == ps.size());
    for (std::size_t i = 0; i < pr.size(); ++i) CHECK(pr[i] == ps[i]);

    BetaConfig cfg{3000, 1, false};
    auto bs = marked_values(x, MarkKind::beta, &cfg);
    FactorTable t = build_factor_table(2, 2 * x + 1);
    std::vector<std::uint64_t> brute;
    for (std::uint64_t n = 2; n <= 2 * x; ++n)
        if (beta_value(t, cfg, n)) brute.push_back(n);
    CHECK(bs == brute);
}

TEST_CASE("delta_star exact mode vs change-point scan") {
    for (std::uint64_t x : {50ull, 500ull, 3000ull}) {
        auto marked = marked_values(x, MarkKind::primes);
        for (std::uint64_t q : {3ull, 4ull, 5ull, 7ull, 12ull}) {
            DeltaStarReport r = delta_star(x, q);
            CHECK(r.exact);
            CHECK(r.value == doctest::Approx(delta_star_brute(x, q, marked, false)).epsilon(1e-12));
        }
    }
}

TEST_CASE("delta_beta_star exact mode vs change-point scan") {
    std::uint64_t x = 800;
    BetaConfig cfg{1600, 1, false};
    auto marked = marked_values(x, MarkKind::beta, &cfg);
    REQUIRE_FALSE(marked.empty());
    for (std::uint64_t q : {3ull, 5ull, 8ull}) {
        DeltaStarReport r = delta_beta_star(x, q, cfg);
        CHECK(r.exact);
        CHECK(r.value == doctest::Approx(delta_star_brute(x, q, marked, true)).epsilon(1e-12));
    }
}

TEST_CASE("sampled mode is a certified lower bound") {
    std::uint64_t x = 20000;  // above the exact-mode threshold
    for (std::uint64_t q : {3ull, 7ull}) {
        DeltaStarReport r = delta_star(x, q);
        CHECK_FALSE(r.exact);
        CHECK(r.samples > 0);
        auto marked = marked_values(x, MarkKind::primes);
        double truth = delta_star_brute(x, q, marked, false);
        CHECK(r.value <= truth + 1e-9);
        CHECK(r.value > 0.0);
    }
}

TEST_CASE("trivial moduli") {
    DeltaStarReport r = delta_star(300, 1);
    CHECK(r.value == 0.0);  // the only residue class is the total itself
    CHECK(delta_star(1, 3).value <= 1.0);
}

TEST_CASE("bv_sum assembles its terms") {
    std::uint64_t x = 400;
    double h = 2.0;
    BVReport rep = bv_sum(x, 12.0, h, MarkKind::primes, nullptr, true);
    double manual = 0.0;
    for (std::uint64_t q = 1; q <= 12; ++q) {
        bool sf = true;
        for (std::uint64_t p = 2; p * p <= q; ++p)
            if (q % (p * p) == 0) sf = false;
        if (!sf) continue;
        double w = std::pow(h, static_cast<double>(distinct_prime_factors(q).size()));
        if (q == 1) w = 1.0;
        manual += w * delta_star(x, q).value;
    }
    CHECK(rep.sum == doctest::Approx(manual).epsilon(1e-12));
    CHECK(rep.normalized == doctest::Approx(manual / static_cast<double>(x)).epsilon(1e-12));
    // terms carry exactly the squarefree moduli
    for (const auto& term : rep.terms) {
        CHECK(term.weight > 0.0);
        CHECK(term.dstar == doctest::Approx(delta_star(x, term.q).value));
    }

    // h = 0 keeps only q = 1, whose statistic vanishes identically
    BVReport zero = bv_sum(x, 12.0, 0.0, MarkKind::primes);
    CHECK(zero.sum == 0.0);

    // Q < 1 admits no modulus at all
    BVReport empty = bv_sum(x, 0.5, 1.0, MarkKind::primes);
    CHECK(empty.sum == 0.0);
}

TEST_CASE("bv_sum beta kind needs a config") {
    CHECK_THROWS_AS(bv_sum(100, 5.0, 1.0, MarkKind::beta, nullptr), PreconditionError);
    BetaConfig cfg{200, 1, false};
    CHECK_NOTHROW(bv_sum(100, 5.0, 1.0, MarkKind::beta, &cfg));
}

TEST_CASE("resource guards") {
    CHECK_THROWS_AS(delta_star(200000000, 3), ResourceError);
    CHECK_THROWS_AS(bv_sum(1000000, 200000.0, 1.0, MarkKind::primes), ResourceError);
    CHECK_THROWS_AS(bv_sum(1000, 200000.0, 1.0, MarkKind::primes), PreconditionError);
}
