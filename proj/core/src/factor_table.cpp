#include "e2sieve/factor_table.hpp"

#include <algorithm>
#include <numeric>

#include "e2sieve/parallel.hpp"
#include "e2sieve/primes.hpp"
#include "e2sieve/rational.hpp"

namespace e2sieve {

namespace {

constexpr std::uint64_t kSegment = std::uint64_t(1) << 20;
constexpr std::uint64_t kBatch = std::uint64_t(1) << 24;
constexpr std::uint64_t kStreamLimit = 2000000000ULL;  // streaming guards

using u128 = unsigned __int128;

// Runs fn over batched factor tables covering [lo, hi) in ascending order.
template <class Fn>
void for_each_batch(std::uint64_t lo, std::uint64_t hi, Fn&& fn) {
    for (std::uint64_t blo = lo; blo < hi; blo += kBatch) {
        const std::uint64_t bhi = std::min(hi, blo + kBatch);
        fn(build_factor_table(blo, bhi));
    }
}

}  // namespace

FactorTable build_factor_table(std::uint64_t lo, std::uint64_t hi,
                               std::uint64_t max_span) {
    if (lo < 1 || hi < lo)
        throw PreconditionError("factor-table range must satisfy 1 <= lo <= hi");
    if (hi - lo > max_span)
        throw ResourceError("factor-table span exceeds the memory guard");
    if (hi > (std::uint64_t(1) << 62))
        throw ResourceError("factor-table end exceeds the supported range");

    FactorTable t;
    t.lo = lo;
    t.hi = hi;
    const std::uint64_t n = hi - lo;
    t.omega.assign(n, 0);
    t.big_omega.assign(n, 0);
    t.least_factor.assign(n, 0);
    if (n == 0) return t;

    const std::uint64_t root = isqrt_u64(hi - 1);
    const auto primes = primes_up_to(static_cast<std::uint32_t>(root));

    const std::size_t nseg = static_cast<std::size_t>((n + kSegment - 1) / kSegment);
    parallel_map(nseg, [&](std::size_t si) {
        const std::uint64_t slo = lo + std::uint64_t(si) * kSegment;
        const std::uint64_t shi = std::min(hi, slo + kSegment);
        std::vector<std::uint64_t> rem(shi - slo);
        std::iota(rem.begin(), rem.end(), slo);
        for (std::uint32_t p : primes) {
            const std::uint64_t start = ((slo + p - 1) / p) * std::uint64_t(p);
            for (std::uint64_t m = start; m < shi; m += p) {
                std::uint64_t& r = rem[m - slo];
                std::uint8_t e = 0;
                while (r % p == 0) {
                    r /= p;
                    ++e;
                }
                const std::uint64_t i = m - lo;
                t.omega[i] += 1;
                t.big_omega[i] += e;
                if (t.least_factor[i] == 0) t.least_factor[i] = p;
            }
        }
        // Whatever survives the primes up to sqrt(hi) is a single prime.
        for (std::uint64_t m = slo; m < shi; ++m) {
            const std::uint64_t r = rem[m - slo];
            if (r <= 1) continue;
            const std::uint64_t i = m - lo;
            t.omega[i] += 1;
            t.big_omega[i] += 1;
            if (t.least_factor[i] == 0 && r <= 0xFFFFFFFFULL)
                t.least_factor[i] = static_cast<std::uint32_t>(r);
        }
        return 0;
    });
    return t;
}

bool e2_classify(const FactorTable& t, const E2Options& o, std::uint64_t n,
                 std::uint64_t* p1, std::uint64_t* p2) {
    if (t.big_omega_at(n) != 2) return false;
    if (!o.allow_square && t.omega_at(n) != 2) return false;
    // With exactly two prime factors the smaller one is at most sqrt(n),
    // so the 32-bit least-factor entry is always populated.
    const std::uint64_t a = t.least_factor_at(n);
    const std::uint64_t b = n / a;
    if (a <= o.min_factor) return false;  // b >= a, one check suffices
    if (o.mod4 && (a % 4 != 1 || b % 4 != 1)) return false;
    *p1 = a;
    *p2 = b;
    return true;
}

GapStats e2_gaps(std::uint64_t limit, const E2Options& o,
                 std::uint64_t instance_gap, std::size_t max_instances) {
    if (limit > kStreamLimit)
        throw ResourceError("e2 gap scan capped at limit = 2*10^9");
    GapStats g;
    if (limit <= 2) return g;
    std::uint64_t prev = 0;
    for_each_batch(2, limit, [&](const FactorTable& t) {
        for_each_e2(t, o, [&](std::uint64_t n, std::uint64_t, std::uint64_t) {
            ++g.count;
            if (g.first == 0) g.first = n;
            if (prev != 0) {
                const std::uint64_t gap = n - prev;
                ++g.histogram[gap];
                if (gap == instance_gap && g.instances.size() < max_instances)
                    g.instances.emplace_back(prev, n);
            }
            prev = n;
            g.last = n;
        });
    });
    return g;
}

std::uint64_t nu_block_count(std::uint64_t limit, const E2Options& o,
                             unsigned nu, std::uint64_t window) {
    if (limit > kStreamLimit)
        throw ResourceError("e2 block scan capped at limit = 2*10^9");
    if (nu == 0) throw PreconditionError("nu must be positive");
    std::vector<std::uint64_t> ring(nu + 1, 0);
    std::uint64_t seen = 0, blocks = 0;
    if (limit <= 2) return 0;
    for_each_batch(2, limit, [&](const FactorTable& t) {
        for_each_e2(t, o, [&](std::uint64_t n, std::uint64_t, std::uint64_t) {
            ring[seen % (nu + 1)] = n;
            ++seen;
            if (seen > nu) {
                const std::uint64_t oldest = ring[seen % (nu + 1)];
                if (n - oldest <= window) ++blocks;
            }
        });
    });
    return blocks;
}

std::vector<std::uint64_t> find_e2_patterns(std::uint64_t limit,
                                            const E2Options& o,
                                            std::vector<std::uint64_t> offsets,
                                            std::size_t max_hits) {
    if (limit > kStreamLimit)
        throw ResourceError("e2 pattern scan capped at limit = 2*10^9");
    if (offsets.empty())
        throw PreconditionError("at least one offset is required");
    std::sort(offsets.begin(), offsets.end());
    offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
    const std::uint64_t span = offsets.back();

    std::vector<std::uint64_t> hits;
    for (std::uint64_t blo = 2; blo < limit && hits.size() < max_hits;
         blo += kBatch) {
        const std::uint64_t bhi = std::min(limit, blo + kBatch);
        // Extend the table so n + span is always covered.
        const FactorTable t = build_factor_table(blo, bhi + span);
        for (std::uint64_t n = blo; n < bhi && hits.size() < max_hits; ++n) {
            bool all = true;
            for (std::uint64_t off : offsets) {
                std::uint64_t p1 = 0, p2 = 0;
                if (!e2_classify(t, o, n + off, &p1, &p2)) {
                    all = false;
                    break;
                }
            }
            if (all) hits.push_back(n);
        }
    }
    return hits;
}

bool beta_value(const FactorTable& t, const BetaConfig& c, std::uint64_t n) {
    if (t.big_omega_at(n) != 2 || t.omega_at(n) != 2) return false;
    const std::uint64_t p1 = t.least_factor_at(n);
    const std::uint64_t p2 = n / p1;
    if (p1 <= c.y_floor) return false;
    if (u128(p1) * p1 > c.big_n) return false;   // p1 <= sqrt(N)
    if (u128(p2) * p2 <= c.big_n) return false;  // p2 > sqrt(N)
    if (c.mod4 && (p1 % 4 != 1 || p2 % 4 != 1)) return false;
    return true;
}

namespace {

// Shared dyadic-window counter over (x, 2x].
template <class Pred>
std::uint64_t count_window(std::uint64_t x, Pred&& pred) {
    if (x == 0) throw PreconditionError("x must be positive");
    if (x > kStreamLimit / 2)
        throw ResourceError("dyadic window scan capped at x = 10^9");
    std::uint64_t total = 0;
    for_each_batch(x + 1, 2 * x + 1, [&](const FactorTable& t) {
        for (std::uint64_t n = t.lo; n < t.hi; ++n)
            if (pred(t, n)) ++total;
    });
    return total;
}

}  // namespace

std::uint64_t pi_beta(std::uint64_t x, std::uint64_t q, std::uint64_t a,
                      const BetaConfig& c) {
    if (q == 0) throw PreconditionError("modulus q must be positive");
    return count_window(x, [&](const FactorTable& t, std::uint64_t n) {
        return n % q == a % q && beta_value(t, c, n);
    });
}

std::uint64_t pi_beta_coprime(std::uint64_t x, std::uint64_t u,
                              const BetaConfig& c) {
    if (u == 0) throw PreconditionError("u must be positive");
    return count_window(x, [&](const FactorTable& t, std::uint64_t n) {
        return std::gcd(n, u) == 1 && beta_value(t, c, n);
    });
}

std::uint64_t pi_flat(std::uint64_t x, std::uint64_t q, std::uint64_t a) {
    if (q == 0) throw PreconditionError("modulus q must be positive");
    return count_window(x, [&](const FactorTable& t, std::uint64_t n) {
        return n % q == a % q && t.is_prime(n);
    });
}

}  // namespace e2sieve
