#include "e2sieve/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "e2sieve/errors.hpp"
#include "e2sieve/parallel.hpp"
#include "e2sieve/primes.hpp"

namespace e2sieve {
namespace {

using u64 = std::uint64_t;
using u32 = std::uint32_t;

constexpr u64 kMaxX = 100'000'000;      // window machinery ceiling
constexpr u64 kExactX = 10'000;         // full change-point sweep below this
constexpr double kMaxQ = 100'000.0;     // modulus-sum ceiling
constexpr std::size_t kGridBudget = 64; // sampled window positions per q

void check_x(u64 x) {
    if (x < 1) throw PreconditionError("x must be at least 1");
    if (x > kMaxX)
        throw ResourceError("x exceeds the counting-table guard of 10^8");
}

u64 euler_phi(u64 q) {
    u64 phi = q;
    for (auto [p, e] : factorize_u64(q)) phi -= phi / p;
    return phi;
}

bool squarefree(u64 q) {
    for (auto [p, e] : factorize_u64(q))
        if (e > 1) return false;
    return true;
}

std::vector<u64> beta_values(u64 x, const BetaConfig& cfg) {
    if (cfg.big_n < 1 || cfg.y_floor < 1)
        throw PreconditionError("beta parameters must be at least 1");
    const u64 top = 2 * x;
    // p1 <= sqrt(big_n) and p1 < p2 force p1 < sqrt(top).
    u64 small_cap = static_cast<u64>(std::sqrt((double)top)) + 2;
    std::vector<u64> out;
    auto small_primes = primes_up_to(static_cast<u32>(small_cap));
    // Largest second factor needed: top / (first admissible p1) <= top / 2.
    auto big_primes = primes_up_to(static_cast<u32>(std::min<u64>(
        top, static_cast<u64>(std::numeric_limits<u32>::max()))));
    for (u32 p1 : small_primes) {
        if (p1 <= cfg.y_floor) continue;
        if ((unsigned __int128)p1 * p1 > cfg.big_n) break;
        if (cfg.mod4 && p1 % 4 != 1) continue;
        u64 hi = top / p1;
        // p2 strictly above sqrt(big_n): p2^2 > big_n.
        auto it = std::upper_bound(big_primes.begin(), big_primes.end(), p1);
        for (; it != big_primes.end() && *it <= hi; ++it) {
            u64 p2 = *it;
            if ((unsigned __int128)p2 * p2 <= cfg.big_n) continue;
            if (cfg.mod4 && p2 % 4 != 1) continue;
            out.push_back((u64)p1 * p2);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// One window position: counts of marked values in (y, 2y] per residue
// class, the full total, and the coprime-to-q total.
struct WindowScan {
    std::vector<u64>::const_iterator lo, hi;
};

WindowScan window_range(const std::vector<u64>& vals, u64 y) {
    return {std::upper_bound(vals.begin(), vals.end(), y),
            std::upper_bound(vals.begin(), vals.end(), 2 * y)};
}

// max over reduced residues a of |c[a] - T/phi(q)| where T is the
// normalizing total (all marked values for primes, coprime ones for beta).
double window_deviation(const std::vector<u64>& count, u64 q, u64 phi,
                        double total) {
    double best = 0.0;
    double expect = total / (double)phi;
    for (u64 a = 0; a < q; ++a) {
        if (std::gcd(a, q) != 1) continue;
        double dev = std::fabs((double)count[a] - expect);
        if (dev > best) best = dev;
    }
    return best;
}

// Exact sweep: |Delta| is piecewise constant in real y with breakpoints at
// y = v/2 (v enters the window) and y = v (v leaves).  In the doubled
// coordinate t = 2y the window (y, 2y] holds the integers [floor(t/2)+1, t],
// so v is inside exactly for t in [v, 2v-1]; evaluating at every t in
// {v, 2v} covers every constancy piece.
DeltaStarReport delta_star_exact(const std::vector<u64>& vals, u64 x, u64 q,
                                 MarkKind kind) {
    const u64 tmax = 2 * x;
    std::vector<u64> crit;
    crit.reserve(2 * vals.size());
    for (u64 v : vals) {
        if (v <= tmax) crit.push_back(v);
        if (2 * v <= tmax) crit.push_back(2 * v);
    }
    std::sort(crit.begin(), crit.end());
    crit.erase(std::unique(crit.begin(), crit.end()), crit.end());

    const u64 phi = euler_phi(q);
    std::vector<u64> count(q, 0);
    u64 total_all = 0, total_coprime = 0;
    std::size_t lo = 0, hi = 0;  // window = vals[lo, hi)
    double best = 0.0;
    for (u64 t : crit) {
        while (hi < vals.size() && vals[hi] <= t) {
            u64 r = vals[hi] % q;
            ++count[r];
            ++total_all;
            if (std::gcd(r, q) == 1) ++total_coprime;
            ++hi;
        }
        u64 floor_half = t / 2;
        while (lo < hi && vals[lo] <= floor_half) {
            u64 r = vals[lo] % q;
            --count[r];
            --total_all;
            if (std::gcd(r, q) == 1) --total_coprime;
            ++lo;
        }
        double total = kind == MarkKind::primes ? (double)total_all
                                                : (double)total_coprime;
        double dev = window_deviation(count, q, phi, total);
        if (dev > best) best = dev;
    }
    return {best, true, crit.size()};
}

// Sampled sweep: dyadic window positions plus an even spread of the count
// change-points inside the widest segment (x/2, x].  A lower bound on the
// true maximum.
DeltaStarReport delta_star_grid(const std::vector<u64>& vals, u64 x, u64 q,
                                MarkKind kind) {
    std::vector<u64> ys;
    for (u64 y = x; y >= 1; y /= 2) {
        ys.push_back(y);
        if (y == 1) break;
    }
    std::size_t dyadic = ys.size();
    if (dyadic < kGridBudget) {
        std::vector<u64> cps;
        u64 half = x / 2;
        // v leaving the window: positions v-1 (last y holding v) and v.
        auto lo = std::upper_bound(vals.begin(), vals.end(), half);
        auto hi = std::upper_bound(vals.begin(), vals.end(), x);
        for (auto it = lo; it != hi; ++it) {
            if (*it - 1 > half) cps.push_back(*it - 1);
            cps.push_back(*it);
        }
        // v entering at y = ceil(v/2) for v in (x, 2x].
        auto top = std::upper_bound(vals.begin(), vals.end(), 2 * x);
        for (auto it = hi; it != top; ++it) {
            u64 y = (*it + 1) / 2;
            if (y > half && y <= x) cps.push_back(y);
        }
        std::sort(cps.begin(), cps.end());
        cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
        std::size_t budget = kGridBudget - dyadic;
        if (cps.size() <= budget) {
            ys.insert(ys.end(), cps.begin(), cps.end());
        } else if (budget > 0) {
            for (std::size_t i = 0; i < budget; ++i)
                ys.push_back(cps[i * cps.size() / budget]);
        }
    }
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

    const u64 phi = euler_phi(q);
    std::vector<u64> count(q, 0);
    double best = 0.0;
    for (u64 y : ys) {
        std::fill(count.begin(), count.end(), 0);
        auto [lo, hi] = window_range(vals, y);
        u64 total_all = 0, total_coprime = 0;
        for (auto it = lo; it != hi; ++it) {
            u64 r = *it % q;
            ++count[r];
            ++total_all;
            if (std::gcd(r, q) == 1) ++total_coprime;
        }
        double total = kind == MarkKind::primes ? (double)total_all
                                                : (double)total_coprime;
        double dev = window_deviation(count, q, phi, total);
        if (dev > best) best = dev;
    }
    return {best, false, ys.size()};
}

DeltaStarReport delta_star_impl(const std::vector<u64>& vals, u64 x, u64 q,
                                MarkKind kind) {
    if (q < 1) throw PreconditionError("modulus q must be at least 1");
    if (q == 1) {
        // Delta(y; 1, a) = T - T/phi(1) = 0 identically.
        return {0.0, x <= kExactX, 0};
    }
    if (x <= kExactX) return delta_star_exact(vals, x, q, kind);
    return delta_star_grid(vals, x, q, kind);
}

}  // namespace

std::vector<u64> marked_values(u64 x, MarkKind kind, const BetaConfig* cfg) {
    check_x(x);
    if (kind == MarkKind::primes) {
        auto ps = primes_up_to(static_cast<u32>(2 * x));
        return std::vector<u64>(ps.begin(), ps.end());
    }
    if (cfg == nullptr)
        throw PreconditionError("beta statistics need a BetaConfig");
    return beta_values(x, *cfg);
}

DeltaStarReport delta_star(u64 x, u64 q) {
    check_x(x);
    auto vals = marked_values(x, MarkKind::primes);
    return delta_star_impl(vals, x, q, MarkKind::primes);
}

DeltaStarReport delta_beta_star(u64 x, u64 q, const BetaConfig& cfg) {
    check_x(x);
    auto vals = marked_values(x, MarkKind::beta, &cfg);
    return delta_star_impl(vals, x, q, MarkKind::beta);
}

BVReport bv_sum(u64 x, double big_q, double h, MarkKind kind,
                const BetaConfig* cfg, bool keep_terms) {
    check_x(x);
    if (h < 0) throw PreconditionError("h must be nonnegative");
    if (big_q < 0 || big_q > (double)x)
        throw PreconditionError("Q must lie in [0, x]");
    if (big_q > kMaxQ)
        throw ResourceError("Q exceeds the modulus-sum guard of 10^5");
    if (kind == MarkKind::beta && cfg == nullptr)
        throw PreconditionError("beta statistics need a BetaConfig");

    BVReport rep;
    rep.x = x;
    rep.big_q = big_q;
    rep.h = h;

    u64 qmax = big_q < 1.0 ? 0 : static_cast<u64>(big_q);
    if (qmax == 0) return rep;

    auto vals = marked_values(x, kind, cfg);
    auto rows = parallel_map(qmax, [&](std::size_t i) -> BVTerm {
        u64 q = static_cast<u64>(i) + 1;
        if (!squarefree(q)) return {q, 0.0, 0.0};
        unsigned omega = static_cast<unsigned>(factorize_u64(q).size());
        double weight = omega == 0 ? 1.0 : std::pow(h, (double)omega);
        if (weight == 0.0) return {q, 0.0, 0.0};
        double dstar = delta_star_impl(vals, x, q, kind).value;
        return {q, weight, dstar};
    });
    KahanSum acc;
    for (const auto& t : rows) acc.add(t.weight * t.dstar);
    rep.sum = acc.value();
    rep.normalized = rep.sum / (double)x;
    if (keep_terms) rep.terms = std::move(rows);
    return rep;
}

}  // namespace e2sieve
