#include "e2sieve/wirsing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "e2sieve/errors.hpp"
#include "e2sieve/parallel.hpp"
#include "e2sieve/primes.hpp"

namespace e2sieve {
namespace {

using u64 = std::uint64_t;
using u32 = std::uint32_t;

constexpr u64 kMaxZ = 100'000'000;
constexpr u64 kMaxZExact = 100'000;
constexpr u64 kBlock = 1u << 19;
constexpr u32 kEulerCutoff = 1'000'000;

// Sweeps the squarefree d in [lo, hi) and hands (d, g(d)-as-double,
// residual-prime-product structure already folded in) to the sink.  The
// block is factored by one pass over the primes up to sqrt(hi).
template <class Sink>
void scan_block(const GammaSpec& spec, const std::vector<u32>& primes, u64 lo,
                u64 hi, Sink&& sink) {
    const std::size_t n = hi - lo;
    std::vector<double> gval(n, 1.0);
    std::vector<u64> residual(n);
    std::vector<std::uint8_t> dead(n, 0);
    for (std::size_t i = 0; i < n; ++i) residual[i] = lo + i;
    if (lo == 0) dead[0] = 1;  // d = 0 never occurs (lo >= 1 below)
    for (u32 p : primes) {
        double gp = spec.gamma_at(p);
        double factor = gp == 0.0 ? 0.0 : gp / ((double)p - gp);
        u64 start = (lo + p - 1) / p * p;
        for (u64 m = start; m < hi; m += p) {
            std::size_t i = m - lo;
            residual[i] /= p;
            if (residual[i] % p == 0) {
                dead[i] = 1;  // p^2 | d: not squarefree
                while (residual[i] % p == 0) residual[i] /= p;
                continue;
            }
            if (factor == 0.0)
                dead[i] = 1;  // excluded prime: g(d) = 0
            else
                gval[i] *= factor;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (dead[i]) continue;
        if (residual[i] > 1) {
            u64 p = residual[i];
            double gp = spec.gamma_at(p);
            if (gp == 0.0) continue;
            gval[i] *= gp / ((double)p - gp);
        }
        sink(lo + i, gval[i]);
    }
}

double sum_numeric(const GammaSpec& spec, u64 z, const Poly* F) {
    const double logz = std::log((double)z);
    auto primes = primes_up_to(
        static_cast<u32>(std::sqrt((double)(z - 1)) + 2));
    u64 nblocks = (z - 1 + kBlock - 1) / kBlock;
    auto partial = parallel_map(nblocks, [&](std::size_t b) -> double {
        u64 lo = 1 + (u64)b * kBlock;
        u64 hi = std::min<u64>(z, lo + kBlock);
        KahanSum acc;
        scan_block(spec, primes, lo, hi, [&](u64 d, double g) {
            double w = 1.0;
            if (F != nullptr)
                w = F->eval_double(std::log((double)z / (double)d) / logz);
            acc.add(g * w);
        });
        return acc.value();
    });
    KahanSum total;
    for (double p : partial) total.add(p);
    return total.value();
}

void check_z(u64 z) {
    if (z < 2) throw PreconditionError("z must be at least 2");
    if (z > kMaxZ)
        throw ResourceError("z exceeds the summation guard of 10^8");
}

}  // namespace

double GammaSpec::kappa() const {
    switch (kind) {
        case GammaKind::constant_k_off_a:
            return (double)k;
        case GammaKind::totient_like:
            return (double)(k - 1);
        case GammaKind::unit:
            return 1.0;
    }
    return 0.0;
}

double GammaSpec::gamma_at(u64 p) const {
    if (excluded % p == 0) return 0.0;
    switch (kind) {
        case GammaKind::constant_k_off_a:
            return (double)k;
        case GammaKind::totient_like:
            return (double)p * (double)(k - 1) / (double)(p - 1);
        case GammaKind::unit:
            return 1.0;
    }
    return 0.0;
}

Rat GammaSpec::g_at(u64 p) const {
    if (excluded % p == 0) return Rat(0);
    switch (kind) {
        case GammaKind::constant_k_off_a:
            // g(p) = k / (p - k)
            return make_rat(Int(k), Int(p) - k);
        case GammaKind::totient_like:
            // gamma = p(k-1)/(p-1), p - gamma = p(p-k)/(p-1),
            // g(p) = (k-1)/(p-k)
            return make_rat(Int(k - 1), Int(p) - k);
        case GammaKind::unit:
            return make_rat(Int(1), Int(p) - 1);
    }
    return Rat(0);
}

void GammaSpec::validate() const {
    if (kappa() <= 0.0)
        throw PreconditionError("sieve dimension kappa must be positive");
    if (kind != GammaKind::unit && k < 1)
        throw PreconditionError("dimension parameter k must be at least 1");
    // Dimension condition gamma(p) < p on every non-excluded prime; only
    // small primes can violate it for the built-in shapes.
    u64 bound = std::max<u64>(100, (u64)std::max(k, 1) + 2);
    for (u32 p : primes_up_to((u32)bound)) {
        if (excluded % p == 0) continue;
        if (gamma_at(p) >= (double)p)
            throw PreconditionError(
                "gamma(p) >= p at p = " + std::to_string(p) +
                "; the dimension condition fails (exclude that prime)");
    }
}

double c_gamma(const GammaSpec& spec) {
    spec.validate();
    double kap = spec.kappa();
    KahanSum logc;
    for (u32 p : primes_up_to(kEulerCutoff)) {
        double gp = spec.gamma_at(p);
        logc.add(-std::log1p(-gp / (double)p) +
                 kap * std::log1p(-1.0 / (double)p));
    }
    return std::exp(logc.value());
}

WirsingReport wirsing_sum(const GammaSpec& spec, u64 z) {
    spec.validate();
    check_z(z);
    WirsingReport rep;
    rep.z = z;
    rep.kappa = spec.kappa();
    rep.c_gamma = c_gamma(spec);
    rep.lhs = sum_numeric(spec, z, nullptr);
    rep.main = rep.c_gamma * std::pow(std::log((double)z), rep.kappa) /
               std::tgamma(rep.kappa + 1.0);
    rep.rel_err = std::fabs(rep.lhs / rep.main - 1.0);
    return rep;
}

WirsingReport wirsing_weighted(const GammaSpec& spec, u64 z, const Poly& F) {
    spec.validate();
    check_z(z);
    WirsingReport rep;
    rep.z = z;
    rep.kappa = spec.kappa();
    rep.c_gamma = c_gamma(spec);
    rep.lhs = sum_numeric(spec, z, &F);
    double integral = to_double(wirsing_weight_integral(spec, F));
    rep.main = rep.c_gamma * std::pow(std::log((double)z), rep.kappa) /
               std::tgamma(rep.kappa) * integral;
    rep.rel_err = std::fabs(rep.lhs / rep.main - 1.0);
    return rep;
}

Rat wirsing_sum_exact(const GammaSpec& spec, u64 z) {
    spec.validate();
    if (z < 2) throw PreconditionError("z must be at least 2");
    if (z > kMaxZExact)
        throw ResourceError("exact mode is guarded at z <= 10^5");
    // Linear sieve over [1, z) with exact rational g values.
    std::vector<Rat> g(z, Rat(1));
    std::vector<u64> residual(z);
    std::vector<std::uint8_t> dead(z, 0);
    for (u64 d = 0; d < z; ++d) residual[d] = d;
    dead[0] = 1;
    auto primes = primes_up_to(static_cast<u32>(std::sqrt((double)z) + 2));
    for (u32 p : primes) {
        Rat gp = spec.g_at(p);
        for (u64 m = p; m < z; m += p) {
            residual[m] /= p;
            if (residual[m] % p == 0) {
                dead[m] = 1;
                while (residual[m] % p == 0) residual[m] /= p;
                continue;
            }
            if (gp == 0)
                dead[m] = 1;
            else
                g[m] *= gp;
        }
    }
    std::vector<Rat> terms;
    terms.reserve(z / 2);
    for (u64 d = 1; d < z; ++d) {
        if (dead[d]) continue;
        if (residual[d] > 1) {
            Rat gp = spec.g_at(residual[d]);
            if (gp == 0) continue;
            g[d] *= gp;
        }
        terms.push_back(g[d]);
    }
    // Pairwise reduction keeps the common denominators balanced.
    std::size_t n = terms.size();
    while (n > 1) {
        std::size_t half = (n + 1) / 2;
        for (std::size_t i = 0; i + half < n; ++i) terms[i] += terms[i + half];
        n = half;
    }
    return n == 0 ? Rat(0) : terms[0];
}

Rat wirsing_weight_integral(const GammaSpec& spec, const Poly& F) {
    spec.validate();
    double kap = spec.kappa();
    long kappa = (long)kap;
    if ((double)kappa != kap)
        throw PreconditionError(
            "exact weight integral requires integer kappa");
    // int_0^1 F(1-x) x^{kappa-1} dx = sum_j c_j * j! / (kappa...(kappa+j))
    // where F(u) = sum_j c_j u^j; substitute u = 1-x and use the Beta
    // function B(kappa, j+1).
    Rat total(0);
    const auto& coeffs = F.coeffs();
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        if (coeffs[j] == 0) continue;
        Rat beta(1);
        for (long i = 0; i <= (long)j; ++i)
            beta *= make_rat(i == 0 ? Int(1) : Int(i), Int(kappa + i));
        // beta = prod_{i=1..j} i/(kappa+i) * 1/kappa = j!/(kappa...(kappa+j))
        total += coeffs[j] * beta;
    }
    return total;
}

}  // namespace e2sieve
