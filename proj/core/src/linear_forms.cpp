#include "e2sieve/linear_forms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "e2sieve/errors.hpp"
#include "e2sieve/primes.hpp"

namespace e2sieve {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

std::uint64_t mod_u64(std::int64_t v, std::uint64_t m) {
    std::int64_t r = v % static_cast<std::int64_t>(m);
    if (r < 0) r += static_cast<std::int64_t>(m);
    return static_cast<std::uint64_t>(r);
}

// Distinct roots of the form product mod prime p, sorted.
std::vector<std::uint64_t> form_roots_mod_p(const LinearTuple& t, std::uint64_t p) {
    std::set<std::uint64_t> roots;
    for (const LinearForm& f : t.forms()) {
        std::uint64_t a = mod_u64(f.a, p);
        std::uint64_t b = mod_u64(f.b, p);
        if (a == 0) continue;  // gcd(a,b) = 1 forces b != 0 mod p: no roots
        std::uint64_t inv = powmod(a, p - 2, p);
        std::uint64_t neg_b = (b == 0) ? 0 : p - b;
        roots.insert(mulmod(neg_b, inv, p));
    }
    return {roots.begin(), roots.end()};
}

}  // namespace

LinearTuple::LinearTuple(std::vector<LinearForm> forms) : forms_(std::move(forms)) {
    if (forms_.size() < 2) throw PreconditionError("tuple: need at least 2 forms");
    for (const LinearForm& f : forms_) {
        if (f.a < 1) throw PreconditionError("tuple: slope must be positive");
        if (std::gcd(f.a, f.b < 0 ? -f.b : f.b) != 1)
            throw PreconditionError("tuple: gcd(a, b) must be 1");
    }
    for (std::size_t i = 0; i < forms_.size(); ++i)
        for (std::size_t j = i + 1; j < forms_.size(); ++j)
            if (forms_[i] == forms_[j]) throw PreconditionError("tuple: forms must be distinct");
}

Int LinearTuple::product_at(const Int& n) const {
    Int prod = 1;
    for (const LinearForm& f : forms_) prod *= Int(f.a) * n + Int(f.b);
    return prod;
}

std::uint64_t nu_p(const LinearTuple& t, std::uint64_t p) {
    if (p < 2) throw PreconditionError("nu_p: p must be prime");
    for (const LinearForm& f : t.forms())
        if (mod_u64(f.a, p) == 0 && mod_u64(f.b, p) == 0) return p;
    return form_roots_mod_p(t, p).size();
}

Int constant_A(const LinearTuple& t) {
    const auto& fs = t.forms();
    Int acc = 1;
    for (const LinearForm& f : fs) acc *= f.a;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        for (std::size_t j = i + 1; j < fs.size(); ++j) {
            Int res = Int(fs[i].a) * Int(fs[j].b) - Int(fs[j].a) * Int(fs[i].b);
            acc *= abs(res);
        }
    }
    return acc;
}

std::vector<std::uint64_t> support_of_A(const LinearTuple& t) {
    std::set<std::uint64_t> supp;
    auto absorb = [&](std::uint64_t v) {
        for (std::uint64_t p : distinct_prime_factors(v)) supp.insert(p);
    };
    const auto& fs = t.forms();
    for (const LinearForm& f : fs) absorb(static_cast<std::uint64_t>(f.a));
    for (std::size_t i = 0; i < fs.size(); ++i) {
        for (std::size_t j = i + 1; j < fs.size(); ++j) {
            Int res = Int(fs[i].a) * Int(fs[j].b) - Int(fs[j].a) * Int(fs[i].b);
            res = abs(res);
            if (!res.fits_ulong_p())
                throw ResourceError("support_of_A: pairwise resultant exceeds 64 bits");
            absorb(res.get_ui());
        }
    }
    return {supp.begin(), supp.end()};
}

bool is_admissible(const LinearTuple& t) {
    std::uint32_t k = static_cast<std::uint32_t>(t.k());
    for (std::uint32_t p : primes_up_to(k))
        if (nu_p(t, p) >= p) return false;
    return true;
}

NormalizedTuple::NormalizedTuple(LinearTuple tuple, Int A, Int shift_B,
                                 std::vector<std::uint64_t> support)
    : tuple_(std::move(tuple)), A_(std::move(A)), shift_B_(std::move(shift_B)),
      support_(std::move(support)) {}

bool NormalizedTuple::divides_A(std::uint64_t p) const {
    return std::binary_search(support_.begin(), support_.end(), p);
}

bool NormalizedTuple::coprime_to_A(std::uint64_t d) const {
    for (std::uint64_t p : support_) {
        if (p > d) break;
        if (d % p == 0) return false;
    }
    return true;
}

NormalizedTuple normalize(const LinearTuple& t) {
    if (!is_admissible(t)) throw PreconditionError("normalize: tuple is not admissible");
    Int A = constant_A(t);
    std::vector<std::uint64_t> supp = support_of_A(t);

    // Least nonnegative residue avoiding every root mod p.  At most k roots
    // exist, so the scan terminates within min(p, k+1) steps.
    Int B = 0, mod = 1;
    for (std::uint64_t p : supp) {
        auto roots = form_roots_mod_p(t, p);
        std::uint64_t np = 0;
        while (std::binary_search(roots.begin(), roots.end(), np)) {
            ++np;
            if (np >= p) throw PreconditionError("normalize: no admissible residue mod prime");
        }
        // CRT step: B' = B + mod * u with B' = np (mod p).
        Int pm(static_cast<unsigned long>(p));
        Int u = (Int(static_cast<unsigned long>(np)) - B) % pm;
        if (u < 0) u += pm;
        Int minv;
        if (mpz_invert(minv.get_mpz_t(), mod.get_mpz_t(), pm.get_mpz_t()) == 0)
            throw PreconditionError("normalize: CRT moduli not coprime");
        u = (u * minv) % pm;
        B += mod * u;
        mod *= pm;
    }

    std::vector<LinearForm> new_forms;
    new_forms.reserve(t.forms().size());
    for (const LinearForm& f : t.forms()) {
        Int na = Int(f.a) * A;
        Int nb = Int(f.a) * B + Int(f.b);
        if (!na.fits_slong_p() || !nb.fits_slong_p())
            throw ResourceError("normalize: rewritten coefficients exceed 64 bits");
        new_forms.push_back(LinearForm{na.get_si(), nb.get_si()});
    }
    return NormalizedTuple(LinearTuple(std::move(new_forms)), std::move(A), std::move(B),
                           std::move(supp));
}

namespace {

double series_tail_bound(double value, int k, std::uint64_t cutoff) {
    double c = static_cast<double>(cutoff);
    double tail_log = 2.0 * k * k / (c * std::log(c));
    return std::abs(value) * std::expm1(tail_log);
}

}  // namespace

namespace {

void check_series_cutoff(int k, std::uint64_t cutoff) {
    if (cutoff < static_cast<std::uint64_t>(k))
        throw PreconditionError("singular_series: cutoff below k");
    if (cutoff > 100'000'000)
        throw ResourceError("singular_series: cutoff above 1e8");
}

}  // namespace

SingularSeriesValue singular_series(const NormalizedTuple& t, std::uint64_t cutoff) {
    int k = t.k();
    check_series_cutoff(k, cutoff);
    double value = 1.0;
    for (std::uint64_t p : t.a_support()) {
        double inv = 1.0 - 1.0 / static_cast<double>(p);
        value /= std::pow(inv, k);
    }
    for (std::uint32_t p : primes_up_to(static_cast<std::uint32_t>(cutoff))) {
        if (t.divides_A(p)) continue;
        double pd = static_cast<double>(p);
        value *= (1.0 - k / pd) / std::pow(1.0 - 1.0 / pd, k);
    }
    return SingularSeriesValue{value, series_tail_bound(value, k, cutoff), cutoff};
}

SingularSeriesValue singular_series_raw(const LinearTuple& t, std::uint64_t cutoff) {
    int k = t.k();
    check_series_cutoff(k, cutoff);
    std::vector<std::uint64_t> supp = support_of_A(t);
    double value = 1.0;
    for (std::uint32_t p : primes_up_to(static_cast<std::uint32_t>(cutoff))) {
        double pd = static_cast<double>(p);
        double nu = static_cast<double>(nu_p(t, p));
        value *= (1.0 - nu / pd) / std::pow(1.0 - 1.0 / pd, k);
    }
    // Primes of the support beyond the cutoff still have nu_p != k in
    // general; fold them in so the tail bound's nu_p = k premise holds.
    for (std::uint64_t p : supp) {
        if (p <= cutoff) continue;
        double pd = static_cast<double>(p);
        double nu = static_cast<double>(nu_p(t, p));
        value *= (1.0 - nu / pd) / std::pow(1.0 - 1.0 / pd, k);
    }
    return SingularSeriesValue{value, series_tail_bound(value, k, cutoff), cutoff};
}

std::vector<std::uint64_t> roots_mod(const NormalizedTuple& t, std::uint64_t d) {
    if (d == 0) throw PreconditionError("roots_mod: d must be positive");
    if (d == 1) return {0};
    if (!t.coprime_to_A(d)) throw PreconditionError("roots_mod: d shares a factor with A");
    auto factors = factorize_u64(d);
    for (auto& [p, e] : factors)
        if (e > 1) throw PreconditionError("roots_mod: d must be squarefree");

    std::vector<std::uint64_t> residues{0};
    std::uint64_t mod = 1;
    for (auto& [p, e] : factors) {
        auto proots = form_roots_mod_p(t.tuple(), p);
        std::vector<std::uint64_t> next;
        next.reserve(residues.size() * proots.size());
        // CRT: r = residues[i] (mod mod), r = proots[j] (mod p).
        std::uint64_t minv = powmod(mod % p, p - 2, p);
        for (std::uint64_t r : residues) {
            for (std::uint64_t rp : proots) {
                std::uint64_t diff = (rp + p - r % p) % p;
                std::uint64_t u = mulmod(diff, minv, p);
                next.push_back(r + mod * u);
            }
        }
        residues = std::move(next);
        mod *= p;
    }
    std::sort(residues.begin(), residues.end());
    return residues;
}

}  // namespace e2sieve
