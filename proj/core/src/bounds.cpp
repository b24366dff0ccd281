#include "e2sieve/bounds.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "e2sieve/errors.hpp"
#include "e2sieve/primes.hpp"

namespace e2sieve {
namespace {

constexpr int kSearchCapFixed = 10'000;
constexpr int kSearchCapMonomial = 1'024;  // floor(sqrt(k)) <= 32 = degree cap

struct Effective {
    double b;
    int nu;
};

Effective effective(const BoundQuery& q) {
    double b = to_double(q.b);
    if (q.variant == BoundVariant::short_interval ||
        q.variant == BoundVariant::both)
        b = 60.0;
    int nu = q.nu;
    if (q.variant == BoundVariant::two_squares ||
        q.variant == BoundVariant::both)
        nu *= 4;
    return {b, nu};
}

Poly family_poly(PFamily family, const Poly& fixed_p, int k) {
    if (family == PFamily::fixed) return fixed_p;
    unsigned l = static_cast<unsigned>(std::sqrt((double)k));
    Rat inv_fact(1);
    for (unsigned i = 2; i <= l; ++i) inv_fact /= (long)i;
    return Poly::monomial(l, inv_fact);
}

}  // namespace

void BoundQuery::validate() const {
    if (nu < 1) throw PreconditionError("nu must be at least 1");
    if (!(b > 2) || b > 60)
        throw PreconditionError("the level ratio B must satisfy 2 < B <= 60");
}

BoundConstants leading_constant(const BoundQuery& query) {
    query.validate();
    auto [b, nu] = effective(query);
    BoundConstants out;
    out.b_effective = b;
    out.nu_effective = nu;
    double egamma = std::exp(-std::numbers::egamma);
    double growth = std::exp(b * (double)nu / 4.0);
    out.k_threshold = 4.0 * egamma / b * growth;
    out.gap_diameter = egamma * (double)nu * growth;
    out.heuristic = true;
    return out;
}

MinKResult min_k(int nu, const Rat& b, const Rat& eta, PFamily family,
                 const Poly& fixed_p, BoundVariant variant) {
    if (nu < 0) throw PreconditionError("nu must be nonnegative");
    Rat b_eff = (variant == BoundVariant::short_interval ||
                 variant == BoundVariant::both)
                    ? Rat(60)
                    : b;
    int nu_eff = (variant == BoundVariant::two_squares ||
                  variant == BoundVariant::both)
                     ? 4 * nu
                     : nu;
    if (family == PFamily::fixed && fixed_p.is_zero())
        throw PreconditionError("fixed family needs a nonzero polynomial");

    const int cap =
        family == PFamily::fixed ? kSearchCapFixed : kSearchCapMonomial;
    const double b_num = to_double(b_eff);
    const double eta_num = to_double(eta);

    // Cheap numeric ascent to the first sign change, then exact
    // certificates at the boundary only: the closed-form constants are
    // expensive to materialize for every k.
    int k_candidate = 0;
    for (int k = 2; k <= cap; ++k) {
        Poly P = family_poly(family, fixed_p, k);
        double j =
            j_total_numeric(k, b_num, eta_num, nu_eff, P, /*with_primes=*/false);
        if (j > 0) {
            k_candidate = k;
            break;
        }
    }
    if (k_candidate == 0)
        throw PreconditionError(
            "no k <= " + std::to_string(cap) +
            " has a positive detection constant for these parameters");

    auto exact_j = [&](int k) -> ExactConstant {
        JInputs in;
        in.k = k;
        in.B = b_eff;
        in.eta = eta;
        in.nu = nu_eff;
        in.P = family_poly(family, fixed_p, k);
        in.validate();
        return j_total(in, /*with_primes=*/false);
    };

    // The numeric boundary may be off by one near a tiny root; walk with
    // exact signs until J(k) > 0 >= J(k-1) is certified.
    int k = k_candidate;
    ExactConstant jk = exact_j(k);
    while (jk.sign() <= 0) {
        ++k;
        if (k > cap)
            throw PreconditionError(
                "no k <= " + std::to_string(cap) +
                " has a positive detection constant for these parameters");
        jk = exact_j(k);
    }
    while (k > 2) {
        ExactConstant jprev = exact_j(k - 1);
        if (jprev.sign() <= 0) break;
        k -= 1;
        jk = jprev;
    }
    MinKResult out;
    out.k = k;
    out.j_at_k = jk;
    out.p_at_k = family_poly(family, fixed_p, k);
    if (k > 2) {
        out.j_below = exact_j(k - 1);
        out.p_below = family_poly(family, fixed_p, k - 1);
    } else {
        // k = 2 is the smallest admissible size; report the boundary as the
        // (empty) constant zero.
        out.j_below = ExactConstant();
        out.p_below = Poly();
    }
    return out;
}

LinearTuple tuple_of_primes(int k) {
    if (k < 2) throw PreconditionError("tuple size k must be at least 2");
    // shifts = the k primes immediately above k.
    std::vector<LinearForm> forms;
    forms.reserve(k);
    std::uint64_t count = prime_count_up_to(static_cast<std::uint64_t>(k));
    for (int i = 1; i <= k; ++i) {
        std::uint64_t p = nth_prime(count + static_cast<std::uint64_t>(i));
        forms.push_back
            ({1, static_cast<std::int64_t>(p)});
    }
    LinearTuple t(forms);
    if (!is_admissible(t))
        throw std::logic_error("prime-shift tuple failed admissibility");
    return t;
}

}  // namespace e2sieve
