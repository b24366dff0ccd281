#include "e2sieve/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "e2sieve/errors.hpp"
#include "e2sieve/parallel.hpp"
#include "e2sieve/primes.hpp"

namespace e2sieve {

namespace {

enum class MF { F, F1, FStar, F1Star };

template <class S>
S mf_factor(MF which, std::uint64_t p, std::uint64_t k);

template <>
double mf_factor<double>(MF which, std::uint64_t p, std::uint64_t k) {
    const double pd = static_cast<double>(p);
    const double kd = static_cast<double>(k);
    switch (which) {
        case MF::F:
            return pd / kd;
        case MF::F1:
            return (pd - kd) / kd;
        case MF::FStar:
            return (pd - 1.0) / (kd - 1.0);
        case MF::F1Star:
            return (pd - kd) / (kd - 1.0);
    }
    return 0.0;
}

template <>
Rat mf_factor<Rat>(MF which, std::uint64_t p, std::uint64_t k) {
    const Int pi(static_cast<unsigned long>(p));
    const Int ki(static_cast<unsigned long>(k));
    switch (which) {
        case MF::F:
            return make_rat(pi, ki);
        case MF::F1:
            return make_rat(pi - ki, ki);
        case MF::FStar:
            return make_rat(pi - 1, ki - 1);
        case MF::F1Star:
            return make_rat(pi - ki, ki - 1);
    }
    return Rat(0);
}

// Evaluate a multiplicative function at squarefree m via the spf table.
template <class S>
S mf_eval_spf(const std::vector<std::uint32_t>& spf, std::uint64_t m,
              std::uint64_t k, MF which) {
    S out(1);
    while (m > 1) {
        const std::uint64_t p = spf[m];
        out *= mf_factor<S>(which, p, k);
        m /= p;  // m squarefree: p appears once
    }
    return out;
}

template <class S>
struct Acc;

template <>
struct Acc<double> {
    KahanSum s;
    void add(double v) { s.add(v); }
    double value() const { return s.value(); }
};

template <>
struct Acc<Rat> {
    Rat s{0};
    void add(const Rat& v) { s += v; }
    const Rat& value() const { return s; }
};

template <class S>
struct ScalarLimit;

template <>
struct ScalarLimit<double> {
    static constexpr std::uint64_t max_level = 10000000;
};

template <>
struct ScalarLimit<Rat> {
    static constexpr std::uint64_t max_level = 200000;
};

template <class S>
S scalar_ratio(std::uint64_t num, std::uint64_t den);

template <>
double scalar_ratio<double>(std::uint64_t num, std::uint64_t den) {
    return static_cast<double>(num) / static_cast<double>(den);
}

template <>
Rat scalar_ratio<Rat>(std::uint64_t num, std::uint64_t den) {
    return make_rat(Int(static_cast<unsigned long>(num)),
                    Int(static_cast<unsigned long>(den)));
}

template <class S>
void check_level(std::uint64_t R) {
    if (R < 2) throw PreconditionError("sieve level R must be at least 2");
    if (R > ScalarLimit<S>::max_level)
        throw ResourceError("sieve level R exceeds the table-transform cap");
}

struct Tables {
    std::vector<std::int8_t> mu;
    std::vector<std::uint32_t> spf;
    std::vector<std::uint8_t> valid;
};

Tables build_tables(const NormalizedTuple& t, std::uint64_t R) {
    Tables tb;
    const auto limit = static_cast<std::uint32_t>(R - 1);
    tb.mu = mobius_table(limit);
    tb.spf = spf_table(limit);
    tb.valid.assign(R, 0);
    for (std::uint64_t m = 1; m < R; ++m) tb.valid[m] = (tb.mu[m] != 0);
    for (std::uint64_t p : t.a_support()) {
        if (p >= R) continue;
        for (std::uint64_t m = p; m < R; m += p) tb.valid[m] = 0;
    }
    return tb;
}

std::vector<std::uint32_t> phi_from_spf(const std::vector<std::uint32_t>& spf) {
    const std::size_t n = spf.size();
    std::vector<std::uint32_t> phi(n, 0);
    if (n > 1) phi[1] = 1;
    for (std::size_t m = 2; m < n; ++m) {
        const std::uint32_t p = spf[m];
        const std::size_t q = m / p;
        phi[m] = (q % p == 0) ? phi[q] * p : phi[q] * (p - 1);
    }
    return phi;
}

void check_delta(const NormalizedTuple& t, std::uint64_t delta) {
    if (delta == 0) throw PreconditionError("delta must be positive");
    for (const auto& [p, e] : factorize_u64(delta)) {
        (void)p;
        if (e > 1) throw PreconditionError("delta must be squarefree");
    }
    if (!t.coprime_to_A(delta))
        throw PreconditionError("delta must be coprime to the tuple constant");
}

// Checked evaluation of one of the four multiplicative functions at d.
Rat mf_value_checked(const NormalizedTuple& t, std::uint64_t d, MF which) {
    if (d == 0) throw PreconditionError("argument must be positive");
    if (!t.coprime_to_A(d))
        throw PreconditionError("argument must be coprime to the tuple constant");
    const auto k = static_cast<std::uint64_t>(t.tuple().k());
    Rat out(1);
    for (const auto& [p, e] : factorize_u64(d)) {
        if (e > 1) throw PreconditionError("argument must be squarefree");
        if ((which == MF::F1 || which == MF::F1Star) && p <= k)
            throw PreconditionError(
                "prime factor <= k on an argument coprime to the tuple constant");
        out *= mf_factor<Rat>(which, p, k);
    }
    return out;
}

// out[d] = mu(d) * mul_by(d) * sum_{d|m, m on support} in[m]/div_by(m).
// Shared skeleton of the two Moebius-inversion directions.
template <class S>
std::vector<S> moebius_weight_transform(const NormalizedTuple& t,
                                        std::uint64_t R,
                                        const std::vector<S>& in, MF div_by,
                                        MF mul_by) {
    check_level<S>(R);
    if (in.size() != R)
        throw PreconditionError("input vector must have size R");
    const auto k = static_cast<std::uint64_t>(t.tuple().k());
    const Tables tb = build_tables(t, R);

    std::vector<S> g(R, S(0));
    for (std::uint64_t m = 1; m < R; ++m)
        if (tb.valid[m]) g[m] = in[m] / mf_eval_spf<S>(tb.spf, m, k, div_by);

    std::vector<S> out(R, S(0));
    auto row = [&](std::uint64_t d) {
        Acc<S> acc;
        for (std::uint64_t m = d; m < R; m += d)
            if (tb.valid[m]) acc.add(g[m]);
        S v = mf_eval_spf<S>(tb.spf, d, k, mul_by) * acc.value();
        if (tb.mu[d] < 0) v = -v;
        out[d] = v;
    };

    if (R < 65536 || thread_count() == 1) {
        for (std::uint64_t d = 1; d < R; ++d)
            if (tb.valid[d]) row(d);
    } else {
        // Interleaved chunks balance the harmonic cost profile of the
        // multiples loop; rows write disjoint slots.
        const std::size_t nchunks =
            std::min<std::uint64_t>(R - 1, std::uint64_t(thread_count()) * 8);
        parallel_map(nchunks, [&](std::size_t c) {
            for (std::uint64_t d = 1 + c; d < R; d += nchunks)
                if (tb.valid[d]) row(d);
            return 0;
        });
    }
    return out;
}

Rat rat_pairwise_sum(const std::vector<Rat>& v, std::size_t lo, std::size_t hi) {
    if (hi == lo) return Rat(0);
    if (hi - lo <= 8) {
        Rat s = v[lo];
        for (std::size_t i = lo + 1; i < hi; ++i) s += v[i];
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return rat_pairwise_sum(v, lo, mid) + rat_pairwise_sum(v, mid, hi);
}

}  // namespace

void SieveParams::validate() const {
    if (level < 2) throw PreconditionError("sieve level R must be at least 2");
    validate_sieve_polynomial(poly);
}

Rat f_value(const NormalizedTuple& t, std::uint64_t d) {
    return mf_value_checked(t, d, MF::F);
}
Rat f1_value(const NormalizedTuple& t, std::uint64_t d) {
    return mf_value_checked(t, d, MF::F1);
}
Rat fstar_value(const NormalizedTuple& t, std::uint64_t d) {
    return mf_value_checked(t, d, MF::FStar);
}
Rat f1star_value(const NormalizedTuple& t, std::uint64_t d) {
    return mf_value_checked(t, d, MF::F1Star);
}

std::vector<std::uint8_t> support_mask(const NormalizedTuple& t,
                                       std::uint64_t R) {
    check_level<double>(R);
    const auto mu = mobius_table(static_cast<std::uint32_t>(R - 1));
    std::vector<std::uint8_t> v(R, 0);
    for (std::uint64_t m = 1; m < R; ++m) v[m] = (mu[m] != 0);
    for (std::uint64_t p : t.a_support()) {
        if (p >= R) continue;
        for (std::uint64_t m = p; m < R; m += p) v[m] = 0;
    }
    return v;
}

template <class S>
std::vector<S> lambda_from_y(const NormalizedTuple& t, std::uint64_t R,
                             const std::vector<S>& y) {
    return moebius_weight_transform<S>(t, R, y, MF::F1, MF::F);
}

template <class S>
std::vector<S> y_from_lambda(const NormalizedTuple& t, std::uint64_t R,
                             const std::vector<S>& lambda_hat) {
    return moebius_weight_transform<S>(t, R, lambda_hat, MF::F, MF::F1);
}

template <class S>
std::vector<S> y_star_from_y(const NormalizedTuple& t, std::uint64_t R,
                             const std::vector<S>& y) {
    check_level<S>(R);
    if (y.size() != R) throw PreconditionError("input vector must have size R");
    const Tables tb = build_tables(t, R);
    const auto phi = phi_from_spf(tb.spf);

    std::vector<S> out(R, S(0));
    auto row = [&](std::uint64_t r) {
        Acc<S> acc;
        for (std::uint64_t q = r; q < R; q += r) {
            if (!tb.valid[q]) continue;
            const std::uint64_t m = q / r;
            acc.add(y[q] / S(phi[m]));
        }
        out[r] = scalar_ratio<S>(r, phi[r]) * acc.value();
    };
    if (R < 65536 || thread_count() == 1) {
        for (std::uint64_t r = 1; r < R; ++r)
            if (tb.valid[r]) row(r);
    } else {
        const std::size_t nchunks =
            std::min<std::uint64_t>(R - 1, std::uint64_t(thread_count()) * 8);
        parallel_map(nchunks, [&](std::size_t c) {
            for (std::uint64_t r = 1 + c; r < R; r += nchunks)
                if (tb.valid[r]) row(r);
            return 0;
        });
    }
    return out;
}

template <class S>
S t_delta_bilinear(const NormalizedTuple& t, std::uint64_t R,
                   const std::vector<S>& lambda_hat, std::uint64_t delta) {
    check_level<S>(R);
    if (R > 5000)
        throw ResourceError(
            "bilinear T_delta is quadratic in R; use the diagonal form");
    if (lambda_hat.size() != R)
        throw PreconditionError("weight vector must have size R");
    check_delta(t, delta);
    const auto k = static_cast<std::uint64_t>(t.tuple().k());
    const Tables tb = build_tables(t, R);

    std::vector<std::uint64_t> ds;
    std::vector<std::vector<std::uint32_t>> dprimes;
    for (std::uint64_t d = 1; d < R; ++d) {
        if (!tb.valid[d]) continue;
        ds.push_back(d);
        std::vector<std::uint32_t> ps;
        for (std::uint64_t m = d; m > 1;) {
            const std::uint32_t p = tb.spf[m];
            ps.push_back(p);
            m /= p;
        }
        std::sort(ps.begin(), ps.end());
        dprimes.push_back(std::move(ps));
    }
    std::vector<std::uint64_t> del_primes;
    for (const auto& [p, e] : factorize_u64(delta)) {
        (void)e;
        del_primes.push_back(p);
    }
    auto divides_delta = [&](std::uint64_t p) {
        return std::find(del_primes.begin(), del_primes.end(), p) !=
               del_primes.end();
    };

    Acc<S> acc;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (std::size_t j = 0; j < ds.size(); ++j) {
            // f*(lcm(d, e, delta)/delta): union of the prime sets of d and
            // e with delta's primes removed.
            const auto& pa = dprimes[i];
            const auto& pb = dprimes[j];
            S denom(1);
            std::size_t a = 0, b = 0;
            while (a < pa.size() || b < pb.size()) {
                std::uint64_t p;
                if (b == pb.size() || (a < pa.size() && pa[a] <= pb[b])) {
                    p = pa[a];
                    if (b < pb.size() && pa[a] == pb[b]) ++b;
                    ++a;
                } else {
                    p = pb[b];
                    ++b;
                }
                if (!divides_delta(p)) denom *= mf_factor<S>(MF::FStar, p, k);
            }
            acc.add(lambda_hat[ds[i]] * lambda_hat[ds[j]] / denom);
        }
    }
    return acc.value();
}

template <class S>
S t_delta_diagonal(const NormalizedTuple& t, std::uint64_t R,
                   const std::vector<S>& ystar, std::uint64_t delta) {
    check_level<S>(R);
    if (ystar.size() != R)
        throw PreconditionError("transformed-weight vector must have size R");
    check_delta(t, delta);
    const auto k = static_cast<std::uint64_t>(t.tuple().k());
    const Tables tb = build_tables(t, R);

    // Divisors s | delta with mu(s), via subsets of delta's prime set.
    std::vector<std::uint64_t> dp;
    for (const auto& [p, e] : factorize_u64(delta)) {
        (void)e;
        dp.push_back(p);
    }
    std::vector<std::pair<std::uint64_t, int>> divs;
    const std::size_t nsub = std::size_t(1) << dp.size();
    for (std::size_t mask = 0; mask < nsub; ++mask) {
        std::uint64_t s = 1;
        int sign = 1;
        for (std::size_t b = 0; b < dp.size(); ++b) {
            if (mask & (std::size_t(1) << b)) {
                s *= dp[b];
                sign = -sign;
            }
        }
        divs.emplace_back(s, sign);
    }

    Acc<S> acc;
    for (std::uint64_t r = 1; r < R; ++r) {
        if (!tb.valid[r]) continue;
        if (std::gcd(r, delta) != 1) continue;
        S inner(0);
        for (const auto& [s, sign] : divs) {
            const std::uint64_t q = r * s;
            if (q >= R) continue;
            if (sign > 0)
                inner += ystar[q];
            else
                inner -= ystar[q];
        }
        const S denom = mf_eval_spf<S>(tb.spf, r, k, MF::F1Star);
        acc.add(inner * inner / denom);
    }
    return acc.value();
}

std::vector<double> production_y(const SieveParams& p) {
    p.validate();
    check_level<double>(p.level);
    const auto mask = support_mask(p.tuple, p.level);
    std::vector<double> y(p.level, 0.0);
    const double log_r = std::log(static_cast<double>(p.level));
    for (std::uint64_t m = 1; m < p.level; ++m) {
        if (!mask[m]) continue;
        const double x = 1.0 - std::log(static_cast<double>(m)) / log_r;
        y[m] = p.poly.eval_double(x);
    }
    return y;
}

double y_r_value(const SieveParams& p, std::uint64_t r) {
    p.validate();
    if (r == 0 || r >= p.level) return 0.0;
    if (!p.tuple.coprime_to_A(r)) return 0.0;
    for (const auto& [q, e] : factorize_u64(r)) {
        (void)q;
        if (e > 1) return 0.0;
    }
    const double log_r = std::log(static_cast<double>(p.level));
    return p.poly.eval_double(1.0 -
                              std::log(static_cast<double>(r)) / log_r);
}

WeightTable lambda_table(const SieveParams& p) {
    p.validate();
    WeightTable wt;
    wt.level = p.level;
    wt.valid = support_mask(p.tuple, p.level);
    wt.lambda_hat = lambda_from_y<double>(p.tuple, p.level, production_y(p));
    wt.max_abs = 0.0;
    for (double v : wt.lambda_hat) wt.max_abs = std::max(wt.max_abs, std::fabs(v));
    return wt;
}

std::vector<double> y_star_table(const SieveParams& p) {
    p.validate();
    return y_star_from_y<double>(p.tuple, p.level, production_y(p));
}

double max_lambda_ratio(const SieveParams& p, const WeightTable& table) {
    p.validate();
    const auto k = static_cast<double>(p.tuple.tuple().k());
    const double log_r = std::log(static_cast<double>(table.level));
    return table.max_abs / std::pow(log_r, k);
}

Rat g_star(const NormalizedTuple& t, std::uint64_t u) {
    if (u < 1) throw PreconditionError("u must be at least 1");
    if (u > 200000) throw ResourceError("exact G* capped at u = 2*10^5");
    if (u == 1) return Rat(0);
    const auto k = static_cast<std::uint64_t>(t.tuple().k());
    const Tables tb = build_tables(t, u);
    std::vector<Rat> terms;
    for (std::uint64_t r = 1; r < u; ++r) {
        if (!tb.valid[r]) continue;
        const Rat v = mf_eval_spf<Rat>(tb.spf, r, k, MF::F1Star);
        terms.emplace_back(1 / v);
    }
    // Pairwise merge keeps the growth of common denominators logarithmic in
    // the number of additions.
    return rat_pairwise_sum(terms, 0, terms.size());
}

double g_star_numeric(const NormalizedTuple& t, std::uint64_t u) {
    if (u < 1) throw PreconditionError("u must be at least 1");
    if (u > 10000000) throw ResourceError("numeric G* capped at u = 10^7");
    if (u == 1) return 0.0;
    const auto k = static_cast<std::uint64_t>(t.tuple().k());
    const Tables tb = build_tables(t, u);
    KahanSum s;
    for (std::uint64_t r = 1; r < u; ++r) {
        if (!tb.valid[r]) continue;
        s.add(1.0 / mf_eval_spf<double>(tb.spf, r, k, MF::F1Star));
    }
    return s.value();
}

double l_r(std::uint64_t r) {
    if (r == 0) throw PreconditionError("r must be positive");
    double out = 1.0;
    for (const auto& [p, e] : factorize_u64(r)) {
        (void)e;
        out += std::log(static_cast<double>(p)) / static_cast<double>(p);
    }
    return out;
}

double y_star_fit_constant(const SieveParams& p) {
    const auto ys = y_star_table(p);
    const std::uint64_t R = p.level;
    const Tables tb = build_tables(p.tuple, R);
    double phi_ratio = 1.0;
    for (std::uint64_t q : p.tuple.a_support())
        phi_ratio *= (static_cast<double>(q) - 1.0) / static_cast<double>(q);
    const Poly pint = p.poly.antiderivative();
    const double log_r = std::log(static_cast<double>(R));
    double worst = 0.0;
    for (std::uint64_t r = 1; r < R; ++r) {
        if (!tb.valid[r]) continue;
        const double x = 1.0 - std::log(static_cast<double>(r)) / log_r;
        const double main = phi_ratio * log_r * pint.eval_double(x);
        double lr = 1.0;
        for (std::uint64_t m = r; m > 1;) {
            const std::uint32_t q = tb.spf[m];
            lr += std::log(static_cast<double>(q)) / static_cast<double>(q);
            m /= q;
        }
        worst = std::max(worst, std::fabs(ys[r] - main) / lr);
    }
    return worst;
}

// Explicit instantiations: double for production, Rat for exact identities.
template std::vector<double> lambda_from_y<double>(const NormalizedTuple&,
                                                   std::uint64_t,
                                                   const std::vector<double>&);
template std::vector<Rat> lambda_from_y<Rat>(const NormalizedTuple&,
                                             std::uint64_t,
                                             const std::vector<Rat>&);
template std::vector<double> y_from_lambda<double>(const NormalizedTuple&,
                                                   std::uint64_t,
                                                   const std::vector<double>&);
template std::vector<Rat> y_from_lambda<Rat>(const NormalizedTuple&,
                                             std::uint64_t,
                                             const std::vector<Rat>&);
template std::vector<double> y_star_from_y<double>(const NormalizedTuple&,
                                                   std::uint64_t,
                                                   const std::vector<double>&);
template std::vector<Rat> y_star_from_y<Rat>(const NormalizedTuple&,
                                             std::uint64_t,
                                             const std::vector<Rat>&);
template double t_delta_bilinear<double>(const NormalizedTuple&, std::uint64_t,
                                         const std::vector<double>&,
                                         std::uint64_t);
template Rat t_delta_bilinear<Rat>(const NormalizedTuple&, std::uint64_t,
                                   const std::vector<Rat>&, std::uint64_t);
template double t_delta_diagonal<double>(const NormalizedTuple&, std::uint64_t,
                                         const std::vector<double>&,
                                         std::uint64_t);
template Rat t_delta_diagonal<Rat>(const NormalizedTuple&, std::uint64_t,
                                   const std::vector<Rat>&, std::uint64_t);

}  // namespace e2sieve
