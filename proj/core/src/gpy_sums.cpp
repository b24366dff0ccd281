#include "e2sieve/gpy_sums.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "e2sieve/errors.hpp"
#include "e2sieve/j_integrals.hpp"
#include "e2sieve/parallel.hpp"
#include "e2sieve/primes.hpp"

namespace e2sieve {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using i128 = __int128;

constexpr u64 kSegment = u64(1) << 18;
constexpr u64 kMaxNDouble = 1000000000ULL;
constexpr u64 kMaxNRat = 200000ULL;
constexpr u64 kTableBudget = 50000000ULL;  // per-segment form-table span

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

void check_geometry(u64 R, u64 N, u64 max_n) {
    if (N < 4) throw PreconditionError("N must be at least 4");
    if (N > max_n) throw ResourceError("N exceeds the detection-sum guard");
    if (R < 2) throw PreconditionError("R must be at least 2");
    if (u128(R) * R > u128(N))
        throw PreconditionError("the level must satisfy R^2 <= N");
}

void check_beta(const BetaConfig& c) {
    if (c.big_n < 1) throw PreconditionError("beta range N must be positive");
    if (c.y_floor < 1)
        throw PreconditionError("beta cutoff Y must be at least 1");
    const u128 y2 = u128(c.y_floor) * c.y_floor;
    if (y2 * y2 > u128(c.big_n))
        throw PreconditionError("beta cutoff must satisfy Y <= N^(1/4)");
}

// Root progressions of P_L mod d for every d on the weight support.
struct RootTable {
    std::vector<u64> ds;
    std::vector<std::vector<u64>> roots;
};

RootTable build_root_table(const NormalizedTuple& t, u64 R) {
    RootTable rt;
    const auto mask = support_mask(t, R);
    for (u64 d = 1; d < R; ++d) {
        if (!mask[d]) continue;
        rt.ds.push_back(d);
        rt.roots.push_back(roots_mod(t, d));
    }
    return rt;
}

template <class S>
void accumulate_segment(const RootTable& rt, const std::vector<S>& lam,
                        u64 slo, u64 shi, std::vector<S>& w) {
    for (std::size_t i = 0; i < rt.ds.size(); ++i) {
        const u64 d = rt.ds[i];
        const S& v = lam[d];
        if (v == S(0)) continue;
        for (u64 rho : rt.roots[i]) {
            const u64 n0 = slo + ((rho + d - slo % d) % d);
            for (u64 n = n0; n < shi; n += d) w[n - slo] += v;
        }
    }
}

// Per-segment table spans stay within the budget even for steep forms.
u64 segment_size_for(const LinearTuple& lt) {
    std::int64_t amax = 1;
    for (const auto& f : lt.forms()) amax = std::max(amax, f.a);
    const u64 cap = kTableBudget / (2 * u64(amax));
    return std::clamp<u64>(cap, 1024, kSegment);
}

u64 form_value_u64(const LinearForm& f, u64 n) {
    return u64(i128(f.a) * i128(n) + i128(f.b));
}

std::pair<u64, u64> form_range(const LinearForm& f, u64 slo, u64 shi) {
    const i128 lo = i128(f.a) * i128(slo) + f.b;
    const i128 hi = i128(f.a) * i128(shi - 1) + f.b + 1;
    if (lo < 1)
        throw PreconditionError("form value below 1; N too small for the tuple");
    if (hi > (i128(1) << 62))
        throw ResourceError("form values exceed the factor-table range");
    return {u64(lo), u64(hi)};
}

// One factor table per distinct slope, shared by the forms that need it.
std::vector<std::shared_ptr<const FactorTable>> build_form_tables(
    const LinearTuple& lt, u64 slo, u64 shi, const std::vector<int>& which) {
    std::vector<std::shared_ptr<const FactorTable>> out(lt.forms().size());
    std::map<std::int64_t, std::vector<int>> groups;
    for (int j : which) groups[lt.forms()[j].a].push_back(j);
    for (const auto& [a, js] : groups) {
        (void)a;
        u64 lo = UINT64_MAX, hi = 0;
        for (int j : js) {
            const auto [l, h] = form_range(lt.forms()[j], slo, shi);
            lo = std::min(lo, l);
            hi = std::max(hi, h);
        }
        auto tbl =
            std::make_shared<const FactorTable>(build_factor_table(lo, hi));
        for (int j : js) out[j] = tbl;
    }
    return out;
}

// Streams segments of (N, 2N] with the per-n weight sums filled in.
template <class S, class Fn>
void for_each_weighted_segment(const NormalizedTuple& t, u64 R,
                               const std::vector<S>& lam, u64 N, u64 seg,
                               Fn&& fn) {
    if (lam.size() != R)
        throw PreconditionError("weight vector must have size R");
    const RootTable rt = build_root_table(t, R);
    std::vector<S> w;
    for (u64 slo = N + 1; slo <= 2 * N; slo += seg) {
        const u64 shi = std::min(2 * N + 1, slo + seg);
        w.assign(shi - slo, S(0));
        accumulate_segment(rt, lam, slo, shi, w);
        fn(slo, shi, w);
    }
}

double series_value(const NormalizedTuple& t) {
    return singular_series(t).value;
}

// N (log R)^k / ((k-1)! * series): the square-sum prefactor.
double prefactor_s0(const SieveParams& p, u64 N) {
    const int k = p.tuple.tuple().k();
    const double log_r = std::log(double(p.level));
    return double(N) * std::pow(log_r, k) /
           (to_double(Rat(factorial(unsigned(k - 1)))) * series_value(p.tuple));
}

// N (log R)^{k+1} / ((k-2)! log N * series): the detector prefactor.
double prefactor_s1(const SieveParams& p, u64 N) {
    const int k = p.tuple.tuple().k();
    const double log_r = std::log(double(p.level));
    return double(N) * std::pow(log_r, k + 1) /
           (to_double(Rat(factorial(unsigned(k - 2)))) * std::log(double(N)) *
            series_value(p.tuple));
}

SumReport base_report(const SieveParams& p, u64 N) {
    SumReport r;
    r.n_base = N;
    r.level = p.level;
    r.k = p.tuple.tuple().k();
    r.b = std::log(double(N)) / std::log(double(p.level));
    return r;
}

double eta_of(const BetaConfig& cfg, u64 N) {
    return std::log(double(std::max<u64>(cfg.y_floor, 1))) /
           std::log(double(N));
}

void finish(SumReport& r) {
    r.ratio = r.main_term != 0.0 ? r.exact / r.main_term : 0.0;
}

}  // namespace

SumReport s0_exact(const SieveParams& p, std::uint64_t N) {
    p.validate();
    check_geometry(p.level, N, kMaxNDouble);
    const WeightTable wt = lambda_table(p);
    KahanSum total;
    for_each_weighted_segment<double>(
        p.tuple, p.level, wt.lambda_hat, N, kSegment,
        [&](u64, u64, const std::vector<double>& w) {
            KahanSum seg;
            for (double v : w) seg.add(v * v);
            total.add(seg.value());
        });
    SumReport r = base_report(p, N);
    r.exact = total.value();
    r.main_term =
        prefactor_s0(p, N) * to_double(j0(p.tuple.tuple().k(), p.poly));
    finish(r);
    return r;
}

SumReport s1_exact(const SieveParams& p, std::uint64_t N, int j,
                   const BetaConfig& cfg) {
    p.validate();
    check_geometry(p.level, N, kMaxNDouble);
    check_beta(cfg);
    const auto& lt = p.tuple.tuple();
    const int k = lt.k();
    if (j < 0 || j >= k) throw PreconditionError("form index out of range");
    const WeightTable wt = lambda_table(p);
    KahanSum total;
    for_each_weighted_segment<double>(
        p.tuple, p.level, wt.lambda_hat, N, segment_size_for(lt),
        [&](u64 slo, u64 shi, const std::vector<double>& w) {
            const auto tabs = build_form_tables(lt, slo, shi, {j});
            KahanSum seg;
            for (u64 n = slo; n < shi; ++n) {
                const u64 v = form_value_u64(lt.forms()[j], n);
                if (beta_value(*tabs[j], cfg, v)) {
                    const double x = w[n - slo];
                    seg.add(x * x);
                }
            }
            total.add(seg.value());
        });
    SumReport r = base_report(p, N);
    r.exact = total.value();
    const double eta = eta_of(cfg, N);
    const double jsum = j1_numeric(k, r.b, eta, p.poly) +
                        j2_numeric(k, r.b, eta, p.poly) +
                        j3_numeric(k, r.b, p.poly);
    r.main_term = prefactor_s1(p, N) * jsum;
    finish(r);
    return r;
}

SumReport spi_exact(const SieveParams& p, std::uint64_t N, int j) {
    p.validate();
    check_geometry(p.level, N, kMaxNDouble);
    const auto& lt = p.tuple.tuple();
    const int k = lt.k();
    if (j < 0 || j >= k) throw PreconditionError("form index out of range");
    const WeightTable wt = lambda_table(p);
    KahanSum total;
    for_each_weighted_segment<double>(
        p.tuple, p.level, wt.lambda_hat, N, segment_size_for(lt),
        [&](u64 slo, u64 shi, const std::vector<double>& w) {
            const auto tabs = build_form_tables(lt, slo, shi, {j});
            KahanSum seg;
            for (u64 n = slo; n < shi; ++n) {
                const u64 v = form_value_u64(lt.forms()[j], n);
                if (tabs[j]->is_prime(v)) {
                    const double x = w[n - slo];
                    seg.add(x * x);
                }
            }
            total.add(seg.value());
        });
    SumReport r = base_report(p, N);
    r.exact = total.value();
    r.main_term = prefactor_s1(p, N) * to_double(j_varpi(k, p.poly));
    finish(r);
    return r;
}

CombinedReport s_combined(const SieveParams& p, std::uint64_t N, unsigned nu,
                          const BetaConfig& cfg, bool with_primes,
                          std::size_t max_winners) {
    p.validate();
    check_geometry(p.level, N, kMaxNDouble);
    check_beta(cfg);
    const auto& lt = p.tuple.tuple();
    const int k = lt.k();
    const WeightTable wt = lambda_table(p);
    std::vector<int> all(k);
    std::iota(all.begin(), all.end(), 0);

    CombinedReport out;
    KahanSum total, s0sum;
    std::vector<KahanSum> comp(k);
    std::vector<int> passing;
    for_each_weighted_segment<double>(
        p.tuple, p.level, wt.lambda_hat, N, segment_size_for(lt),
        [&](u64 slo, u64 shi, const std::vector<double>& w) {
            const auto tabs = build_form_tables(lt, slo, shi, all);
            KahanSum seg_total, seg_s0;
            std::vector<KahanSum> seg_comp(k);
            for (u64 n = slo; n < shi; ++n) {
                const double x = w[n - slo];
                const double x2 = x * x;
                seg_s0.add(x2);
                passing.clear();
                for (int j = 0; j < k; ++j) {
                    const u64 v = form_value_u64(lt.forms()[j], n);
                    const bool hit =
                        beta_value(*tabs[j], cfg, v) ||
                        (with_primes && tabs[j]->is_prime(v));
                    if (hit) {
                        passing.push_back(j);
                        seg_comp[j].add(x2);
                    }
                }
                seg_total.add((double(passing.size()) - double(nu)) * x2);
                if (passing.size() >= std::size_t(nu) + 1) {
                    ++out.winner_count;
                    if (out.winners.size() < max_winners)
                        out.winners.push_back({n, passing});
                }
            }
            total.add(seg_total.value());
            s0sum.add(seg_s0.value());
            for (int j = 0; j < k; ++j) comp[j].add(seg_comp[j].value());
        });

    out.report = base_report(p, N);
    out.report.exact = total.value();
    out.s0 = s0sum.value();
    out.report.components.resize(k);
    for (int j = 0; j < k; ++j) out.report.components[j] = comp[j].value();
    const double eta = eta_of(cfg, N);
    out.report.main_term =
        prefactor_s0(p, N) *
        j_total_numeric(k, out.report.b, eta, int(nu), p.poly, with_primes);
    finish(out.report);
    return out;
}

std::uint64_t m_count(const SieveParams& p, int j, std::uint64_t u,
                      std::uint64_t N, const BetaConfig& cfg) {
    p.validate();
    check_geometry(p.level, N, kMaxNDouble);
    check_beta(cfg);
    const auto& lt = p.tuple.tuple();
    const int k = lt.k();
    if (j < 0 || j >= k) throw PreconditionError("form index out of range");
    if (u == 0) throw PreconditionError("u must be positive");
    u64 expected_roots = 1;
    for (const auto& [q, e] : factorize_u64(u)) {
        if (e > 1) throw PreconditionError("u must be squarefree");
        if (q >= p.level)
            throw PreconditionError("prime factors of u must lie below R");
        expected_roots *= u64(k);
    }
    const auto roots = roots_mod(p.tuple, u);  // checks coprimality too
    if (roots.size() != expected_roots)
        throw std::logic_error("root-count invariant violated");

    u64 count = 0;
    const u64 seg = segment_size_for(lt);
    for (u64 slo = N + 1; slo <= 2 * N; slo += seg) {
        const u64 shi = std::min(2 * N + 1, slo + seg);
        const auto tabs = build_form_tables(lt, slo, shi, {j});
        for (u64 rho : roots) {
            const u64 n0 = slo + ((rho + u - slo % u) % u);
            for (u64 n = n0; n < shi; n += u)
                if (beta_value(*tabs[j], cfg, form_value_u64(lt.forms()[j], n)))
                    ++count;
        }
    }
    return count;
}

Rat s0_exact_rat(const NormalizedTuple& t, std::uint64_t R,
                 const std::vector<Rat>& lambda_hat, std::uint64_t N) {
    check_geometry(R, N, kMaxNRat);
    Acc<Rat> total;
    for_each_weighted_segment<Rat>(
        t, R, lambda_hat, N, kSegment,
        [&](u64, u64, const std::vector<Rat>& w) {
            for (const Rat& v : w)
                if (v != 0) total.add(v * v);
        });
    return total.value();
}

Rat s1_exact_rat(const NormalizedTuple& t, std::uint64_t R,
                 const std::vector<Rat>& lambda_hat, std::uint64_t N, int j,
                 const BetaConfig& cfg) {
    check_geometry(R, N, kMaxNRat);
    check_beta(cfg);
    const auto& lt = t.tuple();
    if (j < 0 || j >= lt.k())
        throw PreconditionError("form index out of range");
    Acc<Rat> total;
    for_each_weighted_segment<Rat>(
        t, R, lambda_hat, N, segment_size_for(lt),
        [&](u64 slo, u64 shi, const std::vector<Rat>& w) {
            const auto tabs = build_form_tables(lt, slo, shi, {j});
            for (u64 n = slo; n < shi; ++n) {
                const u64 v = form_value_u64(lt.forms()[j], n);
                if (beta_value(*tabs[j], cfg, v) && w[n - slo] != 0)
                    total.add(w[n - slo] * w[n - slo]);
            }
        });
    return total.value();
}

Rat spi_exact_rat(const NormalizedTuple& t, std::uint64_t R,
                  const std::vector<Rat>& lambda_hat, std::uint64_t N, int j) {
    check_geometry(R, N, kMaxNRat);
    const auto& lt = t.tuple();
    if (j < 0 || j >= lt.k())
        throw PreconditionError("form index out of range");
    Acc<Rat> total;
    for_each_weighted_segment<Rat>(
        t, R, lambda_hat, N, segment_size_for(lt),
        [&](u64 slo, u64 shi, const std::vector<Rat>& w) {
            const auto tabs = build_form_tables(lt, slo, shi, {j});
            for (u64 n = slo; n < shi; ++n) {
                const u64 v = form_value_u64(lt.forms()[j], n);
                if (tabs[j]->is_prime(v) && w[n - slo] != 0)
                    total.add(w[n - slo] * w[n - slo]);
            }
        });
    return total.value();
}

}  // namespace e2sieve
