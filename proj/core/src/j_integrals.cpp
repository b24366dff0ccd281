#include "e2sieve/j_integrals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "e2sieve/errors.hpp"

namespace e2sieve {

namespace {

// Bivariate polynomial: entry i is the coefficient of x^i, a Poly in y.
using Poly2 = std::vector<Poly>;

Poly2 bivar_from_x_poly(const Poly& px) {
    Poly2 r;
    r.reserve(px.coeffs().size());
    for (const Rat& c : px.coeffs()) r.push_back(Poly::constant(c));
    return r;
}

Poly2 bivar_sub(const Poly2& a, const Poly2& b) {
    Poly2 r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
        Poly pa = i < a.size() ? a[i] : Poly();
        Poly pb = i < b.size() ? b[i] : Poly();
        r[i] = pa - pb;
    }
    return r;
}

Poly2 bivar_mul(const Poly2& a, const Poly2& b) {
    if (a.empty() || b.empty()) return {};
    Poly2 r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
    return r;
}

// Horner expansion of q(1 - x - y) for univariate q.
Poly2 compose_one_minus_x_minus_y(const Poly& q) {
    Poly one_minus_y(std::vector<Rat>{Rat(1), Rat(-1)});
    Poly2 acc;  // zero
    for (std::size_t i = q.coeffs().size(); i-- > 0;) {
        // acc = acc * (1 - x - y) + q_i
        Poly2 next(acc.size() + 1);
        for (std::size_t j = 0; j < acc.size(); ++j) {
            next[j] = next[j] + acc[j] * one_minus_y;
            next[j + 1] = next[j + 1] - acc[j];
        }
        if (next.empty()) next.resize(1);
        next[0] = next[0] + Poly::constant(q.coeffs()[i]);
        acc = std::move(next);
    }
    return acc;
}

// integral_0^{1-y} f(x, y) x^shift dx as a univariate polynomial in y.
Poly integrate_x_to_one_minus_y(const Poly2& f, unsigned shift) {
    Poly one_minus_y(std::vector<Rat>{Rat(1), Rat(-1)});
    // (1-y)^(shift+1), then climb one power per x-degree step.
    Poly pw = Poly::constant(Rat(1));
    for (unsigned i = 0; i < shift + 1; ++i) pw = pw * one_minus_y;
    Poly out;
    for (std::size_t i = 0; i < f.size(); ++i) {
        unsigned deg = static_cast<unsigned>(i) + shift;  // x-degree of term
        out = out + f[i] * pw * Rat(1, static_cast<long>(deg) + 1);
        pw = pw * one_minus_y;
    }
    return out;
}

// Quotient S with Q(y) = (y - B) S(y) + Q(B)  (synthetic division).
Poly divide_by_root(const Poly& Q, const Rat& B, Rat* value_at_B) {
    if (Q.is_zero()) {
        if (value_at_B) *value_at_B = 0;
        return Poly();
    }
    const auto& q = Q.coeffs();
    std::vector<Rat> s(q.size() - 1, Rat(0));
    Rat carry = q.back();
    for (std::size_t i = q.size() - 1; i-- > 0;) {
        s[i] = carry;
        carry = q[i] + B * carry;
    }
    if (value_at_B) *value_at_B = carry;
    return Poly(std::move(s));
}

// integral_{lo}^{hi} (1/y + 1/(B-y)) Q(y) dy exactly, for rational
// 0 <= lo < hi < B.  A nonzero Q(0) with lo = 0 diverges and is rejected.
ExactConstant outer_kernel(const Poly& Q, const Rat& B, const Rat& lo, const Rat& hi) {
    if (!(lo < hi)) throw PreconditionError("outer kernel: empty window");
    if (!(hi < B)) throw PreconditionError("outer kernel: window must stay below B");
    ExactConstant acc;

    // 1/y part: Q(y)/y = Q(0)/y + Qa(y).
    Rat q0 = Q.coeff(0);
    Poly Qa = divide_by_root(Q, Rat(0), nullptr);
    if (q0 != 0) {
        if (lo == 0) throw PreconditionError("outer kernel: divergent 1/y endpoint");
        acc = acc + ExactConstant::log_rational(hi / lo, q0);
    }
    acc = acc + ExactConstant(Qa.integrate(lo, hi));

    // 1/(B-y) part: Q(y) = Q(B) - (B-y) Qb(y).
    Rat qB;
    Poly Qb = divide_by_root(Q, B, &qB);
    if (qB != 0) acc = acc + ExactConstant::log_rational((B - lo) / (B - hi), qB);
    acc = acc - ExactConstant(Qb.integrate(lo, hi));
    return acc;
}

void check_kp(int k, const Poly& P) {
    if (k < 2) throw PreconditionError("j integrals: k must be at least 2");
    validate_sieve_polynomial(P);
}

// Q1(y) = integral_0^{1-y} (Pt(1-x) - Pt(1-x-y))^2 x^(k-2) dx.
Poly inner_difference_integral(int k, const Poly& P) {
    Poly Pt = P.antiderivative();
    Poly2 a1 = bivar_from_x_poly(Pt.compose_linear(Rat(1), Rat(-1)));
    Poly2 a2 = compose_one_minus_x_minus_y(Pt);
    Poly2 d = bivar_sub(a1, a2);
    Poly2 dsq = bivar_mul(d, d);
    return integrate_x_to_one_minus_y(dsq, static_cast<unsigned>(k - 2));
}

// Q2(y) = integral_{1-y}^1 Pt(1-x)^2 x^(k-2) dx = G(1) - G(1-y).
Poly inner_tail_integral(int k, const Poly& P) {
    Poly Pt = P.antiderivative();
    Poly f = Pt.compose_linear(Rat(1), Rat(-1));
    Poly integrand = f * f;
    // times x^(k-2)
    integrand = integrand * Poly::monomial(static_cast<unsigned>(k - 2), Rat(1));
    Poly G = integrand.antiderivative();
    Poly G_at_one_minus_y = G.compose_linear(Rat(1), Rat(-1));
    return Poly::constant(G.eval(Rat(1))) - G_at_one_minus_y;
}

void check_window_inputs(const Rat& B, const Rat& eta) {
    if (!(B > 2)) throw PreconditionError("j integrals: B must exceed 2");
    if (eta < 0) throw PreconditionError("j integrals: eta must be nonnegative");
}

}  // namespace

void JInputs::validate() const {
    check_kp(k, P);
    check_window_inputs(B, eta);
    if (nu < 0) throw PreconditionError("j integrals: nu must be nonnegative");
}

Rat j0(int k, const Poly& P) {
    check_kp(k, P);
    Poly f = P.compose_linear(Rat(1), Rat(-1));
    Poly integrand = f * f * Poly::monomial(static_cast<unsigned>(k - 1), Rat(1));
    return integrand.integrate(Rat(0), Rat(1));
}

Rat j_varpi(int k, const Poly& P) {
    check_kp(k, P);
    Poly Pt = P.antiderivative();
    Poly f = Pt.compose_linear(Rat(1), Rat(-1));
    Poly integrand = f * f * Poly::monomial(static_cast<unsigned>(k - 2), Rat(1));
    return integrand.integrate(Rat(0), Rat(1));
}

bool j_window_empty(const Rat& B, const Rat& eta) { return B * eta >= 1; }

ExactConstant j1(int k, const Rat& B, const Rat& eta, const Poly& P) {
    check_kp(k, P);
    check_window_inputs(B, eta);
    if (j_window_empty(B, eta)) return ExactConstant();
    Poly Q1 = inner_difference_integral(k, P);
    return outer_kernel(Q1, B, B * eta, Rat(1));
}

ExactConstant j2(int k, const Rat& B, const Rat& eta, const Poly& P) {
    check_kp(k, P);
    check_window_inputs(B, eta);
    if (j_window_empty(B, eta)) return ExactConstant();
    Poly Q2 = inner_tail_integral(k, P);
    return outer_kernel(Q2, B, B * eta, Rat(1));
}

ExactConstant j3(int k, const Rat& B, const Poly& P) {
    check_kp(k, P);
    if (!(B > 2)) throw PreconditionError("j integrals: B must exceed 2");
    return ExactConstant::log_rational(B - 1, j_varpi(k, P));
}

// The detection constant in the table normalization
//   J = k(k-1)/B * (J1 + J2 + J3 [+ J_varpi]) - nu * J0,
// which is (k-1)! times the raw combination
//   k/B (J1+J2+J3)/(k-2)! - nu J0/(k-1)!;
// the positive factor leaves the sign unchanged and matches the printed
// closed forms for both the k=3 and k=2 parameter sets.
ExactConstant j_total(const JInputs& in, bool with_primes) {
    in.validate();
    ExactConstant j123 = j1(in.k, in.B, in.eta, in.P) + j2(in.k, in.B, in.eta, in.P) +
                         j3(in.k, in.B, in.P);
    if (with_primes) j123 = j123 + ExactConstant(j_varpi(in.k, in.P));
    Rat front = Rat(in.k) * Rat(in.k - 1) / in.B;
    ExactConstant total = j123 * front;
    return total - ExactConstant(Rat(in.nu) * j0(in.k, in.P));
}

// ---------------------------------------------------------------------------
// Double-precision evaluation.  The exact route above expands the inner
// integrals into polynomials of degree ~k, which is prohibitive for the
// large-k scans; here everything is evaluated pointwise instead.  With
// u = 1 - x the inner integrals become integrals against the weight
// (1-u)^(k-2) on [0, 1], whose mass sits within O(1/k) of u = 0, so a
// Gauss-Legendre rule on the (possibly truncated) window is exact for the
// low-degree polynomial part and spectrally accurate overall.

namespace {

struct DPoly {
    std::vector<double> c;
    explicit DPoly(const Poly& p) {
        c.reserve(p.coeffs().size());
        for (const Rat& r : p.coeffs()) c.push_back(r.get_d());
    }
    double at(double x) const {
        double acc = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
        return acc;
    }
};

struct GaussRule {
    std::vector<double> x, w;  // nodes and weights on [0, 1]
};

// Newton iteration on the Legendre recurrence; nodes mapped to [0, 1].
GaussRule make_gauss(int n) {
    GaussRule r;
    r.x.assign(n, 0.0);
    r.w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 64; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
            }
            dp = n * (t * p0 - p1) / (t * t - 1.0);
            double step = p0 / dp;
            t -= step;
            if (std::abs(step) < 1e-15) break;
        }
        r.x[i] = 0.5 * (1.0 - t);
        r.x[n - 1 - i] = 0.5 * (1.0 + t);
        double wi = 1.0 / ((1.0 - t * t) * dp * dp);
        r.w[i] = wi;
        r.w[n - 1 - i] = wi;
    }
    return r;
}

const GaussRule& gauss_rule(int n) {
    static const GaussRule g48 = make_gauss(48);
    static const GaussRule g96 = make_gauss(96);
    return n == 48 ? g48 : g96;
}

// integral_0^upper F(u) (1-u)^m du for polynomial F of degree <= fdeg,
// 0 < upper <= 1.  A single 96-point rule integrates the product exactly
// while its degree stays below 192.  For larger m the integrand is a
// Beta-like bump peaking at u ~ fdeg/(m+fdeg) with width ~sqrt(fdeg)/m;
// the window is truncated where the bump has decayed past e^-45 relative
// and split so each panel sees a bounded number of e-folds.
template <class F>
double weighted_tail_integral(F&& f, double m, double upper, int fdeg) {
    if (!(upper > 0.0)) return 0.0;
    auto panel = [&](double a, double b, const GaussRule& g) {
        double acc = 0.0;
        const double h = b - a;
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            const double u = a + h * g.x[i];
            acc += g.w[i] * f(u) * std::pow(1.0 - u, m);
        }
        return acc * h;
    };
    if (m + fdeg <= 190.0) return panel(0.0, upper, gauss_rule(96));
    const double a = static_cast<double>(fdeg);
    const double w =
        std::min(upper, (a + 10.0 * std::sqrt(a) + 60.0) / (m + a + 1.0));
    const int n =
        std::max(4, static_cast<int>(std::ceil((m + a) * w / 24.0)));
    const GaussRule& g = gauss_rule(48);
    double acc = 0.0;
    for (int s = 0; s < n; ++s)
        acc += panel(w * s / n, w * (s + 1) / n, g);
    return acc;
}

// Q1(y) = integral_0^{1-y} (Pt(1-x) - Pt(1-x-y))^2 x^(k-2) dx
//       = (1-y)^(k-1) integral_0^1 G(s)^2 (1-s)^(k-2) ds,
// G(s) = Pt(y + (1-y)s) - Pt((1-y)s).  Pointwise differences keep the
// evaluation stable where expanded coefficients would cancel.
double q1_at(const DPoly& pt, int k, double y) {
    const double c = 1.0 - y;
    const double scale = std::pow(c, k - 1);
    if (y <= 0.0 || scale == 0.0) return 0.0;
    auto f = [&](double s) {
        const double d = pt.at(y + c * s) - pt.at(c * s);
        return d * d;
    };
    const int fdeg = 2 * (static_cast<int>(pt.c.size()) - 1);
    return scale * weighted_tail_integral(f, static_cast<double>(k - 2), 1.0, fdeg);
}

// Q2(y) = integral_{1-y}^1 Pt(1-x)^2 x^(k-2) dx
//       = integral_0^y Pt(u)^2 (1-u)^(k-2) du.
double q2_at(const DPoly& pt, int k, double y) {
    auto f = [&](double u) {
        const double v = pt.at(u);
        return v * v;
    };
    const int fdeg = 2 * (static_cast<int>(pt.c.size()) - 1);
    return weighted_tail_integral(f, static_cast<double>(k - 2), y, fdeg);
}

template <class F>
double adapt(F& f, double a, double m, double b, double fa, double fm, double fb,
             double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adapt(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adapt(f, a, m, b, fa, fm, fb, whole, std::max(tol, 1e-280), 20);
}

// integral_lo^1 (1/y + 1/(B-y)) Q(y) dy.  The integrand vanishes at y = 0
// (Q = O(y^2) there) and decays like (1-y)^(k-1) past y ~ 1/k, so the
// window is pre-split geometrically before the adaptive passes.
template <class Q>
double outer_integral(Q&& qfun, int k, double B, double lo) {
    const double hi = 1.0;
    auto g = [&](double y) {
        if (y <= 0.0) return 0.0;
        return (1.0 / y + 1.0 / (B - y)) * qfun(y);
    };
    std::vector<double> cuts{lo};
    for (double step = 0.5 / k; lo + step < hi; step *= 2.0) cuts.push_back(lo + step);
    cuts.push_back(hi);
    double scale = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        scale += std::abs((b - a) / 6.0 *
                          (g(a) + 4.0 * g(0.5 * (a + b)) + g(b)));
    }
    const double tol = 1e-11 * scale / static_cast<double>(cuts.size());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        acc += adaptive_simpson(g, cuts[i], cuts[i + 1], tol);
    return acc;
}

}  // namespace

double j1_numeric(int k, double B, double eta, const Poly& P) {
    check_kp(k, P);
    if (!(B > 2.0)) throw PreconditionError("j integrals: B must exceed 2");
    if (eta < 0.0) throw PreconditionError("j integrals: eta must be nonnegative");
    if (B * eta >= 1.0) return 0.0;
    DPoly pt(P.antiderivative());
    return outer_integral([&](double y) { return q1_at(pt, k, y); }, k, B, B * eta);
}

double j2_numeric(int k, double B, double eta, const Poly& P) {
    check_kp(k, P);
    if (!(B > 2.0)) throw PreconditionError("j integrals: B must exceed 2");
    if (eta < 0.0) throw PreconditionError("j integrals: eta must be nonnegative");
    if (B * eta >= 1.0) return 0.0;
    DPoly pt(P.antiderivative());
    return outer_integral([&](double y) { return q2_at(pt, k, y); }, k, B, B * eta);
}

double j3_numeric(int k, double B, const Poly& P) {
    check_kp(k, P);
    if (!(B > 2.0)) throw PreconditionError("j integrals: B must exceed 2");
    DPoly pt(P.antiderivative());
    const double jv = weighted_tail_integral(
        [&](double u) {
            const double v = pt.at(u);
            return v * v;
        },
        static_cast<double>(k - 2), 1.0,
        2 * (static_cast<int>(pt.c.size()) - 1));
    return jv * std::log(B - 1.0);
}

double j_total_numeric(int k, double B, double eta, int nu, const Poly& P, bool with_primes) {
    check_kp(k, P);
    if (!(B > 2.0)) throw PreconditionError("j integrals: B must exceed 2");
    if (eta < 0.0) throw PreconditionError("j integrals: eta must be nonnegative");
    DPoly pd(P);
    DPoly pt(P.antiderivative());
    const bool empty = B * eta >= 1.0;
    const double m = static_cast<double>(k - 2);
    const double jv = weighted_tail_integral(
        [&](double u) {
            const double v = pt.at(u);
            return v * v;
        },
        m, 1.0, 2 * (static_cast<int>(pt.c.size()) - 1));
    double j123 = jv * std::log(B - 1.0);
    if (!empty) {
        j123 += outer_integral([&](double y) { return q1_at(pt, k, y); }, k, B, B * eta);
        j123 += outer_integral([&](double y) { return q2_at(pt, k, y); }, k, B, B * eta);
    }
    if (with_primes) j123 += jv;
    const double j0n = weighted_tail_integral(
        [&](double u) {
            const double v = pd.at(u);
            return v * v;
        },
        static_cast<double>(k - 1), 1.0, 2 * (static_cast<int>(pd.c.size()) - 1));
    return static_cast<double>(k) * (k - 1) / B * j123 - nu * j0n;
}

Rat beta_moment(unsigned m, unsigned n) {
    return Rat(factorial(m)) * Rat(factorial(n)) / Rat(factorial(m + n + 1));
}

Rat a_kl(unsigned k, unsigned l) {
    return Rat(binomial(2 * l + 2, l + 1)) / Rat(factorial(k + 2 * l + 1));
}

Rat a0_kl(unsigned k, unsigned l) {
    return Rat(binomial(2 * l, l)) / Rat(factorial(k + 2 * l));
}

Rat harmonic_l(unsigned n) {
    Rat s(0);
    for (unsigned i = 1; i <= n; ++i) s += Rat(1, static_cast<long>(i));
    return s;
}

Rat c_ell(unsigned l) {
    Rat sum(0);
    Rat prod(1);
    for (unsigned j = 1; j <= l + 1; ++j) {
        // after this step prod = prod_{i=0}^{j-1} (l+1-i)/(2l+2-i)
        prod *= make_rat(static_cast<long>(l + 1 - (j - 1)), static_cast<long>(2 * l + 2 - (j - 1)));
        sum += prod / Rat(static_cast<long>(j));
    }
    return sum;
}

double asymptotic_j_main(unsigned k, unsigned l, double B) {
    if (!(B > 2.0)) throw PreconditionError("j integrals: B must exceed 2");
    double a = a_kl(k, l).get_d();
    return a * std::log(B * std::exp(std::numbers::egamma) * static_cast<double>(k) / 4.0);
}

double asymptotic_ratio(unsigned k, unsigned l, const Rat& B) {
    if (k < 2) throw PreconditionError("j integrals: k must be at least 2");
    Poly P = Poly::monomial(l, Rat(1) / Rat(factorial(l)));
    const double b = B.get_d();
    const double j123 = j1_numeric(static_cast<int>(k), b, 0.0, P) +
                        j2_numeric(static_cast<int>(k), b, 0.0, P) +
                        j3_numeric(static_cast<int>(k), b, P);
    if (!(j123 > 0.0)) return 0.0;
    // (k-2)! * A(k,l) spans ~10^{+-200} across the supported k, so the
    // division has to happen in log space.
    const double log_akl = std::lgamma(2.0 * l + 3.0) - 2.0 * std::lgamma(l + 2.0) -
                           std::lgamma(static_cast<double>(k) + 2.0 * l + 2.0);
    const double log_numer = std::log(j123) - std::lgamma(static_cast<double>(k) - 1.0) - log_akl;
    const double denom =
        std::log(b * std::exp(std::numbers::egamma) * static_cast<double>(k) / 4.0);
    return std::exp(log_numer) / denom;
}

}  // namespace e2sieve
