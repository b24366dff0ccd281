#include "e2sieve/exact_constant.hpp"

#include <mpfr.h>

#include <sstream>

#include "e2sieve/errors.hpp"
#include "e2sieve/primes.hpp"

namespace e2sieve {

ExactConstant::ExactConstant(Rat rational) : rational_(std::move(rational)) {}

void ExactConstant::prune() {
    for (auto it = logs_.begin(); it != logs_.end();) {
        if (it->second == 0)
            it = logs_.erase(it);
        else
            ++it;
    }
}

ExactConstant ExactConstant::log_prime(std::uint64_t p, const Rat& coeff) {
    if (!is_prime_u64(p)) throw PreconditionError("exact constant: log base must be prime");
    ExactConstant c;
    if (coeff != 0) c.logs_[p] = coeff;
    return c;
}

ExactConstant ExactConstant::log_rational(const Rat& q, const Rat& coeff) {
    if (q <= 0) throw PreconditionError("exact constant: log of nonpositive rational");
    ExactConstant c;
    if (coeff == 0) return c;
    Int num = q.get_num(), den = q.get_den();
    if (!num.fits_ulong_p() || !den.fits_ulong_p())
        throw ResourceError("exact constant: log argument too large to factor");
    for (auto& [p, e] : factorize_u64(num.get_ui()))
        c.logs_[p] += coeff * Rat(static_cast<long>(e));
    for (auto& [p, e] : factorize_u64(den.get_ui()))
        c.logs_[p] -= coeff * Rat(static_cast<long>(e));
    c.prune();
    return c;
}

ExactConstant ExactConstant::operator+(const ExactConstant& o) const {
    ExactConstant r = *this;
    r.rational_ += o.rational_;
    for (auto& [p, c] : o.logs_) r.logs_[p] += c;
    r.prune();
    return r;
}

ExactConstant ExactConstant::operator-(const ExactConstant& o) const {
    ExactConstant r = *this;
    r.rational_ -= o.rational_;
    for (auto& [p, c] : o.logs_) r.logs_[p] -= c;
    r.prune();
    return r;
}

ExactConstant ExactConstant::operator-() const {
    ExactConstant r;
    r.rational_ = -rational_;
    for (auto& [p, c] : logs_) r.logs_[p] = -c;
    return r;
}

ExactConstant ExactConstant::operator*(const Rat& s) const {
    ExactConstant r;
    if (s == 0) return r;
    r.rational_ = rational_ * s;
    for (auto& [p, c] : logs_) r.logs_[p] = c * s;
    return r;
}

bool ExactConstant::operator==(const ExactConstant& o) const {
    return rational_ == o.rational_ && logs_ == o.logs_;
}

namespace {

// Evaluates r + sum c_p log p at the given precision with round-to-nearest;
// |result - true| <= (#terms + 2) * ulp-scale, folded into `slack` below.
void eval_mpfr(mpfr_t out, const Rat& rational, const std::map<std::uint64_t, Rat>& logs,
               mpfr_prec_t prec) {
    mpfr_set_prec(out, prec);
    mpfr_set_q(out, rational.get_mpq_t(), MPFR_RNDN);
    mpfr_t lg, term;
    mpfr_init2(lg, prec);
    mpfr_init2(term, prec);
    for (auto& [p, c] : logs) {
        mpfr_set_ui(lg, static_cast<unsigned long>(p), MPFR_RNDN);
        mpfr_log(lg, lg, MPFR_RNDN);
        mpfr_set_q(term, c.get_mpq_t(), MPFR_RNDN);
        mpfr_mul(term, term, lg, MPFR_RNDN);
        mpfr_add(out, out, term, MPFR_RNDN);
    }
    mpfr_clear(lg);
    mpfr_clear(term);
}

}  // namespace

int ExactConstant::sign() const {
    if (is_zero()) return 0;
    if (logs_.empty()) return rational_ < 0 ? -1 : 1;

    // Magnitude bound M >= every intermediate of the evaluation: the
    // all-positive sum |r| + sum |c_p| log p, rounded up.
    mpfr_t mag, lg, term;
    mpfr_init2(mag, 64);
    mpfr_init2(lg, 64);
    mpfr_init2(term, 64);
    mpfr_set_q(mag, rational_.get_mpq_t(), MPFR_RNDU);
    mpfr_abs(mag, mag, MPFR_RNDU);
    for (auto& [p, c] : logs_) {
        mpfr_set_ui(lg, static_cast<unsigned long>(p), MPFR_RNDU);
        mpfr_log(lg, lg, MPFR_RNDU);
        Rat ac = c < 0 ? Rat(-c) : c;
        mpfr_set_q(term, ac.get_mpq_t(), MPFR_RNDU);
        mpfr_mul(term, term, lg, MPFR_RNDU);
        mpfr_add(mag, mag, term, MPFR_RNDU);
    }
    mpfr_clear(lg);
    mpfr_clear(term);

    mpfr_t v, slack, av;
    mpfr_init2(v, 128);
    mpfr_init2(slack, 64);
    mpfr_init2(av, 64);
    int result = 0;
    bool decided = false;
    for (mpfr_prec_t prec = 128; prec <= (1 << 20) && !decided; prec *= 2) {
        eval_mpfr(v, rational_, logs_, prec);
        // Each of the ~2*#logs + 1 rounded operations errs by at most one
        // ulp of a quantity bounded by M, so the total error is below
        // (2*#logs + 4) * M * 2^(1 - prec).
        mpfr_set(slack, mag, MPFR_RNDU);
        mpfr_mul_ui(slack, slack, static_cast<unsigned long>(2 * logs_.size() + 4), MPFR_RNDU);
        mpfr_mul_2si(slack, slack, 1 - static_cast<long>(prec), MPFR_RNDU);
        mpfr_abs(av, v, MPFR_RNDD);
        if (mpfr_cmp(av, slack) > 0) {
            result = mpfr_sgn(v);
            decided = true;
        }
        // Otherwise not yet separated from zero; a nonzero value separates
        // at some precision (log p linearly independent over Q): double up.
    }
    mpfr_clear(mag);
    mpfr_clear(v);
    mpfr_clear(slack);
    mpfr_clear(av);
    if (!decided) throw ResourceError("exact constant: sign undecided at maximum precision");
    return result;
}

double ExactConstant::numeric() const {
    mpfr_t v;
    mpfr_init2(v, 192);
    eval_mpfr(v, rational_, logs_, 192);
    double d = mpfr_get_d(v, MPFR_RNDN);
    mpfr_clear(v);
    return d;
}

std::string ExactConstant::numeric_string(unsigned digits) const {
    mpfr_prec_t prec = static_cast<mpfr_prec_t>(digits * 4 + 64);
    mpfr_t v;
    mpfr_init2(v, prec);
    eval_mpfr(v, rational_, logs_, prec);
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", static_cast<int>(digits), v);
    std::string out(s);
    mpfr_free_str(s);
    mpfr_clear(v);
    return out;
}

std::string ExactConstant::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    auto emit = [&](const Rat& c, const std::string& unit) {
        Rat a = c < 0 ? Rat(-c) : c;
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        if (unit.empty()) {
            os << rat_to_string(a);
        } else {
            if (a != 1) os << rat_to_string(a) << "*";
            os << unit;
        }
    };
    if (rational_ != 0) emit(rational_, "");
    for (auto& [p, c] : logs_) emit(c, "log(" + std::to_string(p) + ")");
    return os.str();
}

}  // namespace e2sieve
