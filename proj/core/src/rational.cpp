#include "e2sieve/rational.hpp"

#include <cctype>
#include <cmath>

namespace e2sieve {

namespace {

Int int_from_string(const std::string& s) {
    if (s.empty()) throw PreconditionError("rational: empty component");
    std::size_t start = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    if (start == s.size()) throw PreconditionError("rational: malformed '" + s + "'");
    for (std::size_t i = start; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            throw PreconditionError("rational: malformed '" + s + "'");
    Int v;
    if (mpz_set_str(v.get_mpz_t(), s.c_str() + (s[0] == '+' ? 1 : 0), 10) != 0)
        throw PreconditionError("rational: malformed '" + s + "'");
    return v;
}

}  // namespace

Rat rat_from_string(const std::string& s) {
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    if (t.empty()) throw PreconditionError("rational: empty string");
    std::size_t slash = t.find('/');
    Int num, den;
    if (slash == std::string::npos) {
        num = int_from_string(t);
        den = 1;
    } else {
        num = int_from_string(t.substr(0, slash));
        den = int_from_string(t.substr(slash + 1));
    }
    if (den == 0) throw PreconditionError("rational: zero denominator in '" + s + "'");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

std::string rat_to_string(const Rat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Int factorial(unsigned long n) {
    Int r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

Int binomial(unsigned long n, unsigned long k) {
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

std::uint64_t isqrt_u64(std::uint64_t n) {
    if (n == 0) return 0;
    std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r > n / r) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

}  // namespace e2sieve
