#include "e2sieve/polynomial.hpp"

#include <algorithm>
#include <sstream>

#include "e2sieve/errors.hpp"

namespace e2sieve {

Poly::Poly(std::vector<Rat> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void Poly::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Poly Poly::constant(const Rat& c) { return Poly(std::vector<Rat>{c}); }

Poly Poly::monomial(unsigned degree, const Rat& coeff) {
    std::vector<Rat> cs(degree + 1, Rat(0));
    cs[degree] = coeff;
    return Poly(std::move(cs));
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<Rat> cs(std::max(coeffs_.size(), o.coeffs_.size()), Rat(0));
    for (std::size_t i = 0; i < cs.size(); ++i) cs[i] = coeff(i) + o.coeff(i);
    return Poly(std::move(cs));
}

Poly Poly::operator-(const Poly& o) const {
    std::vector<Rat> cs(std::max(coeffs_.size(), o.coeffs_.size()), Rat(0));
    for (std::size_t i = 0; i < cs.size(); ++i) cs[i] = coeff(i) - o.coeff(i);
    return Poly(std::move(cs));
}

Poly Poly::operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly();
    std::vector<Rat> cs(coeffs_.size() + o.coeffs_.size() - 1, Rat(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j) cs[i + j] += coeffs_[i] * o.coeffs_[j];
    return Poly(std::move(cs));
}

Poly Poly::operator*(const Rat& s) const {
    std::vector<Rat> cs(coeffs_);
    for (Rat& c : cs) c *= s;
    return Poly(std::move(cs));
}

Rat Poly::eval(const Rat& x) const {
    Rat acc(0);
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
    return acc;
}

double Poly::eval_double(double x) const {
    double acc = 0.0;
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i].get_d();
    return acc;
}

Poly Poly::derivative() const {
    if (coeffs_.size() <= 1) return Poly();
    std::vector<Rat> cs(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
        cs[i - 1] = coeffs_[i] * Rat(static_cast<long>(i));
    return Poly(std::move(cs));
}

Poly Poly::antiderivative() const {
    if (is_zero()) return Poly();
    std::vector<Rat> cs(coeffs_.size() + 1, Rat(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        cs[i + 1] = coeffs_[i] / Rat(static_cast<long>(i + 1));
    return Poly(std::move(cs));
}

Rat Poly::integrate(const Rat& lo, const Rat& hi) const {
    Poly F = antiderivative();
    return F.eval(hi) - F.eval(lo);
}

Poly Poly::compose_linear(const Rat& c0, const Rat& c1) const {
    Poly lin(std::vector<Rat>{c0, c1});
    Poly acc;
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * lin + Poly::constant(coeffs_[i]);
    return acc;
}

std::string Poly::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        const Rat& c = coeffs_[i];
        if (c == 0) continue;
        Rat a = c < 0 ? Rat(-c) : c;
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        bool unit = (a == 1);
        if (i == 0 || !unit) os << rat_to_string(a);
        if (i >= 1) {
            if (!unit) os << "*";
            os << "x";
            if (i >= 2) os << "^" << i;
        }
    }
    return os.str();
}

Poly poly_from_csv(const std::string& csv) {
    std::vector<Rat> cs;
    std::string item;
    std::istringstream is(csv);
    while (std::getline(is, item, ',')) cs.push_back(rat_from_string(item));
    if (cs.empty()) throw PreconditionError("polynomial: empty coefficient list");
    return Poly(std::move(cs));
}

void validate_sieve_polynomial(const Poly& p) {
    if (p.is_zero()) throw PreconditionError("sieve polynomial: must be nonzero");
    if (p.degree() > 32) throw PreconditionError("sieve polynomial: degree exceeds 32");
}

}  // namespace e2sieve
