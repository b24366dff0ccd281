#include "e2sieve/tuple_parse.hpp"

#include <cstdint>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "e2sieve/errors.hpp"

namespace e2sieve {

namespace {

// coefficient? ('*'?) 'n' (sign constant)?  — whitespace-tolerant.
const std::regex kFormPattern(
    R"(^\s*(\d+)?\s*\*?\s*n\s*(?:([+-])\s*(\d+))?\s*$)");

std::int64_t checked_parse(const std::string& digits, const std::string& whole) {
    try {
        return std::stoll(digits);
    } catch (const std::out_of_range&) {
        throw PreconditionError("integer out of range in form '" + whole + "'");
    }
}

}  // namespace

LinearForm parse_form(const std::string& text) {
    std::smatch m;
    if (!std::regex_match(text, m, kFormPattern)) {
        throw PreconditionError("cannot parse linear form '" + text +
                                "'; expected \"a*n+b\" such as n, n+2, 2n+1");
    }
    LinearForm f;
    f.a = m[1].matched ? checked_parse(m[1].str(), text) : 1;
    if (m[2].matched) {
        f.b = checked_parse(m[3].str(), text);
        if (m[2].str() == "-") f.b = -f.b;
    }
    return f;
}

LinearTuple parse_tuple(const std::string& text) {
    std::vector<LinearForm> forms;
    std::string piece;
    std::istringstream in(text);
    while (std::getline(in, piece, ',')) forms.push_back(parse_form(piece));
    if (!text.empty() && text.back() == ',')
        throw PreconditionError("trailing comma in tuple '" + text + "'");
    return LinearTuple(std::move(forms));
}

std::string form_to_string(const LinearForm& f) {
    std::ostringstream out;
    if (f.a != 1) out << f.a;
    out << 'n';
    if (f.b > 0) out << '+' << f.b;
    if (f.b < 0) out << f.b;
    return out.str();
}

std::string tuple_to_string(const LinearTuple& t) {
    std::ostringstream out;
    for (std::size_t i = 0; i < t.forms().size(); ++i) {
        if (i) out << ',';
        out << form_to_string(t.forms()[i]);
    }
    return out.str();
}

}  // namespace e2sieve
