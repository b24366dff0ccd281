#pragma once

#include <string>

#include "e2sieve/linear_forms.hpp"

namespace e2sieve {

// Parses one linear form written as "a*n+b" with optional pieces: the
// coefficient (with or without '*'), the constant term, and surrounding
// whitespace.  Accepts "n", "n+2", "2n+1", "48*n - 7".  Throws
// PreconditionError on anything else.
LinearForm parse_form(const std::string& text);

// Parses a comma-separated list of forms, e.g. "n,n+2,n+6".
LinearTuple parse_tuple(const std::string& text);

// Renders a form back to the canonical literal syntax ("2n+3", "n", "n+6").
std::string form_to_string(const LinearForm& f);

// Comma-separated rendering of all forms.
std::string tuple_to_string(const LinearTuple& t);

}  // namespace e2sieve
