#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace lieforge {

using Rational = mpq_class;
using Integer = mpz_class;

// Accepts "p", "p/q" with optional sign. Throws std::invalid_argument on
// malformed text or a zero denominator. Result is canonicalized.
Rational parse_rational(std::string_view text);

// Always "p/q"; integers get an explicit "/1".
std::string format_rational(const Rational& r);

}  // namespace lieforge
