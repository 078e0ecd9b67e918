#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace omts
{

using Rational = mpq_class;

// Raised for malformed models, files and arguments. The CLI maps it to exit code 1.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Accepts "p/q", "p" and finite decimals such as "-1.25".
Rational parse_rational(std::string_view text);

// Canonical "numerator/denominator" rendering, always reduced, e.g. "1/1", "-3/2".
std::string to_string(const Rational& value);

// Fixed-point decimal rendering, truncated toward zero.
std::string to_decimal(const Rational& value, int digits);

// num/den in lowest terms; den must be non-zero.
Rational ratio(long num, long den);

Rational abs(const Rational& value);

// Floor of a rational as a rational integer.
Rational floor(const Rational& value);

} // namespace omts
