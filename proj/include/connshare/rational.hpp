#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace connshare {

/// Exact rational number; every cost, budget and share in the library uses it.
using Rational = mpq_class;

/// Parses "12", "-3", "6.5", ".25", "13/2" exactly. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Canonical lowest-terms form: "13/2", "-4", "0".
std::string to_string(const Rational& value);

/// Fixed-point rendering rounded half away from zero, e.g. "3.166667".
std::string to_decimal(const Rational& value, int places = 6);

}  // namespace connshare
