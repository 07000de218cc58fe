#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace dofkit {

using Rational = mpq_class;

// Always "p/q", including integers ("4/1"), so equality checks can be string based.
std::string to_string(const Rational& q);

// Accepts "p/q" or a bare integer.
Rational parse_rational(std::string_view text);

double to_double(const Rational& q);

} // namespace dofkit
