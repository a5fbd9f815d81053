#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace ogt {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational ratio(std::int64_t num, std::int64_t den) { return Rational(num, den); }

BigInt floor_of(const Rational& x);
BigInt ceil_of(const Rational& x);
std::int64_t floor_i64(const Rational& x);
std::int64_t ceil_i64(const Rational& x);
bool is_integer(const Rational& x);

/// "p/q" (or "p" when q == 1).
std::string to_string(const Rational& x);

/// Accepts "p/q", integers and finite decimals such as "0.25" or "-1.5".
Rational parse_rational(std::string_view text);

double to_double(const Rational& x);

}  // namespace ogt
