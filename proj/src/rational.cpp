#include "ogt/rational.hpp"

#include "ogt/errors.hpp"

#include <cctype>

namespace ogt {

BigInt floor_of(const Rational& x) {
  const BigInt num = boost::multiprecision::numerator(x);
  const BigInt den = boost::multiprecision::denominator(x);
  BigInt q = num / den;  // truncates toward zero, den > 0
  if (num % den != 0 && num < 0) q -= 1;
  return q;
}

BigInt ceil_of(const Rational& x) {
  const BigInt f = floor_of(x);
  return Rational(f) == x ? f : f + 1;
}

std::int64_t floor_i64(const Rational& x) { return floor_of(x).convert_to<std::int64_t>(); }
std::int64_t ceil_i64(const Rational& x) { return ceil_of(x).convert_to<std::int64_t>(); }

bool is_integer(const Rational& x) { return boost::multiprecision::denominator(x) == 1; }

std::string to_string(const Rational& x) {
  const BigInt den = boost::multiprecision::denominator(x);
  if (den == 1) return boost::multiprecision::numerator(x).str();
  return boost::multiprecision::numerator(x).str() + "/" + den.str();
}

double to_double(const Rational& x) { return x.convert_to<double>(); }

namespace {

BigInt parse_integer(std::string_view s, std::string_view whole) {
  if (s.empty()) throw InputError("malformed rational '" + std::string(whole) + "'");
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw InputError("malformed rational '" + std::string(whole) + "'");
  BigInt v = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw InputError("malformed rational '" + std::string(whole) + "'");
    v = v * 10 + (s[i] - '0');
  }
  return neg ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const BigInt num = parse_integer(text.substr(0, slash), text);
    const BigInt den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool neg = !int_part.empty() && int_part[0] == '-';
    if (int_part.empty() || int_part == "-" || int_part == "+") int_part = "0";
    const BigInt ip = parse_integer(int_part, text);
    BigInt scale = 1;
    BigInt fp = 0;
    for (char c : frac) {
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw InputError("malformed rational '" + std::string(text) + "'");
      fp = fp * 10 + (c - '0');
      scale *= 10;
    }
    Rational mag = Rational(boost::multiprecision::abs(ip)) + Rational(fp, scale);
    return neg ? Rational(-mag) : mag;
  }
  return Rational(parse_integer(text, text));
}

}  // namespace ogt
