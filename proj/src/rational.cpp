#include "connshare/rational.hpp"

#include <cctype>

namespace connshare {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void bad_literal(std::string_view text) {
  throw std::invalid_argument("not an exact numeric literal: \"" + std::string(text) + "\"");
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational result;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) bad_literal(text);
    const mpz_class d{std::string(den)};
    if (d == 0) throw std::invalid_argument("zero denominator in \"" + std::string(text) + "\"");
    result = Rational(mpz_class{std::string(num)}, d);
  } else {
    auto dot = body.find('.');
    auto whole = body.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
    if (whole.empty() && frac.empty()) bad_literal(text);
    if (!whole.empty() && !all_digits(whole)) bad_literal(text);
    if (dot != std::string_view::npos && !frac.empty() && !all_digits(frac)) bad_literal(text);
    if (dot != std::string_view::npos && frac.empty() && whole.empty()) bad_literal(text);
    mpz_class num{whole.empty() ? std::string("0") : std::string(whole)};
    mpz_class den = 1;
    for (char c : frac) {
      num = num * 10 + (c - '0');
      den *= 10;
    }
    result = Rational(num, den);
  }
  result.canonicalize();
  if (negative) result = -result;
  return result;
}

std::string to_string(const Rational& value) {
  Rational v = value;
  v.canonicalize();
  if (v.get_den() == 1) return v.get_num().get_str();
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

std::string to_decimal(const Rational& value, int places) {
  mpz_class scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  const bool negative = sgn(value) < 0;
  Rational magnitude = abs(value);
  // floor(|v| * scale + 1/2)
  mpz_class twice = magnitude.get_num() * scale * 2 + magnitude.get_den();
  mpz_class scaled = twice / (magnitude.get_den() * 2);
  std::string digits = scaled.get_str();
  if (places > 0) {
    if (digits.size() <= static_cast<std::size_t>(places)) {
      digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
  }
  if (negative && scaled != 0) digits.insert(0, "-");
  return digits;
}

}  // namespace connshare
