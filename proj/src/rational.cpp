#include "bgf/rational.hpp"

#include <cctype>
#include <string>

#include "bgf/error.hpp"

namespace bgf {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  if (!is_integer_literal(s)) {
    throw Error(ErrorKind::invalid_argument, "malformed rational '" + std::string(whole) + "'");
  }
  if (s.front() == '+') s.remove_prefix(1);
  return mpz_class(std::string(s));
}

}  // namespace

Rat parse_rat(std::string_view text) {
  const std::string_view s = trim(text);
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const mpz_class num = parse_integer(trim(s.substr(0, slash)), s);
    const mpz_class den = parse_integer(trim(s.substr(slash + 1)), s);
    if (den == 0) throw Error(ErrorKind::invalid_argument, "zero denominator in '" + std::string(s) + "'");
    Rat r(num, den);
    r.canonicalize();
    return r;
  }
  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    // Exact decimal: "-1.25" -> -125/100.
    std::string digits(s.substr(0, dot));
    const std::string_view frac = s.substr(dot + 1);
    if (frac.empty() || !is_integer_literal(frac) || frac.front() == '-' || frac.front() == '+') {
      throw Error(ErrorKind::invalid_argument, "malformed rational '" + std::string(s) + "'");
    }
    if (digits.empty() || digits == "-" || digits == "+") digits += "0";
    const mpz_class whole = parse_integer(digits, s);
    mpz_class scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    mpz_class num = whole * scale;
    const mpz_class f{std::string(frac)};
    const bool negative = digits.front() == '-';
    num += negative ? mpz_class(-f) : f;
    Rat r(num, scale);
    r.canonicalize();
    return r;
  }
  return Rat(parse_integer(s, s));
}

std::vector<Rat> parse_rat_list(std::string_view text) {
  std::vector<Rat> out;
  std::string_view rest = trim(text);
  if (rest.empty()) return out;
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(parse_rat(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

std::string to_string(const Rat& value) { return value.get_str(); }

Rat frac(long num, long den) {
  if (den == 0) throw Error(ErrorKind::invalid_argument, "zero denominator");
  Rat r{mpz_class(num), mpz_class(den)};
  r.canonicalize();
  return r;
}

Rat pow(const Rat& base, int exponent) {
  Rat result = 1;
  if (exponent < 0) {
    if (base == 0) throw Error(ErrorKind::invalid_argument, "zero to a negative power");
    return pow(Rat(1 / base), -exponent);
  }
  Rat b = base;
  while (exponent > 0) {
    if (exponent & 1) result *= b;
    b *= b;
    exponent >>= 1;
  }
  return result;
}

Rat power_sum(std::span<const Rat> values, int k) {
  Rat sum = 0;
  for (const Rat& v : values) sum += pow(v, k);
  return sum;
}

double to_double(const Rat& value) { return value.get_d(); }

}  // namespace bgf
