#pragma once

#include <gmpxx.h>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bgf {

// Exact rational number. GMP keeps every value canonical: lowest terms,
// positive denominator.
using Rat = mpq_class;

// Parses "p/q", "p", or a plain decimal like "0.25" into an exact rational.
// Throws Error(invalid_argument) on malformed input or a zero denominator.
Rat parse_rat(std::string_view text);

// Comma separated list of rationals ("1/2,3,-4/5").
std::vector<Rat> parse_rat_list(std::string_view text);

// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rat& value);

// num/den in lowest terms; den != 0.
Rat frac(long num, long den);

Rat pow(const Rat& base, int exponent);

// Sum of a_i^k.
Rat power_sum(std::span<const Rat> values, int k);

double to_double(const Rat& value);

}  // namespace bgf
