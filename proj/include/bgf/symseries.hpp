#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>

#include "bgf/partition.hpp"
#include "bgf/rational.hpp"

namespace bgf {

enum class Basis { power, monomial, elementary };

const char* to_string(Basis basis);

// Truncated graded symmetric function: a finite combination of basis
// elements b_lambda with |lambda| <= truncation degree. The empty partition
// carries the constant term. Zero coefficients are never stored.
class SymSeries {
 public:
  using Coeffs = std::map<Partition, Rat>;

  SymSeries(Basis basis, int truncation_degree);

  static SymSeries constant(Basis basis, int truncation_degree, const Rat& value);
  static SymSeries single(Basis basis, int truncation_degree, const Partition& lambda,
                          const Rat& coeff = 1);

  Basis basis() const noexcept { return basis_; }
  int truncation_degree() const noexcept { return degree_; }
  const Coeffs& coeffs() const noexcept { return coeffs_; }

  Rat coeff(const Partition& lambda) const;
  Rat constant_term() const { return coeff(Partition{}); }
  bool is_zero() const noexcept { return coeffs_.empty(); }

  // Adds to the coefficient of lambda. Throws if |lambda| exceeds the truncation.
  void add(const Partition& lambda, const Rat& value);
  void set(const Partition& lambda, const Rat& value);

  // Drops every term of degree > d; the new truncation is min(d, current).
  SymSeries truncated(int d) const;
  SymSeries homogeneous_part(int d) const;
  // Largest |lambda| with a nonzero coefficient, or -1 for the zero series.
  int max_degree() const;

  SymSeries& operator+=(const SymSeries& other);
  SymSeries& operator-=(const SymSeries& other);
  SymSeries& operator*=(const Rat& scalar);

  friend SymSeries operator+(SymSeries lhs, const SymSeries& rhs) { return lhs += rhs; }
  friend SymSeries operator-(SymSeries lhs, const SymSeries& rhs) { return lhs -= rhs; }
  friend SymSeries operator*(SymSeries lhs, const Rat& s) { return lhs *= s; }
  friend SymSeries operator*(const Rat& s, SymSeries rhs) { return rhs *= s; }

  bool operator==(const SymSeries& other) const = default;

  // "1 + 5/2 p(1,1) - p(2)" style rendering for diagnostics.
  std::string to_string() const;

 private:
  Basis basis_;
  int degree_;
  Coeffs coeffs_;
};

// Product truncated at the smaller truncation degree. Power-sum and
// elementary bases multiply by merging partitions; monomial products go
// through the power-sum basis.
SymSeries multiply(const SymSeries& lhs, const SymSeries& rhs);

// Re-expresses s in the target basis. num_vars = N (finite) requires
// truncation_degree <= N, since only then are power sums of degree <= N
// algebraically independent in N variables; nullopt means unbounded
// variables.
SymSeries basis_convert(const SymSeries& s, Basis target,
                        std::optional<int> num_vars = std::nullopt);

// Graded exponential / logarithm, truncated at the series' truncation
// degree. exp requires constant term 0, log requires constant term 1.
SymSeries series_exp(const SymSeries& s);
SymSeries series_log(const SymSeries& s);

// f_eta(e_1, e_2, ...): the polynomial expressing the monomial symmetric
// function m_eta through elementary symmetric functions, evaluated at
// e_k = values[k-1].
Rat f_eta_eval(const Partition& eta, std::span<const Rat> values);

// Evaluates a series at a point (x_1..x_n). Monomials m_mu with l(mu) > n
// vanish, so this is exact for any truncation.
Rat evaluate(const SymSeries& s, std::span<const Rat> point);

// Transition coefficient: the coefficient of m_mu in the expansion of b_lambda
// (b = power sum or elementary). Exposed for tests.
Rat to_monomial_coefficient(Basis from, const Partition& lambda, const Partition& mu);

}  // namespace bgf
