#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "bgf/rational.hpp"
#include "bgf/symseries.hpp"

namespace bgf {

using Exponents = std::vector<int>;

// Sparse polynomial in x_0..x_{N-1} with exact coefficients. Keys are dense
// exponent vectors of length N; zero coefficients are never stored.
// Variable indices are 0-based here.
class MVPoly {
 public:
  using Terms = std::map<Exponents, Rat>;

  explicit MVPoly(int num_vars);

  static MVPoly constant(int num_vars, const Rat& value);
  static MVPoly variable(int num_vars, int index);

  int num_vars() const noexcept { return n_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  // Maximal total degree; -1 for the zero polynomial.
  int degree() const;

  Rat coeff(const Exponents& e) const;
  Rat constant_term() const;
  void add_term(const Exponents& e, const Rat& c);

  MVPoly& operator+=(const MVPoly& other);
  MVPoly& operator-=(const MVPoly& other);
  MVPoly& operator*=(const Rat& s);
  friend MVPoly operator+(MVPoly a, const MVPoly& b) { return a += b; }
  friend MVPoly operator-(MVPoly a, const MVPoly& b) { return a -= b; }
  friend MVPoly operator*(MVPoly a, const Rat& s) { return a *= s; }
  friend MVPoly operator*(const Rat& s, MVPoly a) { return a *= s; }
  friend MVPoly operator*(const MVPoly& a, const MVPoly& b);
  bool operator==(const MVPoly& other) const = default;

  MVPoly truncated(int max_degree) const;
  MVPoly homogeneous_part(int d) const;

  MVPoly partial(int i) const;
  MVPoly swap_vars(int i, int j) const;
  // Sets x_M..x_{N-1} to zero and keeps the first M variables.
  MVPoly restrict_leading(int M) const;

  Rat evaluate(std::span<const Rat> point) const;

  // Invariant under every permutation of the variables. Checked orbit by
  // orbit, so it is cheap even for many variables.
  bool is_symmetric() const;

  std::string to_string() const;

 private:
  void check_index(int i) const;

  int n_;
  Terms terms_;
};

// Product truncated at total degree max_degree.
MVPoly multiply_truncated(const MVPoly& a, const MVPoly& b, int max_degree);

// Realizes a symmetric series in N variables: monomials with more than N
// parts vanish. The truncation degree of s bounds the degree of the output.
MVPoly to_mvpoly(const SymSeries& s, int N);

// Monomial-basis coefficients of a symmetric polynomial: the coefficient of
// m_mu is the coefficient of x^mu. Throws asymmetric_input otherwise.
SymSeries symmetric_to_monomial(const MVPoly& g, int truncation_degree);

}  // namespace bgf
