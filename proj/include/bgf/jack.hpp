#pragma once

#include <map>
#include <memory>
#include <vector>

#include "bgf/partition.hpp"
#include "bgf/rational.hpp"
#include "bgf/symseries.hpp"

namespace bgf {

// Jack parameter alpha = 1/theta.
struct JackParam {
  Rat alpha;

  explicit JackParam(Rat a);
  static JackParam from_theta(const Rat& theta);
  Rat theta() const { return 1 / alpha; }
};

// <p_lambda, p_mu> = delta z_lambda alpha^{l(lambda)}. Both arguments must be
// homogeneous of one common degree; other bases are converted to power sums.
Rat jack_inner(const SymSeries& f, const SymSeries& g, const JackParam& p);

// Degree cap for Jack tables (default 8). Requests beyond it fail with
// ErrorKind::degree_cap_exceeded.
int jack_degree_cap();
void set_jack_degree_cap(int cap);

// All J-normalized Jack functions of degrees 0..degree for one parameter,
// in the power-sum basis. Immutable after construction.
class JackTable {
 public:
  JackTable(int degree, const JackParam& p);

  int degree() const noexcept { return degree_; }
  const JackParam& param() const noexcept { return param_; }
  const SymSeries& at(const Partition& lambda) const;
  const std::map<Partition, SymSeries>& entries() const noexcept { return entries_; }

 private:
  int degree_;
  JackParam param_;
  std::map<Partition, SymSeries> entries_;
};

// Shared, lazily built table covering at least `degree` (bounded by the cap).
std::shared_ptr<const JackTable> jack_table(const JackParam& p, int degree);

// J_lambda in the power-sum basis (truncation degree |lambda|).
SymSeries jack_J(const Partition& lambda, const JackParam& p);

// c_lambda = prod (alpha a + l + 1), c'_lambda = prod (alpha a + l + alpha)
// over boxes with arm a and leg l. J_lambda = c_lambda P_lambda.
Rat hook_lower(const Partition& lambda, const Rat& alpha);
Rat hook_upper(const Partition& lambda, const Rat& alpha);

// Box-product weight
//   prod (alpha a + l + 1) / prod (alpha a + l + alpha)(N theta + j - 1 - theta (i - 1))
// for alpha = 1/theta. This is the coefficient of P_lambda(x) P_lambda(a) in
// the Bessel expansion; see bessel_coefficient for the J-normalized one.
Rat jack_weight(const Partition& lambda, const JackParam& p, int N, const Rat& theta);

// Coefficient of J_lambda(x) J_lambda(a) in the Bessel expansion:
// jack_weight / c_lambda^2 = 1 / (c_lambda c'_lambda prod (N theta + j - 1 - theta (i - 1))).
Rat bessel_coefficient(const Partition& lambda, const Rat& theta, int N);

}  // namespace bgf
