#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bgf/mvpoly.hpp"
#include "bgf/partition.hpp"
#include "bgf/rational.hpp"
#include "bgf/symseries.hpp"

namespace bgf {

struct Atom {
  Rat weight;
  std::vector<Rat> point;  // weakly increasing
};

// Finite probability measure on the closed Weyl chamber a_1 <= ... <= a_N.
struct AtomicMeasure {
  int N = 0;
  std::vector<Atom> atoms;

  // Throws on nonpositive weights, weights not summing to 1, wrong lengths
  // or unsorted points.
  void validate() const;
  static AtomicMeasure point_mass(std::vector<Rat> point);
};

// Power-sum coefficients a_lambda of ln G in N variables.
struct BgfCoeffs {
  int N = 0;
  Rat theta;
  SymSeries series{Basis::power, 0};

  Rat coeff(const Partition& lambda) const { return series.coeff(lambda); }
};

// Bessel function B_a(x; theta) truncated at degree n, as a symmetric series
// in the power-sum basis (only partitions with at most N parts contribute).
SymSeries bessel_series(std::span<const Rat> a, const Rat& theta, int n);
MVPoly bessel_truncated(std::span<const Rat> a, const Rat& theta, int n);

// Bessel generating function of an atomic measure truncated at degree n.
SymSeries bgf_atomic_series(const AtomicMeasure& mu, const Rat& theta, int n);
MVPoly bgf_atomic(const AtomicMeasure& mu, const Rat& theta, int n);

// ln G for a symmetric G with G(0) = 1, truncated at truncation_degree
// (default deg G). When the degree exceeds N the power-sum expansion is not
// unique; the representative returned is the one whose monomial expansion
// has no m_mu with more than N parts.
BgfCoeffs log_bgf_coeffs(const MVPoly& G, const Rat& theta, std::optional<int> truncation_degree = std::nullopt);

// Same, starting from a series in any basis that represents G in N variables.
BgfCoeffs log_bgf_coeffs(const SymSeries& G, int N, const Rat& theta);

// Shortcut: log coefficients of an atomic measure's generating function.
BgfCoeffs bgf_coeffs_atomic(const AtomicMeasure& mu, const Rat& theta, int n);

// exp of the coefficients, realized in N variables.
MVPoly bgf_from_coeffs(const BgfCoeffs& g);

struct LlnReport {
  std::vector<int> Ns;
  int max_degree = 0;
  // kappa_d = d theta^{d-1} c0, with c0 the limit of the exact least-squares
  // fit of a_(d)/N against c0 + c1/N. Index d-1.
  std::vector<Rat> kappa_estimates;
  // d theta^{d-1} a_(d)/N at the largest N, without extrapolation.
  std::vector<Rat> kappa_at_largest;
  // |x_last - x_prev| / |x_prev - x_prevprev| for x_N = a_(d)/N; < 1 suggests
  // convergence, nullopt when undefined (constant sequence).
  std::vector<std::optional<double>> convergence_ratio;

  struct Residual {
    int N;
    Partition lambda;
    double value;
  };
  // Condition (a): |a_(d)/N - (c0 + c1/N)|, the misfit of the 1/N model.
  std::vector<Residual> condition_a_residuals;
  // Condition (b): |a_lambda| / N^{l(lambda)} for l(lambda) >= 2.
  std::vector<Residual> condition_b_residuals;
  // Extrapolated N -> infinity limit of each condition (b) residual.
  std::vector<std::pair<Partition, double>> condition_b_limits;

  double tolerance = 0;
  bool pass = false;
};

// Requires at least three distinct, increasing N with a common theta.
LlnReport lln_check(std::span<const BgfCoeffs> seq, const Rat& theta, double tol);

// Exact least-squares fit y ~ c0 + c1/N. Exposed for tests.
std::pair<Rat, Rat> fit_inverse_n(std::span<const int> Ns, std::span<const Rat> ys);

BgfCoeffs theta_add(const BgfCoeffs& g1, const BgfCoeffs& g2);
MVPoly corner_restrict(const MVPoly& G, int M);
BgfCoeffs dbm_factor(const BgfCoeffs& g, const Rat& t);

// Measure JSON: {"N": int, "theta": "p/q", "atoms": [{"w": "p/q", "a": ["p/q", ...]}]}.
// Numbers are accepted in place of strings. theta is optional.
struct MeasureFile {
  AtomicMeasure measure;
  std::optional<Rat> theta;
};
MeasureFile parse_measure_json(const std::string& text);
MeasureFile load_measure_json(const std::string& path);

}  // namespace bgf
