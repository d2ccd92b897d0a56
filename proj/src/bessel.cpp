#include "bgf/bessel.hpp"

#include <algorithm>
#include <cmath>

#include "bgf/error.hpp"
#include "bgf/jack.hpp"

namespace bgf {

void AtomicMeasure::validate() const {
  if (N < 1) throw Error(ErrorKind::invalid_argument, "measure: N must be positive");
  if (atoms.empty()) throw Error(ErrorKind::invalid_argument, "measure: no atoms");
  Rat total = 0;
  for (const Atom& atom : atoms) {
    if (atom.weight <= 0) throw Error(ErrorKind::invalid_argument, "measure: weights must be positive");
    if (static_cast<int>(atom.point.size()) != N) {
      throw Error(ErrorKind::length_mismatch, "measure: atom has " + std::to_string(atom.point.size()) +
                                                  " coordinates, expected N=" + std::to_string(N));
    }
    if (!std::is_sorted(atom.point.begin(), atom.point.end())) {
      throw Error(ErrorKind::invalid_argument, "measure: atom coordinates must be weakly increasing");
    }
    total += atom.weight;
  }
  if (total != 1) throw Error(ErrorKind::invalid_argument, "measure: weights sum to " + to_string(total) + ", not 1");
}

AtomicMeasure AtomicMeasure::point_mass(std::vector<Rat> point) {
  AtomicMeasure mu;
  mu.N = static_cast<int>(point.size());
  mu.atoms.push_back({Rat(1), std::move(point)});
  return mu;
}

SymSeries bessel_series(std::span<const Rat> a, const Rat& theta, int n) {
  const int N = static_cast<int>(a.size());
  if (N < 1) throw Error(ErrorKind::invalid_argument, "bessel: empty point");
  if (n < 0) throw Error(ErrorKind::invalid_argument, "bessel: negative degree");
  const JackParam p = JackParam::from_theta(theta);
  const auto table = jack_table(p, n);
  SymSeries out(Basis::power, n);
  for (const auto& [lambda, J] : table->entries()) {
    if (lambda.size() > n || lambda.length() > N) continue;
    const Rat scale = bessel_coefficient(lambda, theta, N) * evaluate(J, a);
    if (scale == 0) continue;
    for (const auto& [nu, c] : J.coeffs()) out.add(nu, scale * c);
  }
  return out;
}

MVPoly bessel_truncated(std::span<const Rat> a, const Rat& theta, int n) {
  return to_mvpoly(bessel_series(a, theta, n), static_cast<int>(a.size()));
}

SymSeries bgf_atomic_series(const AtomicMeasure& mu, const Rat& theta, int n) {
  mu.validate();
  SymSeries out(Basis::power, n);
  for (const Atom& atom : mu.atoms) out += bessel_series(atom.point, theta, n) * atom.weight;
  return out;
}

MVPoly bgf_atomic(const AtomicMeasure& mu, const Rat& theta, int n) {
  return to_mvpoly(bgf_atomic_series(mu, theta, n), mu.N);
}

namespace {

SymSeries drop_long(const SymSeries& monomial, int N) {
  SymSeries out(Basis::monomial, monomial.truncation_degree());
  for (const auto& [mu, c] : monomial.coeffs()) {
    if (mu.length() <= N) out.add(mu, c);
  }
  return out;
}

}  // namespace

BgfCoeffs log_bgf_coeffs(const SymSeries& G, int N, const Rat& theta) {
  if (N < 1) throw Error(ErrorKind::invalid_argument, "N must be positive");
  if (theta <= 0) throw Error(ErrorKind::out_of_range_parameter, "theta must be positive");
  const SymSeries m = drop_long(basis_convert(G, Basis::monomial), N);
  if (m.constant_term() != 1) throw Error(ErrorKind::wrong_constant_term, "generating function must have G(0) = 1");
  const SymSeries log_m = drop_long(series_log(m), N);
  BgfCoeffs out;
  out.N = N;
  out.theta = theta;
  out.series = basis_convert(log_m, Basis::power);
  return out;
}

BgfCoeffs log_bgf_coeffs(const MVPoly& G, const Rat& theta, std::optional<int> truncation_degree) {
  const int d = truncation_degree.value_or(std::max(G.degree(), 0));
  return log_bgf_coeffs(symmetric_to_monomial(G.truncated(d), d), G.num_vars(), theta);
}

BgfCoeffs bgf_coeffs_atomic(const AtomicMeasure& mu, const Rat& theta, int n) {
  return log_bgf_coeffs(bgf_atomic_series(mu, theta, n), mu.N, theta);
}

MVPoly bgf_from_coeffs(const BgfCoeffs& g) {
  SymSeries s = g.series;
  s.set(Partition{}, 0);
  return to_mvpoly(series_exp(s), g.N);
}

std::pair<Rat, Rat> fit_inverse_n(std::span<const int> Ns, std::span<const Rat> ys) {
  if (Ns.size() != ys.size() || Ns.size() < 2) throw Error(ErrorKind::insufficient_sequence, "fit needs two or more points");
  const auto k = static_cast<long>(Ns.size());
  Rat ubar = 0;
  Rat ybar = 0;
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    ubar += frac(1, Ns[i]);
    ybar += ys[i];
  }
  ubar /= k;
  ybar /= k;
  Rat sxy = 0;
  Rat sxx = 0;
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    const Rat du = frac(1, Ns[i]) - ubar;
    sxy += du * (ys[i] - ybar);
    sxx += du * du;
  }
  if (sxx == 0) throw Error(ErrorKind::insufficient_sequence, "fit needs distinct N");
  const Rat c1 = sxy / sxx;
  return {Rat(ybar - c1 * ubar), c1};
}

LlnReport lln_check(std::span<const BgfCoeffs> seq, const Rat& theta, double tol) {
  if (seq.size() < 3) throw Error(ErrorKind::insufficient_sequence, "lln_check needs at least three values of N");
  LlnReport report;
  report.tolerance = tol;
  int degree = seq.front().series.truncation_degree();
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (seq[i].theta != theta) throw Error(ErrorKind::mismatched_context, "lln_check: theta differs across the sequence");
    if (i > 0 && seq[i].N <= seq[i - 1].N) {
      throw Error(ErrorKind::insufficient_sequence, "lln_check: N values must be distinct and increasing");
    }
    report.Ns.push_back(seq[i].N);
    degree = std::min(degree, seq[i].series.truncation_degree());
  }
  report.max_degree = degree;
  bool pass = true;

  for (int d = 1; d <= degree; ++d) {
    const Partition row{d};
    std::vector<Rat> ys;
    for (const BgfCoeffs& g : seq) ys.push_back(g.coeff(row) / g.N);
    const auto [c0, c1] = fit_inverse_n(report.Ns, ys);
    const Rat scale = d * pow(theta, d - 1);
    report.kappa_estimates.push_back(scale * c0);
    report.kappa_at_largest.push_back(scale * ys.back());
    const Rat d1 = ys[ys.size() - 1] - ys[ys.size() - 2];
    const Rat d0 = ys[ys.size() - 2] - ys[ys.size() - 3];
    report.convergence_ratio.push_back(d0 == 0 ? std::nullopt
                                               : std::optional<double>(std::abs(to_double(d1 / d0))));
    const double bound = tol * std::max(1.0, std::abs(to_double(c0)));
    for (std::size_t i = 0; i < ys.size(); ++i) {
      const double r = std::abs(to_double(ys[i] - c0 - c1 / report.Ns[i]));
      report.condition_a_residuals.push_back({report.Ns[i], row, r});
      if (r > bound) pass = false;
    }
  }

  for (const Partition& lambda : partitions_up_to(degree)) {
    if (lambda.length() < 2) continue;
    std::vector<Rat> rs;
    for (const BgfCoeffs& g : seq) {
      const Rat r = abs(g.coeff(lambda)) / pow(Rat(g.N), lambda.length());
      rs.push_back(r);
      report.condition_b_residuals.push_back({g.N, lambda, to_double(r)});
    }
    const double limit = to_double(fit_inverse_n(report.Ns, rs).first);
    report.condition_b_limits.emplace_back(lambda, limit);
    if (std::abs(limit) > tol) pass = false;
  }
  report.pass = pass;
  return report;
}

BgfCoeffs theta_add(const BgfCoeffs& g1, const BgfCoeffs& g2) {
  if (g1.N != g2.N || g1.theta != g2.theta ||
      g1.series.truncation_degree() != g2.series.truncation_degree()) {
    throw Error(ErrorKind::mismatched_context, "theta_add: N, theta and truncation must agree");
  }
  BgfCoeffs out = g1;
  out.series += g2.series;
  return out;
}

MVPoly corner_restrict(const MVPoly& G, int M) {
  if (M < 1 || M >= G.num_vars()) throw Error(ErrorKind::invalid_argument, "corner_restrict: need 1 <= M < N");
  return G.restrict_leading(M);
}

BgfCoeffs dbm_factor(const BgfCoeffs& g, const Rat& t) {
  if (g.series.truncation_degree() < 2) throw Error(ErrorKind::insufficient_truncation, "dbm_factor needs truncation >= 2");
  if (t < 0) throw Error(ErrorKind::out_of_range_parameter, "dbm_factor: t must be nonnegative");
  BgfCoeffs out = g;
  out.series.add(Partition{2}, t / 2);
  return out;
}

}  // namespace bgf
