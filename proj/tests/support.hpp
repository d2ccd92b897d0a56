#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "bgf/bessel.hpp"
#include "bgf/mvpoly.hpp"
#include "bgf/partition.hpp"
#include "bgf/rational.hpp"

namespace bgf::testing {

// Random rational with numerator in [-bound, bound] and denominator in [1, bound].
inline Rat random_rat(std::mt19937& rng, int bound = 10) {
  std::uniform_int_distribution<int> num(-bound, bound);
  std::uniform_int_distribution<int> den(1, bound);
  return frac(num(rng), den(rng));
}

inline std::vector<Rat> random_rats(std::mt19937& rng, std::size_t n, int bound = 10) {
  std::vector<Rat> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(random_rat(rng, bound));
  return v;
}

// sum_i x_i^k as an explicit polynomial in n variables.
inline MVPoly power_sum_poly(int n, int k) {
  MVPoly p(n);
  for (int i = 0; i < n; ++i) {
    Exponents e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(i)] = k;
    p.add_term(e, 1);
  }
  return p;
}

// e_k as an explicit polynomial: sum over k-subsets.
inline MVPoly elementary_poly(int n, int k) {
  MVPoly p(n);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    Exponents e(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
    p.add_term(e, 1);
  }
  return p;
}

// prod_i b_{lambda_i} for b = power sums or elementary polynomials.
inline MVPoly product_poly(int n, const Partition& lambda, bool elementary) {
  MVPoly p = MVPoly::constant(n, 1);
  for (int part : lambda.parts()) p = p * (elementary ? elementary_poly(n, part) : power_sum_poly(n, part));
  return p;
}

// x^mu with mu padded by zeros to n entries.
inline Exponents padded(const Partition& mu, int n) {
  Exponents e(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < mu.length(); ++i) e[static_cast<std::size_t>(i)] = mu[static_cast<std::size_t>(i)];
  return e;
}

// Monomial symmetric function m_mu evaluated directly at x: sum over the
// distinct rearrangements of mu padded to x.size().
inline Rat monomial_eval(const Partition& mu, const std::vector<Rat>& x) {
  const int n = static_cast<int>(x.size());
  if (mu.length() > n) return 0;
  Exponents e = padded(mu, n);
  std::sort(e.begin(), e.end());
  Rat total = 0;
  do {
    Rat term = 1;
    for (int i = 0; i < n; ++i) term *= pow(x[static_cast<std::size_t>(i)], e[static_cast<std::size_t>(i)]);
    total += term;
  } while (std::next_permutation(e.begin(), e.end()));
  return total;
}

// Random polynomial with about `terms` monomials of total degree <= max_degree.
inline MVPoly random_poly(std::mt19937& rng, int n, int max_degree, int terms) {
  MVPoly p(n);
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::uniform_int_distribution<int> var(0, n - 1);
  for (int t = 0; t < terms; ++t) {
    Exponents e(static_cast<std::size_t>(n), 0);
    const int d = deg(rng);
    for (int k = 0; k < d; ++k) ++e[static_cast<std::size_t>(var(rng))];
    p.add_term(e, random_rat(rng));
  }
  return p;
}

// Random atomic measure with `count` atoms in the closed Weyl chamber.
inline AtomicMeasure random_measure(std::mt19937& rng, int n, int count) {
  AtomicMeasure mu;
  mu.N = n;
  std::uniform_int_distribution<int> w(1, 5);
  std::vector<int> ws;
  int total = 0;
  for (int i = 0; i < count; ++i) {
    ws.push_back(w(rng));
    total += ws.back();
  }
  for (int i = 0; i < count; ++i) {
    std::vector<Rat> point = random_rats(rng, static_cast<std::size_t>(n), 4);
    std::sort(point.begin(), point.end());
    mu.atoms.push_back({frac(ws[static_cast<std::size_t>(i)], total), point});
  }
  return mu;
}

// E_mu[prod_i p_{lambda_i}(a)] as a direct finite sum over atoms.
inline Rat atomic_moment(const AtomicMeasure& mu, const Partition& lambda) {
  Rat total = 0;
  for (const Atom& atom : mu.atoms) {
    Rat term = atom.weight;
    for (int part : lambda.parts()) {
      Rat pk = 0;
      for (const Rat& a : atom.point) pk += pow(a, part);
      term *= pk;
    }
    total += term;
  }
  return total;
}

}  // namespace bgf::testing
