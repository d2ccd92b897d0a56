#pragma once

#include <map>
#include <string>
#include <vector>

#include "bgf/error.hpp"
#include "bgf/partition.hpp"
#include "bgf/rational.hpp"

namespace bgf {

// Lukasiewicz path of length k: steps s_i >= -1 with nonnegative prefix sums
// and total 0. A step s >= 0 carries weight kappa_{s+1}; down steps weigh 1.
using LukPath = std::vector<int>;

inline constexpr int kLukEnumerationCap = 12;
inline constexpr int kNcOracleCap = 10;

std::vector<LukPath> luk_enumerate(int k);

// Polynomial in formal moment symbols m_1, m_2, ...: each monomial
// m_{i1} m_{i2} ... is keyed by the partition (i1, i2, ...).
class MomentPolynomial {
 public:
  MomentPolynomial() = default;
  MomentPolynomial(int value) { add(Partition{}, Rat(value)); }  // NOLINT: scalar promotion
  MomentPolynomial(const Rat& value) { add(Partition{}, value); }  // NOLINT

  static MomentPolynomial symbol(int index);

  const std::map<Partition, Rat>& terms() const noexcept { return terms_; }
  void add(const Partition& monomial, const Rat& c);

  MomentPolynomial& operator+=(const MomentPolynomial& o);
  MomentPolynomial& operator-=(const MomentPolynomial& o);
  friend MomentPolynomial operator+(MomentPolynomial a, const MomentPolynomial& b) { return a += b; }
  friend MomentPolynomial operator-(MomentPolynomial a, const MomentPolynomial& b) { return a -= b; }
  friend MomentPolynomial operator*(const MomentPolynomial& a, const MomentPolynomial& b);
  MomentPolynomial& operator*=(const MomentPolynomial& o) { return *this = *this * o; }
  bool operator==(const MomentPolynomial& o) const = default;

  // Substitutes m_k = values[k-1].
  Rat evaluate(const std::vector<Rat>& values) const;

  // "m3 - 3*m1*m2 + 2*m1^3"
  std::string to_string() const;

 private:
  std::map<Partition, Rat> terms_;
};

// m_k = sum over Lukasiewicz paths of prod kappa_{s+1}, for k = 1..K.
// Computed by dynamic programming over the path height. kappa[d-1] = kappa_d.
template <typename S>
std::vector<S> moments_from_cumulants(const std::vector<S>& kappa, int K) {
  if (K < 0) throw Error(ErrorKind::invalid_argument, "negative order");
  if (static_cast<int>(kappa.size()) < K) throw Error(ErrorKind::length_mismatch, "cumulants shorter than the order");
  std::vector<S> out;
  out.reserve(static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k) {
    std::vector<S> f(static_cast<std::size_t>(k) + 1, S(0));
    f[0] = S(1);
    for (int step = 0; step < k; ++step) {
      const int remaining = k - step - 1;
      std::vector<S> g(f.size(), S(0));
      for (int h = 0; h <= k; ++h) {
        if (f[static_cast<std::size_t>(h)] == S(0)) continue;
        for (int s = -1; h + s <= remaining && s + 1 <= k; ++s) {
          if (h + s < 0) continue;
          if (s < 0) {
            g[static_cast<std::size_t>(h - 1)] += f[static_cast<std::size_t>(h)];
            continue;
          }
          const S& w = kappa[static_cast<std::size_t>(s)];  // kappa_{s+1}
          if (w == S(0)) continue;
          g[static_cast<std::size_t>(h + s)] += f[static_cast<std::size_t>(h)] * w;
        }
      }
      f = std::move(g);
    }
    out.push_back(f[0]);
  }
  return out;
}

// Unique kappa with moments_from_cumulants(kappa) = m (triangular solve).
template <typename S>
std::vector<S> cumulants_from_moments(const std::vector<S>& m, int K) {
  if (static_cast<int>(m.size()) < K) throw Error(ErrorKind::length_mismatch, "moments shorter than the order");
  std::vector<S> kappa(static_cast<std::size_t>(K), S(0));
  for (int k = 1; k <= K; ++k) {
    // With kappa_k = 0 the k-th moment is the part contributed by lower cumulants.
    const std::vector<S> partial = moments_from_cumulants(kappa, k);
    kappa[static_cast<std::size_t>(k - 1)] = m[static_cast<std::size_t>(k - 1)] - partial.back();
  }
  return kappa;
}

// Block-size profile of NC(k): multiset of block sizes -> number of
// non-crossing partitions with that profile. Enumerated from set partitions.
const std::map<Partition, long long>& nc_block_profiles(int k);

// Forward map m_k = sum_{pi in NC(k)} prod_B kappa_{|B|}.
template <typename S>
std::vector<S> nc_moments_from_cumulants(const std::vector<S>& kappa, int K) {
  if (K > kNcOracleCap) throw Error(ErrorKind::cap_exceeded, "non-crossing oracle limited to order 10");
  if (static_cast<int>(kappa.size()) < K) throw Error(ErrorKind::length_mismatch, "cumulants shorter than the order");
  std::vector<S> out;
  for (int k = 1; k <= K; ++k) {
    S total(0);
    for (const auto& [blocks, count] : nc_block_profiles(k)) {
      S term(static_cast<int>(count));
      for (int b : blocks.parts()) term = term * kappa[static_cast<std::size_t>(b - 1)];
      total += term;
    }
    out.push_back(total);
  }
  return out;
}

template <typename S>
std::vector<S> nc_oracle_cumulants(const std::vector<S>& m, int K) {
  if (K > kNcOracleCap) throw Error(ErrorKind::cap_exceeded, "non-crossing oracle limited to order 10");
  if (static_cast<int>(m.size()) < K) throw Error(ErrorKind::length_mismatch, "moments shorter than the order");
  std::vector<S> kappa(static_cast<std::size_t>(K), S(0));
  for (int k = 1; k <= K; ++k) {
    const std::vector<S> partial = nc_moments_from_cumulants(kappa, k);
    kappa[static_cast<std::size_t>(k - 1)] = m[static_cast<std::size_t>(k - 1)] - partial.back();
  }
  return kappa;
}

template <typename S>
std::vector<S> free_convolve(const std::vector<S>& a, const std::vector<S>& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::length_mismatch, "free_convolve: cumulant sequences differ in length");
  std::vector<S> out = a;
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

// kappa_d -> kappa_d / alpha, 0 < alpha <= 1.
std::vector<Rat> free_project(const std::vector<Rat>& kappa, const Rat& alpha);
std::vector<double> free_project(const std::vector<double>& kappa, double alpha);

std::vector<Rat> semicircle_cumulants(const Rat& T, int K);

// Formal cumulant kappa_d as a polynomial in m_1..m_d (Lukasiewicz inversion).
MomentPolynomial formal_cumulant(int d);

}  // namespace bgf
