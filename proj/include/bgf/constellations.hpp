#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bgf/freeprob.hpp"
#include "bgf/partition.hpp"
#include "bgf/rational.hpp"

namespace bgf {

inline constexpr int kMaxConstellationSize = 4;
inline constexpr int kMaxConstellationColors = 4;

// Permutation of {0..d-1}, d <= 4, stored compactly.
struct Perm {
  std::array<std::uint8_t, kMaxConstellationSize> image{};
  int d = 0;

  static Perm identity(int d);
  int operator()(int x) const { return image[static_cast<std::size_t>(x)]; }
  Perm inverse() const;
  // (a * b)(x) = a(b(x)).
  friend Perm operator*(const Perm& a, const Perm& b);
  int cycle_count() const;
  Partition cycle_type() const;
  bool operator==(const Perm& o) const = default;
};

// Transitive tuple (s_0, s_1, ..., s_k) of permutations of {0..d-1}.
// Color-i vertices are the cycles of s_i, faces are the cycles of
// phi = (s_0 s_1 ... s_k)^{-1}, and there are k*d edges. The root is the
// label 0; enumerated objects carry the canonical labeling, in which a
// breadth-first search from 0 over s_0..s_k visits labels in increasing order.
struct OrientedConstellation {
  int d = 0;
  int k = 0;
  std::vector<Perm> perms;  // size k+1
  int root = 0;

  Perm face_perm() const;
};

struct ConstellationStats {
  Partition mu1;         // face degrees
  Partition mu2;         // color-0 vertex degrees
  std::vector<int> eta;  // d - (number of color-i vertices), i = 1..k
  int genus = 0;
  bool normal = false;   // eta weakly decreasing
};

// True if the tuple generates a transitive group.
bool is_transitive(const std::vector<Perm>& perms);
// True if the breadth-first relabeling from 0 is the identity.
bool is_canonical(const std::vector<Perm>& perms);

// Visits every rooted connected k-constellation of size d once (canonical
// labeling). d <= 4, 0 <= k <= 4.
void for_each_constellation(int d, int k, const std::function<void(const OrientedConstellation&)>& visit);
std::vector<OrientedConstellation> enumerate_orientable(int d, int k);

// Number of transitive (k+1)-tuples in S_d^{k+1}, by the classical
// inclusion-exclusion over the block containing 0. Rooted count is this
// divided by (d-1)!.
mpz_class count_transitive_tuples(int d, int k);

ConstellationStats constellation_stats(const OrientedConstellation& m);

// kappa_d as a polynomial in m_1..m_d: sum over normal, one-face, genus-0
// rooted constellations of prod_{color-0 vertices v} m_{deg v} times
// f_eta(e_j = (-1)^j). d <= 4.
MomentPolynomial cumulant_polynomial(int d);

// Deterministic point configurations indexed by N with known limiting
// moments of the empirical measure of a_i / N.
struct Profile {
  std::string name;
  std::function<std::vector<Rat>(int N)> points;
  std::function<Rat(int k)> moment;
};

Profile uniform_profile();               // a_i = i, m_k = 1/(k+1)
Profile constant_profile(const Rat& c);  // a_i = cN, m_k = c^k
Profile zero_profile();

struct LeadingCoeffReport {
  int d = 0;
  Rat theta;
  std::vector<int> Ns;
  std::vector<Rat> values;  // a_(d)/N per N
  Rat extrapolated;         // c0 of the exact 1/N least-squares fit
  Rat prediction;           // theta^{1-d} kappa_d / d from the constellation sum
  double abs_residual = 0;
  // |extrapolated - prediction| / |prediction|; nullopt when prediction is 0.
  std::optional<double> rel_residual;
};

// Needs at least three grid points, each N >= d.
LeadingCoeffReport leading_coeff_verify(int d, const Rat& theta, const Profile& profile, const std::vector<int>& Ns);

}  // namespace bgf
