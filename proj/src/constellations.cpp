#include "bgf/constellations.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "bgf/bessel.hpp"
#include "bgf/error.hpp"
#include "bgf/symseries.hpp"

namespace bgf {

Perm Perm::identity(int d) {
  Perm p;
  p.d = d;
  for (int i = 0; i < d; ++i) p.image[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
  return p;
}

Perm Perm::inverse() const {
  Perm p;
  p.d = d;
  for (int i = 0; i < d; ++i) p.image[image[static_cast<std::size_t>(i)]] = static_cast<std::uint8_t>(i);
  return p;
}

Perm operator*(const Perm& a, const Perm& b) {
  Perm p;
  p.d = a.d;
  for (int i = 0; i < a.d; ++i) p.image[static_cast<std::size_t>(i)] = a.image[b.image[static_cast<std::size_t>(i)]];
  return p;
}

Partition Perm::cycle_type() const {
  std::array<bool, kMaxConstellationSize> seen{};
  std::vector<int> lengths;
  for (int i = 0; i < d; ++i) {
    if (seen[static_cast<std::size_t>(i)]) continue;
    int len = 0;
    for (int x = i; !seen[static_cast<std::size_t>(x)]; x = (*this)(x)) {
      seen[static_cast<std::size_t>(x)] = true;
      ++len;
    }
    lengths.push_back(len);
  }
  return Partition::from_unsorted(std::move(lengths));
}

int Perm::cycle_count() const { return cycle_type().length(); }

Perm OrientedConstellation::face_perm() const {
  Perm prod = Perm::identity(d);
  for (const Perm& p : perms) prod = prod * p;
  return prod.inverse();
}

namespace {

// Breadth-first labeling from 0; returns the number of labels reached.
int bfs_labels(const std::vector<Perm>& perms, std::array<int, kMaxConstellationSize>& label) {
  const int d = perms.front().d;
  label.fill(-1);
  std::array<int, kMaxConstellationSize> queue{};
  int head = 0;
  int tail = 0;
  label[0] = 0;
  queue[static_cast<std::size_t>(tail++)] = 0;
  int next = 1;
  while (head < tail) {
    const int x = queue[static_cast<std::size_t>(head++)];
    for (const Perm& p : perms) {
      const int y = p(x);
      if (label[static_cast<std::size_t>(y)] < 0) {
        label[static_cast<std::size_t>(y)] = next++;
        queue[static_cast<std::size_t>(tail++)] = y;
      }
    }
  }
  (void)d;
  return next;
}

std::vector<Perm> all_perms(int d) {
  std::vector<Perm> out;
  Perm p = Perm::identity(d);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.image.begin(), p.image.begin() + d));
  return out;
}

void check_caps(int d, int k) {
  if (d < 1 || d > kMaxConstellationSize || k < 0 || k > kMaxConstellationColors) {
    throw Error(ErrorKind::cap_exceeded, "constellation enumeration supports 1 <= d <= 4 and 0 <= k <= 4");
  }
}

}  // namespace

bool is_transitive(const std::vector<Perm>& perms) {
  if (perms.empty()) return false;
  std::array<int, kMaxConstellationSize> label{};
  return bfs_labels(perms, label) == perms.front().d;
}

bool is_canonical(const std::vector<Perm>& perms) {
  std::array<int, kMaxConstellationSize> label{};
  const int d = perms.front().d;
  if (bfs_labels(perms, label) != d) return false;
  for (int i = 0; i < d; ++i) {
    if (label[static_cast<std::size_t>(i)] != i) return false;
  }
  return true;
}

void for_each_constellation(int d, int k, const std::function<void(const OrientedConstellation&)>& visit) {
  check_caps(d, k);
  const std::vector<Perm> perms = all_perms(d);
  const std::size_t n = perms.size();
  std::vector<std::size_t> index(static_cast<std::size_t>(k) + 1, 0);
  OrientedConstellation m;
  m.d = d;
  m.k = k;
  m.perms.assign(static_cast<std::size_t>(k) + 1, perms.front());
  while (true) {
    for (std::size_t i = 0; i < index.size(); ++i) m.perms[i] = perms[index[i]];
    if (is_canonical(m.perms)) visit(m);
    std::size_t pos = index.size();
    while (pos > 0) {
      --pos;
      if (++index[pos] < n) break;
      index[pos] = 0;
      if (pos == 0) return;
    }
  }
}

std::vector<OrientedConstellation> enumerate_orientable(int d, int k) {
  std::vector<OrientedConstellation> out;
  for_each_constellation(d, k, [&](const OrientedConstellation& m) { out.push_back(m); });
  return out;
}

mpz_class count_transitive_tuples(int d, int k) {
  if (d < 1 || k < 0) throw Error(ErrorKind::invalid_argument, "count_transitive_tuples: need d >= 1, k >= 0");
  const unsigned long m = static_cast<unsigned long>(k) + 1;
  auto fact_pow = [&](int n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), f.get_mpz_t(), m);
    return r;
  };
  std::vector<mpz_class> t(static_cast<std::size_t>(d) + 1);
  for (int n = 1; n <= d; ++n) {
    mpz_class v = fact_pow(n);
    for (int j = 1; j < n; ++j) {
      mpz_class binom;
      mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(n - 1), static_cast<unsigned long>(j - 1));
      v -= binom * t[static_cast<std::size_t>(j)] * fact_pow(n - j);
    }
    t[static_cast<std::size_t>(n)] = v;
  }
  return t[static_cast<std::size_t>(d)];
}

ConstellationStats constellation_stats(const OrientedConstellation& m) {
  if (static_cast<int>(m.perms.size()) != m.k + 1 || !is_transitive(m.perms)) {
    throw Error(ErrorKind::invalid_argument, "constellation must be a transitive tuple of k+1 permutations");
  }
  ConstellationStats s;
  s.mu1 = m.face_perm().cycle_type();
  s.mu2 = m.perms[0].cycle_type();
  int vertices = s.mu2.length();
  for (int i = 1; i <= m.k; ++i) {
    const int c = m.perms[static_cast<std::size_t>(i)].cycle_count();
    vertices += c;
    s.eta.push_back(m.d - c);
  }
  const int edges = m.k * m.d;
  const int faces = s.mu1.length();
  const int two_g = 2 - (vertices - edges + faces);
  if (two_g < 0 || two_g % 2 != 0) throw Error(ErrorKind::euler_inconsistency, "Euler characteristic is not orientable");
  s.genus = two_g / 2;
  const int eta_total = std::accumulate(s.eta.begin(), s.eta.end(), 0);
  if (eta_total - s.mu1.length() - s.mu2.length() != 2 * s.genus - 2) {
    throw Error(ErrorKind::euler_inconsistency, "genus relation violated");
  }
  s.normal = std::is_sorted(s.eta.begin(), s.eta.end(), std::greater<>());
  return s;
}

MomentPolynomial cumulant_polynomial(int d) {
  if (d < 1 || d > kMaxConstellationSize) throw Error(ErrorKind::cap_exceeded, "cumulant_polynomial supports 1 <= d <= 4");
  const int k = std::max(d - 1, 1);
  std::vector<Rat> signs;
  for (int j = 1; j <= d; ++j) signs.push_back(j % 2 == 0 ? Rat(1) : Rat(-1));
  std::map<Partition, Rat> f_cache;
  MomentPolynomial out;
  for_each_constellation(d, k, [&](const OrientedConstellation& m) {
    const ConstellationStats s = constellation_stats(m);
    if (s.mu1.length() != 1 || s.genus != 0 || !s.normal) return;
    const Partition eta = Partition::from_unsorted(s.eta);
    auto it = f_cache.find(eta);
    if (it == f_cache.end()) it = f_cache.emplace(eta, f_eta_eval(eta, signs)).first;
    out.add(s.mu2, it->second);
  });
  return out;
}

Profile uniform_profile() {
  return {"uniform",
          [](int N) {
            std::vector<Rat> a;
            for (int i = 1; i <= N; ++i) a.emplace_back(i);
            return a;
          },
          [](int k) { return frac(1, k + 1); }};
}

Profile constant_profile(const Rat& c) {
  return {"constant",
          [c](int N) { return std::vector<Rat>(static_cast<std::size_t>(N), Rat(c * N)); },
          [c](int k) { return pow(c, k); }};
}

Profile zero_profile() {
  return {"zero", [](int N) { return std::vector<Rat>(static_cast<std::size_t>(N), Rat(0)); },
          [](int) { return Rat(0); }};
}

LeadingCoeffReport leading_coeff_verify(int d, const Rat& theta, const Profile& profile, const std::vector<int>& Ns) {
  if (d < 1 || d > 3) throw Error(ErrorKind::cap_exceeded, "leading_coeff_verify supports 1 <= d <= 3");
  if (Ns.size() < 3) throw Error(ErrorKind::insufficient_sequence, "leading_coeff_verify needs at least three N");
  LeadingCoeffReport r;
  r.d = d;
  r.theta = theta;
  r.Ns = Ns;
  for (int N : Ns) {
    if (N < d) throw Error(ErrorKind::degree_exceeds_variables, "grid point N is smaller than d");
    const BgfCoeffs g = bgf_coeffs_atomic(AtomicMeasure::point_mass(profile.points(N)), theta, d);
    r.values.push_back(g.coeff(Partition{d}) / N);
  }
  r.extrapolated = fit_inverse_n(r.Ns, r.values).first;
  std::vector<Rat> moments;
  for (int j = 1; j <= d; ++j) moments.push_back(profile.moment(j));
  const Rat kappa = cumulant_polynomial(d).evaluate(moments);
  r.prediction = pow(theta, 1 - d) * kappa / d;
  const Rat diff = abs(r.extrapolated - r.prediction);
  r.abs_residual = to_double(diff);
  if (r.prediction != 0) r.rel_residual = to_double(diff / abs(r.prediction));
  return r;
}

}  // namespace bgf
