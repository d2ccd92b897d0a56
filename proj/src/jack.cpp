#include "bgf/jack.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <string>
#include <utility>

#include "bgf/error.hpp"

namespace bgf {

JackParam::JackParam(Rat a) : alpha(std::move(a)) {
  if (alpha <= 0) throw Error(ErrorKind::out_of_range_parameter, "Jack parameter must be positive");
}

JackParam JackParam::from_theta(const Rat& theta) {
  if (theta <= 0) throw Error(ErrorKind::out_of_range_parameter, "theta must be positive");
  return JackParam(1 / theta);
}

Rat jack_inner(const SymSeries& f, const SymSeries& g, const JackParam& p) {
  const int df = f.max_degree();
  const int dg = g.max_degree();
  if (df < 0 || dg < 0) return 0;
  for (const auto* s : {&f, &g}) {
    const int d = s->max_degree();
    for (const auto& [lambda, c] : s->coeffs()) {
      if (lambda.size() != d) throw Error(ErrorKind::degree_mismatch, "jack_inner: input is not homogeneous");
    }
  }
  if (df != dg) throw Error(ErrorKind::degree_mismatch, "jack_inner: degrees differ");
  const SymSeries pf = basis_convert(f, Basis::power);
  const SymSeries pg = basis_convert(g, Basis::power);
  Rat total = 0;
  for (const auto& [lambda, c] : pf.coeffs()) {
    const Rat other = pg.coeff(lambda);
    if (other != 0) total += c * other * lambda.z_factor() * pow(p.alpha, lambda.length());
  }
  return total;
}

namespace {

std::atomic<int> g_degree_cap{8};

using Level = std::map<Partition, SymSeries>;

// Gram-Schmidt on m_mu in increasing lexicographic order, which refines
// dominance, gives the monic P_mu; rescaling by c_mu gives J_mu.
std::shared_ptr<const Level> build_level(const JackParam& p, int d) {
  auto level = std::make_shared<Level>();
  std::vector<Partition> order = partitions_of(d);
  std::reverse(order.begin(), order.end());
  std::vector<std::pair<SymSeries, Rat>> done;  // (P_nu, <P_nu, P_nu>)
  for (const Partition& mu : order) {
    const SymSeries m = basis_convert(SymSeries::single(Basis::monomial, d, mu), Basis::power);
    SymSeries pmu = m;
    for (const auto& [pnu, norm] : done) pmu -= pnu * (jack_inner(m, pnu, p) / norm);
    const Rat norm = jack_inner(pmu, pmu, p);
    level->emplace(mu, pmu * hook_lower(mu, p.alpha));
    done.emplace_back(std::move(pmu), norm);
  }
  return level;
}

std::shared_ptr<const Level> level_for(const JackParam& p, int d) {
  static std::mutex mutex;
  static std::map<std::pair<std::string, int>, std::shared_ptr<const Level>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{p.alpha.get_str(), d}];
  if (!slot) slot = build_level(p, d);
  return slot;
}

void check_cap(int degree) {
  if (degree > g_degree_cap.load()) {
    throw Error(ErrorKind::degree_cap_exceeded, "Jack degree " + std::to_string(degree) +
                                                    " exceeds the configured cap " +
                                                    std::to_string(g_degree_cap.load()));
  }
}

}  // namespace

int jack_degree_cap() { return g_degree_cap.load(); }

void set_jack_degree_cap(int cap) {
  if (cap < 0) throw Error(ErrorKind::invalid_argument, "Jack degree cap must be nonnegative");
  g_degree_cap.store(cap);
}

JackTable::JackTable(int degree, const JackParam& p) : degree_(degree), param_(p) {
  if (degree < 0) throw Error(ErrorKind::invalid_argument, "negative Jack table degree");
  check_cap(degree);
  for (int d = 0; d <= degree; ++d) {
    const auto level = level_for(p, d);
    entries_.insert(level->begin(), level->end());
  }
}

const SymSeries& JackTable::at(const Partition& lambda) const {
  const auto it = entries_.find(lambda);
  if (it == entries_.end()) {
    throw Error(ErrorKind::degree_cap_exceeded, "Jack table of degree " + std::to_string(degree_) +
                                                    " has no entry " + lambda.to_string());
  }
  return it->second;
}

std::shared_ptr<const JackTable> jack_table(const JackParam& p, int degree) {
  check_cap(degree);
  static std::mutex mutex;
  static std::map<std::string, std::shared_ptr<const JackTable>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[p.alpha.get_str()];
  if (!slot || slot->degree() < degree) slot = std::make_shared<const JackTable>(degree, p);
  return slot;
}

SymSeries jack_J(const Partition& lambda, const JackParam& p) {
  check_cap(lambda.size());
  return level_for(p, lambda.size())->at(lambda);
}

namespace {

template <typename F>
Rat box_product(const Partition& lambda, F&& factor) {
  const Partition conj = lambda.conjugate();
  Rat out = 1;
  for (int i = 1; i <= lambda.length(); ++i) {
    for (int j = 1; j <= lambda[static_cast<std::size_t>(i - 1)]; ++j) {
      const int arm = lambda[static_cast<std::size_t>(i - 1)] - j;
      const int leg = conj[static_cast<std::size_t>(j - 1)] - i;
      out *= factor(i, j, arm, leg);
    }
  }
  return out;
}

Rat shifted_pochhammer(const Partition& lambda, const Rat& theta, int N) {
  if (lambda.length() > N) {
    throw Error(ErrorKind::degree_exceeds_variables,
                "partition " + lambda.to_string() + " is longer than N=" + std::to_string(N));
  }
  return box_product(lambda, [&](int i, int j, int, int) { return Rat(N * theta + j - 1 - theta * (i - 1)); });
}

}  // namespace

Rat hook_lower(const Partition& lambda, const Rat& alpha) {
  return box_product(lambda, [&](int, int, int arm, int leg) { return Rat(alpha * arm + leg + 1); });
}

Rat hook_upper(const Partition& lambda, const Rat& alpha) {
  return box_product(lambda, [&](int, int, int arm, int leg) { return Rat(alpha * arm + leg + alpha); });
}

Rat jack_weight(const Partition& lambda, const JackParam& p, int N, const Rat& theta) {
  if (N < 1) throw Error(ErrorKind::invalid_argument, "N must be positive");
  if (p.alpha * theta != 1) throw Error(ErrorKind::mismatched_context, "jack_weight: alpha must equal 1/theta");
  const Rat den = hook_upper(lambda, p.alpha) * shifted_pochhammer(lambda, theta, N);
  if (den == 0) throw Error(ErrorKind::invalid_argument, "jack_weight: vanishing denominator");
  return hook_lower(lambda, p.alpha) / den;
}

Rat bessel_coefficient(const Partition& lambda, const Rat& theta, int N) {
  const JackParam p = JackParam::from_theta(theta);
  const Rat c = hook_lower(lambda, p.alpha);
  return jack_weight(lambda, p, N, theta) / (c * c);
}

}  // namespace bgf
