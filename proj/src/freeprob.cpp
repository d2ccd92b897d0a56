#include "bgf/freeprob.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <sstream>

namespace bgf {

namespace {

void extend_path(int k, int height, LukPath& current, std::vector<LukPath>& out) {
  const int remaining = k - static_cast<int>(current.size());
  if (remaining == 0) {
    if (height == 0) out.push_back(current);
    return;
  }
  // After this step, remaining - 1 steps must bring the height back to 0.
  for (int s = -1; height + s <= remaining - 1; ++s) {
    if (height + s < 0) continue;
    current.push_back(s);
    extend_path(k, height + s, current, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<LukPath> luk_enumerate(int k) {
  if (k < 1) throw Error(ErrorKind::invalid_argument, "path length must be positive");
  if (k > kLukEnumerationCap) {
    throw Error(ErrorKind::cap_exceeded, "Lukasiewicz enumeration capped at length " + std::to_string(kLukEnumerationCap));
  }
  std::vector<LukPath> out;
  LukPath current;
  extend_path(k, 0, current, out);
  return out;
}

// ---------------------------------------------------------------------------

MomentPolynomial MomentPolynomial::symbol(int index) {
  if (index < 1) throw Error(ErrorKind::invalid_argument, "moment symbols start at m1");
  MomentPolynomial p;
  p.add(Partition{index}, 1);
  return p;
}

void MomentPolynomial::add(const Partition& monomial, const Rat& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(monomial, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

MomentPolynomial& MomentPolynomial::operator+=(const MomentPolynomial& o) {
  for (const auto& [m, c] : o.terms_) add(m, c);
  return *this;
}

MomentPolynomial& MomentPolynomial::operator-=(const MomentPolynomial& o) {
  for (const auto& [m, c] : o.terms_) add(m, -c);
  return *this;
}

MomentPolynomial operator*(const MomentPolynomial& a, const MomentPolynomial& b) {
  MomentPolynomial out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) out.add(ma.merged_with(mb), ca * cb);
  }
  return out;
}

Rat MomentPolynomial::evaluate(const std::vector<Rat>& values) const {
  Rat total = 0;
  for (const auto& [m, c] : terms_) {
    Rat term = c;
    for (int i : m.parts()) {
      if (static_cast<std::size_t>(i) > values.size()) {
        throw Error(ErrorKind::length_mismatch, "missing value for m" + std::to_string(i));
      }
      term *= values[static_cast<std::size_t>(i - 1)];
    }
    total += term;
  }
  return total;
}

std::string MomentPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    const Rat mag = abs(c);
    os << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
    first = false;
    if (m.empty()) {
      os << bgf::to_string(mag);
      continue;
    }
    bool need_star = false;
    if (mag != 1) {
      os << bgf::to_string(mag);
      need_star = true;
    }
    std::vector<int> parts = m.parts();
    std::sort(parts.begin(), parts.end());
    std::size_t i = 0;
    while (i < parts.size()) {
      std::size_t j = i;
      while (j < parts.size() && parts[j] == parts[i]) ++j;
      if (need_star) os << '*';
      need_star = true;
      os << 'm' << parts[i];
      if (j - i > 1) os << '^' << (j - i);
      i = j;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

// A set partition (restricted growth string) is non-crossing iff for every
// pair of consecutive elements i < j of one block, each element strictly
// between them lies in a block contained in (i, j).
bool non_crossing(const std::vector<int>& rgs, int blocks) {
  const int k = static_cast<int>(rgs.size());
  std::vector<int> lo(static_cast<std::size_t>(blocks), k);
  std::vector<int> hi(static_cast<std::size_t>(blocks), -1);
  for (int x = 0; x < k; ++x) {
    const auto b = static_cast<std::size_t>(rgs[static_cast<std::size_t>(x)]);
    lo[b] = std::min(lo[b], x);
    hi[b] = std::max(hi[b], x);
  }
  std::vector<int> last(static_cast<std::size_t>(blocks), -1);
  for (int j = 0; j < k; ++j) {
    const auto b = static_cast<std::size_t>(rgs[static_cast<std::size_t>(j)]);
    const int i = last[b];
    if (i >= 0) {
      for (int x = i + 1; x < j; ++x) {
        const auto c = static_cast<std::size_t>(rgs[static_cast<std::size_t>(x)]);
        if (lo[c] < i || hi[c] > j) return false;
      }
    }
    last[b] = j;
  }
  return true;
}

void enumerate_set_partitions(int k, std::vector<int>& rgs, int blocks, std::map<Partition, long long>& out) {
  if (static_cast<int>(rgs.size()) == k) {
    if (!non_crossing(rgs, blocks)) return;
    std::vector<int> sizes(static_cast<std::size_t>(blocks), 0);
    for (int b : rgs) ++sizes[static_cast<std::size_t>(b)];
    out[Partition::from_unsorted(sizes)] += 1;
    return;
  }
  for (int b = 0; b <= blocks; ++b) {
    rgs.push_back(b);
    enumerate_set_partitions(k, rgs, std::max(blocks, b + 1), out);
    rgs.pop_back();
  }
}

}  // namespace

const std::map<Partition, long long>& nc_block_profiles(int k) {
  if (k < 1 || k > kNcOracleCap) throw Error(ErrorKind::cap_exceeded, "non-crossing oracle limited to order 10");
  static std::mutex mutex;
  static std::map<int, std::map<Partition, long long>> cache;
  std::lock_guard lock(mutex);
  auto [it, inserted] = cache.try_emplace(k);
  if (inserted) {
    std::vector<int> rgs;
    enumerate_set_partitions(k, rgs, 0, it->second);
  }
  return it->second;
}

std::vector<Rat> free_project(const std::vector<Rat>& kappa, const Rat& alpha) {
  if (alpha <= 0 || alpha > 1) throw Error(ErrorKind::out_of_range_parameter, "free_project: alpha must lie in (0, 1]");
  std::vector<Rat> out;
  for (const Rat& k : kappa) out.push_back(k / alpha);
  return out;
}

std::vector<double> free_project(const std::vector<double>& kappa, double alpha) {
  if (!(alpha > 0 && alpha <= 1)) throw Error(ErrorKind::out_of_range_parameter, "free_project: alpha must lie in (0, 1]");
  std::vector<double> out;
  for (double k : kappa) out.push_back(k / alpha);
  return out;
}

std::vector<Rat> semicircle_cumulants(const Rat& T, int K) {
  if (T < 0) throw Error(ErrorKind::out_of_range_parameter, "semicircle variance must be nonnegative");
  std::vector<Rat> out(static_cast<std::size_t>(std::max(K, 0)), Rat(0));
  if (K >= 2) out[1] = T;
  return out;
}

MomentPolynomial formal_cumulant(int d) {
  if (d < 1) throw Error(ErrorKind::invalid_argument, "cumulant order must be positive");
  std::vector<MomentPolynomial> m;
  for (int k = 1; k <= d; ++k) m.push_back(MomentPolynomial::symbol(k));
  return cumulants_from_moments(m, d).back();
}

}  // namespace bgf
