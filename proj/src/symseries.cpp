#include "bgf/symseries.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <sstream>
#include <utility>
#include <vector>

#include "bgf/error.hpp"

namespace bgf {

const char* to_string(Basis basis) {
  switch (basis) {
    case Basis::power: return "power";
    case Basis::monomial: return "monomial";
    case Basis::elementary: return "elementary";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// SymSeries

SymSeries::SymSeries(Basis basis, int truncation_degree) : basis_(basis), degree_(truncation_degree) {
  if (truncation_degree < 0) throw Error(ErrorKind::invalid_argument, "negative truncation degree");
}

SymSeries SymSeries::constant(Basis basis, int truncation_degree, const Rat& value) {
  SymSeries s(basis, truncation_degree);
  s.add(Partition{}, value);
  return s;
}

SymSeries SymSeries::single(Basis basis, int truncation_degree, const Partition& lambda, const Rat& coeff) {
  SymSeries s(basis, truncation_degree);
  s.add(lambda, coeff);
  return s;
}

Rat SymSeries::coeff(const Partition& lambda) const {
  const auto it = coeffs_.find(lambda);
  return it == coeffs_.end() ? Rat(0) : it->second;
}

void SymSeries::add(const Partition& lambda, const Rat& value) {
  if (lambda.size() > degree_) {
    throw Error(ErrorKind::invalid_argument,
                "term " + lambda.to_string() + " exceeds truncation degree " + std::to_string(degree_));
  }
  if (value == 0) return;
  auto [it, inserted] = coeffs_.try_emplace(lambda, value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0) coeffs_.erase(it);
  }
}

void SymSeries::set(const Partition& lambda, const Rat& value) {
  coeffs_.erase(lambda);
  add(lambda, value);
}

SymSeries SymSeries::truncated(int d) const {
  SymSeries out(basis_, std::min(d, degree_));
  for (const auto& [lambda, c] : coeffs_) {
    if (lambda.size() <= out.degree_) out.coeffs_.emplace(lambda, c);
  }
  return out;
}

SymSeries SymSeries::homogeneous_part(int d) const {
  SymSeries out(basis_, degree_);
  for (const auto& [lambda, c] : coeffs_) {
    if (lambda.size() == d) out.coeffs_.emplace(lambda, c);
  }
  return out;
}

int SymSeries::max_degree() const {
  int d = -1;
  for (const auto& [lambda, c] : coeffs_) d = std::max(d, lambda.size());
  return d;
}

SymSeries& SymSeries::operator+=(const SymSeries& other) {
  if (other.basis_ != basis_) throw Error(ErrorKind::mismatched_context, "adding series in different bases");
  degree_ = std::min(degree_, other.degree_);
  std::erase_if(coeffs_, [&](const auto& kv) { return kv.first.size() > degree_; });
  for (const auto& [lambda, c] : other.coeffs_) {
    if (lambda.size() <= degree_) add(lambda, c);
  }
  return *this;
}

SymSeries& SymSeries::operator-=(const SymSeries& other) {
  SymSeries neg = other;
  neg *= Rat(-1);
  return *this += neg;
}

SymSeries& SymSeries::operator*=(const Rat& scalar) {
  if (scalar == 0) {
    coeffs_.clear();
    return *this;
  }
  for (auto& [lambda, c] : coeffs_) c *= scalar;
  return *this;
}

std::string SymSeries::to_string() const {
  if (coeffs_.empty()) return "0";
  const char letter = basis_ == Basis::power ? 'p' : basis_ == Basis::monomial ? 'm' : 'e';
  std::ostringstream os;
  bool first = true;
  for (const auto& [lambda, c] : coeffs_) {
    Rat mag = abs(c);
    if (first) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (lambda.empty()) {
      os << bgf::to_string(mag);
    } else {
      if (mag != 1) os << bgf::to_string(mag) << ' ';
      os << letter << lambda.to_string();
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Transition matrices between a multiplicative basis and the monomial basis.

namespace {

using Matrix = std::vector<std::vector<Rat>>;

// Number of ways to distribute the parts of lambda into slots so that slot j
// receives exactly mu_j: the coefficient of m_mu in p_lambda.
long long count_power(const std::vector<int>& lambda, std::size_t index, std::vector<int>& slots) {
  if (index == lambda.size()) {
    return std::all_of(slots.begin(), slots.end(), [](int s) { return s == 0; }) ? 1 : 0;
  }
  long long total = 0;
  for (auto& slot : slots) {
    if (slot >= lambda[index]) {
      slot -= lambda[index];
      total += count_power(lambda, index + 1, slots);
      slot += lambda[index];
    }
  }
  return total;
}

// 0-1 matrices with row sums lambda and column sums mu: the coefficient of
// m_mu in e_lambda.
long long count_elementary_rows(const std::vector<int>& rows, std::size_t row, std::vector<int>& cols);

long long choose_columns(const std::vector<int>& rows, std::size_t row, int need, std::size_t from,
                         std::vector<int>& cols) {
  if (need == 0) return count_elementary_rows(rows, row + 1, cols);
  long long total = 0;
  for (std::size_t c = from; c < cols.size(); ++c) {
    if (cols[c] > 0) {
      --cols[c];
      total += choose_columns(rows, row, need - 1, c + 1, cols);
      ++cols[c];
    }
  }
  return total;
}

long long count_elementary_rows(const std::vector<int>& rows, std::size_t row, std::vector<int>& cols) {
  if (row == rows.size()) {
    return std::all_of(cols.begin(), cols.end(), [](int c) { return c == 0; }) ? 1 : 0;
  }
  return choose_columns(rows, row, rows[row], 0, cols);
}

Matrix invert(Matrix a) {
  const std::size_t n = a.size();
  Matrix inv(n, std::vector<Rat>(n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) throw Error(ErrorKind::invalid_argument, "singular transition matrix");
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    const Rat p = a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] /= p;
      inv[col][j] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rat f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

struct Transition {
  std::vector<Partition> parts;
  std::map<Partition, std::size_t> index;
  Matrix to_monomial;    // [lambda][mu]: b_lambda = sum_mu T m_mu
  Matrix from_monomial;  // [mu][lambda]: m_mu = sum_lambda T b_lambda
};

std::shared_ptr<const Transition> build_transition(Basis basis, int d) {
  auto t = std::make_shared<Transition>();
  t->parts = partitions_of(d);
  const std::size_t n = t->parts.size();
  for (std::size_t i = 0; i < n; ++i) t->index.emplace(t->parts[i], i);
  t->to_monomial.assign(n, std::vector<Rat>(n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<int> slots = t->parts[j].parts();
      const long long c = basis == Basis::power
                              ? count_power(t->parts[i].parts(), 0, slots)
                              : count_elementary_rows(t->parts[i].parts(), 0, slots);
      t->to_monomial[i][j] = Rat(static_cast<long>(c));
    }
  }
  t->from_monomial = invert(t->to_monomial);
  return t;
}

// Transitions are cached per (basis, degree) behind a mutex; entries are
// immutable once published.
std::shared_ptr<const Transition> transition(Basis basis, int d) {
  static std::mutex mutex;
  static std::map<std::pair<Basis, int>, std::shared_ptr<const Transition>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{basis, d}];
  if (!slot) slot = build_transition(basis, d);
  return slot;
}

SymSeries to_monomial(const SymSeries& s) {
  if (s.basis() == Basis::monomial) return s;
  SymSeries out(Basis::monomial, s.truncation_degree());
  for (const auto& [lambda, c] : s.coeffs()) {
    const auto t = transition(s.basis(), lambda.size());
    const auto& row = t->to_monomial[t->index.at(lambda)];
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] != 0) out.add(t->parts[j], c * row[j]);
    }
  }
  return out;
}

SymSeries from_monomial(const SymSeries& s, Basis target) {
  if (target == Basis::monomial) return s;
  SymSeries out(target, s.truncation_degree());
  for (const auto& [mu, c] : s.coeffs()) {
    const auto t = transition(target, mu.size());
    const auto& row = t->from_monomial[t->index.at(mu)];
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] != 0) out.add(t->parts[j], c * row[j]);
    }
  }
  return out;
}

SymSeries multiply_merging(const SymSeries& lhs, const SymSeries& rhs) {
  const int d = std::min(lhs.truncation_degree(), rhs.truncation_degree());
  SymSeries out(lhs.basis(), d);
  for (const auto& [a, ca] : lhs.coeffs()) {
    if (a.size() > d) continue;
    for (const auto& [b, cb] : rhs.coeffs()) {
      if (a.size() + b.size() > d) continue;
      out.add(a.merged_with(b), ca * cb);
    }
  }
  return out;
}

}  // namespace

Rat to_monomial_coefficient(Basis from, const Partition& lambda, const Partition& mu) {
  if (lambda.size() != mu.size()) return 0;
  if (from == Basis::monomial) return lambda == mu ? 1 : 0;
  const auto t = transition(from, lambda.size());
  return t->to_monomial[t->index.at(lambda)][t->index.at(mu)];
}

SymSeries multiply(const SymSeries& lhs, const SymSeries& rhs) {
  if (lhs.basis() != rhs.basis()) throw Error(ErrorKind::mismatched_context, "multiplying series in different bases");
  if (lhs.basis() != Basis::monomial) return multiply_merging(lhs, rhs);
  return basis_convert(multiply_merging(basis_convert(lhs, Basis::power), basis_convert(rhs, Basis::power)),
                       Basis::monomial);
}

SymSeries basis_convert(const SymSeries& s, Basis target, std::optional<int> num_vars) {
  if (num_vars) {
    if (*num_vars < 1) throw Error(ErrorKind::invalid_argument, "number of variables must be positive");
    if (s.truncation_degree() > *num_vars) {
      throw Error(ErrorKind::degree_exceeds_variables,
                  "truncation degree " + std::to_string(s.truncation_degree()) + " exceeds " +
                      std::to_string(*num_vars) + " variables; the expansion is not unique");
    }
  }
  if (s.basis() == target) return s;
  return from_monomial(to_monomial(s), target);
}

SymSeries series_exp(const SymSeries& s) {
  if (s.constant_term() != 0) throw Error(ErrorKind::wrong_constant_term, "series_exp needs constant term 0");
  const SymSeries x = basis_convert(s, Basis::power);
  const int d = x.truncation_degree();
  SymSeries result = SymSeries::constant(Basis::power, d, 1);
  SymSeries term = result;
  for (int k = 1; k <= d; ++k) {
    term = multiply(term, x) * frac(1, k);
    if (term.is_zero()) break;
    result += term;
  }
  return basis_convert(result, s.basis());
}

SymSeries series_log(const SymSeries& s) {
  if (s.constant_term() != 1) throw Error(ErrorKind::wrong_constant_term, "series_log needs constant term 1");
  SymSeries u = basis_convert(s, Basis::power);
  u.set(Partition{}, 0);
  const int d = u.truncation_degree();
  SymSeries result(Basis::power, d);
  SymSeries power = u;
  for (int k = 1; k <= d && !power.is_zero(); ++k) {
    result += power * frac(k % 2 == 1 ? 1 : -1, k);
    power = multiply(power, u);
  }
  return basis_convert(result, s.basis());
}

Rat f_eta_eval(const Partition& eta, std::span<const Rat> values) {
  const SymSeries in_e = basis_convert(SymSeries::single(Basis::monomial, eta.size(), eta), Basis::elementary);
  Rat total = 0;
  for (const auto& [lambda, c] : in_e.coeffs()) {
    Rat term = c;
    for (int part : lambda.parts()) {
      if (static_cast<std::size_t>(part) > values.size()) {
        throw Error(ErrorKind::invalid_argument, "f_eta_eval: value e_" + std::to_string(part) + " not provided");
      }
      term *= values[static_cast<std::size_t>(part - 1)];
    }
    total += term;
  }
  return total;
}

Rat evaluate(const SymSeries& s, std::span<const Rat> point) {
  const SymSeries ps = basis_convert(s, Basis::power);
  std::vector<Rat> sums(static_cast<std::size_t>(std::max(ps.truncation_degree(), 0)) + 1);
  for (std::size_t k = 1; k < sums.size(); ++k) sums[k] = power_sum(point, static_cast<int>(k));
  Rat total = 0;
  for (const auto& [lambda, c] : ps.coeffs()) {
    Rat term = c;
    for (int part : lambda.parts()) term *= sums[static_cast<std::size_t>(part)];
    total += term;
  }
  return total;
}

}  // namespace bgf
