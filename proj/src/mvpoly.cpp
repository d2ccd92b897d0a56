#include "bgf/mvpoly.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "bgf/error.hpp"

namespace bgf {

MVPoly::MVPoly(int num_vars) : n_(num_vars) {
  if (num_vars < 1) throw Error(ErrorKind::invalid_argument, "MVPoly needs at least one variable");
}

MVPoly MVPoly::constant(int num_vars, const Rat& value) {
  MVPoly p(num_vars);
  p.add_term(Exponents(static_cast<std::size_t>(num_vars), 0), value);
  return p;
}

MVPoly MVPoly::variable(int num_vars, int index) {
  MVPoly p(num_vars);
  p.check_index(index);
  Exponents e(static_cast<std::size_t>(num_vars), 0);
  e[static_cast<std::size_t>(index)] = 1;
  p.add_term(e, 1);
  return p;
}

void MVPoly::check_index(int i) const {
  if (i < 0 || i >= n_) {
    throw Error(ErrorKind::index_out_of_range,
                "variable index " + std::to_string(i) + " outside 0.." + std::to_string(n_ - 1));
  }
}

namespace {

int total(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0); }

}  // namespace

int MVPoly::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, total(e));
  return d;
}

Rat MVPoly::coeff(const Exponents& e) const {
  const auto it = terms_.find(e);
  return it == terms_.end() ? Rat(0) : it->second;
}

Rat MVPoly::constant_term() const { return coeff(Exponents(static_cast<std::size_t>(n_), 0)); }

void MVPoly::add_term(const Exponents& e, const Rat& c) {
  if (static_cast<int>(e.size()) != n_) throw Error(ErrorKind::length_mismatch, "exponent vector has wrong length");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

MVPoly& MVPoly::operator+=(const MVPoly& other) {
  if (other.n_ != n_) throw Error(ErrorKind::mismatched_context, "polynomials in different numbers of variables");
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

MVPoly& MVPoly::operator-=(const MVPoly& other) {
  if (other.n_ != n_) throw Error(ErrorKind::mismatched_context, "polynomials in different numbers of variables");
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

MVPoly& MVPoly::operator*=(const Rat& s) {
  if (s == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

MVPoly multiply_truncated(const MVPoly& a, const MVPoly& b, int max_degree) {
  if (a.num_vars() != b.num_vars()) {
    throw Error(ErrorKind::mismatched_context, "polynomials in different numbers of variables");
  }
  MVPoly out(a.num_vars());
  Exponents e(static_cast<std::size_t>(a.num_vars()));
  for (const auto& [ea, ca] : a.terms()) {
    const int da = total(ea);
    for (const auto& [eb, cb] : b.terms()) {
      if (da + total(eb) > max_degree) continue;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

MVPoly operator*(const MVPoly& a, const MVPoly& b) {
  return multiply_truncated(a, b, std::max(a.degree(), 0) + std::max(b.degree(), 0));
}

MVPoly MVPoly::truncated(int max_degree) const {
  MVPoly out(n_);
  for (const auto& [e, c] : terms_) {
    if (total(e) <= max_degree) out.terms_.emplace(e, c);
  }
  return out;
}

MVPoly MVPoly::homogeneous_part(int d) const {
  MVPoly out(n_);
  for (const auto& [e, c] : terms_) {
    if (total(e) == d) out.terms_.emplace(e, c);
  }
  return out;
}

MVPoly MVPoly::partial(int i) const {
  check_index(i);
  const auto k = static_cast<std::size_t>(i);
  MVPoly out(n_);
  for (const auto& [e, c] : terms_) {
    if (e[k] == 0) continue;
    Exponents f = e;
    --f[k];
    out.add_term(f, c * e[k]);
  }
  return out;
}

MVPoly MVPoly::swap_vars(int i, int j) const {
  check_index(i);
  check_index(j);
  MVPoly out(n_);
  for (const auto& [e, c] : terms_) {
    Exponents f = e;
    std::swap(f[static_cast<std::size_t>(i)], f[static_cast<std::size_t>(j)]);
    out.terms_.emplace(std::move(f), c);
  }
  return out;
}

MVPoly MVPoly::restrict_leading(int M) const {
  if (M < 1 || M > n_) throw Error(ErrorKind::invalid_argument, "restrict_leading: M must lie in 1..N");
  MVPoly out(M);
  for (const auto& [e, c] : terms_) {
    if (std::any_of(e.begin() + M, e.end(), [](int x) { return x != 0; })) continue;
    out.add_term(Exponents(e.begin(), e.begin() + M), c);
  }
  return out;
}

Rat MVPoly::evaluate(std::span<const Rat> point) const {
  if (static_cast<int>(point.size()) != n_) throw Error(ErrorKind::length_mismatch, "evaluation point has wrong length");
  Rat out = 0;
  for (const auto& [e, c] : terms_) {
    Rat term = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i]) term *= pow(point[i], e[i]);
    }
    out += term;
  }
  return out;
}

namespace {

mpz_class orbit_size(const Exponents& sorted) {
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), sorted.size());
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), j - i);
    out /= f;
    i = j;
  }
  return out;
}

}  // namespace

bool MVPoly::is_symmetric() const {
  // Every term must match its sorted representative, and each orbit must be
  // complete.
  std::map<Exponents, mpz_class> seen;
  for (const auto& [e, c] : terms_) {
    Exponents s = e;
    std::sort(s.begin(), s.end(), std::greater<>());
    if (coeff(s) != c) return false;
    seen[s] += 1;
  }
  for (const auto& [s, count] : seen) {
    if (count != orbit_size(s)) return false;
  }
  return true;
}

std::string MVPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    const Rat mag = abs(c);
    os << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
    first = false;
    const bool is_const = total(e) == 0;
    if (is_const || mag != 1) os << bgf::to_string(mag);
    bool need_star = !is_const && mag != 1;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!e[i]) continue;
      if (need_star) os << '*';
      need_star = true;
      os << 'x' << (i + 1);
      if (e[i] > 1) os << '^' << e[i];
    }
  }
  return os.str();
}

MVPoly to_mvpoly(const SymSeries& s, int N) {
  const SymSeries m = basis_convert(s, Basis::monomial);
  MVPoly out(N);
  for (const auto& [mu, c] : m.coeffs()) {
    if (mu.length() > N) continue;
    Exponents e(static_cast<std::size_t>(N), 0);
    std::copy(mu.parts().begin(), mu.parts().end(), e.begin());
    std::sort(e.begin(), e.end());
    do {
      out.add_term(e, c);
    } while (std::next_permutation(e.begin(), e.end()));
  }
  return out;
}

SymSeries symmetric_to_monomial(const MVPoly& g, int truncation_degree) {
  if (!g.is_symmetric()) throw Error(ErrorKind::asymmetric_input, "polynomial is not symmetric");
  SymSeries out(Basis::monomial, truncation_degree);
  for (const auto& [e, c] : g.terms()) {
    if (!std::is_sorted(e.begin(), e.end(), std::greater<>())) continue;
    const Partition mu = Partition::from_unsorted(e);
    if (mu.size() <= truncation_degree) out.add(mu, c);
  }
  return out;
}

}  // namespace bgf
