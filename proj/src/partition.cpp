#include "bgf/partition.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "bgf/error.hpp"

namespace bgf {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] < 1) throw Error(ErrorKind::invalid_argument, "partition parts must be positive");
    if (i > 0 && parts_[i] > parts_[i - 1]) {
      throw Error(ErrorKind::invalid_argument, "partition parts must be weakly decreasing");
    }
  }
  size_ = std::accumulate(parts_.begin(), parts_.end(), 0);
}

Partition Partition::from_unsorted(std::vector<int> parts) {
  std::erase(parts, 0);
  std::sort(parts.begin(), parts.end(), std::greater<>());
  return Partition(std::move(parts));
}

int Partition::multiplicity(int part) const {
  return static_cast<int>(std::count(parts_.begin(), parts_.end(), part));
}

Partition Partition::conjugate() const {
  if (parts_.empty()) return {};
  std::vector<int> conj(static_cast<std::size_t>(parts_.front()), 0);
  for (int p : parts_) {
    for (int j = 0; j < p; ++j) ++conj[static_cast<std::size_t>(j)];
  }
  return Partition(std::move(conj));
}

Partition Partition::merged_with(const Partition& other) const {
  std::vector<int> all = parts_;
  all.insert(all.end(), other.parts_.begin(), other.parts_.end());
  std::sort(all.begin(), all.end(), std::greater<>());
  return Partition(std::move(all));
}

Rat Partition::z_factor() const {
  mpz_class z = 1;
  std::size_t i = 0;
  while (i < parts_.size()) {
    const int p = parts_[i];
    int m = 0;
    while (i < parts_.size() && parts_[i] == p) {
      ++m;
      ++i;
      z *= p;
      z *= m;
    }
  }
  return Rat(z);
}

std::string Partition::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) os << ',';
    os << parts_[i];
  }
  os << ')';
  return os.str();
}

std::strong_ordering Partition::operator<=>(const Partition& other) const {
  if (size_ != other.size_) return size_ <=> other.size_;
  // Reverse lexicographic: larger leading parts come first.
  const auto n = std::min(parts_.size(), other.parts_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (parts_[i] != other.parts_[i]) return other.parts_[i] <=> parts_[i];
  }
  return parts_.size() <=> other.parts_.size();
}

namespace {

void generate(int remaining, int max_part, std::vector<int>& current, std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(current);
    return;
  }
  for (int p = std::min(remaining, max_part); p >= 1; --p) {
    current.push_back(p);
    generate(remaining - p, p, current, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<Partition> partitions_of(int d) {
  if (d < 0) throw Error(ErrorKind::invalid_argument, "partitions_of: negative size");
  std::vector<Partition> out;
  std::vector<int> current;
  generate(d, d, current, out);
  return out;
}

std::vector<Partition> partitions_up_to(int max_size) {
  std::vector<Partition> out;
  for (int d = 0; d <= max_size; ++d) {
    auto level = partitions_of(d);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

bool dominates(const Partition& lhs, const Partition& rhs) {
  if (lhs.size() != rhs.size()) return false;
  int a = 0;
  int b = 0;
  const auto n = static_cast<std::size_t>(std::max(lhs.length(), rhs.length()));
  for (std::size_t i = 0; i < n; ++i) {
    a += i < lhs.parts().size() ? lhs[i] : 0;
    b += i < rhs.parts().size() ? rhs[i] : 0;
    if (a < b) return false;
  }
  return true;
}

Partition parse_partition(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (c != '(' && c != ')' && c != ' ') s.push_back(c);
  }
  std::vector<int> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      parts.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw Error(ErrorKind::invalid_argument, "malformed partition '" + text + "'");
    }
  }
  return Partition(std::move(parts));
}

}  // namespace bgf
