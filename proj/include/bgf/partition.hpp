#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "bgf/rational.hpp"

namespace bgf {

// Integer partition: weakly decreasing tuple of positive integers. The empty
// partition indexes constant terms.
class Partition {
 public:
  Partition() = default;
  // Throws Error(invalid_argument) unless parts are positive and weakly decreasing.
  explicit Partition(std::vector<int> parts);
  Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

  // Sorts and drops zeros first.
  static Partition from_unsorted(std::vector<int> parts);

  const std::vector<int>& parts() const noexcept { return parts_; }
  int operator[](std::size_t i) const { return parts_[i]; }
  bool empty() const noexcept { return parts_.empty(); }

  int size() const noexcept { return size_; }  // |lambda|
  int length() const noexcept { return static_cast<int>(parts_.size()); }
  int multiplicity(int part) const;
  Partition conjugate() const;

  // Multiset union of parts.
  Partition merged_with(const Partition& other) const;

  // z_lambda = prod_j j^{m_j} m_j!
  Rat z_factor() const;

  // "(3,2,1)"; "()" for the empty partition.
  std::string to_string() const;

  bool operator==(const Partition& other) const = default;

  // Canonical order: by size, then reverse lexicographic within a size,
  // so (3) < (2,1) < (1,1,1).
  std::strong_ordering operator<=>(const Partition& other) const;

 private:
  std::vector<int> parts_;
  int size_ = 0;
};

// All partitions of d in canonical (reverse lexicographic) order.
std::vector<Partition> partitions_of(int d);

// All partitions with 0 <= |lambda| <= max_size, grouped by size.
std::vector<Partition> partitions_up_to(int max_size);

// True if lhs dominates rhs (same size required).
bool dominates(const Partition& lhs, const Partition& rhs);

// Parses "3,1,1" or "(3,1,1)"; "" or "()" gives the empty partition.
Partition parse_partition(const std::string& text);

}  // namespace bgf
