#pragma once

#include <optional>

#include "bgf/mvpoly.hpp"
#include "bgf/partition.hpp"
#include "bgf/rational.hpp"

namespace bgf {

struct DunklContext {
  int N;
  Rat theta;

  DunklContext(int n, Rat t);
};

// (1 - s_ij) / (x_i - x_j) applied termwise through the closed form
//   x_i^a x_j^b  ->  sum_{c=b}^{a-1} x_i^c x_j^{a+b-1-c}      (a >= b)
//               -> -sum_{c=a}^{b-1} x_i^c x_j^{a+b-1-c}      (a <  b)
// Indices are 1-based.
MVPoly divided_difference(const DunklContext& ctx, int i, int j, const MVPoly& f);

// D_i = d/dx_i + theta sum_{j != i} (1 - s_ij) / (x_i - x_j), 1-based i.
MVPoly dunkl_apply(const DunklContext& ctx, int i, const MVPoly& f);

// P_k = sum_i D_i^k.
MVPoly pk_apply(const DunklContext& ctx, int k, const MVPoly& f);

// (prod_i P_{lambda_i}) G at x = 0. G must be the truncation of a Bessel
// generating function to degree >= |lambda| with G(0) = 1. The truncation
// degree defaults to deg G; pass it explicitly when top coefficients vanish.
Rat moment_extract(const DunklContext& ctx, const MVPoly& G, const Partition& lambda,
                   std::optional<int> truncation_degree = std::nullopt);

}  // namespace bgf
