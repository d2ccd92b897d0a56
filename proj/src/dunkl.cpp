#include "bgf/dunkl.hpp"

#include <utility>

#include "bgf/error.hpp"

namespace bgf {

DunklContext::DunklContext(int n, Rat t) : N(n), theta(std::move(t)) {
  if (N < 1) throw Error(ErrorKind::invalid_argument, "N must be positive");
  if (theta <= 0) throw Error(ErrorKind::out_of_range_parameter, "theta must be positive");
}

namespace {

void check(const DunklContext& ctx, const MVPoly& f, int i) {
  if (f.num_vars() != ctx.N) {
    throw Error(ErrorKind::mismatched_context, "polynomial has " + std::to_string(f.num_vars()) +
                                                   " variables, context has N=" + std::to_string(ctx.N));
  }
  if (i < 1 || i > ctx.N) {
    throw Error(ErrorKind::index_out_of_range,
                "index " + std::to_string(i) + " outside 1.." + std::to_string(ctx.N));
  }
}

// Accumulates scale * (divided difference in (i, j)) of f into out; 0-based.
void add_divided_difference(const MVPoly& f, std::size_t i, std::size_t j, const Rat& scale, MVPoly& out) {
  for (const auto& [e, c] : f.terms()) {
    const int a = e[i];
    const int b = e[j];
    if (a == b) continue;
    const int lo = std::min(a, b);
    const int hi = std::max(a, b);
    const Rat coef = a > b ? Rat(c * scale) : Rat(-c * scale);
    Exponents g = e;
    for (int p = lo; p < hi; ++p) {
      g[i] = p;
      g[j] = a + b - 1 - p;
      out.add_term(g, coef);
    }
  }
}

}  // namespace

MVPoly divided_difference(const DunklContext& ctx, int i, int j, const MVPoly& f) {
  check(ctx, f, i);
  check(ctx, f, j);
  if (i == j) throw Error(ErrorKind::invalid_argument, "divided difference needs i != j");
  MVPoly out(ctx.N);
  add_divided_difference(f, static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1), 1, out);
  return out;
}

MVPoly dunkl_apply(const DunklContext& ctx, int i, const MVPoly& f) {
  check(ctx, f, i);
  MVPoly out = f.partial(i - 1);
  for (int j = 1; j <= ctx.N; ++j) {
    if (j != i) add_divided_difference(f, static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1), ctx.theta, out);
  }
  return out;
}

MVPoly pk_apply(const DunklContext& ctx, int k, const MVPoly& f) {
  if (k < 1) throw Error(ErrorKind::invalid_argument, "P_k needs k >= 1");
  MVPoly out(ctx.N);
  for (int i = 1; i <= ctx.N; ++i) {
    MVPoly g = f;
    for (int r = 0; r < k && !g.is_zero(); ++r) g = dunkl_apply(ctx, i, g);
    out += g;
  }
  return out;
}

Rat moment_extract(const DunklContext& ctx, const MVPoly& G, const Partition& lambda,
                   std::optional<int> truncation_degree) {
  if (G.num_vars() != ctx.N) throw Error(ErrorKind::mismatched_context, "G has the wrong number of variables");
  if (G.constant_term() != 1) throw Error(ErrorKind::wrong_constant_term, "moment_extract needs G(0) = 1");
  const int trunc = truncation_degree.value_or(G.degree());
  if (trunc < lambda.size()) {
    throw Error(ErrorKind::insufficient_truncation, "truncation degree " + std::to_string(trunc) +
                                                        " is below |lambda| = " + std::to_string(lambda.size()));
  }
  // Only the degree-|lambda| part survives evaluation at 0.
  MVPoly g = G.homogeneous_part(lambda.size());
  for (int part : lambda.parts()) {
    if (g.is_zero()) return 0;
    g = pk_apply(ctx, part, g);
  }
  return g.constant_term();
}

}  // namespace bgf
