#include <doctest.h>

#include <random>

#include "bgf/bessel.hpp"
#include "bgf/constellations.hpp"
#include "bgf/dunkl.hpp"
#include "bgf/error.hpp"
#include "bgf/freeprob.hpp"
#include "bgf/jack.hpp"
#include "support.hpp"

using namespace bgf;
using bgf::testing::random_rats;

namespace {

Rat factorial(int n) {
  Rat f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// sum_{d <= n} coeffs[d] x^d in one variable.
MVPoly univariate(const std::vector<Rat>& coeffs) {
  MVPoly p(1);
  for (std::size_t d = 0; d < coeffs.size(); ++d) p.add_term({static_cast<int>(d)}, coeffs[d]);
  return p;
}

// exp(c (x_1 + ... + x_N)) truncated at degree n, by the multinomial expansion.
MVPoly exp_linear(int N, const Rat& c, int n) {
  MVPoly out = MVPoly::constant(N, 1);
  MVPoly term = MVPoly::constant(N, 1);
  const MVPoly p1 = bgf::testing::power_sum_poly(N, 1);
  for (int d = 1; d <= n; ++d) {
    term = multiply_truncated(term, p1, n) * (c / d);
    out += term;
  }
  return out;
}

// ln G truncated at degree n from the series of ln(1 + u).
MVPoly log_poly(const MVPoly& G, int n) {
  const MVPoly u = G - MVPoly::constant(G.num_vars(), 1);
  MVPoly out(G.num_vars());
  MVPoly power = MVPoly::constant(G.num_vars(), 1);
  for (int k = 1; k <= n; ++k) {
    power = multiply_truncated(power, u, n);
    out += power * (Rat(k % 2 == 1 ? 1 : -1) / k);
  }
  return out;
}

Exponents ex(std::initializer_list<int> e, int N) {
  Exponents out(e);
  out.resize(static_cast<std::size_t>(N), 0);
  return out;
}

BgfCoeffs gaussian_coeffs(int N, const Rat& theta, int degree) {
  BgfCoeffs g;
  g.N = N;
  g.theta = theta;
  g.series = SymSeries::single(Basis::power, degree, Partition{1, 1}, frac(N, 2));
  return g;
}

const Rat kThetas[] = {frac(1, 3), frac(1, 2), Rat(1), Rat(2)};

}  // namespace

TEST_CASE("N = 1 Bessel functions are exponentials through degree 8") {
  std::mt19937 rng(1);
  for (const Rat& theta : kThetas) {
    const Rat c = bgf::testing::random_rat(rng);
    std::vector<Rat> coeffs;
    for (int d = 0; d <= 8; ++d) coeffs.push_back(pow(c, d) / factorial(d));
    const std::vector<Rat> a{c};
    CHECK(bessel_truncated(a, theta, 8) == univariate(coeffs));
  }
}

TEST_CASE("bessel_truncated examples") {
  for (int N = 1; N <= 4; ++N) {
    const std::vector<Rat> zero(static_cast<std::size_t>(N), 0);
    CHECK(bessel_truncated(zero, frac(1, 2), 5) == MVPoly::constant(N, 1));
  }
  std::mt19937 rng(2);
  for (const Rat& theta : kThetas) {
    for (int N = 2; N <= 4; ++N) {
      std::vector<Rat> a = random_rats(rng, static_cast<std::size_t>(N));
      const MVPoly B = bessel_truncated(a, theta, 5);
      CHECK(B.constant_term() == 1);
      CHECK(B.is_symmetric());
      std::swap(a[0], a[static_cast<std::size_t>(N - 1)]);
      CHECK(bessel_truncated(a, theta, 5) == B);
      const std::vector<Rat> flat(static_cast<std::size_t>(N), a[0]);
      CHECK(bessel_truncated(flat, theta, 5) == exp_linear(N, a[0], 5));
    }
  }
  const int saved = jack_degree_cap();
  set_jack_degree_cap(4);
  CHECK_THROWS_AS(bessel_truncated(std::vector<Rat>{1, 2}, Rat(1), 5), Error);
  set_jack_degree_cap(saved);
}

TEST_CASE("eigenfunction identity P_k B_a = p_k(a) B_a on truncations") {
  std::mt19937 rng(3);
  for (const Rat& theta : kThetas) {
    for (int N = 1; N <= 4; ++N) {
      const std::vector<Rat> a = random_rats(rng, static_cast<std::size_t>(N));
      const DunklContext ctx(N, theta);
      const MVPoly B6 = bessel_truncated(a, theta, 6);
      for (int k = 1; k <= 3; ++k) {
        CHECK(pk_apply(ctx, k, B6) == power_sum(a, k) * bessel_truncated(a, theta, 6 - k));
      }
    }
  }
}

TEST_CASE("bgf_atomic examples") {
  AtomicMeasure twice_zero;
  twice_zero.N = 3;
  twice_zero.atoms = {{frac(1, 2), {0, 0, 0}}, {frac(1, 2), {0, 0, 0}}};
  CHECK(bgf_atomic(twice_zero, Rat(1), 4) == MVPoly::constant(3, 1));

  AtomicMeasure two_point;
  two_point.N = 1;
  two_point.atoms = {{frac(1, 2), {0}}, {frac(1, 2), {2}}};
  std::vector<Rat> coeffs{1};
  for (int d = 1; d <= 6; ++d) coeffs.push_back(pow(Rat(2), d) / (2 * factorial(d)));
  CHECK(bgf_atomic(two_point, frac(1, 2), 6) == univariate(coeffs));

  for (int N = 1; N <= 3; ++N) {
    const Rat c = frac(-2, 3);
    const AtomicMeasure flat = AtomicMeasure::point_mass(std::vector<Rat>(static_cast<std::size_t>(N), c));
    CHECK(bgf_atomic(flat, Rat(2), 4) == exp_linear(N, c, 4));
  }
}

TEST_CASE("log_bgf_coeffs examples") {
  for (int N = 1; N <= 4; ++N) {
    const Rat c = frac(5, 3);
    const BgfCoeffs g = log_bgf_coeffs(exp_linear(N, c, N), Rat(1));
    CHECK(g.series == SymSeries::single(Basis::power, N, Partition{1}, c));
  }
  for (int N = 2; N <= 5; ++N) {
    const SymSeries half = SymSeries::single(Basis::power, N, Partition{1, 1}, frac(N, 2));
    const MVPoly G = to_mvpoly(series_exp(half), N);
    const BgfCoeffs g = log_bgf_coeffs(G, frac(1, 2), N);
    CHECK(g.series == half);
    SymSeries mono(Basis::monomial, N);
    mono.add(Partition{2}, frac(N, 2));
    mono.add(Partition{1, 1}, N);
    CHECK(basis_convert(g.series, Basis::monomial, N) == mono);
  }
  AtomicMeasure two_point;
  two_point.N = 1;
  two_point.atoms = {{frac(1, 2), {0}}, {frac(1, 2), {2}}};
  const BgfCoeffs g = bgf_coeffs_atomic(two_point, Rat(1), 4);
  CHECK(g.coeff(Partition{1}) == 1);
  CHECK(g.coeff(Partition{2}) == frac(1, 2));
  CHECK(g.coeff(Partition{3}) == 0);
  CHECK(g.coeff(Partition{4}) == frac(-1, 12));
  CHECK(g.coeff(Partition{1, 1}) == 0);
}

TEST_CASE("log_bgf_coeffs rejects asymmetric input and a wrong constant term") {
  MVPoly asym = MVPoly::constant(2, 1);
  asym.add_term({1, 0}, 1);
  try {
    log_bgf_coeffs(asym, Rat(1));
    FAIL("expected asymmetric_input");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::asymmetric_input);
  }
  try {
    log_bgf_coeffs(MVPoly::constant(2, 2), Rat(1));
    FAIL("expected wrong_constant_term");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::wrong_constant_term);
  }
}

TEST_CASE("log coefficients satisfy the derivative formulas for sizes 2 and 3") {
  // With ln G = sum a_lambda p_lambda, the derivative combinations at 0 give
  // z_lambda a_lambda; the general extraction formula carries the 1/z_lambda.
  std::mt19937 rng(4);
  for (const Rat& theta : {frac(1, 2), Rat(2)}) {
    for (int N = 3; N <= 4; ++N) {
      const AtomicMeasure mu = bgf::testing::random_measure(rng, N, 3);
      const MVPoly G = bgf_atomic(mu, theta, 3);
      const BgfCoeffs g = log_bgf_coeffs(G, theta);
      const MVPoly L = log_poly(G, 3);
      // d^k/dx^e at 0 = (prod e_i!) * coefficient of x^e.
      const Rat d11 = 2 * L.coeff(ex({2}, N));
      const Rat d12 = L.coeff(ex({1, 1}, N));
      const Rat d111 = 6 * L.coeff(ex({3}, N));
      const Rat d112 = 2 * L.coeff(ex({2, 1}, N));
      const Rat d123 = L.coeff(ex({1, 1, 1}, N));
      CHECK(g.coeff(Partition{2}) == (d11 - d12) / Partition{2}.z_factor());
      CHECK(g.coeff(Partition{1, 1}) == d12 / Partition{1, 1}.z_factor());
      CHECK(g.coeff(Partition{3}) == (d111 / 2 - frac(3, 2) * d112 + d123) / Partition{3}.z_factor());
      CHECK(g.coeff(Partition{2, 1}) == (d112 - d123) / Partition{2, 1}.z_factor());
      CHECK(g.coeff(Partition{1, 1, 1}) == d123 / Partition{1, 1, 1}.z_factor());
      CHECK(to_mvpoly(g.series, N) == L);
    }
  }
}

TEST_CASE("fit_inverse_n recovers exact 1/N data") {
  const std::vector<int> Ns{4, 8, 16};
  const std::vector<Rat> ys{frac(3, 2) + frac(5, 4), frac(3, 2) + frac(5, 8), frac(3, 2) + frac(5, 16)};
  const auto [c0, c1] = fit_inverse_n(Ns, ys);
  CHECK(c0 == frac(3, 2));
  CHECK(c1 == 5);
}

TEST_CASE("lln_check examples") {
  const Rat theta = frac(1, 2);
  std::vector<BgfCoeffs> gauss;
  for (int N : {4, 8, 16, 32}) gauss.push_back(gaussian_coeffs(N, theta, 4));
  const LlnReport rg = lln_check(gauss, theta, 1e-2);
  CHECK(rg.pass);
  for (const Rat& k : rg.kappa_estimates) CHECK(k == 0);
  const std::vector<Rat> m = moments_from_cumulants(rg.kappa_estimates, 4);
  for (const Rat& mk : m) CHECK(mk == 0);

  std::vector<BgfCoeffs> zero;
  for (int N : {3, 4, 5}) {
    zero.push_back(bgf_coeffs_atomic(AtomicMeasure::point_mass(std::vector<Rat>(static_cast<std::size_t>(N), 0)), theta, 3));
  }
  const LlnReport rz = lln_check(zero, theta, 1e-2);
  CHECK(rz.pass);
  for (const Rat& k : rz.kappa_estimates) CHECK(k == 0);

  for (const Rat& th : {Rat(1), Rat(2)}) {
    std::vector<BgfCoeffs> uniform;
    const Profile p = uniform_profile();
    for (int N : {8, 12, 16, 20}) uniform.push_back(bgf_coeffs_atomic(AtomicMeasure::point_mass(p.points(N)), th, 3));
    const LlnReport ru = lln_check(uniform, th, 1e-2);
    CHECK(ru.pass);
    const std::vector<Rat> mu = moments_from_cumulants(ru.kappa_estimates, 3);
    for (int k = 1; k <= 3; ++k) {
      CHECK(std::abs(to_double(mu[static_cast<std::size_t>(k - 1)]) - 1.0 / (k + 1)) < 1e-2);
    }
  }

  CHECK_THROWS_AS(lln_check(std::span<const BgfCoeffs>(gauss.data(), 2), theta, 1e-2), Error);
  std::vector<BgfCoeffs> unordered{gauss[1], gauss[0], gauss[2]};
  CHECK_THROWS_AS(lln_check(unordered, theta, 1e-2), Error);
  CHECK_THROWS_AS(lln_check(gauss, Rat(1), 1e-2), Error);
}

TEST_CASE("theta_add examples") {
  const Rat theta = frac(1, 2);
  const int N = 3;
  std::mt19937 rng(5);
  const BgfCoeffs g = bgf_coeffs_atomic(bgf::testing::random_measure(rng, N, 2), theta, 3);
  const BgfCoeffs zero = bgf_coeffs_atomic(AtomicMeasure::point_mass({0, 0, 0}), theta, 3);
  CHECK(theta_add(g, zero).series == g.series);

  const Rat c1 = frac(1, 3);
  const Rat c2 = frac(-5, 2);
  const BgfCoeffs s = theta_add(bgf_coeffs_atomic(AtomicMeasure::point_mass({c1, c1, c1}), theta, 3),
                                bgf_coeffs_atomic(AtomicMeasure::point_mass({c2, c2, c2}), theta, 3));
  CHECK(s.series == bgf_coeffs_atomic(AtomicMeasure::point_mass({c1 + c2, c1 + c2, c1 + c2}), theta, 3).series);

  const BgfCoeffs gg = theta_add(gaussian_coeffs(4, theta, 4), gaussian_coeffs(4, theta, 4));
  CHECK(gg.series == SymSeries::single(Basis::power, 4, Partition{1, 1}, 4));

  CHECK_THROWS_AS(theta_add(g, gaussian_coeffs(4, theta, 3)), Error);
  CHECK_THROWS_AS(theta_add(g, bgf_coeffs_atomic(AtomicMeasure::point_mass({0, 0, 0}), Rat(1), 3)), Error);
}

TEST_CASE("theta_add is additive on first moments") {
  std::mt19937 rng(6);
  for (const Rat& theta : {frac(1, 2), Rat(1), Rat(2)}) {
    for (int N = 1; N <= 3; ++N) {
      const AtomicMeasure a = bgf::testing::random_measure(rng, N, 3);
      const AtomicMeasure b = bgf::testing::random_measure(rng, N, 2);
      const BgfCoeffs sum = theta_add(bgf_coeffs_atomic(a, theta, 3), bgf_coeffs_atomic(b, theta, 3));
      const Rat m = moment_extract(DunklContext(N, theta), bgf_from_coeffs(sum), Partition{1}, 3);
      CHECK(m == bgf::testing::atomic_moment(a, Partition{1}) + bgf::testing::atomic_moment(b, Partition{1}));
    }
  }
}

TEST_CASE("corner_restrict examples") {
  CHECK(corner_restrict(MVPoly::constant(3, 1), 2) == MVPoly::constant(2, 1));
  const Rat c = frac(7, 4);
  CHECK(corner_restrict(exp_linear(2, c, 5), 1) == exp_linear(1, c, 5));

  // y uniform on [0, 1]: E[e^{xy}] = sum x^k / (k+1)!.
  std::vector<Rat> integral;
  for (int k = 0; k <= 5; ++k) integral.push_back(1 / factorial(k + 1));
  const std::vector<Rat> a{0, 1};
  CHECK(corner_restrict(bessel_truncated(a, Rat(1), 5), 1) == univariate(integral));
  CHECK(corner_restrict(bessel_truncated(a, Rat(1), 2), 1) ==
        univariate({Rat(1), frac(1, 2), frac(1, 6)}));
}

TEST_CASE("corner_restrict commutes with bgf_atomic for point masses") {
  for (const Rat& theta : {frac(1, 2), Rat(3)}) {
    for (int N = 2; N <= 4; ++N) {
      for (int M = 1; M < N; ++M) {
        const Rat c = frac(-3, 5);
        const MVPoly big = bgf_atomic(AtomicMeasure::point_mass(std::vector<Rat>(static_cast<std::size_t>(N), c)), theta, M);
        const MVPoly small = bgf_atomic(AtomicMeasure::point_mass(std::vector<Rat>(static_cast<std::size_t>(M), c)), theta, M);
        CHECK(corner_restrict(big, M) == small);
      }
    }
  }
}

TEST_CASE("dbm_factor examples") {
  const Rat theta = frac(1, 2);
  std::mt19937 rng(7);
  const BgfCoeffs g = bgf_coeffs_atomic(bgf::testing::random_measure(rng, 3, 2), theta, 3);
  CHECK(dbm_factor(g, 0).series == g.series);

  for (const Rat& th : kThetas) {
    for (int N = 2; N <= 4; ++N) {
      const BgfCoeffs zero = bgf_coeffs_atomic(AtomicMeasure::point_mass(std::vector<Rat>(static_cast<std::size_t>(N), 0)), th, 2);
      const BgfCoeffs one = dbm_factor(zero, 1);
      CHECK(one.series == SymSeries::single(Basis::power, 2, Partition{2}, frac(1, 2)));
      const Rat t = frac(3, 2);
      const MVPoly G = bgf_from_coeffs(dbm_factor(zero, t));
      CHECK(moment_extract(DunklContext(N, th), G, Partition{2}) == N * t * (1 + th * (N - 1)));
    }
  }
}

TEST_CASE("measure JSON parsing") {
  const MeasureFile f = parse_measure_json(R"({"N": 2, "theta": "1/2", "atoms": [{"w": "1/3", "a": ["0", 1]}, {"w": 0.5, "a": [-1, "3/2"]}, {"w": "1/6", "a": [2, 2]}]})");
  CHECK(f.measure.N == 2);
  REQUIRE(f.theta.has_value());
  CHECK(*f.theta == frac(1, 2));
  REQUIRE(f.measure.atoms.size() == 3);
  CHECK(f.measure.atoms[1].weight == frac(1, 2));
  CHECK(f.measure.atoms[1].point[1] == frac(3, 2));

  CHECK_FALSE(parse_measure_json(R"({"N": 1, "atoms": [{"w": 1, "a": [0]}]})").theta.has_value());
  CHECK_THROWS_AS(parse_measure_json("{"), Error);
  CHECK_THROWS_AS(parse_measure_json(R"({"N": 1, "atoms": [{"w": "1/2", "a": [0]}]})"), Error);
  CHECK_THROWS_AS(parse_measure_json(R"({"N": 2, "atoms": [{"w": 1, "a": [0]}]})"), Error);
  CHECK_THROWS_AS(parse_measure_json(R"({"N": 2, "atoms": [{"w": 1, "a": [1, 0]}]})"), Error);
  CHECK_THROWS_AS(parse_measure_json(R"({"N": 1, "atoms": [{"w": -1, "a": [0]}, {"w": 2, "a": [1]}]})"), Error);
  CHECK_THROWS_AS(parse_measure_json(R"({"N": 1, "atoms": [{"w": "x", "a": [0]}]})"), Error);
  CHECK_THROWS_AS(load_measure_json("/nonexistent/measure.json"), Error);
}
