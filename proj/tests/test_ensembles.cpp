#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "bgf/ensembles.hpp"
#include "bgf/error.hpp"

using namespace bgf;

namespace {

SimConfig config(int N, double theta, int trajectories, std::uint64_t seed) {
  SimConfig cfg;
  cfg.N = N;
  cfg.theta = theta;
  cfg.trajectories = trajectories;
  cfg.seed = seed;
  return cfg;
}

struct Stat {
  double mean = 0;
  double se = 0;
};

Stat row_stat(const EnsembleSample& s, double (*f)(const Eigen::VectorXd&)) {
  const int n = s.trajectories();
  double sum = 0, sq = 0;
  for (int r = 0; r < n; ++r) {
    const double v = f(s.points.row(r).transpose());
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  const double var = (sq - n * mean * mean) / (n - 1);
  return {mean, std::sqrt(var / n)};
}

double sum_sq(const Eigen::VectorXd& x) { return x.squaredNorm(); }

double z_two(const Stat& a, const Stat& b) { return (a.mean - b.mean) / std::sqrt(a.se * a.se + b.se * b.se); }

// Dense Gaussian orthogonal (beta = 1) or unitary (beta = 2) matrix with
// density prop. to exp(-tr H^2 / (2 variance)); eigenvalues, sorted.
Eigen::MatrixXd dense_gbe(int N, bool unitary, double variance, int samples, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd out(samples, N);
  const double diag = std::sqrt(variance);
  const double off = std::sqrt(variance / 2);
  for (int s = 0; s < samples; ++s) {
    if (unitary) {
      Eigen::MatrixXcd H(N, N);
      for (int i = 0; i < N; ++i) {
        H(i, i) = diag * g(rng);
        for (int j = i + 1; j < N; ++j) {
          const std::complex<double> z(off * g(rng), off * g(rng));
          H(i, j) = z;
          H(j, i) = std::conj(z);
        }
      }
      out.row(s) = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(H).eigenvalues().transpose();
    } else {
      Eigen::MatrixXd H(N, N);
      for (int i = 0; i < N; ++i) {
        H(i, i) = diag * g(rng);
        for (int j = i + 1; j < N; ++j) H(i, j) = H(j, i) = off * g(rng);
      }
      out.row(s) = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H).eigenvalues().transpose();
    }
  }
  return out;
}

Stat moment_stat(const EnsembleSample& s, int k, double scale) {
  const MomentEstimate m = empirical_moments(s, {k}, scale);
  return {m.mean[0], m.std_error[0]};
}

bool rows_sorted(const EnsembleSample& s) {
  for (int r = 0; r < s.trajectories(); ++r) {
    for (int i = 1; i < s.size(); ++i) {
      if (s.points(r, i) < s.points(r, i - 1)) return false;
    }
  }
  return true;
}

// Two-sample Kolmogorov-Smirnov statistic of two columns.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

std::vector<double> column(const EnsembleSample& s, int c) {
  std::vector<double> v(static_cast<std::size_t>(s.trajectories()));
  for (int r = 0; r < s.trajectories(); ++r) v[static_cast<std::size_t>(r)] = s.points(r, c);
  return v;
}

}  // namespace

TEST_CASE("samplers are deterministic and independent of the thread count") {
  SimConfig cfg = config(5, 0.5, 40, 99);
  const std::vector<double> a{-1, 0, 0.5, 2, 3};
  const EnsembleSample g1 = sample_gbe(cfg, 2.0);
  const EnsembleSample d1 = simulate_dbm(cfg, a);
  const EnsembleSample c1 = sample_corner_matrix(a, 3, 0.5, cfg);
  const EnsembleSample m1 = sample_corner_mcmc(a, 3, 0.5, cfg);
  CHECK(sample_gbe(cfg, 2.0).points == g1.points);
  cfg.threads = 4;
  CHECK(sample_gbe(cfg, 2.0).points == g1.points);
  CHECK(simulate_dbm(cfg, a).points == d1.points);
  CHECK(sample_corner_matrix(a, 3, 0.5, cfg).points == c1.points);
  CHECK(sample_corner_mcmc(a, 3, 0.5, cfg).points == m1.points);
  cfg.seed = 100;
  CHECK(sample_gbe(cfg, 2.0).points != g1.points);
  CHECK(rows_sorted(g1));
  CHECK(rows_sorted(d1));
  CHECK(rows_sorted(c1));
  CHECK(rows_sorted(m1));
}

TEST_CASE("N = 1 GbE is a scaled standard Gaussian") {
  const double variance = 3.0;
  const EnsembleSample s = sample_gbe(config(1, 0.7, 20000, 1), variance);
  CHECK(std::abs(moment_stat(s, 1, 1.0).mean) < 3 * moment_stat(s, 1, 1.0).se);
  const Stat m2 = moment_stat(s, 2, 1.0);
  CHECK(std::abs(m2.mean - variance) < 3 * m2.se);
  const Stat m4 = moment_stat(s, 4, 1.0);
  CHECK(std::abs(m4.mean - 3 * variance * variance) < 3 * m4.se);
}

TEST_CASE("GbE second moment matches variance N (1 + theta (N - 1))") {
  for (double theta : {0.5, 1.0, 2.0}) {
    const int N = 6;
    const double variance = 1.5;
    const EnsembleSample s = sample_gbe(config(N, theta, 4000, 7), variance);
    const Stat st = row_stat(s, sum_sq);
    CHECK(std::abs(st.mean - variance * N * (1 + theta * (N - 1))) < 3 * st.se);
  }
}

TEST_CASE("tridiagonal GbE agrees with dense matrix models at beta = 1, 2") {
  std::mt19937_64 rng(2024);
  for (bool unitary : {false, true}) {
    const int N = 6;
    const double variance = 2.0;
    EnsembleSample dense{dense_gbe(N, unitary, variance, 4000, rng)};
    const EnsembleSample tri = sample_gbe(config(N, unitary ? 1.0 : 0.5, 4000, 3), variance);
    for (int k : {2, 4}) CHECK(std::abs(z_two(moment_stat(dense, k, 1.0), moment_stat(tri, k, 1.0))) < 3);
    CHECK(ks_statistic(column(dense, N - 1), column(tri, N - 1)) < 1.63 * std::sqrt(2.0 / 4000));
  }
}

TEST_CASE("simulate_dbm at t = 0 returns a0") {
  SimConfig cfg = config(4, 1.0, 3, 5);
  cfg.t_final = 0;
  const std::vector<double> a{-2, -1, 0.5, 4};
  const EnsembleSample s = simulate_dbm(cfg, a);
  for (int r = 0; r < 3; ++r) {
    for (int i = 0; i < 4; ++i) CHECK(s.points(r, i) == a[static_cast<std::size_t>(i)]);
  }
}

TEST_CASE("simulate_dbm from zero matches the exact moment and the GbE law") {
  for (double theta : {0.5, 1.0, 2.0}) {
    const int N = 4;
    SimConfig cfg = config(N, theta, 2000, 11);
    cfg.dt = 1e-3;
    cfg.t_final = 1.0;
    const EnsembleSample dbm = simulate_dbm(cfg, std::vector<double>(N, 0.0));
    const Stat st = row_stat(dbm, sum_sq);
    CHECK(std::abs(st.mean - N * (1 + theta * (N - 1))) < 3 * st.se);
    const EnsembleSample gbe = sample_gbe(config(N, theta, 2000, 12), 1.0);
    for (int k : {2, 4}) CHECK(std::abs(z_two(moment_stat(dbm, k, 1.0), moment_stat(gbe, k, 1.0))) < 3);
  }
}

TEST_CASE("corner matrix sampler examples") {
  const SimConfig cfg = config(3, 1.0, 200, 17);
  const EnsembleSample flat = sample_corner_matrix({2.5, 2.5, 2.5}, 2, 1.0, cfg);
  CHECK((flat.points.array() - 2.5).abs().maxCoeff() < 1e-12);

  const EnsembleSample u = sample_corner_matrix({0.0, 1.0}, 1, 1.0, config(2, 1.0, 10000, 19));
  const Stat m1 = moment_stat(u, 1, 1.0);
  CHECK(std::abs(m1.mean - 0.5) < 3 * m1.se);
  const Stat m2 = moment_stat(u, 2, 1.0);
  CHECK(std::abs(m2.mean - 1.0 / 3) < 3 * m2.se);
  std::vector<double> col = column(u, 0);
  std::sort(col.begin(), col.end());
  double ks = 0;
  for (std::size_t i = 0; i < col.size(); ++i) {
    ks = std::max({ks, std::abs(col[i] - static_cast<double>(i) / col.size()), std::abs(col[i] - static_cast<double>(i + 1) / col.size())});
  }
  CHECK(ks < 1.63 / std::sqrt(10000.0));

  CHECK_THROWS_AS(sample_corner_matrix({0.0, 1.0}, 1, 2.0, config(2, 2.0, 10, 1)), Error);
  CHECK_THROWS_AS(sample_corner_matrix({0.0, 1.0}, 2, 1.0, config(2, 1.0, 10, 1)), Error);
}

TEST_CASE("corner samplers respect interlacing on every draw") {
  const std::vector<double> a{-3, -1, 0, 2, 5};
  const int N = 5;
  for (double theta : {0.5, 1.0}) {
    for (int M = 1; M < N; ++M) {
      SimConfig cfg = config(N, theta, 200, 23);
      cfg.mcmc_sweeps = 20;
      for (const EnsembleSample& s : {sample_corner_matrix(a, M, theta, cfg), sample_corner_mcmc(a, M, theta, cfg)}) {
        for (int r = 0; r < s.trajectories(); ++r) {
          for (int i = 0; i < M; ++i) {
            CHECK(s.points(r, i) >= a[static_cast<std::size_t>(i)] - 1e-9);
            CHECK(s.points(r, i) <= a[static_cast<std::size_t>(i + N - M)] + 1e-9);
          }
        }
      }
    }
  }
  const EnsembleSample s = sample_corner_mcmc(a, 2, 3.0, config(N, 3.0, 100, 29));
  for (int r = 0; r < s.trajectories(); ++r) {
    for (int i = 0; i < 2; ++i) {
      CHECK(s.points(r, i) >= a[static_cast<std::size_t>(i)]);
      CHECK(s.points(r, i) <= a[static_cast<std::size_t>(i + 3)]);
    }
  }
}

TEST_CASE("MCMC corners agree with the matrix sampler") {
  const EnsembleSample mat = sample_corner_matrix({0.0, 1.0}, 1, 1.0, config(2, 1.0, 10000, 31));
  const EnsembleSample mc = sample_corner_mcmc({0.0, 1.0}, 1, 1.0, config(2, 1.0, 10000, 37));
  CHECK(ks_statistic(column(mat, 0), column(mc, 0)) < 1.63 * std::sqrt(2.0 / 10000));

  const std::vector<double> a{-2, -0.5, 0.3, 1, 2.5, 4};
  for (double theta : {0.5, 1.0}) {
    const EnsembleSample x = sample_corner_matrix(a, 3, theta, config(6, theta, 4000, 41));
    SimConfig cfg = config(6, theta, 4000, 43);
    cfg.mcmc_sweeps = 40;
    const EnsembleSample y = sample_corner_mcmc(a, 3, theta, cfg);
    for (int k : {1, 2}) CHECK(std::abs(z_two(moment_stat(x, k, 1.0), moment_stat(y, k, 1.0))) < 3);
  }
  CHECK_THROWS_AS(sample_corner_mcmc({0.0, 0.0, 1.0}, 1, 1.0, config(3, 1.0, 10, 1)), Error);
}

TEST_CASE("empirical_moments examples") {
  EnsembleSample zero{Eigen::MatrixXd::Zero(5, 3)};
  const MomentEstimate mz = empirical_moments(zero, {1, 2, 3}, 3.0);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(mz.mean[i] == 0);
    CHECK(mz.std_error[i] == 0);
  }
  const double c = 1.7;
  const int N = 4;
  EnsembleSample flat{Eigen::MatrixXd::Constant(6, N, c)};
  const MomentEstimate mc = empirical_moments(flat, {1, 2, 4}, N);
  CHECK(mc.k == std::vector<int>{1, 2, 4});
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(mc.mean[i] == doctest::Approx(std::pow(c / N, mc.k[i])));
    CHECK(mc.std_error[i] == doctest::Approx(0.0));
  }
  CHECK_THROWS_AS(empirical_moments(flat, {2}, 0.0), Error);
}

TEST_CASE("GbE with variance N gives semicircle moments") {
  const int N = 100;
  const EnsembleSample s = sample_gbe(config(N, 1.0, 300, 47), N);
  const Stat m2 = moment_stat(s, 2, N);
  const Stat m4 = moment_stat(s, 4, N);
  CHECK(std::abs(m2.mean - 1.0) < 3 * m2.se + 0.01);
  CHECK(std::abs(m4.mean - 2.0) < 3 * m4.se + 0.03);
}

TEST_CASE("configuration validation") {
  SimConfig cfg = config(3, 1.0, 1, 0);
  cfg.dt = 0;
  CHECK_THROWS_AS(simulate_dbm(cfg, {0, 1, 2}), Error);
  cfg = config(3, 1.0, 0, 0);
  CHECK_THROWS_AS(sample_gbe(cfg, 1.0), Error);
  cfg = config(3, 0.4, 1, 0);
  try {
    simulate_dbm(cfg, {0, 1, 2});
    FAIL("expected out_of_range_parameter");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::out_of_range_parameter);
  }
  CHECK_THROWS_AS(simulate_dbm(config(3, 1.0, 1, 0), {2, 1, 0}), Error);
  CHECK_THROWS_AS(simulate_dbm(config(3, 1.0, 1, 0), {0, 1}), Error);
  CHECK_THROWS_AS(sample_gbe(config(3, 1.0, 1, 0), -1.0), Error);
}

TEST_CASE("CSV writers emit the documented headers") {
  EnsembleSample s{Eigen::MatrixXd(2, 2)};
  s.points << 0.5, 1.5, -1, 2;
  std::ostringstream a;
  write_sample_csv(s, a);
  CHECK(a.str().rfind("trajectory,i,value\n", 0) == 0);
  CHECK(a.str().find("0,2,1.5\n") != std::string::npos);
  std::ostringstream b;
  write_moments_csv(empirical_moments(s, {1, 2}, 1.0), b);
  CHECK(b.str().rfind("k,mean,stderr\n", 0) == 0);
}
