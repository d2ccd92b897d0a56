#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace bgf {

struct SimConfig {
  int N = 1;
  double theta = 1.0;
  std::uint64_t seed = 0;
  int trajectories = 1;
  double dt = 1e-3;
  double t_final = 1.0;
  int mcmc_sweeps = 100;
  // Worker threads across trajectories; results do not depend on it.
  int threads = 1;

  void validate() const;
};

// One row per trajectory, each sorted ascending.
struct EnsembleSample {
  Eigen::MatrixXd points;

  int trajectories() const { return static_cast<int>(points.rows()); }
  int size() const { return static_cast<int>(points.cols()); }
};

struct MomentEstimate {
  std::vector<int> k;
  std::vector<double> mean;
  std::vector<double> std_error;
};

// Independent stream for trajectory `index`, derived from (seed, index).
std::mt19937_64 trajectory_rng(std::uint64_t seed, std::uint64_t index);

// Draws from the density prop. to prod |l_i - l_j|^{2 theta} prod exp(-l_i^2 / (2 variance))
// via the tridiagonal model with beta = 2 theta.
EnsembleSample sample_gbe(const SimConfig& cfg, double variance);

// Euler-Maruyama for dW_i = theta sum_{j != i} dt / (W_i - W_j) + dB_i up to
// cfg.t_final, with the drift treated by the trapezoidal rule: the implicit
// half is solved by Newton on the convex log-gas energy, which keeps the
// particles ordered. While the explicit half would move a particle by more
// than half the smallest gap the step is halved (up to 10 times), and if it
// still would, the drift is taken fully implicitly. If the Newton solve fails
// or leaves a gap below 1e-12, the step is halved (up to 10 times), then taken
// explicitly and reflected. Blow-up is reported when reflection is needed on
// 100 consecutive steps, or the state degenerates. Coincident starting points
// are split by a small random jitter. Requires theta >= 1/2.
EnsembleSample simulate_dbm(const SimConfig& cfg, const std::vector<double>& a0);

// Eigenvalues of the top-left M x M block of U diag(a) U^*, U Haar orthogonal
// (theta = 1/2) or unitary (theta = 1).
EnsembleSample sample_corner_matrix(const std::vector<double>& a, int M, double theta, const SimConfig& cfg);

// Gibbs sampler on the interlacing array below the fixed top row a (strictly
// increasing). Each trajectory is an independent chain run for
// cfg.mcmc_sweeps sweeps; the level-M row is returned.
EnsembleSample sample_corner_mcmc(const std::vector<double>& a, int M, double theta, const SimConfig& cfg);

// Mean and standard error over trajectories of (1/n) sum_i (x_i / scale)^k.
MomentEstimate empirical_moments(const EnsembleSample& s, const std::vector<int>& ks, double scale);

// CSV with header "trajectory,i,value" (i is 1-based).
void write_sample_csv(const EnsembleSample& s, std::ostream& out);
// CSV with header "k,mean,stderr".
void write_moments_csv(const MomentEstimate& m, std::ostream& out);

}  // namespace bgf
