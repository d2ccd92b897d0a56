#include "bgf/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <locale>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

#include "bgf/error.hpp"

namespace bgf {

void SimConfig::validate() const {
  if (N < 1) throw Error(ErrorKind::invalid_argument, "N must be positive");
  if (!(theta > 0)) throw Error(ErrorKind::out_of_range_parameter, "theta must be positive");
  if (trajectories < 1) throw Error(ErrorKind::invalid_argument, "trajectories must be at least 1");
  if (!(dt > 0)) throw Error(ErrorKind::invalid_argument, "dt must be positive");
  if (!(t_final >= 0)) throw Error(ErrorKind::invalid_argument, "t must be nonnegative");
  if (mcmc_sweeps < 0) throw Error(ErrorKind::invalid_argument, "mcmc sweeps must be nonnegative");
  if (threads < 1) throw Error(ErrorKind::invalid_argument, "threads must be at least 1");
}

std::mt19937_64 trajectory_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

namespace {

// Runs one trajectory per row; each row is filled from its own RNG stream,
// so the thread split cannot change the result.
EnsembleSample run_trajectories(const SimConfig& cfg, int width,
                                const std::function<void(std::mt19937_64&, std::vector<double>&)>& body) {
  EnsembleSample s;
  s.points.resize(cfg.trajectories, width);
  const int workers = std::min(cfg.threads, cfg.trajectories);
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  auto work = [&](int w) {
    try {
      std::vector<double> row(static_cast<std::size_t>(width));
      for (int t = w; t < cfg.trajectories; t += workers) {
        auto rng = trajectory_rng(cfg.seed, static_cast<std::uint64_t>(t));
        body(rng, row);
        for (int c = 0; c < width; ++c) s.points(t, c) = row[static_cast<std::size_t>(c)];
      }
    } catch (...) {
      errors[static_cast<std::size_t>(w)] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return s;
}

}  // namespace

EnsembleSample sample_gbe(const SimConfig& cfg, double variance) {
  cfg.validate();
  if (!(variance > 0)) throw Error(ErrorKind::out_of_range_parameter, "variance must be positive");
  const int n = cfg.N;
  const double beta = 2 * cfg.theta;
  const double scale = std::sqrt(variance / 2);
  return run_trajectories(cfg, n, [&](std::mt19937_64& rng, std::vector<double>& row) {
    std::normal_distribution<double> gauss(0.0, std::sqrt(2.0));
    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(std::max(n - 1, 0));
    for (int i = 0; i < n; ++i) diag(i) = gauss(rng) * scale;
    for (int i = 0; i + 1 < n; ++i) {
      std::chi_squared_distribution<double> chi2(beta * (n - 1 - i));
      sub(i) = std::sqrt(chi2(rng)) * scale;
    }
    if (n == 1) {
      row[0] = diag(0);
      return;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    for (int i = 0; i < n; ++i) row[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
  });
}

namespace {

constexpr double kGapGuard = 1e-12;
constexpr int kMaxHalvings = 10;
constexpr int kMaxReflections = 100;
constexpr int kMaxNewton = 60;

double min_gap(const std::vector<double>& w) {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < w.size(); ++i) g = std::min(g, w[i] - w[i - 1]);
  return g;
}

bool ordered(const std::vector<double>& x) {
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) return false;
  }
  return true;
}

// Solves x = y + h theta sum_{j != i} 1/(x_i - x_j) for x in the ordered
// chamber by Newton's method, starting from the ordered point x and damping
// each step just enough to keep the order. The system is the gradient of the
// strictly convex |x - y|^2 / (2h) - theta sum_{i<j} log(x_j - x_i), so the
// root is unique. Returns false if it fails to converge.
bool implicit_step(std::vector<double>& x, const std::vector<double>& y, double h, double theta,
                   Eigen::MatrixXd& jac, Eigen::VectorXd& grad, std::vector<double>& trial) {
  const int n = static_cast<int>(x.size());
  for (int iter = 0; iter < kMaxNewton; ++iter) {
    jac.setIdentity();
    jac /= h;
    for (int i = 0; i < n; ++i) grad(i) = (x[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(i)]) / h;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double inv = 1.0 / (x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)]);
        const double inv2 = theta * inv * inv;
        grad(i) -= theta * inv;
        grad(j) += theta * inv;
        jac(i, i) += inv2;
        jac(j, j) += inv2;
        jac(i, j) -= inv2;
        jac(j, i) -= inv2;
      }
    }
    double scale = 1;
    for (double v : x) scale = std::max(scale, std::abs(v));
    // h * grad is the residual of the implicit equation in position units.
    const double residual = h * grad.lpNorm<Eigen::Infinity>();
    if (residual <= 1e-12 * scale) return true;
    const Eigen::VectorXd dx = -jac.llt().solve(grad);
    double lambda = 1;
    for (int k = 0; k < 60; ++k, lambda /= 2) {
      for (int i = 0; i < n; ++i) trial[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + lambda * dx(i);
      if (ordered(trial)) break;
    }
    if (!ordered(trial) || lambda * dx.lpNorm<Eigen::Infinity>() <= 1e-15 * scale) return residual <= 1e-9 * scale;
    x.swap(trial);
  }
  return false;
}

}  // namespace

EnsembleSample simulate_dbm(const SimConfig& cfg, const std::vector<double>& a0) {
  cfg.validate();
  if (static_cast<int>(a0.size()) != cfg.N) throw Error(ErrorKind::length_mismatch, "a0 must have N entries");
  if (!std::is_sorted(a0.begin(), a0.end())) throw Error(ErrorKind::invalid_argument, "a0 must be sorted");
  if (cfg.theta < 0.5) {
    throw Error(ErrorKind::out_of_range_parameter, "Dyson Brownian motion needs theta >= 1/2 (particles collide below)");
  }
  const std::size_t n = a0.size();
  return run_trajectories(cfg, cfg.N, [&](std::mt19937_64& rng, std::vector<double>& row) {
    std::vector<double> w = a0;
    if (cfg.t_final == 0) {
      for (std::size_t i = 0; i < n; ++i) row[i] = w[i];
      return;
    }
    std::normal_distribution<double> gauss(0.0, 1.0);
    if (n > 1 && min_gap(w) < 1e-9) {
      // Split coincident points: spacing ~1e-3 sqrt(t) with a random shake,
      // keeping every gap at least half the spacing.
      const double eps = 1e-3 * std::sqrt(cfg.t_final);
      std::uniform_real_distribution<double> shake(-0.25, 0.25);
      for (std::size_t i = 0; i < n; ++i) w[i] += eps * (static_cast<double>(i) - (n - 1) / 2.0 + shake(rng));
      std::sort(w.begin(), w.end());
    }
    std::vector<double> noise(n), y(n), next(n), trial(n), drift(n);
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::VectorXd grad(static_cast<Eigen::Index>(n));
    double t = 0;
    int reflections_in_a_row = 0;
    while (t < cfg.t_final) {
      double h = std::min(cfg.dt, cfg.t_final - t);
      for (auto& z : noise) z = gauss(rng);
      double largest = 0;
      for (std::size_t i = 0; i < n; ++i) {
        drift[i] = 0;
        for (std::size_t j = 0; j < n; ++j) {
          if (j != i) drift[i] += cfg.theta / (w[i] - w[j]);
        }
        largest = std::max(largest, std::abs(drift[i]));
      }
      // Trapezoidal drift while its explicit half moves no particle by more
      // than half the smallest gap; fully implicit otherwise.
      const double gap = n > 1 ? min_gap(w) : std::numeric_limits<double>::infinity();
      auto trapezoidal = [&](double step) { return step / 2 * largest <= gap / 2; };
      for (int halvings = 0; halvings < kMaxHalvings && !trapezoidal(h); ++halvings) h /= 2;
      bool accepted = false;
      for (int attempt = 0; attempt <= kMaxHalvings && !accepted; ++attempt) {
        const double sq = std::sqrt(h);
        const bool trap = trapezoidal(h);
        for (std::size_t i = 0; i < n; ++i) y[i] = w[i] + (trap ? drift[i] * h / 2 : 0.0) + noise[i] * sq;
        next = w;
        accepted = implicit_step(next, y, trap ? h / 2 : h, cfg.theta, jac, grad, trial) &&
                   (n < 2 || min_gap(next) >= kGapGuard);
        if (!accepted && attempt < kMaxHalvings) h /= 2;
      }
      if (accepted) {
        reflections_in_a_row = 0;
      } else {
        // Fall back to an explicit step, reflected: crossing particles swap
        // labels, which keeps the gaps |W_i - W_j|.
        const double sq = std::sqrt(h);
        for (std::size_t i = 0; i < n; ++i) next[i] = w[i] + drift[i] * h + noise[i] * sq;
        std::sort(next.begin(), next.end());
        if (++reflections_in_a_row > kMaxReflections || !(min_gap(next) > 0)) {
          throw Error(ErrorKind::blow_up, "particles collided at t=" + std::to_string(t) + " despite " +
                                              std::to_string(kMaxHalvings) + " step halvings");
        }
      }
      for (double v : next) {
        if (!std::isfinite(v)) throw Error(ErrorKind::blow_up, "non-finite state at t=" + std::to_string(t));
      }
      w.swap(next);
      t += h;
    }
    for (std::size_t i = 0; i < n; ++i) row[i] = w[i];
  });
}

namespace {

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> haar(int n, std::mt19937_64& rng) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if constexpr (std::is_same_v<Scalar, double>) {
        g(i, j) = gauss(rng);
      } else {
        const double re = gauss(rng);
        const double im = gauss(rng);
        g(i, j) = Scalar(re, im);
      }
    }
  }
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Scalar d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0) q.col(j) *= d / mag;
  }
  return q;
}

template <typename Scalar>
void corner_eigs(const std::vector<double>& a, int M, std::mt19937_64& rng, std::vector<double>& row) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const int n = static_cast<int>(a.size());
  const Mat u = haar<Scalar>(n, rng);
  const Mat top = u.topRows(M);
  Eigen::VectorXd av(n);
  for (int i = 0; i < n; ++i) av(i) = a[static_cast<std::size_t>(i)];
  const Mat c = top * av.asDiagonal() * top.adjoint();
  Eigen::SelfAdjointEigenSolver<Mat> solver(c, Eigen::EigenvaluesOnly);
  for (int i = 0; i < M; ++i) row[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
}

}  // namespace

EnsembleSample sample_corner_matrix(const std::vector<double>& a, int M, double theta, const SimConfig& cfg) {
  cfg.validate();
  const int n = static_cast<int>(a.size());
  if (M < 1 || M >= n) throw Error(ErrorKind::invalid_argument, "corner size M must satisfy 1 <= M < N");
  if (!std::is_sorted(a.begin(), a.end())) throw Error(ErrorKind::invalid_argument, "a must be sorted");
  if (theta != 0.5 && theta != 1.0) {
    throw Error(ErrorKind::unsupported_theta, "matrix corners need theta = 1/2 (orthogonal) or theta = 1 (unitary)");
  }
  return run_trajectories(cfg, M, [&](std::mt19937_64& rng, std::vector<double>& row) {
    if (theta == 1.0) {
      corner_eigs<std::complex<double>>(a, M, rng, row);
    } else {
      corner_eigs<double>(a, M, rng, row);
    }
  });
}

namespace {

constexpr int kGridPoints = 256;

struct GridTables {
  std::vector<double> shape;    // (1 - cos(pi u)) / 2
  std::vector<double> log_jac;  // log(pi sin(pi u) / 2)
};

// Values at the grid midpoints u = (j + 1/2) / kGridPoints.
const GridTables& grid_tables() {
  static const GridTables tables = [] {
    GridTables t;
    for (int j = 0; j < kGridPoints; ++j) {
      const double u = (j + 0.5) / kGridPoints;
      t.shape.push_back((1 - std::cos(std::numbers::pi * u)) / 2);
      t.log_jac.push_back(std::log(std::numbers::pi * std::sin(std::numbers::pi * u) / 2));
    }
    return t;
  }();
  return tables;
}

// log(prod |numerator factors| / prod |denominator factors|), with both
// products rescaled by powers of two so they neither overflow nor underflow.
class LogAbsRatio {
 public:
  void times(double x) { rescale(num_, num_exp_, num_ * std::abs(x)); }
  void over(double x) { rescale(den_, den_exp_, den_ * std::abs(x)); }
  double log() const { return std::log(num_ / den_) + static_cast<double>(num_exp_ - den_exp_) * std::numbers::ln2; }

 private:
  static void rescale(double& m, long& exp, double value) {
    m = value;
    if (m > 1e100 || m < 1e-100) {
      int e = 0;
      m = std::frexp(m, &e);
      exp += e;
    }
  }
  double num_ = 1;
  double den_ = 1;
  long num_exp_ = 0;
  long den_exp_ = 0;
};

// Samples y in [lo, hi] with density prop. to exp(logp(y)), by inverse CDF on
// a grid uniform in u, with y = lo + (hi - lo)(1 - cos(pi u)) / 2 to resolve
// endpoint singularities.
template <typename LogDensity>
double sample_on_interval(double lo, double hi, const LogDensity& logp, std::mt19937_64& rng,
                          std::vector<double>& logw) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (!(hi > lo)) return lo;
  const double width = hi - lo;
  const double du = 1.0 / kGridPoints;
  const GridTables& tables = grid_tables();
  auto y_of = [&](double u) { return lo + width * (1 - std::cos(std::numbers::pi * u)) / 2; };
  double mx = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < kGridPoints; ++j) {
    const auto sj = static_cast<std::size_t>(j);
    logw[sj] = logp(lo + width * tables.shape[sj]) + tables.log_jac[sj];
    mx = std::max(mx, logw[static_cast<std::size_t>(j)]);
  }
  double total = 0;
  for (auto& v : logw) {
    v = std::exp(v - mx);
    total += v;
  }
  double target = unif(rng) * total;
  int cell = kGridPoints - 1;
  for (int j = 0; j < kGridPoints; ++j) {
    target -= logw[static_cast<std::size_t>(j)];
    if (target <= 0) {
      cell = j;
      break;
    }
  }
  const double u = (cell + unif(rng)) * du;
  return std::clamp(y_of(u), lo, hi);
}

}  // namespace

EnsembleSample sample_corner_mcmc(const std::vector<double>& a, int M, double theta, const SimConfig& cfg) {
  cfg.validate();
  const int n = static_cast<int>(a.size());
  if (M < 1 || M >= n) throw Error(ErrorKind::invalid_argument, "corner size M must satisfy 1 <= M < N");
  if (!(theta > 0)) throw Error(ErrorKind::out_of_range_parameter, "theta must be positive");
  for (int i = 1; i < n; ++i) {
    if (!(a[static_cast<std::size_t>(i)] > a[static_cast<std::size_t>(i - 1)])) {
      throw Error(ErrorKind::non_distinct_points, "corner sampler needs strictly increasing a");
    }
  }
  // The conditional density of one entry is
  //   prod_same |v - y_j|^{2 - 2 theta} prod_adjacent |v - z|^{theta - 1}
  //   = (prod_same^2 / prod_adjacent)^{1 - theta}.
  const double exponent = 1 - theta;
  return run_trajectories(cfg, M, [&](std::mt19937_64& rng, std::vector<double>& row) {
    // y[k] holds level k (k entries), k = 1..n; level n is the fixed top row.
    std::vector<std::vector<double>> y(static_cast<std::size_t>(n) + 1);
    for (int k = 1; k <= n; ++k) {
      auto& level = y[static_cast<std::size_t>(k)];
      level.resize(static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i) {
        level[static_cast<std::size_t>(i)] =
            (a[static_cast<std::size_t>(i)] + a[static_cast<std::size_t>(i + n - k)]) / 2;
      }
    }
    std::vector<double> logw(kGridPoints);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int sweep = 0; sweep < cfg.mcmc_sweeps; ++sweep) {
      for (int k = n - 1; k >= 1; --k) {
        auto& level = y[static_cast<std::size_t>(k)];
        const auto& above = y[static_cast<std::size_t>(k + 1)];
        const auto& below = y[static_cast<std::size_t>(k - 1)];
        for (int i = 0; i < k; ++i) {
          const auto si = static_cast<std::size_t>(i);
          double lo = above[si];
          double hi = above[si + 1];
          if (k > 1) {
            if (i > 0) lo = std::max(lo, below[si - 1]);
            if (i < k - 1) hi = std::min(hi, below[si]);
          }
          if (theta == 1.0) {
            level[si] = lo + (hi - lo) * unif(rng);
            continue;
          }
          auto logp = [&](double v) {
            LogAbsRatio ratio;
            for (int j = 0; j < k; ++j) {
              if (j == i) continue;
              const double x = v - level[static_cast<std::size_t>(j)];
              ratio.times(x * x);
            }
            for (double z : above) ratio.over(v - z);
            for (double z : below) ratio.over(v - z);
            return exponent * ratio.log();
          };
          level[si] = sample_on_interval(lo, hi, logp, rng, logw);
        }
      }
    }
    const auto& out = y[static_cast<std::size_t>(M)];
    for (int i = 0; i < M; ++i) row[static_cast<std::size_t>(i)] = out[static_cast<std::size_t>(i)];
  });
}

MomentEstimate empirical_moments(const EnsembleSample& s, const std::vector<int>& ks, double scale) {
  if (!(scale > 0)) throw Error(ErrorKind::invalid_argument, "moment scale must be positive");
  MomentEstimate m;
  const int rows = s.trajectories();
  const int cols = s.size();
  for (int k : ks) {
    if (k < 0) throw Error(ErrorKind::invalid_argument, "moment orders must be nonnegative");
    std::vector<double> values(static_cast<std::size_t>(rows));
    for (int r = 0; r < rows; ++r) {
      double acc = 0;
      for (int c = 0; c < cols; ++c) acc += std::pow(s.points(r, c) / scale, k);
      values[static_cast<std::size_t>(r)] = acc / cols;
    }
    double mean = 0;
    for (double v : values) mean += v;
    mean /= std::max(rows, 1);
    double var = 0;
    for (double v : values) var += (v - mean) * (v - mean);
    const double se = rows > 1 ? std::sqrt(var / (rows - 1) / rows) : 0.0;
    m.k.push_back(k);
    m.mean.push_back(mean);
    m.std_error.push_back(se);
  }
  return m;
}

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

void write_sample_csv(const EnsembleSample& s, std::ostream& out) {
  out << "trajectory,i,value\n";
  for (int r = 0; r < s.trajectories(); ++r) {
    for (int c = 0; c < s.size(); ++c) out << r << ',' << (c + 1) << ',' << num(s.points(r, c)) << '\n';
  }
}

void write_moments_csv(const MomentEstimate& m, std::ostream& out) {
  out << "k,mean,stderr\n";
  for (std::size_t i = 0; i < m.k.size(); ++i) {
    out << m.k[i] << ',' << num(m.mean[i]) << ',' << num(m.std_error[i]) << '\n';
  }
}

}  // namespace bgf
