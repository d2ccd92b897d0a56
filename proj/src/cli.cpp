#include "bgf/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <locale>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "bgf/bessel.hpp"
#include "bgf/constellations.hpp"
#include "bgf/dunkl.hpp"
#include "bgf/ensembles.hpp"
#include "bgf/error.hpp"
#include "bgf/freeprob.hpp"
#include "bgf/jack.hpp"
#include "bgf/mvpoly.hpp"
#include "bgf/partition.hpp"
#include "bgf/rational.hpp"
#include "bgf/symseries.hpp"

namespace bgf::cli {

namespace {

using json = nlohmann::json;

// Bad flag value; the message starts with the flag name.
class FlagError : public std::runtime_error {
 public:
  FlagError(const std::string& flag, const std::string& what) : std::runtime_error(flag + ": " + what) {}
};

template <typename F>
auto for_flag(const std::string& flag, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (!e.is_validation()) throw;
    throw FlagError(flag, e.what());
  }
}

Rat flag_rat(const std::string& flag, const std::string& text) {
  return for_flag(flag, [&] { return parse_rat(text); });
}

std::vector<Rat> flag_rat_list(const std::string& flag, const std::string& text) {
  return for_flag(flag, [&] { return parse_rat_list(text); });
}

std::string trim_copy(const std::string& text) {
  const auto b = text.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return text.substr(b, text.find_last_not_of(" \t") - b + 1);
}

// Sampler numbers: "p/q" or a finite decimal/scientific float.
double flag_double(const std::string& flag, const std::string& text) {
  const std::string t{trim_copy(text)};
  if (t.find('/') != std::string::npos) return for_flag(flag, [&] { return to_double(parse_rat(t)); });
  double v = 0;
  const char* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (t.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw FlagError(flag, "malformed number '" + text + "'");
  }
  return v;
}

std::vector<double> flag_double_list(const std::string& flag, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(flag_double(flag, item));
  if (out.empty()) throw FlagError(flag, "expected a comma-separated list");
  return out;
}

void require(bool ok, const std::string& flag, const std::string& what) {
  if (!ok) throw FlagError(flag, what);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(6);
  os << v;
  return os.str();
}

// Text table with columns separated by two spaces, or CSV.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write_text(std::ostream& out) const {
    std::vector<std::size_t> width(header.size(), 0);
    auto measure = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    };
    measure(header);
    for (const auto& r : rows) measure(r);
    auto line = [&](const std::vector<std::string>& r) {
      std::string s;
      for (std::size_t i = 0; i < r.size(); ++i) {
        s += r[i];
        if (i + 1 < r.size()) s += std::string(width[i] - r[i].size() + 2, ' ');
      }
      out << s << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
  }

  void write_csv(std::ostream& out) const {
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
      out << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
  }
};

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw FlagError("--out", "cannot open '" + path + "' for writing");
  f.imbue(std::locale::classic());
  return f;
}

struct Global {
  bool json = false;
  std::string out_path;
  int threads = 1;
  int jack_cap = 0;
};

// Coefficient table of a series: one row per nonzero coefficient.
Table series_table(const SymSeries& s, int max_length, const std::string& label) {
  Table t{{"partition", label}, {}};
  for (const auto& [lambda, c] : s.coeffs()) {
    if (lambda.length() > max_length) continue;
    t.rows.push_back({lambda.to_string(), to_string(c)});
  }
  return t;
}

json series_json(const SymSeries& s, int max_length) {
  json j = json::array();
  for (const auto& [lambda, c] : s.coeffs()) {
    if (lambda.length() > max_length) continue;
    j.push_back({{"partition", lambda.parts()}, {"coeff", to_string(c)}});
  }
  return j;
}

// "name1=v1, name2=v2" over nonzero entries; "all zero" otherwise.
std::string named_list(const std::string& name, const std::vector<Rat>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    if (!s.empty()) s += ", ";
    s += name + std::to_string(i + 1) + "=" + to_string(v[i]);
  }
  return s.empty() ? name + "1.." + name + std::to_string(v.size()) + " all zero" : s;
}

json rat_array(const std::vector<Rat>& v) {
  json j = json::array();
  for (const Rat& r : v) j.push_back(to_string(r));
  return j;
}

void emit(const Global& g, std::ostream& out, const json& j, const std::function<void()>& text) {
  if (g.json) {
    out << j.dump(2) << '\n';
  } else {
    text();
  }
}

void maybe_csv(const Global& g, const Table& t) {
  if (g.out_path.empty()) return;
  auto f = open_out(g.out_path);
  t.write_csv(f);
}

// Loads --measure and resolves theta: the --theta flag wins over the file.
struct LoadedMeasure {
  AtomicMeasure measure;
  Rat theta;
};

LoadedMeasure load_measure(const std::string& path, const std::string& theta_flag) {
  MeasureFile f = for_flag("--measure", [&] { return load_measure_json(path); });
  LoadedMeasure m{f.measure, Rat(1)};
  if (!theta_flag.empty()) {
    m.theta = flag_rat("--theta", theta_flag);
  } else if (f.theta) {
    m.theta = *f.theta;
  }
  require(m.theta > 0, "--theta", "must be positive");
  return m;
}

Rat theta_or_default(const std::string& text) {
  const Rat theta = text.empty() ? Rat(1) : flag_rat("--theta", text);
  require(theta > 0, "--theta", "must be positive");
  return theta;
}

Profile make_profile(const std::string& name, const std::string& c_text) {
  if (name == "uniform") return uniform_profile();
  if (name == "zero") return zero_profile();
  if (name == "constant") return constant_profile(c_text.empty() ? Rat(1) : flag_rat("--c", c_text));
  throw FlagError("--profile", "unknown profile '" + name + "' (uniform, constant, zero)");
}

// ---------------------------------------------------------------------------
// Subcommand handlers.

struct MomentsOpts {
  std::string values;
  int max = 0;
};

void cmd_cumulants(const Global& g, const MomentsOpts& o, std::ostream& out) {
  std::vector<Rat> m = flag_rat_list("--moments", o.values);
  const int K = o.max > 0 ? o.max : static_cast<int>(m.size());
  require(K >= 1, "--max", "must be positive");
  m.resize(static_cast<std::size_t>(std::max<int>(K, static_cast<int>(m.size()))), Rat(0));
  const std::vector<Rat> kappa = cumulants_from_moments(m, K);
  emit(g, out, {{"kappa", rat_array(kappa)}}, [&] { out << named_list("kappa", kappa) << '\n'; });
  Table t{{"k", "kappa"}, {}};
  for (int k = 1; k <= K; ++k) t.rows.push_back({std::to_string(k), to_string(kappa[static_cast<std::size_t>(k - 1)])});
  maybe_csv(g, t);
}

void cmd_moments(const Global& g, const MomentsOpts& o, std::ostream& out) {
  std::vector<Rat> kappa = flag_rat_list("--kappa", o.values);
  const int K = o.max > 0 ? o.max : static_cast<int>(kappa.size());
  require(K >= 1, "--max", "must be positive");
  require(K <= 40, "--max", "at most 40");
  if (static_cast<int>(kappa.size()) < K) kappa.resize(static_cast<std::size_t>(K), Rat(0));
  const std::vector<Rat> m = moments_from_cumulants(kappa, K);
  emit(g, out, {{"moments", rat_array(m)}}, [&] { out << named_list("m", m) << '\n'; });
  Table t{{"k", "moment"}, {}};
  for (int k = 1; k <= K; ++k) t.rows.push_back({std::to_string(k), to_string(m[static_cast<std::size_t>(k - 1)])});
  maybe_csv(g, t);
}

struct ExactOpts {
  std::string a;
  int n = 0;
  std::string theta;
  int deg = 3;
  std::string measure;
  std::vector<std::string> measures;
  int m = 0;
  std::string t;
  std::string basis = "monomial";
};

void cmd_bessel_expand(const Global& g, const ExactOpts& o, std::ostream& out) {
  require(o.deg >= 0, "--deg", "must be nonnegative");
  require(o.basis == "monomial" || o.basis == "power", "--basis", "must be 'monomial' or 'power'");
  SymSeries s(Basis::power, 0);
  int N = 0;
  if (!o.measure.empty()) {
    require(o.a.empty(), "--a", "give either --a or --measure");
    const LoadedMeasure lm = load_measure(o.measure, o.theta);
    N = lm.measure.N;
    s = for_flag("--deg", [&] { return bgf_atomic_series(lm.measure, lm.theta, o.deg); });
  } else {
    require(!o.a.empty(), "--a", "required (or --measure)");
    const std::vector<Rat> a = flag_rat_list("--a", o.a);
    N = o.n > 0 ? o.n : static_cast<int>(a.size());
    require(static_cast<int>(a.size()) == N, "--n", "must equal the number of entries of --a");
    const Rat theta = theta_or_default(o.theta);
    s = for_flag("--deg", [&] { return bessel_series(a, theta, o.deg); });
  }
  if (o.basis == "monomial") s = basis_convert(s, Basis::monomial);
  const Table t = series_table(s, N, "coefficient");
  emit(g, out, {{"N", N}, {"basis", o.basis}, {"terms", series_json(s, N)}}, [&] { t.write_text(out); });
  maybe_csv(g, t);
}

struct LlnOpts {
  std::string profile = "uniform";
  std::string c;
  std::vector<int> ns{8, 12, 16, 20};
  int deg = 3;
  std::string theta;
  double tol = 1e-2;
};

void cmd_lln_check(const Global& g, const LlnOpts& o, std::ostream& out) {
  const Rat theta = theta_or_default(o.theta);
  require(o.deg >= 1, "--deg", "must be positive");
  require(o.tol > 0, "--tol", "must be positive");
  std::vector<BgfCoeffs> seq;
  for (int N : o.ns) {
    require(N >= 1, "--ns", "grid values must be positive");
    if (o.profile == "gaussian") {
      require(o.deg <= N, "--deg", "must not exceed the smallest N for the gaussian profile");
      BgfCoeffs c{N, theta, SymSeries(Basis::power, o.deg)};
      if (o.deg >= 2) c.series.add(Partition{1, 1}, frac(N, 2));
      seq.push_back(c);
    } else {
      const Profile p = make_profile(o.profile, o.c);
      seq.push_back(bgf_coeffs_atomic(AtomicMeasure::point_mass(p.points(N)), theta, o.deg));
    }
  }
  const LlnReport r = for_flag("--ns", [&] { return lln_check(seq, theta, o.tol); });
  const std::vector<Rat> moments = moments_from_cumulants(r.kappa_estimates, r.max_degree);
  double worst_a = 0;
  for (const auto& x : r.condition_a_residuals) worst_a = std::max(worst_a, x.value);
  double worst_b = 0;
  for (const auto& [lambda, v] : r.condition_b_limits) worst_b = std::max(worst_b, v);

  Table t{{"d", "kappa", "kappa_at_N=" + std::to_string(r.Ns.back()), "ratio"}, {}};
  json jk = json::array();
  for (int d = 1; d <= r.max_degree; ++d) {
    const auto i = static_cast<std::size_t>(d - 1);
    const auto& ratio = r.convergence_ratio[i];
    t.rows.push_back({std::to_string(d), to_string(r.kappa_estimates[i]), fmt(to_double(r.kappa_at_largest[i])),
                      ratio ? fmt(*ratio) : "-"});
    jk.push_back({{"d", d},
                  {"kappa", to_string(r.kappa_estimates[i])},
                  {"kappa_at_largest", to_string(r.kappa_at_largest[i])},
                  {"ratio", ratio ? json(*ratio) : json(nullptr)}});
  }
  json j{{"Ns", r.Ns},
         {"theta", to_string(theta)},
         {"kappa", jk},
         {"moments", rat_array(moments)},
         {"condition_a_max", worst_a},
         {"condition_b_max_limit", worst_b},
         {"tolerance", r.tolerance},
         {"pass", r.pass}};
  emit(g, out, j, [&] {
    std::string ns;
    for (int N : r.Ns) ns += (ns.empty() ? "" : ", ") + std::to_string(N);
    out << "N: " << ns << '\n';
    t.write_text(out);
    out << "moments from kappa: " << named_list("m", moments) << '\n';
    out << "condition (a) max residual: " << fmt(worst_a) << '\n';
    out << "condition (b) max limit: " << fmt(worst_b) << '\n';
    out << "verdict: " << (r.pass ? "PASS" : "FAIL") << " (tol " << fmt(r.tolerance) << ")\n";
  });
  maybe_csv(g, t);
}

void cmd_theta_add(const Global& g, const ExactOpts& o, std::ostream& out) {
  require(o.measures.size() == 2, "--measure", "theta-add needs exactly two --measure files");
  require(o.deg >= 1, "--deg", "must be positive");
  const LoadedMeasure m1 = load_measure(o.measures[0], o.theta);
  const LoadedMeasure m2 = load_measure(o.measures[1], o.theta);
  require(m1.measure.N == m2.measure.N, "--measure", "both measures must have the same N");
  require(m1.theta == m2.theta, "--theta", "the two measure files disagree on theta");
  const BgfCoeffs c1 = bgf_coeffs_atomic(m1.measure, m1.theta, o.deg);
  const BgfCoeffs c2 = bgf_coeffs_atomic(m2.measure, m2.theta, o.deg);
  const BgfCoeffs sum = theta_add(c1, c2);
  const Table t = series_table(sum.series, sum.N, "log_coefficient");
  emit(g, out, {{"N", sum.N}, {"theta", to_string(sum.theta)}, {"log_coefficients", series_json(sum.series, sum.N)}},
       [&] { t.write_text(out); });
  maybe_csv(g, t);
}

void cmd_corner(const Global& g, const ExactOpts& o, std::ostream& out) {
  require(!o.measure.empty(), "--measure", "required");
  require(o.deg >= 0, "--deg", "must be nonnegative");
  const LoadedMeasure lm = load_measure(o.measure, o.theta);
  require(o.m >= 1 && o.m < lm.measure.N, "--m", "must satisfy 1 <= M < N");
  const MVPoly G = for_flag("--deg", [&] { return bgf_atomic(lm.measure, lm.theta, o.deg); });
  const MVPoly corner = corner_restrict(G, o.m);
  const SymSeries s = symmetric_to_monomial(corner, o.deg);
  const Table t = series_table(s, o.m, "coefficient");
  emit(g, out, {{"M", o.m}, {"basis", "monomial"}, {"terms", series_json(s, o.m)}}, [&] { t.write_text(out); });
  maybe_csv(g, t);
}

void cmd_dbm(const Global& g, const ExactOpts& o, std::ostream& out) {
  require(o.deg >= 2, "--deg", "must be at least 2");
  require(!o.t.empty(), "--t", "required");
  const Rat t = flag_rat("--t", o.t);
  require(t >= 0, "--t", "must be nonnegative");
  AtomicMeasure mu;
  Rat theta;
  if (!o.measure.empty()) {
    const LoadedMeasure lm = load_measure(o.measure, o.theta);
    mu = lm.measure;
    theta = lm.theta;
  } else {
    require(o.n >= 1, "--n", "required (zero start) unless --measure is given");
    mu = AtomicMeasure::point_mass(std::vector<Rat>(static_cast<std::size_t>(o.n), Rat(0)));
    theta = theta_or_default(o.theta);
  }
  const BgfCoeffs evolved = dbm_factor(bgf_coeffs_atomic(mu, theta, o.deg), t);
  const MVPoly G = bgf_from_coeffs(evolved);
  const DunklContext ctx(evolved.N, theta);
  std::vector<Rat> expectations;
  for (int k = 1; k <= o.deg; ++k) expectations.push_back(moment_extract(ctx, G, Partition{k}, o.deg));
  const Table t_coeffs = series_table(evolved.series, evolved.N, "log_coefficient");
  emit(g, out,
       {{"N", evolved.N},
        {"theta", to_string(theta)},
        {"log_coefficients", series_json(evolved.series, evolved.N)},
        {"expected_power_sums", rat_array(expectations)}},
       [&] {
         t_coeffs.write_text(out);
         for (int k = 1; k <= o.deg; ++k) {
           out << "E[p" << k << "] = " << to_string(expectations[static_cast<std::size_t>(k - 1)]) << '\n';
         }
       });
  maybe_csv(g, t_coeffs);
}

struct SamplerOpts {
  int n = 0;
  std::string theta;
  std::uint64_t seed = 0;
  int trajectories = 1000;
  std::string dt = "1/1000";
  std::string t = "1";
  std::string a;
  int m = 0;
  std::string method = "matrix";
  int sweeps = 100;
  std::string variance;
  std::string scale;
  std::vector<int> moments;
};

SimConfig sim_config(const Global& g, const SamplerOpts& o, double theta) {
  SimConfig cfg;
  cfg.N = o.n;
  cfg.theta = theta;
  cfg.seed = o.seed;
  cfg.trajectories = o.trajectories;
  cfg.dt = flag_double("--dt", o.dt);
  cfg.t_final = flag_double("--t", o.t);
  cfg.mcmc_sweeps = o.sweeps;
  cfg.threads = g.threads;
  require(cfg.N >= 1, "--n", "must be positive");
  require(theta > 0, "--theta", "must be positive");
  require(cfg.trajectories >= 1, "--trajectories", "must be positive");
  require(cfg.dt > 0, "--dt", "must be positive");
  require(cfg.t_final >= 0, "--t", "must be nonnegative");
  require(cfg.mcmc_sweeps >= 0, "--sweeps", "must be nonnegative");
  require(cfg.threads >= 1, "--threads", "must be positive");
  return cfg;
}

double sampler_theta(const SamplerOpts& o) { return o.theta.empty() ? 1.0 : flag_double("--theta", o.theta); }

void report_sample(const Global& g, const EnsembleSample& s, const std::vector<int>& ks, double scale,
                   std::ostream& out, const std::vector<std::pair<std::string, double>>& extra = {}) {
  for (int k : ks) require(k >= 0, "--moments", "orders must be nonnegative");
  const MomentEstimate m = empirical_moments(s, ks, scale);
  Table t{{"k", "mean", "stderr"}, {}};
  json jm = json::array();
  for (std::size_t i = 0; i < m.k.size(); ++i) {
    t.rows.push_back({std::to_string(m.k[i]), fmt(m.mean[i]), fmt(m.std_error[i])});
    jm.push_back({{"k", m.k[i]}, {"mean", m.mean[i]}, {"stderr", m.std_error[i]}});
  }
  json j{{"trajectories", s.trajectories()}, {"size", s.size()}, {"scale", scale}, {"moments", jm}};
  for (const auto& [name, v] : extra) j[name] = v;
  emit(g, out, j, [&] {
    t.write_text(out);
    for (const auto& [name, v] : extra) out << name << " = " << fmt(v) << '\n';
  });
  if (!g.out_path.empty()) {
    auto f = open_out(g.out_path);
    write_sample_csv(s, f);
  }
}

void cmd_sample_gbe(const Global& g, const SamplerOpts& o, std::ostream& out) {
  const double theta = sampler_theta(o);
  const SimConfig cfg = sim_config(g, o, theta);
  const double variance = o.variance.empty() ? cfg.N / theta : flag_double("--variance", o.variance);
  require(variance > 0, "--variance", "must be positive");
  const double scale = o.scale.empty() ? cfg.N : flag_double("--scale", o.scale);
  require(scale > 0, "--scale", "must be positive");
  const EnsembleSample s = sample_gbe(cfg, variance);
  report_sample(g, s, o.moments.empty() ? std::vector<int>{2, 4} : o.moments, scale, out);
}

void cmd_simulate_dbm(const Global& g, const SamplerOpts& o, std::ostream& out) {
  const double theta = sampler_theta(o);
  require(theta >= 0.5, "--theta", "the SDE needs theta >= 1/2");
  const SimConfig cfg = sim_config(g, o, theta);
  std::vector<double> a0(static_cast<std::size_t>(cfg.N), 0.0);
  if (!o.a.empty()) {
    a0 = flag_double_list("--a", o.a);
    require(static_cast<int>(a0.size()) == cfg.N, "--a", "must have --n entries");
    require(std::is_sorted(a0.begin(), a0.end()), "--a", "must be sorted ascending");
  }
  const double scale = o.scale.empty() ? 1.0 : flag_double("--scale", o.scale);
  require(scale > 0, "--scale", "must be positive");
  const EnsembleSample s = simulate_dbm(cfg, a0);
  double sum_sq = 0;
  for (int r = 0; r < s.trajectories(); ++r) sum_sq += s.points.row(r).squaredNorm();
  report_sample(g, s, o.moments.empty() ? std::vector<int>{1, 2} : o.moments, scale, out,
                {{"mean sum W^2", sum_sq / s.trajectories()}});
}

void cmd_sample_corner(const Global& g, const SamplerOpts& o, std::ostream& out) {
  const double theta = sampler_theta(o);
  require(!o.a.empty(), "--a", "required");
  const std::vector<double> a = flag_double_list("--a", o.a);
  SamplerOpts sized = o;
  sized.n = static_cast<int>(a.size());
  const SimConfig cfg = sim_config(g, sized, theta);
  require(o.m >= 1 && o.m < cfg.N, "--m", "must satisfy 1 <= M < N");
  require(std::is_sorted(a.begin(), a.end()), "--a", "must be sorted ascending");
  const double scale = o.scale.empty() ? 1.0 : flag_double("--scale", o.scale);
  require(scale > 0, "--scale", "must be positive");
  EnsembleSample s;
  if (o.method == "matrix") {
    require(theta == 0.5 || theta == 1.0, "--theta", "the matrix method needs theta = 1/2 or 1");
    s = sample_corner_matrix(a, o.m, theta, cfg);
  } else if (o.method == "mcmc") {
    s = sample_corner_mcmc(a, o.m, theta, cfg);
  } else {
    throw FlagError("--method", "must be 'matrix' or 'mcmc'");
  }
  const MomentEstimate m12 = empirical_moments(s, {1, 2}, scale);
  report_sample(g, s, o.moments.empty() ? std::vector<int>{1, 2} : o.moments, scale, out,
                {{"kappa2_hat", m12.mean[1] - m12.mean[0] * m12.mean[0]}});
}

struct ConstellationOpts {
  int d = 2;
  int k = 1;
  bool list = false;
};

std::string perm_string(const Perm& p) {
  std::string s = "[";
  for (int i = 0; i < p.d; ++i) s += (i ? " " : "") + std::to_string(p(i));
  return s + "]";
}

void cmd_enumerate(const Global& g, const ConstellationOpts& o, std::ostream& out) {
  require(o.d >= 1 && o.d <= kMaxConstellationSize, "--d", "must lie in 1..4");
  require(o.k >= 0 && o.k <= kMaxConstellationColors, "--k", "must lie in 0..4");
  std::map<std::pair<int, int>, long long> by_genus_faces;
  long long total = 0;
  long long one_face_planar = 0;
  long long one_face_planar_normal = 0;
  Table listing{{"perms", "faces", "mu2", "eta", "genus", "normal"}, {}};
  json jl = json::array();
  for_each_constellation(o.d, o.k, [&](const OrientedConstellation& m) {
    const ConstellationStats s = constellation_stats(m);
    ++total;
    ++by_genus_faces[{s.genus, s.mu1.length()}];
    if (s.genus == 0 && s.mu1.length() == 1) {
      ++one_face_planar;
      if (s.normal) ++one_face_planar_normal;
    }
    if (!o.list) return;
    std::string perms;
    for (const Perm& p : m.perms) perms += (perms.empty() ? "" : " ") + perm_string(p);
    std::string eta;
    for (int e : s.eta) eta += (eta.empty() ? "" : ",") + std::to_string(e);
    listing.rows.push_back({perms, s.mu1.to_string(), s.mu2.to_string(), "(" + eta + ")", std::to_string(s.genus),
                            s.normal ? "yes" : "no"});
    jl.push_back({{"perms", perms}, {"mu1", s.mu1.parts()}, {"mu2", s.mu2.parts()}, {"eta", s.eta},
                  {"genus", s.genus}, {"normal", s.normal}});
  });
  mpz_class fact;
  mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(o.d - 1));
  const mpz_class tuples = count_transitive_tuples(o.d, o.k);
  const bool consistent = tuples == fact * mpz_class(static_cast<long>(total));
  Table t{{"genus", "faces", "count"}, {}};
  json jt = json::array();
  for (const auto& [key, count] : by_genus_faces) {
    t.rows.push_back({std::to_string(key.first), std::to_string(key.second), std::to_string(count)});
    jt.push_back({{"genus", key.first}, {"faces", key.second}, {"count", count}});
  }
  json j{{"d", o.d},
         {"k", o.k},
         {"rooted", total},
         {"transitive_tuples", tuples.get_str()},
         {"count_check", consistent},
         {"by_genus_faces", jt},
         {"planar_one_face", one_face_planar},
         {"planar_one_face_normal", one_face_planar_normal}};
  if (o.list) j["constellations"] = jl;
  emit(g, out, j, [&] {
    out << "d=" << o.d << " k=" << o.k << " rooted constellations: " << total << '\n';
    out << "transitive tuples: " << tuples.get_str() << " = rooted x (d-1)! : " << (consistent ? "MATCH" : "MISMATCH")
        << '\n';
    t.write_text(out);
    out << "genus 0, one face: " << one_face_planar << " (normal: " << one_face_planar_normal << ")\n";
    if (o.list) listing.write_text(out);
  });
  maybe_csv(g, o.list ? listing : t);
}

void cmd_verify_cumulant(const Global& g, int d, std::ostream& out) {
  require(d >= 1 && d <= kMaxConstellationSize, "--d", "must lie in 1..4");
  const MomentPolynomial from_maps = cumulant_polynomial(d);
  const MomentPolynomial from_paths = formal_cumulant(d);
  const bool match = from_maps == from_paths;
  json j{{"d", d}, {"constellations", from_maps.to_string()}, {"lukasiewicz", from_paths.to_string()}, {"match", match}};
  emit(g, out, j, [&] {
    if (match) {
      out << "kappa_" << d << " = " << from_maps.to_string() << " : MATCH\n";
    } else {
      out << "kappa_" << d << " = " << from_maps.to_string() << " (constellations) vs " << from_paths.to_string()
          << " (Lukasiewicz) : MISMATCH\n";
    }
  });
}

void cmd_verify_leading(const Global& g, int d, const LlnOpts& o, std::ostream& out) {
  require(d >= 1 && d <= 3, "--d", "must lie in 1..3");
  const Rat theta = theta_or_default(o.theta);
  for (int N : o.ns) require(N >= d, "--ns", "grid values must be at least d");
  const Profile p = make_profile(o.profile, o.c);
  const LeadingCoeffReport r = for_flag("--ns", [&] { return leading_coeff_verify(d, theta, p, o.ns); });
  const double residual = r.rel_residual ? *r.rel_residual : r.abs_residual;
  const bool pass = residual < o.tol;
  json j{{"d", d},
         {"theta", to_string(theta)},
         {"profile", p.name},
         {"Ns", r.Ns},
         {"values", rat_array(r.values)},
         {"extrapolated", to_string(r.extrapolated)},
         {"prediction", to_string(r.prediction)},
         {"abs_residual", r.abs_residual},
         {"rel_residual", r.rel_residual ? json(*r.rel_residual) : json(nullptr)},
         {"pass", pass}};
  emit(g, out, j, [&] {
    Table t{{"N", "a_(d)/N"}, {}};
    for (std::size_t i = 0; i < r.Ns.size(); ++i) {
      t.rows.push_back({std::to_string(r.Ns[i]), to_string(r.values[i]) + " ~ " + fmt(to_double(r.values[i]))});
    }
    t.write_text(out);
    out << "extrapolated: " << fmt(to_double(r.extrapolated)) << '\n';
    out << "prediction:   " << to_string(r.prediction) << '\n';
    out << (r.rel_residual ? "relative residual: " : "absolute residual: ") << fmt(residual) << " : "
        << (pass ? "PASS" : "FAIL") << " (tol " << fmt(o.tol) << ")\n";
  });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bessel generating functions, Jack expansions and beta-ensemble samplers", "bgf"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_flag("--json", g.json, "Machine-readable JSON report");
  app.add_option("--out", g.out_path, "Also write the main table (samplers: the raw sample) as CSV");
  app.add_option("--threads", g.threads, "Worker threads for samplers")->check(CLI::PositiveNumber);
  app.add_option("--jack-cap", g.jack_cap, "Jack degree cap (default 8)")->check(CLI::PositiveNumber);

  std::function<void()> action;

  MomentsOpts cum_o;
  auto* cum = app.add_subcommand("cumulants", "Free cumulants from moments");
  cum->add_option("--moments", cum_o.values, "Moments m1,m2,... (rationals)")->required();
  cum->add_option("--max", cum_o.max, "Highest order (default: number of moments)");
  cum->callback([&] { action = [&] { cmd_cumulants(g, cum_o, out); }; });

  MomentsOpts mom_o;
  auto* mom = app.add_subcommand("moments", "Moments from free cumulants");
  mom->add_option("--kappa", mom_o.values, "Cumulants kappa1,kappa2,... (rationals; missing ones are 0)")->required();
  mom->add_option("--max", mom_o.max, "Highest order (default: number of cumulants)");
  mom->callback([&] { action = [&] { cmd_moments(g, mom_o, out); }; });

  ExactOpts be_o;
  auto* be = app.add_subcommand("bessel-expand", "Truncated Bessel function or Bessel generating function");
  be->add_option("--a", be_o.a, "Point a_1,...,a_N (rationals)");
  be->add_option("--n", be_o.n, "Number of variables (default: entries of --a)");
  be->add_option("--theta", be_o.theta, "theta as p/q (default 1)");
  be->add_option("--deg", be_o.deg, "Truncation degree")->capture_default_str();
  be->add_option("--measure", be_o.measure, "Atomic measure JSON instead of --a");
  be->add_option("--basis", be_o.basis, "monomial or power")->capture_default_str();
  be->callback([&] { action = [&] { cmd_bessel_expand(g, be_o, out); }; });

  LlnOpts lln_o;
  auto* lln = app.add_subcommand("lln-check", "LLN-appropriateness check on a profile sequence");
  lln->add_option("--profile", lln_o.profile, "uniform, constant, zero or gaussian")->capture_default_str();
  lln->add_option("--c", lln_o.c, "Constant for the constant profile (default 1)");
  lln->add_option("--ns", lln_o.ns, "Increasing N grid")->delimiter(',')->capture_default_str();
  lln->add_option("--deg", lln_o.deg, "Highest degree")->capture_default_str();
  lln->add_option("--theta", lln_o.theta, "theta as p/q (default 1)");
  lln->add_option("--tol", lln_o.tol, "Tolerance")->capture_default_str();
  lln->callback([&] { action = [&] { cmd_lln_check(g, lln_o, out); }; });

  ExactOpts ta_o;
  auto* ta = app.add_subcommand("theta-add", "Log-coefficients of the theta-sum of two measures");
  ta->add_option("--measure", ta_o.measures, "Measure JSON (give twice)")->required();
  ta->add_option("--theta", ta_o.theta, "theta as p/q (default: from the files, else 1)");
  ta->add_option("--deg", ta_o.deg, "Truncation degree")->capture_default_str();
  ta->callback([&] { action = [&] { cmd_theta_add(g, ta_o, out); }; });

  ExactOpts co_o;
  auto* co = app.add_subcommand("corner", "Generating function of the M-corner of a measure");
  co->add_option("--measure", co_o.measure, "Measure JSON")->required();
  co->add_option("--m", co_o.m, "Corner size M < N")->required();
  co->add_option("--theta", co_o.theta, "theta as p/q (default: from the file, else 1)");
  co->add_option("--deg", co_o.deg, "Truncation degree")->capture_default_str();
  co->callback([&] { action = [&] { cmd_corner(g, co_o, out); }; });

  ExactOpts dbm_o;
  dbm_o.t = "1";
  dbm_o.deg = 2;
  auto* dbm = app.add_subcommand("dbm", "Exact log-coefficients and expected power sums after Dyson BM");
  dbm->add_option("--measure", dbm_o.measure, "Initial measure JSON");
  dbm->add_option("--n", dbm_o.n, "Zero start with N particles");
  dbm->add_option("--t", dbm_o.t, "Time as p/q")->capture_default_str();
  dbm->add_option("--theta", dbm_o.theta, "theta as p/q (default: from the file, else 1)");
  dbm->add_option("--deg", dbm_o.deg, "Truncation degree (>= 2)")->capture_default_str();
  dbm->callback([&] { action = [&] { cmd_dbm(g, dbm_o, out); }; });

  SamplerOpts gbe_o;
  auto* gbe = app.add_subcommand("sample-gbe", "Gaussian beta ensemble via the tridiagonal model");
  gbe->add_option("--n", gbe_o.n, "Number of particles")->required();
  gbe->add_option("--theta", gbe_o.theta, "theta (beta = 2 theta), default 1");
  gbe->add_option("--variance", gbe_o.variance, "Weight exp(-x^2 / (2 variance)); default N / theta");
  gbe->add_option("--scale", gbe_o.scale, "Moments of x / scale; default N");
  gbe->add_option("--moments", gbe_o.moments, "Moment orders (default 2,4)")->delimiter(',');
  gbe->add_option("--trajectories", gbe_o.trajectories, "Samples")->capture_default_str();
  gbe->add_option("--seed", gbe_o.seed, "Seed")->capture_default_str();
  gbe->callback([&] { action = [&] { cmd_sample_gbe(g, gbe_o, out); }; });

  SamplerOpts sd_o;
  auto* sd = app.add_subcommand("simulate-dbm", "Dyson Brownian motion by drift-implicit Euler");
  sd->add_option("--n", sd_o.n, "Number of particles")->required();
  sd->add_option("--theta", sd_o.theta, "theta >= 1/2, default 1");
  sd->add_option("--a", sd_o.a, "Sorted start a_1,...,a_N (default zeros)");
  sd->add_option("--t", sd_o.t, "Final time")->capture_default_str();
  sd->add_option("--dt", sd_o.dt, "Maximal step")->capture_default_str();
  sd->add_option("--scale", sd_o.scale, "Moments of W / scale; default 1");
  sd->add_option("--moments", sd_o.moments, "Moment orders (default 1,2)")->delimiter(',');
  sd->add_option("--trajectories", sd_o.trajectories, "Trajectories")->capture_default_str();
  sd->add_option("--seed", sd_o.seed, "Seed")->capture_default_str();
  sd->callback([&] { action = [&] { cmd_simulate_dbm(g, sd_o, out); }; });

  SamplerOpts sc_o;
  auto* sc = app.add_subcommand("sample-corner", "Corner of a fixed spectrum (matrix or Gibbs sampler)");
  sc->add_option("--a", sc_o.a, "Sorted top row a_1,...,a_N")->required();
  sc->add_option("--m", sc_o.m, "Corner size M < N")->required();
  sc->add_option("--theta", sc_o.theta, "theta, default 1 (matrix method: 1/2 or 1)");
  sc->add_option("--method", sc_o.method, "matrix or mcmc")->capture_default_str();
  sc->add_option("--sweeps", sc_o.sweeps, "Gibbs sweeps per chain")->capture_default_str();
  sc->add_option("--scale", sc_o.scale, "Moments of x / scale; default 1");
  sc->add_option("--moments", sc_o.moments, "Moment orders (default 1,2)")->delimiter(',');
  sc->add_option("--trajectories", sc_o.trajectories, "Samples")->capture_default_str();
  sc->add_option("--seed", sc_o.seed, "Seed")->capture_default_str();
  sc->callback([&] { action = [&] { cmd_sample_corner(g, sc_o, out); }; });

  ConstellationOpts en_o;
  auto* en = app.add_subcommand("enumerate-constellations", "Rooted connected constellations of size d");
  en->add_option("--d", en_o.d, "Size, 1..4")->capture_default_str();
  en->add_option("--k", en_o.k, "Colors, 0..4")->capture_default_str();
  en->add_flag("--list", en_o.list, "List every constellation");
  en->callback([&] { action = [&] { cmd_enumerate(g, en_o, out); }; });

  int vc_d = 2;
  auto* vc = app.add_subcommand("verify-cumulant-formula", "Constellation sum against Lukasiewicz inversion");
  vc->add_option("--d", vc_d, "Order, 1..4")->capture_default_str();
  vc->callback([&] { action = [&] { cmd_verify_cumulant(g, vc_d, out); }; });

  int vl_d = 2;
  LlnOpts vl_o;
  auto* vl = app.add_subcommand("verify-leading-coeff", "Extrapolated a_(d)/N against the constellation prediction");
  vl->add_option("--d", vl_d, "Degree, 1..3")->capture_default_str();
  vl->add_option("--theta", vl_o.theta, "theta as p/q (default 1)");
  vl->add_option("--profile", vl_o.profile, "uniform, constant or zero")->capture_default_str();
  vl->add_option("--c", vl_o.c, "Constant for the constant profile (default 1)");
  vl->add_option("--ns", vl_o.ns, "N grid")->delimiter(',')->capture_default_str();
  vl->add_option("--tol", vl_o.tol, "Tolerance on the residual")->capture_default_str();
  vl->callback([&] { action = [&] { cmd_verify_leading(g, vl_d, vl_o, out); }; });

  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--out" || a == "--threads" || a == "--jack-cap") {
      ++i;
      continue;
    }
    if (a.starts_with("-")) continue;
    if (app.get_subcommand_no_throw(a) == nullptr) {
      err << "error: unknown subcommand '" << a << "'\n" << app.help("", CLI::AppFormatMode::Normal);
      return kValidationError;
    }
    break;
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << '\n';
    CLI::App* failing = &app;
    for (CLI::App* sub : app.get_subcommands()) failing = sub;
    err << failing->help("", CLI::AppFormatMode::Normal);
    return kValidationError;
  }

  const int previous_cap = jack_degree_cap();
  try {
    if (g.jack_cap > 0) set_jack_degree_cap(g.jack_cap);
    if (action) action();
    set_jack_degree_cap(previous_cap);
    return kOk;
  } catch (const FlagError& e) {
    set_jack_degree_cap(previous_cap);
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const Error& e) {
    set_jack_degree_cap(previous_cap);
    err << "error: " << e.what() << '\n';
    return e.is_validation() ? kValidationError : kRuntimeError;
  } catch (const std::exception& e) {
    set_jack_degree_cap(previous_cap);
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace bgf::cli
