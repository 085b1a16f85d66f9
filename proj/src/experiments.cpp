#include "mpstest/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mpstest/mps_geometry.hpp"
#include "mpstest/random.hpp"
#include "mpstest/schur_weyl.hpp"
#include "mpstest/state.hpp"
#include "mpstest/symfunc.hpp"
#include "mpstest/testers.hpp"

namespace mpstest {

using json = nlohmann::ordered_json;

double ExperimentConfig::param_or(const std::string& key, double fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

json ExperimentConfig::to_json() const {
  json j;
  j["experiment"] = experiment;
  j["seed"] = seed;
  j["format"] = format;
  j["params"] = json::object();
  for (const auto& [k, v] : params) j["params"][k] = v;
  j["grid"] = grid;
  return j;
}

Verdict Verdict::le(std::string name, double lhs, double rhs, double tolerance) {
  Verdict v;
  v.name = std::move(name);
  v.lhs = lhs;
  v.rhs = rhs;
  v.tolerance = tolerance;
  v.margin = rhs + tolerance - lhs;
  v.pass = lhs <= rhs + tolerance;
  return v;
}

json Verdict::to_json() const {
  json j;
  j["name"] = name;
  j["lhs"] = lhs;
  j["rhs"] = rhs;
  j["tolerance"] = tolerance;
  j["margin"] = margin;
  j["pass"] = pass;
  return j;
}

bool ExperimentResult::all_pass() const {
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  return true;
}

std::vector<const Verdict*> ExperimentResult::failures() const {
  std::vector<const Verdict*> out;
  for (const auto& v : verdicts)
    if (!v.pass) out.push_back(&v);
  return out;
}

json ExperimentResult::to_json() const {
  json j;
  j["config"] = config.to_json();
  j["records"] = records;
  j["verdicts"] = json::array();
  for (const auto& v : verdicts) j["verdicts"].push_back(v.to_json());
  j["runtime_ms"] = runtime_ms;
  return j;
}

std::string ExperimentResult::to_csv() const {
  std::ostringstream os;
  if (records.empty()) return "";
  std::vector<std::string> header;
  for (const auto& rec : records)
    for (auto it = rec.begin(); it != rec.end(); ++it)
      if (std::find(header.begin(), header.end(), it.key()) == header.end())
        header.push_back(it.key());
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& rec : records) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) os << ",";
      if (!rec.contains(header[i])) continue;
      const auto& val = rec[header[i]];
      if (val.is_string())
        os << '"' << val.get<std::string>() << '"';
      else
        os << val.dump();
    }
    os << "\n";
  }
  return os.str();
}

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    auto dt = std::chrono::steady_clock::now() - start_;
    return std::chrono::duration<double, std::milli>(dt).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Deterministic parallel map: slot i is computed from child seed i no
// matter which thread runs it.
template <typename F>
void parallel_for_indexed(std::size_t count, F&& body) {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&]() {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    });
  for (auto& t : pool) t.join();
}

std::vector<double> linspace(double lo, double hi, int points) {
  std::vector<double> out(points);
  for (int i = 0; i < points; ++i)
    out[i] = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
  return out;
}

std::vector<double> grid_or(const ExperimentConfig& cfg, std::vector<double> fallback) {
  return cfg.grid.empty() ? fallback : cfg.grid;
}

}  // namespace

// --- bounds curve -----------------------------------------------------------------

ExperimentResult run_bounds_curve(const ExperimentConfig& config) {
  Stopwatch timer;
  ExperimentResult result;
  result.config = config;

  auto grid = grid_or(config, linspace(0.0, 1.0, 101));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double omega = grid[i];
    if (omega < 0.0 || omega > 1.0)
      throw std::invalid_argument("run_bounds_curve: omega grid entries must be in [0,1]");
    const double simple = product_test_bound(omega, BoundVariant::Simple);
    const double sharp = product_test_bound(omega, BoundVariant::Sharp);
    const double hm = hm_bound(omega);
    const double tight = omega * omega - omega + 1.0;

    json rec;
    rec["omega"] = omega;
    rec["simple_bound"] = simple;
    rec["sharp_bound"] = sharp;
    rec["hm_bound"] = hm;
    rec["tight_example"] = tight;
    rec["bound"] = hm;
    rec["margin"] = hm - sharp;
    result.records.push_back(rec);

    const std::string tag = std::to_string(i);
    result.verdicts.push_back(Verdict::le("sharp_le_simple[" + tag + "]", sharp, simple, 1e-12));
    result.verdicts.push_back(Verdict::le("sharp_le_hm[" + tag + "]", sharp, hm, 1e-12));
    // The example family is a valid (omega, PT) point only for omega >= 1/2,
    // where it meets the sharp bound exactly.
    if (omega >= 0.5)
      result.verdicts.push_back(
          Verdict::le("tight_le_sharp[" + tag + "]", tight, sharp, 1e-12));
  }
  result.runtime_ms = timer.ms();
  return result;
}

// --- product demo --------------------------------------------------------------------

ExperimentResult run_product_demo(const ExperimentConfig& config) {
  Stopwatch timer;
  ExperimentResult result;
  result.config = config;

  auto grid = grid_or(config, {0.5, 0.6, 0.7, 0.8, 0.9, 1.0});
  const int pad_n = static_cast<int>(config.param_or("n", 2));
  Rng rng(config.seed);

  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double omega = grid[i];
    RVec lam(2);
    lam << omega, 1.0 - omega;
    PureState psi = schmidt_diagonal_state(lam, 2, 2);
    for (int q = 2; q < pad_n; ++q)
      psi = tensor_product(psi, random_state(QuditDims{2}, rng));

    const double pt = product_test_prob(psi);
    const double formula = omega * omega - omega + 1.0;
    json rec;
    rec["omega"] = omega;
    rec["n"] = psi.num_qudits();
    rec["product_test"] = pt;
    rec["formula"] = formula;
    rec["bound"] = formula;
    rec["margin"] = std::abs(pt - formula);
    result.records.push_back(rec);
    result.verdicts.push_back(
        Verdict::le("pt_equals_formula[" + std::to_string(i) + "]", std::abs(pt - formula),
                    0.0, 1e-10));
  }
  result.runtime_ms = timer.ms();
  return result;
}

// --- bunny ---------------------------------------------------------------------------

ExperimentResult run_bunny(const ExperimentConfig& config) {
  Stopwatch timer;
  ExperimentResult result;
  result.config = config;

  std::vector<double> ns = grid_or(config, {4, 5, 6});
  const int r = static_cast<int>(config.param_or("r", 2));
  const int m = static_cast<int>(config.param_or("m", 3));

  std::vector<json> records(ns.size());
  std::vector<std::vector<Verdict>> verdicts(ns.size());

  parallel_for_indexed(ns.size(), [&](std::size_t idx) {
    const int n = static_cast<int>(ns[idx]);
    PureState bunny = bunny_state(n);
    const std::string tag = "n=" + std::to_string(n);

    // Cut spectra against the closed form.
    double spectrum_dev = 0.0;
    json spectra = json::array();
    for (int cut = 1; cut <= n - 1; ++cut) {
      auto sd = schmidt(bunny, cut);
      std::vector<double> expected;
      for (double x : {static_cast<double>(cut - 1), 1.0, static_cast<double>(n - cut - 1)})
        if (x > 0.0) expected.push_back(x / (n - 1));
      std::sort(expected.begin(), expected.end(), std::greater<double>());
      json cut_rec;
      cut_rec["cut"] = cut;
      cut_rec["spectrum"] = std::vector<double>(
          sd.coefficients.data(), sd.coefficients.data() + sd.coefficients.size());
      cut_rec["expected"] = expected;
      spectra.push_back(cut_rec);
      if (sd.rank() != static_cast<int>(expected.size())) {
        spectrum_dev = 1.0;
        continue;
      }
      for (int j = 0; j < sd.rank(); ++j)
        spectrum_dev = std::max(spectrum_dev, std::abs(sd.coefficients[j] - expected[j]));
    }

    Rng rng(child_seed(config.seed, idx));
    OverlapBracket bracket = overlap_mps_dmrg(bunny, r, SweepOptions{}, rng);
    TestReport reject_report = mps_test_accept_prob(bunny, r, m);
    TestReport accept_report = mps_test_accept_prob(bunny, r + 1, m);

    json rec;
    rec["n"] = n;
    rec["r"] = r;
    rec["m"] = m;
    rec["cut_spectra"] = spectra;
    rec["spectrum_max_dev"] = spectrum_dev;
    rec["overlap_lower"] = bracket.lower;
    rec["overlap_upper"] = bracket.upper;
    rec["overlap_bound"] = 2.0 / 3.0;
    rec["accept_prob"] = reject_report.accept_probability;
    rec["accept_bound"] = 5.0 / 6.0;
    rec["accept_margin"] = 5.0 / 6.0 - reject_report.accept_probability;
    rec["per_cut_accept"] = reject_report.per_cut_probabilities;
    rec["accept_prob_r3"] = accept_report.accept_probability;
    records[idx] = rec;

    verdicts[idx].push_back(
        Verdict::le("spectrum_matches[" + tag + "]", spectrum_dev, 0.0, 1e-10));
    verdicts[idx].push_back(
        Verdict::le("overlap2_upper[" + tag + "]", bracket.upper, 2.0 / 3.0, 1e-6));
    verdicts[idx].push_back(Verdict::le("accept_le_5_6[" + tag + "]",
                                        reject_report.accept_probability, 5.0 / 6.0, 1e-9));
    verdicts[idx].push_back(Verdict::le("in_mps3_accepts[" + tag + "]",
                                        std::abs(1.0 - accept_report.accept_probability),
                                        0.0, 1e-9));
  });

  for (std::size_t i = 0; i < ns.size(); ++i) {
    result.records.push_back(records[i]);
    for (auto& v : verdicts[i]) result.verdicts.push_back(v);
  }
  result.runtime_ms = timer.ms();
  return result;
}

// --- rank demo -------------------------------------------------------------------------

ExperimentResult run_rank_demo(const ExperimentConfig& config) {
  Stopwatch timer;
  ExperimentResult result;
  result.config = config;

  std::vector<double> spectrum_in = grid_or(config, {0.5, 0.5});
  RVec spectrum(spectrum_in.size());
  for (std::size_t i = 0; i < spectrum_in.size(); ++i) spectrum[i] = spectrum_in[i];
  if (std::abs(spectrum.sum() - 1.0) > kAlgebraTol)
    throw std::invalid_argument("run_rank_demo: spectrum must sum to 1");
  std::sort(spectrum.data(), spectrum.data() + spectrum.size(), std::greater<double>());

  const int r = static_cast<int>(config.param_or("r", 1));
  const int m = static_cast<int>(config.param_or("m", 2));
  const long samples = static_cast<long>(config.param_or("samples", 10000));
  const int d = static_cast<int>(spectrum.size());

  Mat rho_mat = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) rho_mat(i, i) = spectrum[i];
  MixedState rho = MixedState::from_matrix(QuditDims{std::max(d, 2)}, [&] {
    Mat padded = Mat::Zero(std::max(d, 2), std::max(d, 2));
    padded.topLeftCorner(d, d) = rho_mat;
    return padded;
  }());

  const double oracle = rank_test_accept_prob(rho, r, m);
  const double exact = rank_test_accept_prob_projector(rho, r, m);

  // Empirical outcome frequencies.
  Rng rng(config.seed);
  auto dist = wss_distribution(rho.spectrum(), m);
  std::map<std::string, long> counts;
  long accepted = 0;
  for (long s = 0; s < samples; ++s) {
    RankSample sample = rank_test_sample(rho, r, m, rng);
    ++counts[sample.outcome.to_string()];
    if (sample.accept) ++accepted;
  }
  const double empirical = static_cast<double>(accepted) / samples;
  const double sigma_accept =
      std::sqrt(std::max(exact * (1.0 - exact), 1e-12) / samples);

  json summary;
  summary["kind"] = "acceptance";
  summary["r"] = r;
  summary["m"] = m;
  summary["samples"] = samples;
  summary["exact_projector"] = exact;
  summary["oracle_schur"] = oracle;
  summary["empirical"] = empirical;
  summary["bound"] = 3.0 * sigma_accept;
  summary["margin"] = 3.0 * sigma_accept - std::abs(empirical - exact);
  result.records.push_back(summary);

  result.verdicts.push_back(
      Verdict::le("exact_matches_oracle", std::abs(exact - oracle), 0.0, 1e-8));
  result.verdicts.push_back(Verdict::le("empirical_within_3sigma",
                                        std::abs(empirical - exact), 3.0 * sigma_accept,
                                        0.0));

  for (const auto& [mu, p] : dist) {
    const double freq =
        counts.count(mu.to_string()) ? static_cast<double>(counts[mu.to_string()]) / samples
                                     : 0.0;
    const double sigma = std::sqrt(std::max(p * (1.0 - p), 1e-12) / samples);
    json rec;
    rec["kind"] = "outcome";
    rec["partition"] = mu.to_string();
    rec["exact_prob"] = p;
    rec["empirical_freq"] = freq;
    rec["bound"] = 3.0 * sigma;
    rec["margin"] = 3.0 * sigma - std::abs(freq - p);
    result.records.push_back(rec);
    result.verdicts.push_back(Verdict::le("outcome_within_3sigma[" + mu.to_string() + "]",
                                          std::abs(freq - p), 3.0 * sigma, 0.0));
  }
  result.runtime_ms = timer.ms();
  return result;
}

// --- lower bound --------------------------------------------------------------------------

ExperimentResult run_lower_bound(const ExperimentConfig& config) {
  Stopwatch timer;
  ExperimentResult result;
  result.config = config;

  const int d = static_cast<int>(config.param_or("d", 3));
  const int r = static_cast<int>(config.param_or("r", 2));
  const int m = static_cast<int>(config.param_or("m", 2));
  const int n = static_cast<int>(config.param_or("n", 4));
  if (n < 4 || n % 2 != 0)
    throw std::invalid_argument("run_lower_bound: n must be even and >= 4");
  if (d - 1 < 2 * (r - 1))
    throw std::invalid_argument("run_lower_bound: requires d - 1 >= 2 (r - 1)");
  auto thetas = grid_or(config, {0.05, 0.1, 0.2});

  std::vector<json> records(thetas.size());
  std::vector<std::vector<Verdict>> verdicts(thetas.size());

  parallel_for_indexed(thetas.size(), [&](std::size_t idx) {
    const double theta = thetas[idx];
    const std::string tag = "theta=" + std::to_string(theta);

    // Reduced hard states and their exact single-side twirls.
    MixedState tau_far = partial_trace(hard_pair_phi(theta, d), {0});
    MixedState tau_mps = partial_trace(hard_pair_gamma(theta, r, d), {0});
    QuditDims base{d};
    CopyOperator far_op(base, m, kron_power(tau_far.matrix(), m));
    CopyOperator mps_op(base, m, kron_power(tau_mps.matrix(), m));
    CopyOperator far_twirl = haar_twirl(far_op, {0});
    CopyOperator mps_twirl = haar_twirl(mps_op, {0});

    Eigen::SelfAdjointEigenSolver<Mat> es(far_twirl.matrix() - mps_twirl.matrix(),
                                          Eigen::EigenvaluesOnly);
    const double exact_dist = 0.5 * es.eigenvalues().cwiseAbs().sum();
    const double bound = mixture_distance_bound(m, theta);
    const double relaxed = static_cast<double>(m) * (m - 1) * theta * theta;
    const double lifted = std::sqrt(static_cast<double>(n)) * m * theta;

    // Distance of the tensor-power hard state, certified through the cuts.
    const double delta = std::sqrt(static_cast<double>(n) * theta / 8.0);
    PureState big_phi = hard_tensor_phi(n, theta, d);
    const double omega_single = (1.0 - theta) + (r - 1) * theta / (d - 1);
    const double analytic_overlap = std::pow(omega_single, n / 2);
    const double certified_dist = std::sqrt(
        std::max(0.0, 1.0 - min_cut_overlap_bound(big_phi, r)));
    Rng rng(child_seed(config.seed, idx));
    OverlapBracket bracket = overlap_mps_dmrg(big_phi, r, SweepOptions{}, rng);

    json rec;
    rec["theta"] = theta;
    rec["d"] = d;
    rec["r"] = r;
    rec["m"] = m;
    rec["n"] = n;
    rec["exact_twirled_distance"] = exact_dist;
    rec["mixture_bound"] = bound;
    rec["relaxed_bound"] = relaxed;
    rec["lifted_bound_sqrt_n_m_theta"] = lifted;
    rec["delta"] = delta;
    rec["analytic_overlap"] = analytic_overlap;
    rec["overlap_lower"] = bracket.lower;
    rec["overlap_upper"] = bracket.upper;
    rec["certified_distance"] = certified_dist;
    rec["copies_lower_bound"] = copies_needed(TesterKind::Lower, n, r, delta);
    rec["bound"] = bound;
    rec["margin"] = bound - exact_dist;
    records[idx] = rec;

    verdicts[idx].push_back(
        Verdict::le("twirl_le_mixture[" + tag + "]", exact_dist, bound, 1e-10));
    verdicts[idx].push_back(
        Verdict::le("mixture_le_relaxed[" + tag + "]", bound, relaxed, 1e-10));
    verdicts[idx].push_back(
        Verdict::le("dist_ge_delta[" + tag + "]", delta, certified_dist, 1e-9));
    verdicts[idx].push_back(Verdict::le("bracket_covers_analytic[" + tag + "]",
                                        std::abs(bracket.lower - analytic_overlap), 0.0,
                                        1e-6));
  });

  for (std::size_t i = 0; i < thetas.size(); ++i) {
    result.records.push_back(records[i]);
    for (auto& v : verdicts[i]) result.verdicts.push_back(v);
  }
  result.runtime_ms = timer.ms();
  return result;
}

// --- reduction check ------------------------------------------------------------------------

namespace {

CopyOperator double_twirl(const PureState& psi, int m) {
  CopyOperator op(psi.dims(), m,
                  kron_power((psi.amplitudes() * psi.amplitudes().adjoint()).eval(), m));
  return haar_twirl(haar_twirl(op, {0}), {1});
}

// QuditDims for the flattened m-copy register list of a two-qudit system.
QuditDims copy_register_dims(const QuditDims& base, int m) {
  std::vector<int> regs;
  for (int c = 0; c < m; ++c)
    for (int q = 0; q < base.num_qudits(); ++q) regs.push_back(base.dim(q));
  return QuditDims(regs);
}

}  // namespace

ExperimentResult run_reduction_check(const ExperimentConfig& config) {
  Stopwatch timer;
  ExperimentResult result;
  result.config = config;

  const int m = static_cast<int>(config.param_or("m", 2));
  const int r = static_cast<int>(config.param_or("r", 2));
  const double theta = config.param_or("theta", 0.2);
  auto ds = grid_or(config, {2, 3});

  for (std::size_t idx = 0; idx < ds.size(); ++idx) {
    const int d = static_cast<int>(ds[idx]);
    const int r_eff = std::min(r, d);
    // At d = 2 the gamma state coincides with phi; add a second pair with a
    // different theta so the distance check is nontrivial there too.
    std::vector<std::pair<PureState, PureState>> pairs;
    pairs.emplace_back(hard_pair_phi(theta, d), hard_pair_gamma(theta, r_eff, d));
    if (d == 2) pairs.emplace_back(hard_pair_phi(theta, d), hard_pair_phi(theta / 2.0, d));

    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const std::string tag = "d=" + std::to_string(d) + (p ? "/phi-pair" : "/phi-gamma");
      CopyOperator m_phi = double_twirl(pairs[p].first, m);
      CopyOperator m_gamma = double_twirl(pairs[p].second, m);

      // Invariance checks on the twirled state.
      auto max_diff = [](const Mat& a, const Mat& b) {
        return (a - b).cwiseAbs().maxCoeff();
      };
      const double inv_u = max_diff(haar_twirl(m_phi, {0}).matrix(), m_phi.matrix());
      const double inv_v = max_diff(haar_twirl(m_phi, {1}).matrix(), m_phi.matrix());
      const double inv_left = max_diff(
          perm_average_two_sided(m_phi, {0}, {1}, PermAverageMode::Left).matrix(),
          m_phi.matrix());
      const double inv_right = max_diff(
          perm_average_two_sided(m_phi, {0}, {1}, PermAverageMode::Right).matrix(),
          m_phi.matrix());

      // Full trace distance vs the A-register restriction.
      QuditDims regs = copy_register_dims(pairs[p].first.dims(), m);
      MixedState full_phi = MixedState::from_matrix(regs, m_phi.matrix());
      MixedState full_gamma = MixedState::from_matrix(regs, m_gamma.matrix());
      std::vector<int> a_regs;
      for (int c = 0; c < m; ++c) a_regs.push_back(2 * c);
      const double dist_full = trace_distance(full_phi, full_gamma);
      const double dist_a = trace_distance(partial_trace(full_phi, a_regs),
                                           partial_trace(full_gamma, a_regs));

      json rec;
      rec["d"] = d;
      rec["m"] = m;
      rec["pair"] = p ? "phi(theta),phi(theta/2)" : "phi,gamma";
      rec["theta"] = theta;
      rec["invariance_haar_a"] = inv_u;
      rec["invariance_haar_b"] = inv_v;
      rec["invariance_perm_left"] = inv_left;
      rec["invariance_perm_right"] = inv_right;
      rec["distance_full"] = dist_full;
      rec["distance_a_registers"] = dist_a;
      rec["bound"] = 1e-8;
      rec["margin"] = 1e-8 - std::abs(dist_full - dist_a);
      result.records.push_back(rec);

      result.verdicts.push_back(Verdict::le("invariance_haar_a[" + tag + "]", inv_u, 0.0, 1e-8));
      result.verdicts.push_back(Verdict::le("invariance_haar_b[" + tag + "]", inv_v, 0.0, 1e-8));
      result.verdicts.push_back(
          Verdict::le("invariance_perm_left[" + tag + "]", inv_left, 0.0, 1e-8));
      result.verdicts.push_back(
          Verdict::le("invariance_perm_right[" + tag + "]", inv_right, 0.0, 1e-8));
      result.verdicts.push_back(Verdict::le("distance_equality[" + tag + "]",
                                            std::abs(dist_full - dist_a), 0.0, 1e-8));
    }
  }
  result.runtime_ms = timer.ms();
  return result;
}

// --- omega exploration ------------------------------------------------------------------------

ExperimentResult run_omega_exploration(const ExperimentConfig& config) {
  Stopwatch timer;
  ExperimentResult result;
  result.config = config;

  auto ds = grid_or(config, {2, 3, 4, 5, 6, 8, 10});
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const int d = static_cast<int>(ds[i]);
    PureState psi = max_entangled_state(d);
    const double pt = product_test_prob(psi);
    const double formula = 0.5 * (1.0 + 1.0 / d);
    json rec;
    rec["kind"] = "max_entangled";
    rec["d"] = d;
    rec["omega"] = 1.0 / d;
    rec["product_test"] = pt;
    rec["formula"] = formula;
    rec["bound"] = 0.5;
    rec["margin"] = pt - 0.5;
    result.records.push_back(rec);
    const std::string tag = "d=" + std::to_string(d);
    result.verdicts.push_back(
        Verdict::le("pt_formula[" + tag + "]", std::abs(pt - formula), 0.0, 1e-10));
    result.verdicts.push_back(Verdict::le("pt_ge_half[" + tag + "]", 0.5, pt, 1e-12));
  }

  // Random low-overlap states: reported, not asserted.
  const int d = static_cast<int>(config.param_or("d", 3));
  const int count = static_cast<int>(config.param_or("samples", 5));
  Rng rng(config.seed);
  for (int k = 0; k < count; ++k) {
    PureState psi = random_state(QuditDims{d, d}, rng);
    OverlapBracket bracket = overlap_product_als(psi, 8, rng);
    json rec;
    rec["kind"] = "random";
    rec["d"] = d;
    rec["omega_lower"] = bracket.lower;
    rec["omega_upper"] = bracket.upper;
    rec["product_test"] = product_test_prob(psi);
    rec["bound"] = 1.0;
    rec["margin"] = 1.0 - bracket.lower;
    result.records.push_back(rec);
  }
  result.runtime_ms = timer.ms();
  return result;
}

// --- dispatch -----------------------------------------------------------------------------------

std::vector<std::string> experiment_names() {
  return {"bounds-curve",  "product-demo", "bunny",            "rank-demo",
          "lower-bound",   "reduction-check", "omega-exploration"};
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.experiment == "bounds-curve") return run_bounds_curve(config);
  if (config.experiment == "product-demo") return run_product_demo(config);
  if (config.experiment == "bunny") return run_bunny(config);
  if (config.experiment == "rank-demo") return run_rank_demo(config);
  if (config.experiment == "lower-bound") return run_lower_bound(config);
  if (config.experiment == "reduction-check") return run_reduction_check(config);
  if (config.experiment == "omega-exploration") return run_omega_exploration(config);
  throw std::invalid_argument("run_experiment: unknown experiment " + config.experiment);
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("parse_config_file: cannot open " + path);
  ExperimentConfig cfg;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const char* ws = " \t\r\n";
      auto b = s.find_first_not_of(ws);
      auto e = s.find_last_not_of(ws);
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) continue;
    if (key == "experiment")
      cfg.experiment = value;
    else if (key == "seed")
      cfg.seed = std::stoull(value);
    else if (key == "out")
      cfg.out_path = value;
    else if (key == "format")
      cfg.format = value;
    else if (key == "grid") {
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) cfg.grid.push_back(std::stod(item));
    } else {
      cfg.params[key] = std::stod(value);
    }
  }
  return cfg;
}

}  // namespace mpstest
