#include "mpstest/mps_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mpstest {

namespace {

// Heuristic slack added on top of the best witness value when reporting the
// converged sweep estimate as an upper estimate.
constexpr double kConvergenceMargin = 1e-7;

}  // namespace

// --- MpsState -----------------------------------------------------------------

MpsState::MpsState(QuditDims dims, std::vector<std::vector<Mat>> site_tensors)
    : dims_(std::move(dims)), sites_(std::move(site_tensors)) {
  const int n = dims_.num_qudits();
  if (static_cast<int>(sites_.size()) != n)
    throw std::invalid_argument("MpsState: wrong number of sites");
  long bond = 1;
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(sites_[i].size()) != dims_.dim(i))
      throw std::invalid_argument("MpsState: physical dimension mismatch at a site");
    const long rows = sites_[i][0].rows();
    const long cols = sites_[i][0].cols();
    for (const Mat& a : sites_[i])
      if (a.rows() != rows || a.cols() != cols)
        throw std::invalid_argument("MpsState: inconsistent bond shapes within a site");
    if (rows != bond) throw std::invalid_argument("MpsState: bond mismatch between sites");
    bond = cols;
  }
  if (bond != 1) throw std::invalid_argument("MpsState: final bond must be 1");
  if (sites_[0][0].rows() != 1)
    throw std::invalid_argument("MpsState: first bond must be 1");
}

int MpsState::bond_dimension() const {
  int b = 1;
  for (const auto& site : sites_) b = std::max<int>(b, static_cast<int>(site[0].cols()));
  return b;
}

Vec MpsState::contract() const {
  const int n = num_sites();
  Mat acc = Mat::Ones(1, 1);
  for (int i = 0; i < n; ++i) {
    const int d = dims_.dim(i);
    const long rows = acc.rows();
    const long chi = sites_[i][0].cols();
    Mat next = Mat::Zero(rows * d, chi);
    for (int j = 0; j < d; ++j)
      for (long x = 0; x < rows; ++x) next.row(x * d + j) = acc.row(x) * sites_[i][j];
    acc = std::move(next);
  }
  return acc.col(0);
}

PureState MpsState::to_pure_state() const {
  return PureState::normalized(dims_, contract());
}

// --- exact bipartite formulas ---------------------------------------------------

BipartiteOverlap overlap_bipartite(const PureState& psi, int cut, int r) {
  if (r < 1) throw std::invalid_argument("overlap_bipartite: r must be >= 1");
  auto sd = schmidt(psi, cut);
  const int keep = std::min<int>(r, sd.rank());
  double mass = 0.0;
  for (int i = 0; i < keep; ++i) mass += sd.coefficients[i];

  const long L = psi.dims().prefix_dim(cut);
  const long R = psi.dims().suffix_dim(cut);
  Vec w = Vec::Zero(L * R);
  for (int i = 0; i < keep; ++i) {
    const double coef = std::sqrt(sd.coefficients[i] / mass);
    for (long a = 0; a < L; ++a)
      for (long b = 0; b < R; ++b)
        w[a * R + b] += coef * sd.left_basis(a, i) * sd.right_basis(b, i);
  }
  return BipartiteOverlap{std::min(mass, 1.0), PureState::normalized(psi.dims(), std::move(w))};
}

double min_cut_overlap_bound(const PureState& psi, int r) {
  const int n = psi.num_qudits();
  if (n < 2) return 1.0;
  double bound = 1.0;
  for (int cut = 1; cut <= n - 1; ++cut) {
    auto sd = schmidt(psi, cut);
    double mass = 0.0;
    for (int i = 0; i < std::min<int>(r, sd.rank()); ++i) mass += sd.coefficients[i];
    bound = std::min(bound, mass);
  }
  return std::min(bound, 1.0);
}

// --- sequential truncation -------------------------------------------------------

TruncationResult truncate_to_mps(const PureState& psi, int r) {
  if (r < 1) throw std::invalid_argument("truncate_to_mps: r must be >= 1");
  const int n = psi.num_qudits();
  if (n < 2) throw std::invalid_argument("truncate_to_mps: need at least two qudits");

  // Tails of the *input* state across each cut; these certify the bound.
  std::vector<double> tails(n - 1, 0.0);
  double tail_sum = 0.0;
  for (int cut = 1; cut <= n - 1; ++cut) {
    auto sd = schmidt(psi, cut);
    for (int j = r; j < sd.rank(); ++j) tails[cut - 1] += sd.coefficients[j];
    tail_sum += tails[cut - 1];
  }

  // Left-to-right SVD sweep building the witness.
  std::vector<std::vector<Mat>> sites(n);
  Mat carry = Eigen::Map<const Eigen::Matrix<cx, Eigen::Dynamic, Eigen::Dynamic,
                                             Eigen::RowMajor>>(
      psi.amplitudes().data(), 1, psi.dim());
  for (int i = 0; i < n - 1; ++i) {
    const int d = psi.dims().dim(i);
    const long bond = carry.rows();
    const long rest = carry.cols() / d;
    Mat M(bond * d, rest);
    for (long b = 0; b < bond; ++b)
      for (int j = 0; j < d; ++j) M.row(b * d + j) = carry.block(b, j * rest, 1, rest);
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    int k = 0;
    for (int s = 0; s < svd.singularValues().size() && k < r; ++s)
      if (svd.singularValues()[s] > 1e-14) ++k;
    k = std::max(k, 1);
    sites[i].resize(d);
    for (int j = 0; j < d; ++j) {
      sites[i][j] = Mat(bond, k);
      for (long b = 0; b < bond; ++b) sites[i][j].row(b) = svd.matrixU().row(b * d + j).head(k);
    }
    carry = svd.singularValues().head(k).asDiagonal() *
            svd.matrixV().leftCols(k).adjoint();
  }
  {
    const int d = psi.dims().dim(n - 1);
    const long bond = carry.rows();
    carry /= carry.norm();  // witness contracts to a unit vector
    sites[n - 1].resize(d);
    for (int j = 0; j < d; ++j) sites[n - 1][j] = carry.col(j);
  }

  MpsState mps(psi.dims(), std::move(sites));
  const double bound = std::pow(std::max(0.0, 1.0 - tail_sum), 2);
  const double actual = std::norm(mps.to_pure_state().inner(psi));
  return TruncationResult{std::move(mps), bound, actual, std::move(tails)};
}

// --- variational sweeps ------------------------------------------------------------

namespace {

using SiteTensors = std::vector<std::vector<Mat>>;

// Right-canonicalize in place: after the call every site i >= 1 has
// orthonormal rows when reshaped (bond_in x d*bond_out).
void right_canonicalize(SiteTensors& sites, const QuditDims& dims) {
  const int n = static_cast<int>(sites.size());
  for (int i = n - 1; i >= 1; --i) {
    const int d = dims.dim(i);
    const long bin = sites[i][0].rows();
    const long bout = sites[i][0].cols();
    Mat B(bin, d * bout);
    for (int j = 0; j < d; ++j) B.block(0, j * bout, bin, bout) = sites[i][j];
    // B = L Q with Q row-orthonormal: QR of B^dagger.
    Eigen::HouseholderQR<Mat> qr(B.adjoint());
    Mat Q = qr.householderQ() * Mat::Identity(d * bout, bin);
    Mat L = (Q.adjoint() * B.adjoint()).adjoint();  // bin x bin
    for (int j = 0; j < d; ++j) sites[i][j] = Q.adjoint().block(0, j * bout, bin, bout);
    for (int j = 0; j < dims.dim(i - 1); ++j) sites[i - 1][j] = sites[i - 1][j] * L;
  }
  // Normalize the head so the full contraction has unit norm.
  double norm2 = 0.0;
  for (const Mat& a : sites[0]) norm2 += a.squaredNorm();
  const double norm = std::sqrt(norm2);
  if (norm > 1e-150)
    for (Mat& a : sites[0]) a /= norm;
}

// Conjugated suffix amplitudes R_i (bond_i x suffix_dim_i), i = n..0.
std::vector<Mat> right_environments(const SiteTensors& sites, const QuditDims& dims) {
  const int n = static_cast<int>(sites.size());
  std::vector<Mat> R(n + 1);
  R[n] = Mat::Ones(1, 1);
  for (int i = n - 1; i >= 0; --i) {
    const int d = dims.dim(i);
    const long bin = sites[i][0].rows();
    const long suffix = dims.suffix_dim(i + 1);
    Mat out(bin, d * suffix);
    for (int j = 0; j < d; ++j)
      out.block(0, j * suffix, bin, suffix) = sites[i][j].conjugate() * R[i + 1];
    R[i] = std::move(out);
  }
  return R;
}

struct SweepOutcome {
  double overlap_sq = 0.0;
  SiteTensors sites;
};

// One-site sweeps maximizing |<phi|psi>| at fixed bond dimensions; the
// local update is an exact argmax, so the overlap is monotone per update.
SweepOutcome run_sweeps(const PureState& psi, SiteTensors init, const SweepOptions& opts) {
  const QuditDims& dims = psi.dims();
  const int n = dims.num_qudits();
  SiteTensors sites = std::move(init);
  right_canonicalize(sites, dims);

  double best = 0.0;
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    std::vector<Mat> R = right_environments(sites, dims);
    // W: conj(left-canonical prefix) contracted into psi, 1 x D at the start.
    Mat W = Eigen::Map<const Eigen::Matrix<cx, Eigen::Dynamic, Eigen::Dynamic,
                                           Eigen::RowMajor>>(psi.amplitudes().data(), 1,
                                                             psi.dim());
    double overlap = 0.0;
    for (int i = 0; i < n; ++i) {
      const int d = dims.dim(i);
      const long bin = sites[i][0].rows();
      const long bout = sites[i][0].cols();
      const long suffix = dims.suffix_dim(i + 1);

      // env_j = W_j R_{i+1}^T, the exact local maximizer direction.
      std::vector<Mat> env(d);
      double norm2 = 0.0;
      for (int j = 0; j < d; ++j) {
        env[j] = W.block(0, j * suffix, bin, suffix) * R[i + 1].transpose();
        norm2 += env[j].squaredNorm();
      }
      const double norm = std::sqrt(norm2);
      if (norm > 1e-150)
        for (int j = 0; j < d; ++j) sites[i][j] = env[j] / norm;
      overlap = norm;

      // Left-canonicalize the updated site and fold it into W.
      Mat A(bin * d, bout);
      for (int j = 0; j < d; ++j)
        for (long b = 0; b < bin; ++b) A.row(b * d + j) = sites[i][j].row(b);
      Eigen::HouseholderQR<Mat> qr(A);
      Mat Q = qr.householderQ() * Mat::Identity(bin * d, bout);
      for (int j = 0; j < d; ++j)
        for (long b = 0; b < bin; ++b) sites[i][j].row(b) = Q.row(b * d + j);
      if (i + 1 < n) {
        Mat Rfac = Q.adjoint() * A;
        for (int j = 0; j < dims.dim(i + 1); ++j) sites[i + 1][j] = Rfac * sites[i + 1][j];
        Mat Wn = Mat::Zero(bout, suffix);
        for (int j = 0; j < d; ++j)
          Wn += sites[i][j].adjoint() * W.block(0, j * suffix, bin, suffix);
        W = std::move(Wn);
      } else {
        // keep the final site unnormalized-direction exact: restore env/norm
        if (norm > 1e-150)
          for (int j = 0; j < d; ++j) sites[i][j] = env[j] / norm;
      }
    }
    const double overlap_sq = overlap * overlap;
    if (overlap_sq <= best + opts.gain_tol) {
      best = std::max(best, overlap_sq);
      break;
    }
    best = overlap_sq;
  }
  return SweepOutcome{best, std::move(sites)};
}

SiteTensors random_mps_tensors(const QuditDims& dims, int r, Rng& rng) {
  const int n = dims.num_qudits();
  std::normal_distribution<double> gauss(0.0, 1.0);
  SiteTensors sites(n);
  long bond = 1;
  for (int i = 0; i < n; ++i) {
    const long next = (i == n - 1) ? 1
                                   : std::min<long>({static_cast<long>(r),
                                                     dims.prefix_dim(i + 1),
                                                     dims.suffix_dim(i + 1)});
    sites[i].resize(dims.dim(i));
    for (int j = 0; j < dims.dim(i); ++j) {
      sites[i][j] = Mat(bond, next);
      for (long a = 0; a < bond; ++a)
        for (long b = 0; b < next; ++b) sites[i][j](a, b) = cx(gauss(rng), gauss(rng));
    }
    bond = next;
  }
  return sites;
}

OverlapBracket sweep_bracket(const PureState& psi, int r, const SweepOptions& opts,
                             Rng& rng, const std::string& method) {
  const int n = psi.num_qudits();
  double best = 0.0;
  std::optional<MpsState> witness;

  if (n == 1) {
    // Single qudit: every state is its own best approximation.
    std::vector<std::vector<Mat>> sites(1);
    sites[0].resize(psi.dims().dim(0));
    for (int j = 0; j < psi.dims().dim(0); ++j) {
      sites[0][j] = Mat(1, 1);
      sites[0][j](0, 0) = psi.amplitudes()[j];
    }
    OverlapBracket out;
    out.lower = 1.0;
    out.upper = 1.0;
    out.lower_method = method;
    out.upper_method = "exact";
    out.witness = MpsState(psi.dims(), std::move(sites));
    return out;
  }

  TruncationResult trunc = truncate_to_mps(psi, r);
  {
    SiteTensors init(trunc.mps.num_sites());
    for (int i = 0; i < trunc.mps.num_sites(); ++i) init[i] = trunc.mps.site(i);
    SweepOutcome o = run_sweeps(psi, std::move(init), opts);
    best = std::max(trunc.witness_overlap, o.overlap_sq);
    witness = MpsState(psi.dims(), std::move(o.sites));
  }
  const std::uint64_t root = rng();
  for (int k = 1; k < std::max(1, opts.restarts); ++k) {
    Rng child(child_seed(root, static_cast<std::uint64_t>(k)));
    SweepOutcome o = run_sweeps(psi, random_mps_tensors(psi.dims(), r, child), opts);
    if (o.overlap_sq > best) {
      best = o.overlap_sq;
      witness = MpsState(psi.dims(), std::move(o.sites));
    }
  }

  OverlapBracket out;
  out.lower = std::max(best, trunc.certified_lower);
  out.lower_method = method;
  const double cut_bound = min_cut_overlap_bound(psi, r);
  const double converged = out.lower + kConvergenceMargin;
  if (cut_bound <= converged) {
    out.upper = cut_bound;
    out.upper_method = "min-cut";
  } else {
    out.upper = converged;
    out.upper_method = "sweep-converged";
  }
  out.witness = std::move(witness);
  return out;
}

}  // namespace

OverlapBracket overlap_product_als(const PureState& psi, int restarts, Rng& rng) {
  SweepOptions opts;
  opts.restarts = restarts;
  return sweep_bracket(psi, 1, opts, rng, "als-witness");
}

OverlapBracket overlap_mps_dmrg(const PureState& psi, int r, const SweepOptions& opts,
                                Rng& rng) {
  if (r < 1) throw std::invalid_argument("overlap_mps_dmrg: r must be >= 1");
  return sweep_bracket(psi, r, opts, rng, "dmrg-witness");
}

DistanceBracket dist_r(const OverlapBracket& bracket) {
  DistanceBracket out;
  out.lower = std::sqrt(std::max(0.0, 1.0 - bracket.upper));
  out.upper = std::sqrt(std::max(0.0, 1.0 - bracket.lower));
  return out;
}

DistanceBracket dist_r(const PureState& psi, int r, Rng& rng, const SweepOptions& opts) {
  return dist_r(overlap_mps_dmrg(psi, r, opts, rng));
}

// --- named states --------------------------------------------------------------------

PureState bunny_state(int n) {
  if (n < 3) throw std::invalid_argument("bunny_state: n must be >= 3");
  QuditDims dims(std::vector<int>(n, 2));
  Vec v = Vec::Zero(dims.total_dim());
  const double amp = 1.0 / std::sqrt(static_cast<double>(n - 1));
  for (int i = 0; i + 1 < n; ++i) {
    // |0..0 1 1 0..0> with the pair at positions (i, i+1); qubit 0 is the
    // most significant digit.
    long idx = (1L << (n - 1 - i)) + (1L << (n - 2 - i));
    v[idx] = amp;
  }
  return PureState(std::move(dims), std::move(v));
}

PureState hard_pair_phi(double theta, int d) {
  if (theta < 0.0 || theta > 1.0) throw std::invalid_argument("hard_pair_phi: theta in [0,1]");
  if (d < 2) throw std::invalid_argument("hard_pair_phi: d must be >= 2");
  QuditDims dims{d, d};
  Vec v = Vec::Zero(dims.total_dim());
  v[0] = std::sqrt(1.0 - theta);
  for (int i = 1; i < d; ++i) v[i * d + i] = std::sqrt(theta / (d - 1));
  return PureState(std::move(dims), std::move(v));
}

PureState hard_pair_gamma(double theta, int r, int d) {
  if (theta < 0.0 || theta > 1.0)
    throw std::invalid_argument("hard_pair_gamma: theta in [0,1]");
  if (r < 1 || d < r) throw std::invalid_argument("hard_pair_gamma: need 1 <= r <= d");
  if (r == 1 && theta > 0.0)
    throw std::invalid_argument("hard_pair_gamma: r = 1 requires theta = 0");
  QuditDims dims{d, d};
  Vec v = Vec::Zero(dims.total_dim());
  v[0] = std::sqrt(1.0 - theta);
  for (int i = 1; i < r; ++i) v[i * d + i] = std::sqrt(theta / (r - 1));
  return PureState(std::move(dims), std::move(v));
}

HardPair hard_pair(double theta, int d, int r) {
  if (d - 1 < 2 * (r - 1))
    throw std::invalid_argument("hard_pair: requires d - 1 >= 2 (r - 1)");
  return HardPair{hard_pair_phi(theta, d), hard_pair_gamma(theta, r, d)};
}

namespace {

PureState tensor_power_state(const PureState& base, int copies) {
  PureState out = base;
  for (int i = 1; i < copies; ++i) out = tensor_product(out, base);
  return out;
}

}  // namespace

PureState hard_tensor_phi(int n, double theta, int d) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("hard_tensor_phi: n must be even >= 2");
  return tensor_power_state(hard_pair_phi(theta, d), n / 2);
}

PureState hard_tensor_gamma(int n, double theta, int r, int d) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("hard_tensor_gamma: n must be even >= 2");
  return tensor_power_state(hard_pair_gamma(theta, r, d), n / 2);
}

PureState ghz_state(int n, int d) {
  if (n < 2) throw std::invalid_argument("ghz_state: n must be >= 2");
  if (d < 2) throw std::invalid_argument("ghz_state: d must be >= 2");
  QuditDims dims(std::vector<int>(n, d));
  Vec v = Vec::Zero(dims.total_dim());
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  auto strides = strides_for(dims.dims());
  for (int level = 0; level < d; ++level) {
    long idx = 0;
    for (int q = 0; q < n; ++q) idx += level * strides[q];
    v[idx] = amp;
  }
  return PureState(std::move(dims), std::move(v));
}

PureState max_entangled_state(int d) {
  if (d < 2) throw std::invalid_argument("max_entangled_state: d must be >= 2");
  QuditDims dims{d, d};
  Vec v = Vec::Zero(dims.total_dim());
  for (int i = 0; i < d; ++i) v[i * d + i] = 1.0 / std::sqrt(static_cast<double>(d));
  return PureState(std::move(dims), std::move(v));
}

PureState schmidt_diagonal_state(const RVec& lambdas, int d1, int d2) {
  if (lambdas.size() < 1 || lambdas.size() > std::min(d1, d2))
    throw std::invalid_argument("schmidt_diagonal_state: spectrum length out of range");
  if (std::abs(lambdas.sum() - 1.0) > kAlgebraTol)
    throw std::invalid_argument("schmidt_diagonal_state: spectrum must sum to 1");
  QuditDims dims{d1, d2};
  Vec v = Vec::Zero(dims.total_dim());
  for (int i = 0; i < lambdas.size(); ++i) {
    if (lambdas[i] < 0.0)
      throw std::invalid_argument("schmidt_diagonal_state: negative entry");
    v[static_cast<long>(i) * d2 + i] = std::sqrt(lambdas[i]);
  }
  return PureState(std::move(dims), std::move(v));
}

PureState state_zoo(const std::string& name, const std::map<std::string, double>& params) {
  auto get = [&](const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  const int n = static_cast<int>(get("n", 4));
  const int d = static_cast<int>(get("d", 2));
  const int r = static_cast<int>(get("r", 2));
  const double theta = get("theta", 0.1);
  if (name == "bunny") return bunny_state(n);
  if (name == "phi") return hard_pair_phi(theta, d);
  if (name == "gamma") return hard_pair_gamma(theta, r, d);
  if (name == "Phi") return hard_tensor_phi(n, theta, d);
  if (name == "Gamma") return hard_tensor_gamma(n, theta, r, d);
  if (name == "ghz") return ghz_state(n, d);
  if (name == "max_entangled") return max_entangled_state(d);
  if (name == "schmidt_pair") {
    const double omega = get("omega", 0.7);
    RVec lam(2);
    lam << omega, 1.0 - omega;
    return schmidt_diagonal_state(lam, std::max(2, d), std::max(2, d));
  }
  throw std::invalid_argument("state_zoo: unknown state name: " + name);
}

double theta_for(int n, double delta) {
  if (n < 1) throw std::invalid_argument("theta_for: n must be >= 1");
  const double theta = 8.0 * delta * delta / static_cast<double>(n);
  if (theta > 1.0 + kAlgebraTol)
    throw std::invalid_argument("theta_for: 8 delta^2 / n exceeds 1 (need n >= 8 delta^2)");
  return std::min(theta, 1.0);
}

double mixture_distance_bound(int m, double theta) {
  if (m < 1) throw std::invalid_argument("mixture_distance_bound: m must be >= 1");
  if (theta < 0.0 || theta > 1.0)
    throw std::invalid_argument("mixture_distance_bound: theta must be in [0,1]");
  return 1.0 - std::pow(1.0 - theta, m) -
         m * theta * std::pow(1.0 - theta, m - 1);
}

}  // namespace mpstest
