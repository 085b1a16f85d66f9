#include "mpstest/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mpstest {

namespace {

void check_same_dims(const QuditDims& a, const QuditDims& b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace

QuditDims::QuditDims(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw std::invalid_argument("QuditDims: empty dimension list");
  total_ = 1;
  for (int d : dims_) {
    if (d < 2) throw std::invalid_argument("QuditDims: local dimensions must be >= 2");
    total_ *= d;
    if (total_ > kMaxStateDim)
      throw std::invalid_argument("QuditDims: total dimension exceeds the dense guard");
  }
}

long QuditDims::prefix_dim(int k) const {
  if (k < 0 || k > num_qudits()) throw std::out_of_range("QuditDims::prefix_dim");
  long p = 1;
  for (int i = 0; i < k; ++i) p *= dims_[i];
  return p;
}

QuditDims QuditDims::concat(const QuditDims& other) const {
  std::vector<int> all = dims_;
  all.insert(all.end(), other.dims_.begin(), other.dims_.end());
  return QuditDims(std::move(all));
}

QuditDims QuditDims::subset(const std::vector<int>& keep) const {
  std::vector<int> out;
  out.reserve(keep.size());
  for (int i : keep) out.push_back(dims_.at(i));
  return QuditDims(std::move(out));
}

std::vector<long> strides_for(const std::vector<int>& dims) {
  std::vector<long> s(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i)
    s[i] = s[i + 1] * dims[i + 1];
  return s;
}

std::vector<int> index_digits(long index, const std::vector<int>& dims) {
  std::vector<int> d(dims.size());
  for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
    d[i] = static_cast<int>(index % dims[i]);
    index /= dims[i];
  }
  return d;
}

long compose_index(const std::vector<int>& digits, const std::vector<long>& strides) {
  long idx = 0;
  for (std::size_t i = 0; i < digits.size(); ++i) idx += digits[i] * strides[i];
  return idx;
}

// --- PureState ---------------------------------------------------------------

PureState::PureState(QuditDims dims, Vec amplitudes)
    : dims_(std::move(dims)), amps_(std::move(amplitudes)) {
  if (amps_.size() != dims_.total_dim())
    throw std::invalid_argument("PureState: amplitude length does not match dims");
  if (std::abs(amps_.norm() - 1.0) > kAlgebraTol)
    throw std::invalid_argument("PureState: amplitudes are not unit norm");
}

PureState PureState::normalized(QuditDims dims, Vec amplitudes) {
  double n = amplitudes.norm();
  if (n < 1e-14) throw std::invalid_argument("PureState::normalized: zero vector");
  return PureState(std::move(dims), amplitudes / n);
}

PureState PureState::basis_state(QuditDims dims, const std::vector<int>& levels) {
  if (static_cast<int>(levels.size()) != dims.num_qudits())
    throw std::invalid_argument("basis_state: wrong number of levels");
  auto strides = strides_for(dims.dims());
  for (int i = 0; i < dims.num_qudits(); ++i)
    if (levels[i] < 0 || levels[i] >= dims.dim(i))
      throw std::invalid_argument("basis_state: level out of range");
  Vec v = Vec::Zero(dims.total_dim());
  v[compose_index(levels, strides)] = cx(1.0, 0.0);
  return PureState(std::move(dims), std::move(v));
}

cx PureState::inner(const PureState& other) const {
  check_same_dims(dims_, other.dims_, "inner");
  return amps_.dot(other.amps_);  // Eigen's dot conjugates the left argument
}

MixedState PureState::density_matrix() const {
  return MixedState(dims_, amps_ * amps_.adjoint());
}

// --- MixedState --------------------------------------------------------------

MixedState MixedState::from_matrix(QuditDims dims, Mat matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() != dims.total_dim())
    throw std::invalid_argument("MixedState: matrix shape does not match dims");
  double herm_err = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > kAlgebraTol)
    throw std::invalid_argument("MixedState: matrix is not Hermitian");
  if (std::abs(matrix.trace().real() - 1.0) > kAlgebraTol ||
      std::abs(matrix.trace().imag()) > kAlgebraTol)
    throw std::invalid_argument("MixedState: trace is not 1");
  Eigen::SelfAdjointEigenSolver<Mat> es(matrix, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kAlgebraTol)
    throw std::invalid_argument("MixedState: matrix is not positive semidefinite");
  return MixedState(std::move(dims), std::move(matrix));
}

RVec MixedState::spectrum() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(mat_, Eigen::EigenvaluesOnly);
  RVec ev = es.eigenvalues().reverse();
  for (int i = 0; i < ev.size(); ++i) ev[i] = std::max(ev[i], 0.0);
  return ev;
}

int MixedState::rank(double cutoff) const {
  RVec ev = spectrum();
  int r = 0;
  for (int i = 0; i < ev.size(); ++i)
    if (ev[i] > cutoff) ++r;
  return r;
}

// --- Kronecker helpers -------------------------------------------------------

Vec kron(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (long i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vec kron_power(const Vec& v, int m) {
  if (m < 1) throw std::invalid_argument("kron_power: m must be >= 1");
  Vec out = v;
  for (int i = 1; i < m; ++i) out = kron(out, v);
  return out;
}

Mat kron_power(const Mat& a, int m) {
  if (m < 1) throw std::invalid_argument("kron_power: m must be >= 1");
  Mat out = a;
  for (int i = 1; i < m; ++i) out = kron(out, a);
  return out;
}

// --- operations --------------------------------------------------------------

PureState tensor_product(const PureState& a, const PureState& b) {
  return PureState(a.dims().concat(b.dims()), kron(a.amplitudes(), b.amplitudes()));
}

MixedState tensor_product(const MixedState& a, const MixedState& b) {
  return MixedState(a.dims().concat(b.dims()), kron(a.matrix(), b.matrix()));
}

SchmidtDecomposition schmidt(const PureState& psi, int cut) {
  const int n = psi.num_qudits();
  if (cut < 1 || cut > n - 1) throw std::out_of_range("schmidt: cut must be in 1..n-1");
  const long L = psi.dims().prefix_dim(cut);
  const long R = psi.dims().suffix_dim(cut);
  Eigen::Map<const Eigen::Matrix<cx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> M(
      psi.amplitudes().data(), L, R);
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();

  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] * sv[i] > kSchmidtCutoff) ++rank;
  if (rank == 0) rank = 1;  // unit vectors always have at least one coefficient

  SchmidtDecomposition out;
  out.coefficients = RVec(rank);
  out.left_basis = svd.matrixU().leftCols(rank);
  out.right_basis = svd.matrixV().leftCols(rank).conjugate();
  for (int i = 0; i < rank; ++i) out.coefficients[i] = sv[i] * sv[i];
  return out;
}

namespace {

// Offset tables splitting a multi-qudit index into kept and traced parts.
struct TraceSplit {
  std::vector<long> keep_offsets;
  std::vector<long> trace_offsets;
};

TraceSplit trace_split(const QuditDims& dims, const std::vector<int>& keep) {
  const int n = dims.num_qudits();
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  std::vector<bool> kept(n, false);
  for (int q : keep) {
    if (q < 0 || q >= n) throw std::out_of_range("partial_trace: qudit index out of range");
    if (kept[q]) throw std::invalid_argument("partial_trace: duplicate qudit index");
    kept[q] = true;
  }
  auto strides = strides_for(dims.dims());

  std::vector<int> keep_dims, trace_dims;
  std::vector<long> keep_strides, trace_strides;
  for (int q = 0; q < n; ++q) {
    if (kept[q]) {
      keep_dims.push_back(dims.dim(q));
      keep_strides.push_back(strides[q]);
    } else {
      trace_dims.push_back(dims.dim(q));
      trace_strides.push_back(strides[q]);
    }
  }

  auto offsets = [](const std::vector<int>& ds, const std::vector<long>& ss) {
    long total = 1;
    for (int d : ds) total *= d;
    std::vector<long> out(total);
    for (long x = 0; x < total; ++x) {
      long idx = 0, rem = x;
      for (int i = static_cast<int>(ds.size()) - 1; i >= 0; --i) {
        idx += (rem % ds[i]) * ss[i];
        rem /= ds[i];
      }
      out[x] = idx;
    }
    return out;
  };

  return TraceSplit{offsets(keep_dims, keep_strides), offsets(trace_dims, trace_strides)};
}

std::vector<int> sorted_keep(std::vector<int> keep) {
  std::sort(keep.begin(), keep.end());
  return keep;
}

}  // namespace

MixedState partial_trace(const MixedState& rho, const std::vector<int>& keep) {
  auto keep_sorted = sorted_keep(keep);
  auto split = trace_split(rho.dims(), keep_sorted);
  const long K = static_cast<long>(split.keep_offsets.size());
  Mat out = Mat::Zero(K, K);
  for (long r = 0; r < K; ++r)
    for (long c = 0; c < K; ++c) {
      cx sum = 0.0;
      for (long t : split.trace_offsets)
        sum += rho.matrix()(split.keep_offsets[r] + t, split.keep_offsets[c] + t);
      out(r, c) = sum;
    }
  return MixedState(rho.dims().subset(keep_sorted), std::move(out));
}

MixedState partial_trace(const PureState& psi, const std::vector<int>& keep) {
  auto keep_sorted = sorted_keep(keep);
  auto split = trace_split(psi.dims(), keep_sorted);
  const long K = static_cast<long>(split.keep_offsets.size());
  const Vec& v = psi.amplitudes();
  Mat out = Mat::Zero(K, K);
  for (long r = 0; r < K; ++r)
    for (long c = 0; c < K; ++c) {
      cx sum = 0.0;
      for (long t : split.trace_offsets)
        sum += v[split.keep_offsets[r] + t] * std::conj(v[split.keep_offsets[c] + t]);
      out(r, c) = sum;
    }
  return MixedState(psi.dims().subset(keep_sorted), std::move(out));
}

PureState apply_local_unitary(const PureState& psi, int qudit, const Mat& u) {
  const int n = psi.num_qudits();
  if (qudit < 0 || qudit >= n) throw std::out_of_range("apply_local_unitary: bad qudit");
  const int d = psi.dims().dim(qudit);
  if (u.rows() != d || u.cols() != d)
    throw std::invalid_argument("apply_local_unitary: unitary size mismatch");
  auto strides = strides_for(psi.dims().dims());
  const long s = strides[qudit];
  const long D = psi.dim();
  Vec out = Vec::Zero(D);
  for (long base = 0; base < D; ++base) {
    const int level = static_cast<int>((base / s) % d);
    if (level != 0) continue;  // enumerate indices with digit q = 0 once
    for (int row = 0; row < d; ++row) {
      cx acc = 0.0;
      for (int col = 0; col < d; ++col) acc += u(row, col) * psi.amplitudes()[base + col * s];
      out[base + row * s] = acc;
    }
  }
  return PureState(psi.dims(), std::move(out));
}

double trace_distance(const MixedState& a, const MixedState& b) {
  check_same_dims(a.dims(), b.dims(), "trace_distance");
  Eigen::SelfAdjointEigenSolver<Mat> es(a.matrix() - b.matrix(), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double fidelity(const MixedState& a, const MixedState& b) {
  check_same_dims(a.dims(), b.dims(), "fidelity");
  Eigen::SelfAdjointEigenSolver<Mat> es(a.matrix());
  RVec ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Mat sqrt_a = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  // F = ||sqrt(a) sqrt(b)||_1 = sum of singular values of sqrt(a) b sqrt(a)^{1/2}...
  // computed as the trace norm of sqrt(a) b sqrt(a) eigenvalues' square roots.
  Mat inner = sqrt_a * b.matrix() * sqrt_a;
  Eigen::SelfAdjointEigenSolver<Mat> es2(inner, Eigen::EigenvaluesOnly);
  double f = 0.0;
  for (int i = 0; i < es2.eigenvalues().size(); ++i)
    f += std::sqrt(std::max(es2.eigenvalues()[i], 0.0));
  return std::min(f, 1.0 + kAlgebraTol);
}

}  // namespace mpstest
