// Dense multi-qudit pure and mixed states plus the linear-algebra
// primitives the rest of the library is built on: tensor products,
// Schmidt decompositions, partial traces, trace distance, fidelity.
//
// Everything is immutable after construction and all operations are
// pure functions, so values can be shared freely across threads.

#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mpstest {

using cx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

// Global numeric tolerances. Algebraic identities are checked at
// kAlgebraTol; decomposition round-trips (SVD conditioning) at kDecompTol.
inline constexpr double kAlgebraTol = 1e-10;
inline constexpr double kDecompTol = 1e-8;
// Schmidt coefficients below this are treated as exact zeros.
inline constexpr double kSchmidtCutoff = 1e-12;
// Dense single-copy states are capped at this total dimension.
inline constexpr long kMaxStateDim = 1L << 14;

/// Ordered list of local qudit dimensions d_0..d_{n-1}, every entry >= 2.
class QuditDims {
 public:
  explicit QuditDims(std::vector<int> dims);
  QuditDims(std::initializer_list<int> dims) : QuditDims(std::vector<int>(dims)) {}

  int num_qudits() const { return static_cast<int>(dims_.size()); }
  int dim(int i) const { return dims_.at(i); }
  long total_dim() const { return total_; }
  const std::vector<int>& dims() const { return dims_; }

  // Product of the first k local dimensions (k in 0..n).
  long prefix_dim(int k) const;
  long suffix_dim(int k) const { return total_ / prefix_dim(k); }

  QuditDims concat(const QuditDims& other) const;
  QuditDims subset(const std::vector<int>& keep) const;

  bool operator==(const QuditDims& other) const { return dims_ == other.dims_; }
  bool operator!=(const QuditDims& other) const { return !(*this == other); }

 private:
  std::vector<int> dims_;
  long total_ = 0;
};

// Mixed-radix index helpers for the row-major layout used throughout:
// qudit 0 is the most significant digit.
std::vector<long> strides_for(const std::vector<int>& dims);
std::vector<int> index_digits(long index, const std::vector<int>& dims);
long compose_index(const std::vector<int>& digits, const std::vector<long>& strides);

class MixedState;

/// Unit-norm state vector over a fixed qudit layout.
class PureState {
 public:
  // Throws unless the amplitudes already have unit norm (within kAlgebraTol).
  PureState(QuditDims dims, Vec amplitudes);

  // Rescales to unit norm; throws on (near-)zero vectors.
  static PureState normalized(QuditDims dims, Vec amplitudes);
  static PureState basis_state(QuditDims dims, const std::vector<int>& levels);

  const QuditDims& dims() const { return dims_; }
  const Vec& amplitudes() const { return amps_; }
  int num_qudits() const { return dims_.num_qudits(); }
  long dim() const { return dims_.total_dim(); }

  cx inner(const PureState& other) const;
  double overlap_sq(const PureState& other) const { return std::norm(inner(other)); }
  MixedState density_matrix() const;

 private:
  QuditDims dims_;
  Vec amps_;
};

/// Hermitian, PSD, unit-trace density matrix with attached qudit layout.
class MixedState {
 public:
  // Validates Hermiticity, trace and (for full validation) the spectrum.
  static MixedState from_matrix(QuditDims dims, Mat matrix);

  const QuditDims& dims() const { return dims_; }
  const Mat& matrix() const { return mat_; }
  long dim() const { return dims_.total_dim(); }

  // Eigenvalues sorted nonincreasing, clamped at zero.
  RVec spectrum() const;
  int rank(double cutoff = kSchmidtCutoff) const;

 private:
  friend class PureState;
  friend MixedState partial_trace(const MixedState&, const std::vector<int>&);
  friend MixedState partial_trace(const PureState&, const std::vector<int>&);
  friend MixedState tensor_product(const MixedState&, const MixedState&);

  // Trusted constructor: skips the O(D^3) PSD check.
  MixedState(QuditDims dims, Mat matrix) : dims_(std::move(dims)), mat_(std::move(matrix)) {}

  QuditDims dims_;
  Mat mat_;
};

/// Bipartite Schmidt data: squared coefficients (nonincreasing) plus the
/// matching orthonormal bases, columns aligned with the coefficients.
struct SchmidtDecomposition {
  RVec coefficients;  // squared Schmidt coefficients, sum 1
  Mat left_basis;
  Mat right_basis;

  int rank() const { return static_cast<int>(coefficients.size()); }
};

PureState tensor_product(const PureState& a, const PureState& b);
MixedState tensor_product(const MixedState& a, const MixedState& b);

// Schmidt decomposition across qudits {0..cut-1} | {cut..n-1}, cut in 1..n-1.
SchmidtDecomposition schmidt(const PureState& psi, int cut);

// Reduced state on the kept qudits (0-based, nonempty, duplicate-free).
MixedState partial_trace(const MixedState& rho, const std::vector<int>& keep);
MixedState partial_trace(const PureState& psi, const std::vector<int>& keep);

double trace_distance(const MixedState& a, const MixedState& b);
double fidelity(const MixedState& a, const MixedState& b);

// Applies a single-qudit unitary on the given register.
PureState apply_local_unitary(const PureState& psi, int qudit, const Mat& u);

// Kronecker helpers shared across modules.
Vec kron(const Vec& a, const Vec& b);
Mat kron(const Mat& a, const Mat& b);
Vec kron_power(const Vec& v, int m);
Mat kron_power(const Mat& a, int m);

}  // namespace mpstest
