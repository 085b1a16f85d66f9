// Operators on the m-copy space of a multi-qudit system: permutation
// representations, weak-Schur-sampling projectors, cut-restricted rank
// projectors, the multi-cut projector product, and exact Haar twirls by
// commutant projection.
//
// Copy-register layout is fixed as copy-major, qudit-minor: the basis
// index of the m-copy space is row-major over the m*n registers
// (copy 0 qudit 0, copy 0 qudit 1, ..., copy 1 qudit 0, ...), so
// cut-restricted permutations are pure index arithmetic.

#pragma once

#include <optional>
#include <vector>

#include "mpstest/random.hpp"
#include "mpstest/state.hpp"
#include "mpstest/symfunc.hpp"

namespace mpstest {

// Dense m-copy operators are materialized only up to this side length
// (commutator / idempotence / twirl work); vector workspaces
// (psi^{(x)m} contractions) may be larger.
inline constexpr long kMaxDenseOperatorDim = 1L << 12;
inline constexpr long kMaxCopyVectorDim = 1L << 22;
// Gram solve over m! permutations.
inline constexpr int kMaxTwirlCopies = 4;

/// Registers {0..prefix_len-1} of each copy participate in an operation.
struct CutSpec {
  int prefix_len;
};

/// Dense linear operator on the m-copy Hilbert space.
class CopyOperator {
 public:
  CopyOperator(QuditDims base_dims, int copies, Mat matrix);

  const QuditDims& base_dims() const { return base_; }
  int copies() const { return m_; }
  long dim() const { return mat_.rows(); }
  const Mat& matrix() const { return mat_; }
  Mat& matrix() { return mat_; }

  Vec apply(const Vec& v) const { return mat_ * v; }
  double hermiticity_error() const;
  double idempotence_error() const;

 private:
  QuditDims base_;
  int m_ = 0;
  Mat mat_;
};

// --- permutations -----------------------------------------------------------

// All m! permutations of {0..m-1} in lexicographic order (images).
std::vector<std::vector<int>> all_permutations(int m);
Partition cycle_type_of(const std::vector<int>& perm);
int cycle_count_of(const std::vector<int>& perm);
std::vector<int> inverse_permutation(const std::vector<int>& perm);
std::vector<int> compose_permutations(const std::vector<int>& a, const std::vector<int>& b);

// --- matrix-free copy-space machinery ---------------------------------------

// psi^{(x)m} as a vector on the m-copy space (copy-major layout).
Vec copy_power(const Vec& amplitudes, int m);

// Applies P(pi) restricted to the given qudit positions of every copy:
// the selected registers of copy c move to copy pi(c), the rest stay.
Vec apply_perm(const Vec& v, const std::vector<int>& pi, const QuditDims& dims,
               int copies, const std::vector<int>& positions);

// Applies Pi_{<=r} on the prefix cut: E_pi[ c_r(pi) P_cut(pi) ] v with
// c_r(pi) = sum_{l(mu)<=r} dim(mu) chi_mu(pi).
Vec apply_rank_projector(const Vec& v, int r, const QuditDims& dims, int copies,
                         CutSpec cut);

// --- dense operators ---------------------------------------------------------

// P(pi) on whole copies, or on the first cut->prefix_len qudit registers
// of each copy when a cut is given.
CopyOperator perm_operator(const std::vector<int>& pi, const QuditDims& dims,
                           std::optional<CutSpec> cut = std::nullopt);

// Pi_mu = dim(mu) E_pi[ chi_mu(pi) P(pi) ], cut-restricted when requested.
// Zero operator when l(mu) exceeds the cut dimension.
CopyOperator wss_projector(const Partition& mu, const QuditDims& dims, int copies,
                           std::optional<CutSpec> cut = std::nullopt);

// Pi_{<=r} = sum over mu with l(mu) <= r of Pi_mu.
CopyOperator rank_projector(int r, const QuditDims& dims, int copies,
                            std::optional<CutSpec> cut = std::nullopt);

// Product over cuts i=1..n of the cut-restricted rank projectors; a
// projector because the factors commute.
CopyOperator mps_projector(int r, const QuditDims& dims, int copies);

// Max Frobenius commutator norm over nested cut pairs and partition pairs
// of the cut-restricted WSS projectors; includes same-cut orthogonality
// (product norms for distinct partitions). Expected < 1e-10.
double check_commutation(const QuditDims& dims, int copies, int r);

// --- Haar twirls -------------------------------------------------------------

// Exact E_U[(U^{(x)m} (x) I) X (U^dag^{(x)m} (x) I)] where U acts on the
// merged register formed by the given qudit positions of every copy.
// Computed by projecting onto span{P(pi)}: coefficients solve the Gram
// system G c = t with G_{pi sigma} = d^{#cycles(pi^{-1} sigma)}.
CopyOperator haar_twirl(const CopyOperator& X, const std::vector<int>& side_positions);

enum class PermAverageMode { Left, Right, Conjugate };

// E_pi over simultaneous copy-permutations applied to the two register
// groups (same pi on both sides), multiplied onto X per the mode.
CopyOperator perm_average_two_sided(const CopyOperator& X,
                                    const std::vector<int>& side_a,
                                    const std::vector<int>& side_b,
                                    PermAverageMode mode = PermAverageMode::Conjugate);

// Reorders tensor registers of an operator; used in tests to compare
// operators built over different register orderings.
Mat reorder_registers(const Mat& op, const std::vector<int>& dims,
                      const std::vector<int>& new_order);

}  // namespace mpstest
