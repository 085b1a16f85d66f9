// Overlap and distance to MPS(r): exact bipartite formulas, certified
// truncation lower bounds, variational sweep optimizers, and the named
// states used throughout the experiments.

#pragma once

#include <optional>
#include <string>
#include <map>
#include <vector>

#include "mpstest/random.hpp"
#include "mpstest/state.hpp"

namespace mpstest {

/// Open-boundary MPS: site i holds one (bond_in x bond_out) matrix per
/// physical level, with bond dimension capped by construction.
class MpsState {
 public:
  // site_tensors[i][j] is the matrix for physical level j at site i;
  // boundary bonds must be 1.
  MpsState(QuditDims dims, std::vector<std::vector<Mat>> site_tensors);

  const QuditDims& dims() const { return dims_; }
  int num_sites() const { return dims_.num_qudits(); }
  int bond_dimension() const;
  const std::vector<Mat>& site(int i) const { return sites_.at(i); }

  // Full contraction to amplitudes (not normalized).
  Vec contract() const;
  // Contraction rescaled to a unit vector.
  PureState to_pure_state() const;

 private:
  QuditDims dims_;
  std::vector<std::vector<Mat>> sites_;
};

/// Certified lower bound plus heuristic upper estimate for Overlap_r.
struct OverlapBracket {
  double lower = 0.0;  // attained by the witness
  double upper = 1.0;
  std::string lower_method;
  std::string upper_method;
  std::optional<MpsState> witness;
};

struct DistanceBracket {
  double lower = 0.0;
  double upper = 1.0;
};

struct BipartiteOverlap {
  double overlap;      // sum of the top-r squared Schmidt coefficients
  PureState witness;   // normalized rank-r truncation
};

// Exact Overlap_r across a single cut (truncated Schmidt expansion).
BipartiteOverlap overlap_bipartite(const PureState& psi, int cut, int r);

// Rigorous upper bound: min over prefix cuts of the top-r Schmidt mass.
double min_cut_overlap_bound(const PureState& psi, int r);

struct TruncationResult {
  MpsState mps;
  double certified_lower;            // max(0, 1 - sum of tails)^2
  double witness_overlap;            // exact |<witness|psi>|^2
  std::vector<double> cut_tails;     // per-cut discarded Schmidt mass
};

// Sequential left-to-right SVD truncation to bond dimension r.
TruncationResult truncate_to_mps(const PureState& psi, int r);

struct SweepOptions {
  int max_sweeps = 200;
  int restarts = 8;
  double gain_tol = 1e-12;
};

// Best product-state overlap (r = 1) by alternating factor updates; each
// update sets a factor to its normalized environment, so the overlap is
// monotone per update.
OverlapBracket overlap_product_als(const PureState& psi, int restarts, Rng& rng);

// Variational sweep optimizer for Overlap_r; restart 0 starts from the
// truncation witness, later restarts from random MPS.
OverlapBracket overlap_mps_dmrg(const PureState& psi, int r, const SweepOptions& opts,
                                Rng& rng);

// Distance bracket [sqrt(1-upper), sqrt(1-lower)] from the overlap bracket.
DistanceBracket dist_r(const PureState& psi, int r, Rng& rng,
                       const SweepOptions& opts = SweepOptions{});
DistanceBracket dist_r(const OverlapBracket& bracket);

// --- named states ------------------------------------------------------------

// (1/sqrt(n-1)) (|110..0> + |011..0> + ... + |0..011>), n >= 3 qubits.
PureState bunny_state(int n);

// sqrt(1-theta)|00> + sum_{i=1}^{d-1} sqrt(theta/(d-1))|ii> on C^d (x) C^d.
PureState hard_pair_phi(double theta, int d);

// Same with r Schmidt terms, embedded in C^d (x) C^d; an element of MPS(r).
PureState hard_pair_gamma(double theta, int r, int d);

// phi^{(x) n/2} and gamma^{(x) n/2}; n even.
PureState hard_tensor_phi(int n, double theta, int d);
PureState hard_tensor_gamma(int n, double theta, int r, int d);

// Validated hard-instance pair: requires d - 1 >= 2 (r - 1).
struct HardPair {
  PureState phi;
  PureState gamma;
};
HardPair hard_pair(double theta, int d, int r);

PureState ghz_state(int n, int d = 2);
PureState max_entangled_state(int d);

// sum_i sqrt(lambda_i) |ii>, lambdas a probability vector.
PureState schmidt_diagonal_state(const RVec& lambdas, int d1, int d2);

// Name-based factory used by the CLI: bunny, phi, gamma, Phi, Gamma, ghz,
// max_entangled, schmidt_pair.
PureState state_zoo(const std::string& name, const std::map<std::string, double>& params);

// theta = 8 delta^2 / n; throws when the result exceeds 1.
double theta_for(int n, double delta);

// 1 - (1-theta)^m - m theta (1-theta)^{m-1}.
double mixture_distance_bound(int m, double theta);

}  // namespace mpstest
