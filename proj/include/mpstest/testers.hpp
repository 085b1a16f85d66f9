// Exact acceptance probabilities and outcome sampling for the SWAP test,
// product test, rank tester and MPS tester, plus the closed-form upper
// bounds on the product test acceptance probability.

#pragma once

#include <utility>
#include <vector>

#include "mpstest/random.hpp"
#include "mpstest/schur_weyl.hpp"
#include "mpstest/state.hpp"
#include "mpstest/symfunc.hpp"

namespace mpstest {

struct TestReport {
  double accept_probability = 0.0;
  std::vector<double> per_cut_probabilities;  // rank-test acceptance per prefix cut
  int copies_used = 0;
  int bond_dimension = 0;
  double delta = 0.0;
};

// SWAP test on a pair: 1/2 + 1/2 |<a|b>|^2.
double swap_test_prob(const PureState& a, const PureState& b);

// ||Pi_SWAP^{(x)n} psi^{(x)2}||^2, evaluated by per-qudit symmetrization of
// the two-copy vector (cost O(n D^2); the projector is never materialized).
double product_test_prob(const PureState& psi);

enum class BoundVariant { Simple, Sharp };

// Closed-form upper bounds on PT_n(omega): simple = omega^2/3 + 2/3,
// sharp = omega^2 - omega + 1 for omega >= 1/2, else the simple bound.
double product_test_bound(double omega, BoundVariant variant);

// Prior-work bound min{1 - eps + eps^2 + eps^{3/2}, 1 - (11/512) eps}
// with eps = 1 - omega.
double hm_bound(double omega);
// Branch crossover (757 - 16 sqrt(1258))/512 of the bound above.
double hm_crossover_epsilon();

// Acceptance of the single SWAP test across prefix cut k:
// 1/2 (1 + Tr[psi_{0..k-1}^2]).
double swap_cut_accept_prob(const PureState& psi, int cut);

// Rank-tester acceptance Tr[Pi_{<=r} rho^{(x)m}], evaluated through the
// Schur-Weyl measure: sum over l(mu) <= r of dim(mu) s_mu(spectrum).
double rank_test_accept_prob(const MixedState& rho, int r, int m);
// Same quantity by dense projector contraction (independent code path).
double rank_test_accept_prob_projector(const MixedState& rho, int r, int m);

// Weak Schur sampling outcome distribution for a spectrum:
// Pr[mu] = dim(mu) s_mu(spectrum), over all mu |- m.
std::vector<std::pair<Partition, double>> wss_distribution(const RVec& spectrum, int m);

struct RankSample {
  Partition outcome;
  bool accept;
};

// Samples a weak-Schur-sampling outcome and applies the length-<= r rule.
RankSample rank_test_sample(const MixedState& rho, int r, int m, Rng& rng);

// ||Pi_MPS psi^{(x)m}||^2 with per-cut rank-test probabilities attached.
TestReport mps_test_accept_prob(const PureState& psi, int r, int m);

enum class TesterKind { Product, Mps, Lower };

struct CopyConstants {
  double c_product = 12.0;  // copies = ceil(c_product / delta^2)
  double c_mps = 1.0;       // copies = ceil(c_mps * n * r^2 / delta^2)
};

// Copy-count formulas: product ceil(c1/delta^2), mps ceil(c2 n r^2/delta^2),
// lower ceil(sqrt(n)/(24 delta^2)).
long copies_needed(TesterKind kind, int n, int r, double delta,
                   const CopyConstants& constants = CopyConstants{});

}  // namespace mpstest
