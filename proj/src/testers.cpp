#include "mpstest/testers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mpstest {

double swap_test_prob(const PureState& a, const PureState& b) {
  if (a.dims() != b.dims())
    throw std::invalid_argument("swap_test_prob: dimension mismatch");
  return 0.5 + 0.5 * a.overlap_sq(b);
}

double product_test_prob(const PureState& psi) {
  const long D = psi.dim();
  if (D * D > kMaxCopyVectorDim)
    throw std::invalid_argument("product_test_prob: two-copy vector guard exceeded");
  const int n = psi.num_qudits();
  auto strides = strides_for(psi.dims().dims());

  // Two-copy vector, copy-major: index = i*D + j.
  Vec v = kron(psi.amplitudes(), psi.amplitudes());
  // Apply (I + SWAP_q)/2 per qudit: swap digit q between the two copies.
  for (int q = 0; q < n; ++q) {
    const long s = strides[q];
    const int d = psi.dims().dim(q);
    for (long idx = 0; idx < D * D; ++idx) {
      const long i = idx / D, j = idx % D;
      const int di = static_cast<int>((i / s) % d);
      const int dj = static_cast<int>((j / s) % d);
      if (di >= dj) continue;  // visit each unordered pair once
      const long i2 = i + static_cast<long>(dj - di) * s;
      const long j2 = j - static_cast<long>(dj - di) * s;
      const long other = i2 * D + j2;
      const cx avg = 0.5 * (v[idx] + v[other]);
      v[idx] = avg;
      v[other] = avg;
    }
  }
  return v.squaredNorm();
}

double product_test_bound(double omega, BoundVariant variant) {
  if (omega < -kAlgebraTol || omega > 1.0 + kAlgebraTol)
    throw std::invalid_argument("product_test_bound: omega must be in [0,1]");
  const double simple = omega * omega / 3.0 + 2.0 / 3.0;
  if (variant == BoundVariant::Simple) return simple;
  return omega >= 0.5 ? omega * omega - omega + 1.0 : simple;
}

double hm_bound(double omega) {
  if (omega < -kAlgebraTol || omega > 1.0 + kAlgebraTol)
    throw std::invalid_argument("hm_bound: omega must be in [0,1]");
  const double eps = 1.0 - omega;
  return std::min(1.0 - eps + eps * eps + std::pow(eps, 1.5), 1.0 - 11.0 / 512.0 * eps);
}

double hm_crossover_epsilon() { return (757.0 - 16.0 * std::sqrt(1258.0)) / 512.0; }

double swap_cut_accept_prob(const PureState& psi, int cut) {
  auto sd = schmidt(psi, cut);
  // 1/2 (1 + Tr[rho^2]) written on the cut spectrum.
  double purity = 0.0;
  for (int i = 0; i < sd.coefficients.size(); ++i)
    purity += sd.coefficients[i] * sd.coefficients[i];
  return 0.5 * (1.0 + purity);
}

std::vector<std::pair<Partition, double>> wss_distribution(const RVec& spectrum, int m) {
  std::vector<std::pair<Partition, double>> out;
  for (const Partition& mu : partitions_of(m))
    out.emplace_back(mu, static_cast<double>(irrep_dimension(mu)) *
                             schur_polynomial(mu, spectrum));
  return out;
}

double rank_test_accept_prob(const MixedState& rho, int r, int m) {
  if (r < 1) throw std::invalid_argument("rank_test_accept_prob: r must be >= 1");
  RVec spectrum = rho.spectrum();
  double accept = 0.0;
  for (const auto& [mu, prob] : wss_distribution(spectrum, m))
    if (mu.length() <= r) accept += prob;
  return accept;
}

double rank_test_accept_prob_projector(const MixedState& rho, int r, int m) {
  if (r < 1) throw std::invalid_argument("rank_test_accept_prob_projector: r must be >= 1");
  CopyOperator proj = rank_projector(r, rho.dims(), m);
  Mat power = kron_power(rho.matrix(), m);
  return (proj.matrix() * power).trace().real();
}

RankSample rank_test_sample(const MixedState& rho, int r, int m, Rng& rng) {
  auto dist = wss_distribution(rho.spectrum(), m);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double u = unif(rng);
  double acc = 0.0;
  for (const auto& [mu, prob] : dist) {
    acc += prob;
    if (u <= acc) return RankSample{mu, mu.length() <= r};
  }
  const Partition& last = dist.back().first;  // guard against rounding at u ~ 1
  return RankSample{last, last.length() <= r};
}

TestReport mps_test_accept_prob(const PureState& psi, int r, int m) {
  const int n = psi.num_qudits();
  Vec v = copy_power(psi.amplitudes(), m);
  for (int i = 1; i <= n; ++i)
    v = apply_rank_projector(v, r, psi.dims(), m, CutSpec{i});

  TestReport report;
  report.accept_probability = v.squaredNorm();
  report.copies_used = m;
  report.bond_dimension = r;
  report.per_cut_probabilities.reserve(n - 1);
  for (int i = 1; i <= n - 1; ++i) {
    std::vector<int> keep(i);
    std::iota(keep.begin(), keep.end(), 0);
    report.per_cut_probabilities.push_back(
        rank_test_accept_prob(partial_trace(psi, keep), r, m));
  }
  return report;
}

long copies_needed(TesterKind kind, int n, int r, double delta,
                   const CopyConstants& constants) {
  if (delta <= 0.0 || delta > 1.0)
    throw std::invalid_argument("copies_needed: delta must be in (0,1]");
  auto ceil_int = [](double x) { return static_cast<long>(std::ceil(x - 1e-9)); };
  switch (kind) {
    case TesterKind::Product:
      return ceil_int(constants.c_product / (delta * delta));
    case TesterKind::Mps:
      return ceil_int(constants.c_mps * n * r * r / (delta * delta));
    case TesterKind::Lower:
      return ceil_int(std::sqrt(static_cast<double>(n)) / (24.0 * delta * delta));
  }
  throw std::logic_error("copies_needed: unknown kind");
}

}  // namespace mpstest
