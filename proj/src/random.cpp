#include "mpstest/random.hpp"

#include <cmath>

namespace mpstest {

std::uint64_t child_seed(std::uint64_t root, std::uint64_t index) {
  // splitmix64 step on root + index keeps child streams decorrelated.
  std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

Mat complex_ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = cx(gauss(rng), gauss(rng));
  return g;
}

}  // namespace

Mat haar_unitary(int d, Rng& rng) {
  if (d < 1) throw std::invalid_argument("haar_unitary: d must be >= 1");
  Mat g = complex_ginibre(d, d, rng);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the gauge so the distribution is Haar, not just QR-of-Gaussian.
  for (int i = 0; i < d; ++i) {
    cx rii = r(i, i);
    double a = std::abs(rii);
    q.col(i) *= (a > 0) ? rii / a : cx(1.0, 0.0);
  }
  return q;
}

PureState random_state(const QuditDims& dims, Rng& rng) {
  Mat g = complex_ginibre(static_cast<int>(dims.total_dim()), 1, rng);
  return PureState::normalized(dims, g.col(0));
}

RVec random_spectrum(int length, Rng& rng) {
  if (length < 1) throw std::invalid_argument("random_spectrum: length must be >= 1");
  std::exponential_distribution<double> expo(1.0);
  RVec v(length);
  double sum = 0.0;
  for (int i = 0; i < length; ++i) {
    v[i] = expo(rng);
    sum += v[i];
  }
  v /= sum;
  std::sort(v.data(), v.data() + v.size(), std::greater<double>());
  return v;
}

MixedState random_mixed_state(const QuditDims& dims, int rank, Rng& rng) {
  const int d = static_cast<int>(dims.total_dim());
  if (rank < 1 || rank > d) throw std::invalid_argument("random_mixed_state: bad rank");
  RVec probs = random_spectrum(rank, rng);
  Mat u = haar_unitary(d, rng);
  Mat m = Mat::Zero(d, d);
  for (int i = 0; i < rank; ++i) m += probs[i] * u.col(i) * u.col(i).adjoint();
  return MixedState::from_matrix(dims, std::move(m));
}

}  // namespace mpstest
