#include "mpstest/symfunc.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace mpstest {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] < 1) throw std::invalid_argument("Partition: parts must be positive");
    if (i > 0 && parts_[i] > parts_[i - 1])
      throw std::invalid_argument("Partition: parts must be weakly decreasing");
    sum_ += parts_[i];
  }
}

std::string Partition::to_string() const {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < length(); ++i) os << (i ? "," : "") << parts_[i];
  os << ')';
  return os.str();
}

long factorial(int m) {
  long f = 1;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

namespace {

void gen_partitions(int remaining, int max_part, std::vector<int>& acc,
                    std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(acc);
    return;
  }
  for (int k = std::min(remaining, max_part); k >= 1; --k) {
    acc.push_back(k);
    gen_partitions(remaining - k, k, acc, out);
    acc.pop_back();
  }
}

}  // namespace

std::vector<Partition> partitions_of(int m) {
  if (m < 1 || m > kMaxPartitionSize)
    throw std::out_of_range("partitions_of: m out of supported range 1..8");
  std::vector<Partition> out;
  std::vector<int> acc;
  gen_partitions(m, m, acc, out);  // descending first parts: reverse-lex order
  return out;
}

std::vector<CycleType> conjugacy_classes(int m) {
  std::vector<CycleType> out;
  for (const Partition& p : partitions_of(m)) {
    // |C| = m! / prod_k k^{m_k} m_k!
    std::map<int, int> mult;
    for (int part : p.parts()) ++mult[part];
    long denom = 1;
    for (auto [k, mk] : mult) {
      for (int i = 0; i < mk; ++i) denom *= k;
      denom *= factorial(mk);
    }
    out.push_back(CycleType{p, factorial(m) / denom});
  }
  return out;
}

long irrep_dimension(const Partition& mu) {
  // Hook length formula: m! / prod of hooks.
  const auto& parts = mu.parts();
  const int rows = mu.length();
  std::vector<int> col_height(rows ? parts[0] : 0, 0);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < parts[i]; ++j) ++col_height[j];
  long hooks = 1;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < parts[i]; ++j)
      hooks *= (parts[i] - j) + (col_height[j] - i) - 1;
  return factorial(mu.sum()) / hooks;
}

namespace {

using Key = std::pair<std::vector<int>, std::vector<int>>;

std::int64_t mn_character(const std::vector<int>& mu, std::vector<int> rho,
                          std::map<Key, std::int64_t>& memo) {
  if (rho.empty()) return mu.empty() ? 1 : 0;
  Key key{mu, rho};
  if (auto it = memo.find(key); it != memo.end()) return it->second;

  const int strip = rho.back();  // remove the smallest cycle; any order is valid
  rho.pop_back();

  // Beta-numbers mu_i + (L-1-i); removing a rim hook of length `strip`
  // moves one beta down by `strip` onto an unoccupied slot, with sign
  // (-1)^{number of betas jumped over}.
  const int L = static_cast<int>(mu.size());
  std::vector<int> beta(L);
  for (int i = 0; i < L; ++i) beta[i] = mu[i] + (L - 1 - i);

  std::int64_t total = 0;
  for (int i = 0; i < L; ++i) {
    int target = beta[i] - strip;
    if (target < 0) continue;
    bool occupied = false;
    int height = 0;
    for (int j = 0; j < L; ++j) {
      if (j == i) continue;
      if (beta[j] == target) occupied = true;
      if (beta[j] > target && beta[j] < beta[i]) ++height;
    }
    if (occupied) continue;

    std::vector<int> nb = beta;
    nb[i] = target;
    std::sort(nb.begin(), nb.end(), std::greater<int>());
    std::vector<int> nmu;
    for (int j = 0; j < L; ++j) {
      int part = nb[j] - (L - 1 - j);
      if (part > 0) nmu.push_back(part);
    }
    std::int64_t sub = mn_character(nmu, rho, memo);
    total += (height % 2 == 0) ? sub : -sub;
  }
  memo[key] = total;
  return total;
}

}  // namespace

std::int64_t character(const Partition& mu, const Partition& cycle_type) {
  if (mu.sum() != cycle_type.sum())
    throw std::invalid_argument("character: |mu| and |cycle type| differ");
  static std::map<Key, std::int64_t> memo;
  static std::mutex memo_mutex;
  std::lock_guard<std::mutex> lock(memo_mutex);
  return mn_character(mu.parts(), cycle_type.parts(), memo);
}

namespace {

// DFS over semistandard fillings in row-major order: weakly increasing
// along rows, strictly increasing down columns, entries in 1..N.
double ssyt_sum(const std::vector<int>& shape, const Eigen::VectorXd& lambda,
                std::vector<std::vector<int>>& fill, int row, int col) {
  const int rows = static_cast<int>(shape.size());
  if (row == rows) return 1.0;
  int next_row = row, next_col = col + 1;
  if (next_col == shape[row]) {
    next_row = row + 1;
    next_col = 0;
  }
  const int n = static_cast<int>(lambda.size());
  int lo = 1;
  if (col > 0) lo = std::max(lo, fill[row][col - 1]);
  if (row > 0) lo = std::max(lo, fill[row - 1][col] + 1);
  double total = 0.0;
  for (int e = lo; e <= n; ++e) {
    if (lambda[e - 1] == 0.0) continue;
    fill[row][col] = e;
    total += lambda[e - 1] * ssyt_sum(shape, lambda, fill, next_row, next_col);
  }
  return total;
}

}  // namespace

double schur_polynomial(const Partition& mu, const Eigen::VectorXd& spectrum) {
  for (int i = 0; i < spectrum.size(); ++i)
    if (spectrum[i] < 0.0)
      throw std::invalid_argument("schur_polynomial: spectrum entries must be >= 0");
  if (mu.length() > spectrum.size()) return 0.0;
  std::vector<std::vector<int>> fill(mu.length());
  for (int i = 0; i < mu.length(); ++i) fill[i].assign(mu.parts()[i], 0);
  return ssyt_sum(mu.parts(), spectrum, fill, 0, 0);
}

}  // namespace mpstest
