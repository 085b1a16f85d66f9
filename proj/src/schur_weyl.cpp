#include "mpstest/schur_weyl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mpstest {

namespace {

long ipow(long base, int exp) {
  long out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

long copy_space_dim(const QuditDims& dims, int m, long guard) {
  if (m < 1 || m > kMaxPartitionSize)
    throw std::invalid_argument("copy space: m out of supported range");
  long side = 1;
  for (int i = 0; i < m; ++i) {
    side *= dims.total_dim();
    if (side > guard) throw std::invalid_argument("copy space: dimension guard exceeded");
  }
  return side;
}

std::vector<int> all_positions(const QuditDims& dims) {
  std::vector<int> p(dims.num_qudits());
  std::iota(p.begin(), p.end(), 0);
  return p;
}

std::vector<int> cut_positions(const QuditDims& dims, std::optional<CutSpec> cut) {
  if (!cut) return all_positions(dims);
  if (cut->prefix_len < 1 || cut->prefix_len > dims.num_qudits())
    throw std::invalid_argument("CutSpec: prefix length out of range");
  std::vector<int> p(cut->prefix_len);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

// Splits each per-copy index into the selected-position part and the rest.
struct PositionSplit {
  long sel_dim = 1;
  long rem_dim = 1;
  std::vector<long> sel, rem;   // indexed by per-copy index
  std::vector<long> recompose;  // [s * rem_dim + r] -> per-copy index
};

PositionSplit make_split(const QuditDims& dims, const std::vector<int>& positions) {
  const int n = dims.num_qudits();
  std::vector<bool> selected(n, false);
  for (int q : positions) {
    if (q < 0 || q >= n) throw std::out_of_range("position subset: index out of range");
    if (selected[q]) throw std::invalid_argument("position subset: duplicate index");
    selected[q] = true;
  }
  PositionSplit sp;
  for (int q = 0; q < n; ++q) (selected[q] ? sp.sel_dim : sp.rem_dim) *= dims.dim(q);

  const long D = dims.total_dim();
  sp.sel.assign(D, 0);
  sp.rem.assign(D, 0);
  sp.recompose.assign(D, 0);
  for (long x = 0; x < D; ++x) {
    auto digits = index_digits(x, dims.dims());
    long s = 0, r = 0;
    for (int q = 0; q < n; ++q) {
      if (selected[q])
        s = s * dims.dim(q) + digits[q];
      else
        r = r * dims.dim(q) + digits[q];
    }
    sp.sel[x] = s;
    sp.rem[x] = r;
    sp.recompose[s * sp.rem_dim + r] = x;
  }
  return sp;
}

// Index map of P(pi) restricted to the given positions: entry I gives the
// basis state P(pi)|I> maps to. The selected registers of copy c move to
// copy pi(c); the rest stay in place.
std::vector<long> perm_index_map(const QuditDims& dims, int m,
                                 const std::vector<int>& positions,
                                 const std::vector<int>& pi) {
  const long D = dims.total_dim();
  const long side = ipow(D, m);
  const PositionSplit sp = make_split(dims, positions);
  const std::vector<int> piinv = inverse_permutation(pi);

  std::vector<long> map(side);
  std::vector<long> x(m);
  for (long I = 0; I < side; ++I) {
    long rem = I;
    for (int c = m - 1; c >= 0; --c) {
      x[c] = rem % D;
      rem /= D;
    }
    long J = 0;
    for (int j = 0; j < m; ++j)
      J = J * D + sp.recompose[sp.sel[x[piinv[j]]] * sp.rem_dim + sp.rem[x[j]]];
    map[I] = J;
  }
  return map;
}

// dim(mu) chi_mu(pi) summed over partitions of length <= r, per permutation.
std::vector<std::int64_t> rank_coefficients(int m, int r) {
  auto perms = all_permutations(m);
  auto parts = partitions_of(m);
  std::vector<std::int64_t> coeff(perms.size(), 0);
  for (std::size_t p = 0; p < perms.size(); ++p) {
    Partition ct = cycle_type_of(perms[p]);
    for (const Partition& mu : parts)
      if (mu.length() <= r) coeff[p] += irrep_dimension(mu) * character(mu, ct);
  }
  return coeff;
}

}  // namespace

// --- permutations -------------------------------------------------------------

std::vector<std::vector<int>> all_permutations(int m) {
  if (m < 1 || m > kMaxPartitionSize)
    throw std::invalid_argument("all_permutations: m out of supported range");
  std::vector<int> p(m);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

Partition cycle_type_of(const std::vector<int>& perm) {
  const int m = static_cast<int>(perm.size());
  std::vector<bool> seen(m, false);
  std::vector<int> cycles;
  for (int i = 0; i < m; ++i) {
    if (seen[i]) continue;
    int len = 0, j = i;
    while (!seen[j]) {
      seen[j] = true;
      j = perm[j];
      ++len;
    }
    cycles.push_back(len);
  }
  std::sort(cycles.begin(), cycles.end(), std::greater<int>());
  return Partition(cycles);
}

int cycle_count_of(const std::vector<int>& perm) {
  return cycle_type_of(perm).length();
}

std::vector<int> inverse_permutation(const std::vector<int>& perm) {
  std::vector<int> inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<int>(i);
  return inv;
}

std::vector<int> compose_permutations(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[b[i]];
  return out;
}

// --- CopyOperator --------------------------------------------------------------

CopyOperator::CopyOperator(QuditDims base_dims, int copies, Mat matrix)
    : base_(std::move(base_dims)), m_(copies), mat_(std::move(matrix)) {
  const long side = ipow(base_.total_dim(), m_);
  if (mat_.rows() != mat_.cols() || mat_.rows() != side)
    throw std::invalid_argument("CopyOperator: matrix side does not match (total dim)^m");
}

double CopyOperator::hermiticity_error() const {
  return (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
}

double CopyOperator::idempotence_error() const {
  return (mat_ * mat_ - mat_).cwiseAbs().maxCoeff();
}

// --- matrix-free machinery ------------------------------------------------------

Vec copy_power(const Vec& amplitudes, int m) {
  long size = 1;
  for (int i = 0; i < m; ++i) {
    size *= amplitudes.size();
    if (size > kMaxCopyVectorDim)
      throw std::invalid_argument("copy_power: copy-space vector guard exceeded");
  }
  return kron_power(amplitudes, m);
}

Vec apply_perm(const Vec& v, const std::vector<int>& pi, const QuditDims& dims,
               int copies, const std::vector<int>& positions) {
  const long side = ipow(dims.total_dim(), copies);
  if (v.size() != side) throw std::invalid_argument("apply_perm: vector length mismatch");
  if (static_cast<int>(pi.size()) != copies)
    throw std::invalid_argument("apply_perm: permutation length != copies");
  auto map = perm_index_map(dims, copies, positions, pi);
  Vec out(side);
  for (long I = 0; I < side; ++I) out[map[I]] = v[I];
  return out;
}

Vec apply_rank_projector(const Vec& v, int r, const QuditDims& dims, int copies,
                         CutSpec cut) {
  if (r < 1) throw std::invalid_argument("apply_rank_projector: r must be >= 1");
  const long side = ipow(dims.total_dim(), copies);
  if (v.size() != side)
    throw std::invalid_argument("apply_rank_projector: vector length mismatch");
  auto positions = cut_positions(dims, cut);
  auto perms = all_permutations(copies);
  auto coeff = rank_coefficients(copies, r);
  Vec out = Vec::Zero(side);
  for (std::size_t p = 0; p < perms.size(); ++p) {
    if (coeff[p] == 0) continue;
    auto map = perm_index_map(dims, copies, positions, perms[p]);
    const double c = static_cast<double>(coeff[p]);
    for (long I = 0; I < side; ++I) out[map[I]] += c * v[I];
  }
  return out / static_cast<double>(factorial(copies));
}

// --- dense operators -------------------------------------------------------------

CopyOperator perm_operator(const std::vector<int>& pi, const QuditDims& dims,
                           std::optional<CutSpec> cut) {
  const int m = static_cast<int>(pi.size());
  const long side = copy_space_dim(dims, m, kMaxDenseOperatorDim);
  auto map = perm_index_map(dims, m, cut_positions(dims, cut), pi);
  Mat M = Mat::Zero(side, side);
  for (long I = 0; I < side; ++I) M(map[I], I) = 1.0;
  return CopyOperator(dims, m, std::move(M));
}

CopyOperator wss_projector(const Partition& mu, const QuditDims& dims, int copies,
                           std::optional<CutSpec> cut) {
  if (mu.sum() != copies)
    throw std::invalid_argument("wss_projector: |mu| must equal the copy count");
  const long side = copy_space_dim(dims, copies, kMaxDenseOperatorDim);
  auto positions = cut_positions(dims, cut);
  auto perms = all_permutations(copies);

  // Integer character accumulation; a single scale at the end.
  Mat M = Mat::Zero(side, side);
  for (const auto& pi : perms) {
    const double chi = static_cast<double>(character(mu, cycle_type_of(pi)));
    if (chi == 0.0) continue;
    auto map = perm_index_map(dims, copies, positions, pi);
    for (long I = 0; I < side; ++I) M(map[I], I) += chi;
  }
  M *= static_cast<double>(irrep_dimension(mu)) / static_cast<double>(factorial(copies));
  return CopyOperator(dims, copies, std::move(M));
}

CopyOperator rank_projector(int r, const QuditDims& dims, int copies,
                            std::optional<CutSpec> cut) {
  if (r < 1) throw std::invalid_argument("rank_projector: r must be >= 1");
  const long side = copy_space_dim(dims, copies, kMaxDenseOperatorDim);
  auto positions = cut_positions(dims, cut);
  auto perms = all_permutations(copies);
  auto coeff = rank_coefficients(copies, r);

  Mat M = Mat::Zero(side, side);
  for (std::size_t p = 0; p < perms.size(); ++p) {
    if (coeff[p] == 0) continue;
    auto map = perm_index_map(dims, copies, positions, perms[p]);
    const double c = static_cast<double>(coeff[p]);
    for (long I = 0; I < side; ++I) M(map[I], I) += c;
  }
  M /= static_cast<double>(factorial(copies));
  return CopyOperator(dims, copies, std::move(M));
}

CopyOperator mps_projector(int r, const QuditDims& dims, int copies) {
  copy_space_dim(dims, copies, kMaxDenseOperatorDim);
  const int n = dims.num_qudits();
  CopyOperator out = rank_projector(r, dims, copies, CutSpec{1});
  for (int i = 2; i <= n; ++i)
    out.matrix() = rank_projector(r, dims, copies, CutSpec{i}).matrix() * out.matrix();
  return out;
}

namespace {

// Accumulates sum over (pi, sigma) of a(pi) b(sigma) P_first(pi) P_second(sigma)
// using the precomputed index maps of each factor.
Mat pair_product(const std::vector<std::vector<long>>& first_maps,
                 const std::vector<std::vector<long>>& second_maps,
                 const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b,
                 long side) {
  Mat M = Mat::Zero(side, side);
  for (std::size_t p = 0; p < first_maps.size(); ++p) {
    if (a[p] == 0) continue;
    for (std::size_t s = 0; s < second_maps.size(); ++s) {
      if (b[s] == 0) continue;
      const double c = static_cast<double>(a[p]) * static_cast<double>(b[s]);
      const auto& fm = first_maps[p];
      const auto& sm = second_maps[s];
      for (long I = 0; I < side; ++I) M(fm[sm[I]], I) += c;
    }
  }
  return M;
}

}  // namespace

double check_commutation(const QuditDims& dims, int copies, int r) {
  const long side = copy_space_dim(dims, copies, kMaxDenseOperatorDim);
  const int n = dims.num_qudits();
  const long mfact = factorial(copies);
  const double scale = 1.0 / (static_cast<double>(mfact) * static_cast<double>(mfact));
  auto perms = all_permutations(copies);
  auto parts = partitions_of(copies);

  // Index maps for every cut and permutation.
  std::vector<std::vector<std::vector<long>>> maps(n + 1);
  for (int i = 1; i <= n; ++i) {
    auto positions = cut_positions(dims, CutSpec{i});
    maps[i].reserve(perms.size());
    for (const auto& pi : perms) maps[i].push_back(perm_index_map(dims, copies, positions, pi));
  }

  auto wss_coeffs = [&](const Partition& mu) {
    std::vector<std::int64_t> c(perms.size());
    for (std::size_t p = 0; p < perms.size(); ++p)
      c[p] = irrep_dimension(mu) * character(mu, cycle_type_of(perms[p]));
    return c;
  };
  std::vector<std::vector<std::int64_t>> coeffs;
  coeffs.reserve(parts.size());
  for (const auto& mu : parts) coeffs.push_back(wss_coeffs(mu));
  auto rank_coeff = rank_coefficients(copies, r);

  double worst = 0.0;
  for (int i = 1; i <= n; ++i) {
    for (int j = i; j <= n; ++j) {
      for (std::size_t a = 0; a < parts.size(); ++a) {
        for (std::size_t b = 0; b < parts.size(); ++b) {
          if (i == j) {
            if (a >= b) continue;  // distinct partitions, same cut: orthogonality
            Mat prod = pair_product(maps[i], maps[j], coeffs[a], coeffs[b], side);
            worst = std::max(worst, scale * prod.norm());
          } else {
            Mat ab = pair_product(maps[i], maps[j], coeffs[a], coeffs[b], side);
            Mat ba = pair_product(maps[j], maps[i], coeffs[b], coeffs[a], side);
            worst = std::max(worst, scale * (ab - ba).norm());
          }
        }
      }
      if (i < j) {
        Mat ab = pair_product(maps[i], maps[j], rank_coeff, rank_coeff, side);
        Mat ba = pair_product(maps[j], maps[i], rank_coeff, rank_coeff, side);
        worst = std::max(worst, scale * (ab - ba).norm());
      }
    }
  }
  return worst;
}

// --- Haar twirls -------------------------------------------------------------------

namespace {

// Decomposition of the copy-space basis into (side register, rest) indices.
struct SideSplit {
  long da = 1, db = 1;               // per-space totals across all copies
  std::vector<long> a_of, b_of;      // indexed by global index
  std::vector<long> global_of;       // [a * db + b] -> global index
};

SideSplit make_side_split(const QuditDims& dims, int m, const std::vector<int>& positions) {
  const long D = dims.total_dim();
  const long side = ipow(D, m);
  PositionSplit sp = make_split(dims, positions);
  SideSplit out;
  out.da = ipow(sp.sel_dim, m);
  out.db = ipow(sp.rem_dim, m);
  out.a_of.assign(side, 0);
  out.b_of.assign(side, 0);
  out.global_of.assign(side, 0);
  std::vector<long> x(m);
  for (long I = 0; I < side; ++I) {
    long rem = I;
    for (int c = m - 1; c >= 0; --c) {
      x[c] = rem % D;
      rem /= D;
    }
    long a = 0, b = 0;
    for (int c = 0; c < m; ++c) {
      a = a * sp.sel_dim + sp.sel[x[c]];
      b = b * sp.rem_dim + sp.rem[x[c]];
    }
    out.a_of[I] = a;
    out.b_of[I] = b;
    out.global_of[a * out.db + b] = I;
  }
  return out;
}

// pi acting on the side-register multi-index (base sel_dim, copy-major).
std::vector<long> side_perm_map(long sel_dim, int m, const std::vector<int>& pi) {
  const long da = ipow(sel_dim, m);
  const std::vector<int> piinv = inverse_permutation(pi);
  std::vector<long> map(da);
  std::vector<long> dig(m);
  for (long a = 0; a < da; ++a) {
    long rem = a;
    for (int c = m - 1; c >= 0; --c) {
      dig[c] = rem % sel_dim;
      rem /= sel_dim;
    }
    long J = 0;
    for (int j = 0; j < m; ++j) J = J * sel_dim + dig[piinv[j]];
    map[a] = J;
  }
  return map;
}

}  // namespace

CopyOperator haar_twirl(const CopyOperator& X, const std::vector<int>& side_positions) {
  const int m = X.copies();
  if (m > kMaxTwirlCopies)
    throw std::invalid_argument("haar_twirl: copy count exceeds the Gram-solve guard");
  const QuditDims& dims = X.base_dims();
  SideSplit split = make_side_split(dims, m, side_positions);
  const long sel_dim = make_split(dims, side_positions).sel_dim;

  auto perms = all_permutations(m);
  const int P = static_cast<int>(perms.size());

  // Gram matrix G(s,p) = sel_dim^{cycles(s^{-1} p)}.
  Mat G(P, P);
  for (int s = 0; s < P; ++s) {
    auto sinv = inverse_permutation(perms[s]);
    for (int p = 0; p < P; ++p)
      G(s, p) = static_cast<double>(ipow(sel_dim, cycle_count_of(compose_permutations(sinv, perms[p]))));
  }

  // Overlap blocks t_s(b_r, b_c) = sum_a X((s.a, b_r), (a, b_c)).
  std::vector<std::vector<long>> amaps(P);
  for (int s = 0; s < P; ++s) amaps[s] = side_perm_map(sel_dim, m, perms[s]);

  const long db = split.db;
  Mat T(P, db * db);
  for (int s = 0; s < P; ++s) {
    for (long br = 0; br < db; ++br)
      for (long bc = 0; bc < db; ++bc) {
        cx sum = 0.0;
        for (long a = 0; a < split.da; ++a)
          sum += X.matrix()(split.global_of[amaps[s][a] * db + br],
                            split.global_of[a * db + bc]);
        T(s, br * db + bc) = sum;
      }
  }

  // Solve G Y = T; least-squares fallback when the Gram matrix is singular
  // (sel_dim < m), with a residual check.
  Mat Y;
  Eigen::FullPivLU<Mat> lu(G);
  if (lu.isInvertible()) {
    Y = lu.solve(T);
  } else {
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(G);
    Y = cod.solve(T);
    double residual = (G * Y - T).cwiseAbs().maxCoeff();
    if (residual > 1e-8)
      throw std::runtime_error("haar_twirl: singular Gram system residual too large");
  }

  // Reassemble sum_p P(p) (x) Y_p.
  Mat out = Mat::Zero(X.dim(), X.dim());
  for (int p = 0; p < P; ++p) {
    for (long a = 0; a < split.da; ++a) {
      const long pa = amaps[p][a];
      for (long br = 0; br < db; ++br)
        for (long bc = 0; bc < db; ++bc)
          out(split.global_of[pa * db + br], split.global_of[a * db + bc]) +=
              Y(p, br * db + bc);
    }
  }
  return CopyOperator(dims, m, std::move(out));
}

CopyOperator perm_average_two_sided(const CopyOperator& X, const std::vector<int>& side_a,
                                    const std::vector<int>& side_b, PermAverageMode mode) {
  const int m = X.copies();
  std::vector<int> joint = side_a;
  joint.insert(joint.end(), side_b.begin(), side_b.end());
  auto perms = all_permutations(m);
  const long side = X.dim();
  Mat acc = Mat::Zero(side, side);
  for (const auto& pi : perms) {
    auto map = perm_index_map(X.base_dims(), m, joint, pi);
    auto inv = std::vector<long>(side);
    for (long I = 0; I < side; ++I) inv[map[I]] = I;
    switch (mode) {
      case PermAverageMode::Left:
        // (Z X)(j, c) = X(z^{-1}(j), c)
        for (long j = 0; j < side; ++j) acc.row(j) += X.matrix().row(inv[j]);
        break;
      case PermAverageMode::Right:
        // (X Z)(r, j) = X(r, z(j))
        for (long j = 0; j < side; ++j) acc.col(j) += X.matrix().col(map[j]);
        break;
      case PermAverageMode::Conjugate:
        for (long rr = 0; rr < side; ++rr)
          for (long cc = 0; cc < side; ++cc) acc(map[rr], map[cc]) += X.matrix()(rr, cc);
        break;
    }
  }
  acc /= static_cast<double>(perms.size());
  return CopyOperator(X.base_dims(), m, std::move(acc));
}

Mat reorder_registers(const Mat& op, const std::vector<int>& dims,
                      const std::vector<int>& new_order) {
  if (dims.size() != new_order.size())
    throw std::invalid_argument("reorder_registers: order length mismatch");
  long total = 1;
  for (int d : dims) total *= d;
  if (op.rows() != total || op.cols() != total)
    throw std::invalid_argument("reorder_registers: operator side mismatch");

  std::vector<int> new_dims(dims.size());
  for (std::size_t k = 0; k < new_order.size(); ++k) new_dims[k] = dims[new_order[k]];

  // new index digits g'[k] = g[new_order[k]]
  std::vector<long> new_of_old(total);
  auto new_strides = strides_for(new_dims);
  for (long I = 0; I < total; ++I) {
    auto g = index_digits(I, dims);
    long J = 0;
    for (std::size_t k = 0; k < new_order.size(); ++k)
      J += g[new_order[k]] * new_strides[k];
    new_of_old[I] = J;
  }
  Mat out(total, total);
  for (long r = 0; r < total; ++r)
    for (long c = 0; c < total; ++c) out(new_of_old[r], new_of_old[c]) = op(r, c);
  return out;
}

}  // namespace mpstest
