// Symmetric-group combinatorics: partitions, conjugacy classes, irrep
// dimensions (hook lengths), characters (Murnaghan-Nakayama) and Schur
// polynomials (semistandard tableaux). Characters are exact integers;
// no floating error enters projector coefficients until the final scale.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mpstest {

// Permutation enumeration in schur_weyl is the binding constraint.
inline constexpr int kMaxPartitionSize = 8;

/// Weakly decreasing positive parts summing to m. Indexes irreps of S_m.
class Partition {
 public:
  explicit Partition(std::vector<int> parts);
  Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

  int sum() const { return sum_; }
  int length() const { return static_cast<int>(parts_.size()); }
  const std::vector<int>& parts() const { return parts_; }
  int part(int i) const { return i < length() ? parts_[i] : 0; }

  std::string to_string() const;

  bool operator==(const Partition& o) const { return parts_ == o.parts_; }
  bool operator!=(const Partition& o) const { return parts_ != o.parts_; }
  bool operator<(const Partition& o) const { return parts_ < o.parts_; }

 private:
  std::vector<int> parts_;
  int sum_ = 0;
};

/// Conjugacy class of S_m, labelled by its cycle type.
struct CycleType {
  Partition cycles;
  long class_size;  // m! / prod_k k^{m_k} m_k!
};

// All partitions of m in reverse-lexicographic order, (m) first.
std::vector<Partition> partitions_of(int m);

// All conjugacy classes of S_m; class sizes sum to m!.
std::vector<CycleType> conjugacy_classes(int m);

long factorial(int m);

// Number of standard Young tableaux of shape mu (hook length formula).
long irrep_dimension(const Partition& mu);

// chi_mu evaluated on the class with the given cycle type (memoized
// Murnaghan-Nakayama recursion over rim hooks).
std::int64_t character(const Partition& mu, const Partition& cycle_type);

// s_mu(spectrum) as a sum over semistandard Young tableaux with entries
// bounded by the spectrum length. Zero when the shape is longer than the
// number of nonzero entries.
double schur_polynomial(const Partition& mu, const Eigen::VectorXd& spectrum);

}  // namespace mpstest
