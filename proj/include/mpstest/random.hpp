// Seeded randomness: Haar-distributed unitaries and states. Every
// stochastic operation in the library takes an explicit generator;
// there is no global RNG state.

#pragma once

#include <cstdint>
#include <random>

#include "mpstest/state.hpp"

namespace mpstest {

using Rng = std::mt19937_64;

// Deterministic per-point seed derived from a root seed (splitmix64 mix).
std::uint64_t child_seed(std::uint64_t root, std::uint64_t index);

// Haar-random d x d unitary: QR of a complex Ginibre matrix with the
// phase-of-R-diagonal correction.
Mat haar_unitary(int d, Rng& rng);

// Haar-random unit vector over the given layout.
PureState random_state(const QuditDims& dims, Rng& rng);

// Random density matrix of the given rank: random simplex spectrum
// conjugated by a Haar unitary.
MixedState random_mixed_state(const QuditDims& dims, int rank, Rng& rng);

// Random probability vector of the given length, sorted nonincreasing.
RVec random_spectrum(int length, Rng& rng);

}  // namespace mpstest
