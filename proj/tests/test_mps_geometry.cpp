#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "mpstest/mps_geometry.hpp"
#include "mpstest/random.hpp"
#include "mpstest/state.hpp"

using namespace mpstest;

namespace {

PureState pair_with_overlap(double omega) {
  RVec lam(2);
  lam << omega, 1.0 - omega;
  return schmidt_diagonal_state(lam, 2, 2);
}

}  // namespace

TEST_CASE("state zoo") {
  SUBCASE("bunny amplitudes for n=4") {
    PureState b4 = bunny_state(4);
    const double amp = 1.0 / std::sqrt(3.0);
    CHECK(std::abs(b4.amplitudes()[0b1100] - cx(amp, 0)) < 1e-15);
    CHECK(std::abs(b4.amplitudes()[0b0110] - cx(amp, 0)) < 1e-15);
    CHECK(std::abs(b4.amplitudes()[0b0011] - cx(amp, 0)) < 1e-15);
    CHECK(b4.amplitudes().norm() == doctest::Approx(1.0));
    CHECK_THROWS_AS(bunny_state(2), std::invalid_argument);
  }
  SUBCASE("phi at theta=0 is a product basis state") {
    PureState phi = hard_pair_phi(0.0, 3);
    CHECK(std::abs(phi.amplitudes()[0] - cx(1.0, 0)) < 1e-15);
    auto sd = schmidt(phi, 1);
    CHECK(sd.rank() == 1);
  }
  SUBCASE("gamma sits inside MPS(r) by cut ranks") {
    const int r = 2, d = 4, n = 4;
    PureState big = hard_tensor_gamma(n, 0.3, r, d);
    for (int cut = 1; cut <= n - 1; ++cut) CHECK(schmidt(big, cut).rank() <= r);
  }
  SUBCASE("hard pair validation") {
    CHECK_THROWS_AS(hard_pair(0.3, 2, 2), std::invalid_argument);  // d-1 < 2(r-1)
    CHECK_NOTHROW(hard_pair(0.3, 3, 2));
    CHECK_THROWS_AS(hard_pair_phi(1.5, 3), std::invalid_argument);
    CHECK_THROWS_AS(hard_tensor_phi(3, 0.1, 3), std::invalid_argument);  // odd n
    CHECK_THROWS_AS(hard_pair_gamma(0.5, 1, 3), std::invalid_argument);
  }
  SUBCASE("ghz and maximally entangled") {
    PureState ghz = ghz_state(3, 2);
    CHECK(std::abs(ghz.amplitudes()[0]) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(std::abs(ghz.amplitudes()[7]) == doctest::Approx(1.0 / std::sqrt(2.0)));
    for (int cut : {1, 2}) CHECK(schmidt(ghz, cut).rank() == 2);
    CHECK(schmidt(max_entangled_state(3), 1).rank() == 3);
  }
  SUBCASE("dispatcher") {
    CHECK_NOTHROW(state_zoo("bunny", {{"n", 5}}));
    CHECK_NOTHROW(state_zoo("Phi", {{"n", 4}, {"d", 3}, {"theta", 0.2}}));
    CHECK_THROWS_AS(state_zoo("nope", {}), std::invalid_argument);
  }
}

TEST_CASE("theta_for and mixture_distance_bound") {
  CHECK(theta_for(32, 0.5) == doctest::Approx(1.0 / 16.0));
  CHECK(theta_for(8, 1.0 / std::sqrt(2.0)) == doctest::Approx(0.5));
  CHECK_THROWS_AS(theta_for(4, 1.0), std::invalid_argument);  // 8/4 > 1

  CHECK(mixture_distance_bound(1, 0.3) == doctest::Approx(0.0));
  CHECK(mixture_distance_bound(4, 0.0) == doctest::Approx(0.0));
  CHECK(mixture_distance_bound(3, 0.1) == doctest::Approx(0.028));
  for (int m : {2, 3, 4})
    for (double theta : {0.05, 0.1, 0.2, 0.5})
      CHECK(mixture_distance_bound(m, theta) <= m * (m - 1) * theta * theta + 1e-12);
}

TEST_CASE("MpsState mechanics") {
  SUBCASE("hand-built product MPS contracts correctly") {
    // |+>|0>
    std::vector<std::vector<Mat>> sites(2);
    sites[0] = {Mat::Constant(1, 1, 1.0 / std::sqrt(2.0)),
                Mat::Constant(1, 1, 1.0 / std::sqrt(2.0))};
    sites[1] = {Mat::Constant(1, 1, 1.0), Mat::Constant(1, 1, 0.0)};
    MpsState mps(QuditDims{2, 2}, sites);
    Vec amps = mps.contract();
    CHECK(std::abs(amps[0] - cx(1.0 / std::sqrt(2.0), 0)) < 1e-15);
    CHECK(std::abs(amps[2] - cx(1.0 / std::sqrt(2.0), 0)) < 1e-15);
    CHECK(mps.bond_dimension() == 1);
  }
  SUBCASE("shape validation") {
    std::vector<std::vector<Mat>> bad(2);
    bad[0] = {Mat::Ones(1, 2), Mat::Ones(1, 2)};
    bad[1] = {Mat::Ones(3, 1), Mat::Ones(3, 1)};  // bond mismatch 2 vs 3
    CHECK_THROWS_AS(MpsState(QuditDims{2, 2}, bad), std::invalid_argument);
  }
}

TEST_CASE("overlap_bipartite") {
  SUBCASE("full rank keeps everything") {
    Rng rng(3);
    PureState psi = random_state(QuditDims{3, 3}, rng);
    auto res = overlap_bipartite(psi, 1, 3);
    CHECK(res.overlap == doctest::Approx(1.0));
    CHECK(res.witness.overlap_sq(psi) == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("rank-1 truncation of the tight family") {
    auto res = overlap_bipartite(pair_with_overlap(0.7), 1, 1);
    CHECK(res.overlap == doctest::Approx(0.7));
    CHECK(res.witness.overlap_sq(pair_with_overlap(0.7)) == doctest::Approx(0.7));
  }
  SUBCASE("hard pair closed form") {
    const double theta = 0.4;
    for (int d : {3, 5}) {
      for (int r = 1; r < d; ++r) {
        auto res = overlap_bipartite(hard_pair_phi(theta, d), 1, r);
        CHECK(res.overlap ==
              doctest::Approx((1.0 - theta) + (r - 1) * theta / (d - 1)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("truncate_to_mps") {
  SUBCASE("states already in MPS(r) pass through") {
    PureState ghz = ghz_state(4, 2);
    auto res = truncate_to_mps(ghz, 2);
    CHECK(res.witness_overlap == doctest::Approx(1.0).epsilon(1e-10));
    for (double tail : res.cut_tails) CHECK(tail < 1e-12);
    CHECK(res.certified_lower == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(res.mps.bond_dimension() <= 2);
  }
  SUBCASE("bipartite case matches the Schmidt truncation exactly") {
    Rng rng(5);
    PureState psi = random_state(QuditDims{3, 3}, rng);
    for (int r : {1, 2}) {
      auto res = truncate_to_mps(psi, r);
      auto exact = overlap_bipartite(psi, 1, r);
      CHECK(res.witness_overlap == doctest::Approx(exact.overlap).epsilon(1e-10));
      CHECK(res.certified_lower <= res.witness_overlap + 1e-8);
    }
  }
  SUBCASE("witness always attains at least the certified bound") {
    Rng rng(7);
    for (int trial = 0; trial < 5; ++trial) {
      PureState psi = random_state(QuditDims{2, 2, 2, 2}, rng);
      for (int r : {1, 2}) {
        auto res = truncate_to_mps(psi, r);
        CHECK(res.witness_overlap >= res.certified_lower - 1e-8);
        CHECK(res.mps.bond_dimension() <= r);
        // the witness really is a unit vector
        CHECK(res.mps.contract().norm() == doctest::Approx(1.0).epsilon(1e-8));
      }
    }
  }
  SUBCASE("tensor powers of the hard pair stay within the analytic window") {
    const double theta = 0.3;
    const int d = 3, r = 2, n = 4;
    PureState big = hard_tensor_phi(n, theta, d);
    const double analytic =
        std::pow((1.0 - theta) + (r - 1) * theta / (d - 1), n / 2);
    auto res = truncate_to_mps(big, r);
    CHECK(res.certified_lower <= analytic + 1e-8);
    CHECK(res.witness_overlap <= analytic + 1e-8);
    CHECK(res.witness_overlap >= res.certified_lower - 1e-8);
  }
}

TEST_CASE("overlap_product_als") {
  Rng rng(11);
  SUBCASE("product input converges immediately") {
    PureState psi = tensor_product(random_state(QuditDims{2}, rng),
                                   random_state(QuditDims{3}, rng));
    auto bracket = overlap_product_als(psi, 2, rng);
    CHECK(bracket.lower == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(bracket.upper == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("tight family recovers omega") {
    for (double omega : {0.55, 0.7, 0.9}) {
      auto bracket = overlap_product_als(pair_with_overlap(omega), 4, rng);
      CHECK(bracket.lower == doctest::Approx(omega).epsilon(1e-8));
      CHECK(bracket.upper >= omega - 1e-8);
    }
  }
  SUBCASE("tensor powers recover omega^l") {
    const double omega = 0.8;
    PureState base = pair_with_overlap(omega);
    PureState power = tensor_product(base, base);
    auto bracket = overlap_product_als(power, 8, rng);
    CHECK(bracket.lower == doctest::Approx(omega * omega).epsilon(1e-6));
  }
  SUBCASE("witness reproduces the reported lower bound") {
    PureState psi = random_state(QuditDims{2, 2, 2}, rng);
    auto bracket = overlap_product_als(psi, 4, rng);
    REQUIRE(bracket.witness.has_value());
    CHECK(bracket.witness->to_pure_state().overlap_sq(psi) ==
          doctest::Approx(bracket.lower).epsilon(1e-8));
    CHECK(bracket.witness->bond_dimension() == 1);
    CHECK(bracket.lower <= bracket.upper + 1e-8);
  }
}

TEST_CASE("overlap_mps_dmrg") {
  Rng rng(13);
  SUBCASE("members of MPS(r) reach overlap 1") {
    PureState ghz = ghz_state(4, 2);
    auto bracket = overlap_mps_dmrg(ghz, 2, SweepOptions{}, rng);
    CHECK(bracket.lower == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("bunny overlap with MPS(2) stays below 2/3") {
    for (int n : {4, 5}) {
      auto bracket = overlap_mps_dmrg(bunny_state(n), 2, SweepOptions{}, rng);
      CHECK(bracket.upper <= 2.0 / 3.0 + 1e-6);
      CHECK(bracket.lower <= bracket.upper + 1e-8);
      REQUIRE(bracket.witness.has_value());
      CHECK(bracket.witness->to_pure_state().overlap_sq(bunny_state(n)) ==
            doctest::Approx(bracket.lower).epsilon(1e-8));
    }
    // n=4 attains the min-cut bound exactly
    auto b4 = overlap_mps_dmrg(bunny_state(4), 2, SweepOptions{}, rng);
    CHECK(b4.lower == doctest::Approx(2.0 / 3.0).epsilon(1e-7));
  }
  SUBCASE("hard tensor state matches the analytic product formula") {
    const double theta = 0.3;
    const int d = 3, r = 2, n = 4;
    PureState big = hard_tensor_phi(n, theta, d);
    const double analytic = std::pow((1.0 - theta) + theta / 2.0, 2);
    auto bracket = overlap_mps_dmrg(big, r, SweepOptions{}, rng);
    CHECK(bracket.lower == doctest::Approx(analytic).epsilon(1e-6));
    CHECK(bracket.upper + 1e-8 >= analytic);
  }
  SUBCASE("local unitaries do not move the bracket") {
    PureState psi = bunny_state(4);
    Rng rot(17);
    PureState rotated = psi;
    for (int q = 0; q < 4; ++q)
      rotated = apply_local_unitary(rotated, q, haar_unitary(2, rot));
    auto a = overlap_mps_dmrg(psi, 2, SweepOptions{}, rng);
    auto b = overlap_mps_dmrg(rotated, 2, SweepOptions{}, rng);
    CHECK(a.lower == doctest::Approx(b.lower).epsilon(1e-6));
  }
}

TEST_CASE("dist_r") {
  Rng rng(19);
  SUBCASE("zero distance for MPS members") {
    auto bracket = dist_r(ghz_state(4, 2), 2, rng);
    CHECK(bracket.lower == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(bracket.upper <= 1e-4);
  }
  SUBCASE("bipartite distance is the exact tail") {
    PureState psi = pair_with_overlap(0.7);
    auto bracket = dist_r(psi, 1, rng);
    CHECK(bracket.upper == doctest::Approx(std::sqrt(0.3)).epsilon(1e-6));
    CHECK(bracket.lower <= std::sqrt(0.3) + 1e-8);
    CHECK(bracket.upper <= 1.0 + 1e-12);
  }
}

TEST_CASE("far-from-MPS cut guarantee on certified states") {
  // For states with analytically certified distance, some cut tail must be
  // at least delta^2 / (2n).
  const int d = 3, r = 2;
  for (double theta : {0.2, 0.5}) {
    for (int n : {4, 6}) {
      PureState big = hard_tensor_phi(n, theta, d);
      const double omega = std::pow((1.0 - theta) + theta / 2.0, n / 2);
      const double delta_sq = 1.0 - omega;
      double max_tail = 0.0;
      for (int cut = 1; cut <= n - 1; ++cut) {
        auto sd = schmidt(big, cut);
        double tail = 0.0;
        for (int j = r; j < sd.rank(); ++j) tail += sd.coefficients[j];
        max_tail = std::max(max_tail, tail);
      }
      CHECK(max_tail >= delta_sq / (2.0 * n) - 1e-8);
    }
  }
}
