#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>

#include "mpstest/mps_geometry.hpp"
#include "mpstest/random.hpp"
#include "mpstest/testers.hpp"

using namespace mpstest;

namespace {

PureState pair_with_overlap(double omega) {
  RVec lam(2);
  lam << omega, 1.0 - omega;
  return schmidt_diagonal_state(lam, 2, 2);
}

}  // namespace

TEST_CASE("swap_test_prob") {
  Rng rng(3);
  PureState psi = random_state(QuditDims{3}, rng);
  CHECK(swap_test_prob(psi, psi) == doctest::Approx(1.0));
  PureState e0 = PureState::basis_state(QuditDims{3}, {0});
  PureState e1 = PureState::basis_state(QuditDims{3}, {1});
  CHECK(swap_test_prob(e0, e1) == doctest::Approx(0.5));
  // pair with squared overlap 0.3
  Vec v(3);
  v << std::sqrt(0.3), std::sqrt(0.7), 0.0;
  PureState b(QuditDims{3}, v);
  CHECK(swap_test_prob(e0, b) == doctest::Approx(0.65));
  CHECK_THROWS_AS(swap_test_prob(e0, random_state(QuditDims{2}, rng)),
                  std::invalid_argument);

  SUBCASE("agrees with the projector route") {
    PureState a = random_state(QuditDims{3}, rng);
    PureState c = random_state(QuditDims{3}, rng);
    Vec two_copy = kron(a.amplitudes(), c.amplitudes());
    Vec projected = wss_projector(Partition{2}, QuditDims{3}, 2).matrix() * two_copy;
    CHECK(swap_test_prob(a, c) == doctest::Approx(projected.squaredNorm()).epsilon(1e-10));
  }
}

TEST_CASE("product_test_prob") {
  Rng rng(7);
  SUBCASE("perfect completeness on product states") {
    PureState psi = random_state(QuditDims{2}, rng);
    for (int q = 0; q < 3; ++q) psi = tensor_product(psi, random_state(QuditDims{3}, rng));
    CHECK(product_test_prob(psi) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("tight family value omega^2 - omega + 1") {
    CHECK(product_test_prob(pair_with_overlap(0.7)) == doctest::Approx(0.79).epsilon(1e-12));
  }
  SUBCASE("maximally entangled value (1 + 1/d)/2") {
    for (int d : {2, 3, 5}) {
      CHECK(product_test_prob(max_entangled_state(d)) ==
            doctest::Approx(0.5 * (1.0 + 1.0 / d)).epsilon(1e-12));
    }
  }
  SUBCASE("norm route matches the dense projector for small systems") {
    PureState psi = random_state(QuditDims{2, 2}, rng);
    Vec two_copy = kron(psi.amplitudes(), psi.amplitudes());
    Vec projected = mps_projector(1, psi.dims(), 2).matrix() * two_copy;
    CHECK(product_test_prob(psi) ==
          doctest::Approx(projected.squaredNorm()).epsilon(1e-10));
  }
}

TEST_CASE("product_test_bound and hm_bound") {
  SUBCASE("endpoints and the branch point") {
    CHECK(product_test_bound(1.0, BoundVariant::Simple) == doctest::Approx(1.0));
    CHECK(product_test_bound(1.0, BoundVariant::Sharp) == doctest::Approx(1.0));
    CHECK(product_test_bound(0.5, BoundVariant::Simple) == doctest::Approx(0.75));
    CHECK(product_test_bound(0.5, BoundVariant::Sharp) == doctest::Approx(0.75));
    CHECK(product_test_bound(0.7, BoundVariant::Sharp) == doctest::Approx(0.79));
  }
  SUBCASE("sharp bound below simple bound, both nondecreasing") {
    double prev_sharp = 0.0, prev_simple = 0.0;
    for (int i = 0; i <= 100; ++i) {
      double omega = i / 100.0;
      double sharp = product_test_bound(omega, BoundVariant::Sharp);
      double simple = product_test_bound(omega, BoundVariant::Simple);
      CHECK(sharp <= simple + 1e-14);
      CHECK(sharp >= prev_sharp - 1e-14);
      CHECK(simple >= prev_simple - 1e-14);
      prev_sharp = sharp;
      prev_simple = simple;
    }
  }
  SUBCASE("hm bound dominates the sharp bound") {
    CHECK(hm_bound(1.0) == doctest::Approx(1.0));
    CHECK(hm_crossover_epsilon() == doctest::Approx(0.37).epsilon(0.01));
    // eps = 0.5 sits past the crossover: the linear branch is active.
    CHECK(hm_bound(0.5) == doctest::Approx(1.0 - 11.0 / 1024.0));
    for (int i = 0; i <= 100; ++i) {
      double omega = i / 100.0;
      CHECK(product_test_bound(omega, BoundVariant::Sharp) <= hm_bound(omega) + 1e-14);
    }
  }
  SUBCASE("input validation") {
    CHECK_THROWS_AS(product_test_bound(1.5, BoundVariant::Sharp), std::invalid_argument);
    CHECK_THROWS_AS(hm_bound(-0.5), std::invalid_argument);
  }
}

TEST_CASE("swap_cut_accept_prob") {
  Rng rng(11);
  SUBCASE("product across the cut accepts with certainty") {
    PureState psi = tensor_product(random_state(QuditDims{2}, rng),
                                   random_state(QuditDims{3}, rng));
    CHECK(swap_cut_accept_prob(psi, 1) == doctest::Approx(1.0));
  }
  SUBCASE("maximally entangled qubit pair gives 3/4") {
    CHECK(swap_cut_accept_prob(max_entangled_state(2), 1) == doctest::Approx(0.75));
  }
  SUBCASE("spectrum formula") {
    CHECK(swap_cut_accept_prob(pair_with_overlap(0.7), 1) == doctest::Approx(0.79));
  }
  SUBCASE("never below the full product test") {
    for (int trial = 0; trial < 10; ++trial) {
      PureState psi = random_state(QuditDims{2, 2, 2}, rng);
      CHECK(product_test_prob(psi) <= swap_cut_accept_prob(psi, 1) + 1e-10);
    }
  }
}

TEST_CASE("rank tester") {
  Rng rng(13);
  SUBCASE("perfect completeness on low-rank states") {
    for (int r : {1, 2, 3}) {
      for (int m : {2, 3}) {
        MixedState rho = random_mixed_state(QuditDims{4}, r, rng);
        CHECK(rank_test_accept_prob(rho, r, m) == doctest::Approx(1.0).epsilon(1e-10));
      }
    }
  }
  SUBCASE("maximally mixed qubit values") {
    Mat half = Mat::Identity(2, 2) / 2.0;
    MixedState rho = MixedState::from_matrix(QuditDims{2}, half);
    CHECK(rank_test_accept_prob(rho, 1, 2) == doctest::Approx(0.75));
    CHECK(rank_test_accept_prob(rho, 1, 3) == doctest::Approx(0.5));
  }
  SUBCASE("projector route equals the Schur oracle route") {
    for (int d : {2, 3}) {
      for (int m : {2, 3}) {
        for (int r : {1, 2}) {
          MixedState rho = random_mixed_state(QuditDims{d}, d, rng);
          CHECK(rank_test_accept_prob_projector(rho, r, m) ==
                doctest::Approx(rank_test_accept_prob(rho, r, m)).epsilon(1e-8));
        }
      }
    }
  }
  SUBCASE("acceptance monotone: nonincreasing in m, nondecreasing in r") {
    for (int trial = 0; trial < 5; ++trial) {
      MixedState rho = random_mixed_state(QuditDims{3}, 3, rng);
      for (int r : {1, 2}) {
        double prev = 1.0;
        for (int m = 2; m <= 5; ++m) {
          double p = rank_test_accept_prob(rho, r, m);
          CHECK(p <= prev + 1e-12);
          prev = p;
        }
      }
      for (int m : {2, 3}) {
        double prev = 0.0;
        for (int r = 1; r <= 3; ++r) {
          double p = rank_test_accept_prob(rho, r, m);
          CHECK(p >= prev - 1e-12);
          prev = p;
        }
      }
    }
  }
}

TEST_CASE("rank_test_sample") {
  SUBCASE("rank-1 input always lands in the symmetric block") {
    Rng rng(17);
    MixedState pure = random_mixed_state(QuditDims{3}, 1, rng);
    for (int s = 0; s < 50; ++s) {
      auto sample = rank_test_sample(pure, 1, 3, rng);
      CHECK(sample.outcome == Partition{3});
      CHECK(sample.accept);
    }
  }
  SUBCASE("maximally mixed qubit frequencies near 3/4 - 1/4") {
    Rng rng(19);
    MixedState rho = MixedState::from_matrix(QuditDims{2}, Mat::Identity(2, 2) / 2.0);
    std::map<std::string, long> counts;
    const int N = 10000;
    for (int s = 0; s < N; ++s) ++counts[rank_test_sample(rho, 1, 2, rng).outcome.to_string()];
    const double freq = static_cast<double>(counts["(2)"]) / N;
    CHECK(std::abs(freq - 0.75) < 3.0 * std::sqrt(0.75 * 0.25 / N));
  }
  SUBCASE("seeded runs reproduce") {
    Rng a(23), b(23);
    MixedState rho = random_mixed_state(QuditDims{3}, 2, a);
    MixedState rho2 = random_mixed_state(QuditDims{3}, 2, b);
    for (int s = 0; s < 20; ++s)
      CHECK(rank_test_sample(rho, 2, 3, a).outcome ==
            rank_test_sample(rho2, 2, 3, b).outcome);
  }
}

TEST_CASE("mps_test_accept_prob") {
  SUBCASE("perfect completeness: GHZ at r=2 and products at r=1") {
    TestReport ghz = mps_test_accept_prob(ghz_state(4, 2), 2, 3);
    CHECK(ghz.accept_probability == doctest::Approx(1.0).epsilon(1e-10));
    Rng rng(29);
    PureState prod = tensor_product(random_state(QuditDims{2}, rng),
                                    random_state(QuditDims{2}, rng));
    CHECK(mps_test_accept_prob(prod, 1, 2).accept_probability ==
          doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("bunny acceptance at r=2, m=3 matches the per-cut measure") {
    // The joint rejection equals the sum over cuts of Pr[l(mu)=3], which is
    // e_3 of the cut spectrum; the cut rejections turn out to be disjoint.
    for (int n : {4, 5}) {
      TestReport rep = mps_test_accept_prob(bunny_state(n), 2, 3);
      double rejection = 0.0;
      for (int i = 1; i <= n - 1; ++i)
        rejection += double(i - 1) / (n - 1) * 1.0 / (n - 1) * double(n - i - 1) / (n - 1);
      CHECK(rep.accept_probability == doctest::Approx(1.0 - rejection).epsilon(1e-12));
    }
    CHECK(mps_test_accept_prob(bunny_state(4), 2, 3).accept_probability ==
          doctest::Approx(26.0 / 27.0));
  }
  SUBCASE("acceptance bounded by each cut's rank-test acceptance") {
    Rng rng(31);
    for (int trial = 0; trial < 3; ++trial) {
      PureState psi = random_state(QuditDims{2, 2, 2}, rng);
      TestReport rep = mps_test_accept_prob(psi, 1, 2);
      for (double cut_prob : rep.per_cut_probabilities)
        CHECK(rep.accept_probability <= cut_prob + 1e-10);
    }
  }
  SUBCASE("bipartite case reduces to the single-cut rank test") {
    Rng rng(37);
    PureState psi = random_state(QuditDims{3, 3}, rng);
    TestReport rep = mps_test_accept_prob(psi, 2, 2);
    CHECK(rep.accept_probability ==
          doctest::Approx(rank_test_accept_prob(partial_trace(psi, {0}), 2, 2))
              .epsilon(1e-10));
  }
}

TEST_CASE("product test dominated by the sharp bound on known-omega states") {
  Rng rng(41);
  for (int trial = 0; trial < 25; ++trial) {
    // Tensor products of Schmidt-diagonal pairs dressed by local unitaries:
    // overlap multiplies across factors, the product test is invariant.
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    int factors = 1 + static_cast<int>(unif(rng) * 2);
    double omega = 1.0;
    PureState psi = pair_with_overlap(0.5 + 0.5 * unif(rng));
    omega *= std::max(psi.amplitudes()[0].real() * psi.amplitudes()[0].real(),
                      1.0 - psi.amplitudes()[0].real() * psi.amplitudes()[0].real());
    for (int f = 1; f < factors; ++f) {
      double w = 0.5 + 0.5 * unif(rng);
      psi = tensor_product(psi, pair_with_overlap(w));
      omega *= std::max(w, 1.0 - w);
    }
    for (int q = 0; q < psi.num_qudits(); ++q)
      psi = apply_local_unitary(psi, q, haar_unitary(2, rng));
    CHECK(product_test_prob(psi) <=
          product_test_bound(omega, BoundVariant::Sharp) + 1e-10);
  }
}

TEST_CASE("copies_needed") {
  CHECK(copies_needed(TesterKind::Lower, 100, 2, 0.5) == 2);
  CHECK(copies_needed(TesterKind::Lower, 64, 2, 0.5) == 2);
  CHECK(copies_needed(TesterKind::Product, 4, 1, 1.0) == 12);
  CHECK(copies_needed(TesterKind::Mps, 4, 2, 1.0) == 16);
  CHECK_THROWS_AS(copies_needed(TesterKind::Product, 4, 1, 0.0), std::invalid_argument);
  CopyConstants custom;
  custom.c_product = 6.0;
  CHECK(copies_needed(TesterKind::Product, 4, 1, 0.5, custom) == 24);
}
