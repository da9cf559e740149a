// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_helpers.hpp"

using namespace shrinkcomb;
using cd = std::complex<double>;

TEST_CASE("nearest-point decisions on QPSK") {
  const Constellation c = make_constellation(4);
  const double s = std::sqrt(0.5);

  Eigen::VectorXcd soft(3);
  soft << cd{0.9, 1.1}, cd{-2.0, 0.1}, c.points[2];
  const Eigen::VectorXcd hard = hard_decide(soft, c);
  CHECK(hard(0) == cd{s, s});
  CHECK(hard(1) == cd{-s, s});
  CHECK(hard(2) == c.points[2]);  // exact point maps to itself
}

TEST_CASE("boundary ties go to the lowest constellation index") {
  const Constellation c = make_constellation(4);
  Eigen::VectorXcd soft(1);
  soft << cd{0.0, 0.0};  // equidistant from all four points
  CHECK(hard_decide(soft, c)(0) == c.points[0]);
}

TEST_CASE("hard decisions are idempotent") {
  const Constellation c = make_constellation(16);
  Rng rng(1234, StreamPurpose::data_symbols);
  Eigen::VectorXcd soft(500);
  for (int t = 0; t < 500; ++t) soft(t) = 2.0 * rng.complex_normal();
  const Eigen::VectorXcd once = hard_decide(soft, c);
  CHECK(hard_decide(once, c) == once);
}

TEST_CASE("elementwise decisions equal the joint sequence argmin") {
  // tau = 3 over QPSK: 64 candidate sequences, enumerated exhaustively.
  const Constellation c = make_constellation(4);
  Rng rng(77, StreamPurpose::data_symbols);
  for (int rep = 0; rep < 200; ++rep) {
    Eigen::VectorXcd soft(3);
    for (int t = 0; t < 3; ++t) soft(t) = 1.5 * rng.complex_normal();
    const Eigen::VectorXcd fast = hard_decide(soft, c);

    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXcd best_seq(3);
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        for (int e = 0; e < 4; ++e) {
          Eigen::VectorXcd cand(3);
          cand << c.points[static_cast<size_t>(a)], c.points[static_cast<size_t>(b)],
              c.points[static_cast<size_t>(e)];
          const double obj = (soft - cand).squaredNorm();
          if (obj < best) {
            best = obj;
            best_seq = cand;
          }
        }
      }
    }
    CHECK(fast == best_seq);
  }
}

TEST_CASE("sample MSE basics") {
  SUBCASE("zero combiner and zero decisions") {
    const Eigen::MatrixXcd yd = Eigen::MatrixXcd::Random(4, 10);
    const Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(4, 2);
    const Eigen::MatrixXcd hard = Eigen::MatrixXcd::Zero(10, 2);
    CHECK(sample_mse(yd, w, hard) == 0.0);
  }
  SUBCASE("soft equal to hard gives zero") {
    // Identity data block makes the soft output equal the combiner itself.
    const Constellation c = make_constellation(4);
    const Eigen::MatrixXcd yd = Eigen::MatrixXcd::Identity(4, 4);
    Eigen::MatrixXcd w(4, 2);
    w << c.points[0], c.points[1], c.points[2], c.points[3], c.points[0], c.points[3],
        c.points[1], c.points[2];
    CHECK(sample_mse(yd, w, w) == 0.0);
  }
  SUBCASE("shape mismatch rejected") {
    const Eigen::MatrixXcd yd = Eigen::MatrixXcd::Random(4, 10);
    const Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(4, 2);
    const Eigen::MatrixXcd hard = Eigen::MatrixXcd::Zero(9, 2);
    CHECK_THROWS_AS(sample_mse(yd, w, hard), std::invalid_argument);
  }
}

TEST_CASE("residual and trace evaluations of the sample MSE agree") {
  const ScenarioConfig cfg = test::default_scenario(61);
  const Constellation c = make_constellation(4);
  for (std::uint64_t t = 0; t < 5; ++t) {
    const test::TrialData d = test::make_trial(cfg, t);
    for (double alpha : {0.0, 0.05, 0.3, 0.8, 1.0}) {
      const CombinerSet w = direct_estimate(d.prep, d.pilot_block, d.pilots, alpha);
      const Eigen::MatrixXcd hard =
          hard_decide_all(soft_estimate_all(d.data_block.received, w), c);
      const double residual = sample_mse(d.data_block.received, w.w, hard);
      const double trace =
          sample_mse_trace(d.prep, d.pilot_block, d.pilots, alpha, d.data_block.received, hard);
      CHECK(std::abs(residual - trace) <= 1e-9 * residual);
    }
  }
}

TEST_CASE("hard decisions minimize the sample MSE among symbol matrices") {
  const ScenarioConfig cfg = test::default_scenario(62, 64);
  const Constellation c = make_constellation(4);
  const test::TrialData d = test::make_trial(cfg, 0);
  const CombinerSet w = direct_estimate(d.prep, d.pilot_block, d.pilots, 0.1);
  const Eigen::MatrixXcd hard =
      hard_decide_all(soft_estimate_all(d.data_block.received, w), c);
  const double at_hard = sample_mse(d.data_block.received, w.w, hard);
  CHECK(at_hard >= 0.0);

  Rng rng(63, StreamPurpose::data_symbols);
  for (int rep = 0; rep < 50; ++rep) {
    Eigen::MatrixXcd other(hard.rows(), hard.cols());
    for (Eigen::Index i = 0; i < other.size(); ++i) {
      other(i) = c.points[rng.uniform_index(4)];
    }
    CHECK(at_hard <= sample_mse(d.data_block.received, w.w, other) + 1e-15);
  }
}

TEST_CASE("symbol error counting") {
  const Constellation c = make_constellation(4);

  SUBCASE("identical matrices have zero errors") {
    Eigen::MatrixXcd truth(5, 2);
    for (Eigen::Index i = 0; i < truth.size(); ++i) truth(i) = c.points[static_cast<size_t>(i) % 4];
    const SerCount count = ser(truth, truth);
    CHECK(count.errors == 0);
    CHECK(count.total == 10);
    CHECK(count.ser() == 0.0);
  }

  SUBCASE("one flipped symbol in a thousand") {
    Eigen::MatrixXcd truth(1000, 1);
    for (int t = 0; t < 1000; ++t) truth(t, 0) = c.points[static_cast<size_t>(t) % 4];
    Eigen::MatrixXcd hard = truth;
    hard(123, 0) = c.points[(123 + 1) % 4];
    const SerCount count = ser(hard, truth);
    CHECK(count.errors == 1);
    CHECK(count.ser() == 0.001);
    CHECK(count.errors_per_ue[0] == 1);
  }

  SUBCASE("uniform random guessing sits near 3/4") {
    Rng truth_rng(10, StreamPurpose::data_symbols);
    Rng guess_rng(11, StreamPurpose::data_symbols);
    const int n = 100000;
    Eigen::MatrixXcd truth(n, 1), guess(n, 1);
    for (int t = 0; t < n; ++t) {
      truth(t, 0) = c.points[truth_rng.uniform_index(4)];
      guess(t, 0) = c.points[guess_rng.uniform_index(4)];
    }
    const SerCount count = ser(guess, truth);
    CHECK(count.ser() == doctest::Approx(0.75).epsilon(0.04));
  }

  SUBCASE("shape mismatch rejected") {
    CHECK_THROWS_AS(ser(Eigen::MatrixXcd::Zero(3, 2), Eigen::MatrixXcd::Zero(2, 3)),
                    std::invalid_argument);
  }
}
