#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "common.hpp"
#include "sarid/ptm.hpp"

using namespace sarid;

namespace {

TransitionCounts make_counts(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  TransitionCounts c(static_cast<int>(rows.size()));
  int i = 1;
  for (const auto& row : rows) {
    int j = 1;
    for (std::int64_t v : row) c.add(i, j++, v);
    ++i;
  }
  return c;
}

}  // namespace

TEST_CASE("estimate_ptm is the row count ratio") {
  const PtmEstimate est = estimate_ptm(make_counts({{2, 8}, {3, 7}}));
  CHECK(est.ptm.prob(1, 1) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(est.ptm.prob(1, 2) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(est.ptm.prob(2, 1) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(est.ptm.prob(2, 2) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(est.unvisited_rows.empty());

  const PtmEstimate uniform = estimate_ptm(make_counts({{5, 5}, {5, 5}}));
  CHECK(uniform.ptm.prob(1, 1) == 0.5);
  CHECK(uniform.ptm.prob(2, 2) == 0.5);
}

TEST_CASE("estimate_ptm flags states that were never visited") {
  const PtmEstimate est = estimate_ptm(make_counts({{0, 0}, {1, 0}}));
  CHECK(est.unvisited_rows == std::vector<int>{1});
  CHECK(est.ptm.prob(1, 1) == 0.5);
  CHECK(est.ptm.prob(1, 2) == 0.5);
  CHECK(est.ptm.prob(2, 1) == 1.0);
  CHECK(est.ptm.prob(2, 2) == 0.0);
}

TEST_CASE("Laplace smoothing removes the flag and pulls rows toward uniform") {
  const PtmEstimate est = estimate_ptm(make_counts({{0, 0}, {1, 0}}), 1.0);
  CHECK(est.unvisited_rows.empty());
  CHECK(est.ptm.prob(1, 1) == 0.5);
  CHECK(est.ptm.prob(2, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(estimate_ptm(make_counts({{1, 1}, {1, 1}}), -0.5),
                  std::invalid_argument);
}

TEST_CASE("normalized_frobenius reproduces the reference values") {
  CHECK(normalized_frobenius(testing::mixing_ptm(), testing::mixing_ptm()) == 0.0);

  Eigen::MatrixXd est1(2, 2), true1(2, 2);
  true1 << 0.1837, 0.8163, 0.3424, 0.6576;
  est1 << 0.2116, 0.7884, 0.3472, 0.6528;
  CHECK(std::abs(normalized_frobenius(TransitionMatrix(est1), TransitionMatrix(true1)) -
                 0.035810) < 1e-5);

  Eigen::MatrixXd est2(2, 2), true2(2, 2);
  true2 << 0.4286, 0.5714, 0.1412, 0.8588;
  est2 << 0.3897, 0.6103, 0.1776, 0.8224;
  CHECK(std::abs(normalized_frobenius(TransitionMatrix(est2), TransitionMatrix(true2)) -
                 0.066922) < 1e-5);

  CHECK_THROWS_AS(
      normalized_frobenius(TransitionMatrix::identity(3), testing::mixing_ptm()),
      std::invalid_argument);
}

TEST_CASE("normalized_frobenius is symmetric in the sign of the difference") {
  const TransitionMatrix truth = testing::mixing_ptm();
  Eigen::MatrixXd d(2, 2);
  d << 0.02, -0.02, -0.015, 0.015;
  const TransitionMatrix plus(truth.matrix() + d);
  const TransitionMatrix minus(truth.matrix() - d);
  CHECK(normalized_frobenius(plus, truth) ==
        doctest::Approx(normalized_frobenius(minus, truth)).epsilon(1e-14));
  CHECK(normalized_frobenius(truth, truth) == 0.0);
  CHECK(normalized_frobenius(plus, truth) > 0.0);
}

TEST_CASE("transition_loglik conventions") {
  const TransitionCounts counts = make_counts({{2, 8}, {3, 7}});
  const PtmEstimate est = estimate_ptm(counts);
  const double ll = transition_loglik(counts, est.ptm);
  const double expected = 2 * std::log(0.2) + 8 * std::log(0.8) +
                          3 * std::log(0.3) + 7 * std::log(0.7);
  CHECK(ll == doctest::Approx(expected).epsilon(1e-12));

  // zero count with zero probability contributes nothing
  const TransitionCounts degenerate = make_counts({{3, 0}, {1, 1}});
  Eigen::MatrixXd p(2, 2);
  p << 1.0, 0.0, 0.5, 0.5;
  CHECK(std::isfinite(transition_loglik(degenerate, TransitionMatrix(p))));
  // visited transition with zero probability is impossible
  const TransitionCounts visited = make_counts({{3, 1}, {1, 1}});
  CHECK(transition_loglik(visited, TransitionMatrix(p)) ==
        -std::numeric_limits<double>::infinity());
}

TEST_CASE("closed form beats random feasible perturbations") {
  const TransitionCounts counts = make_counts({{2, 8}, {3, 7}});
  const PtmEstimate est = estimate_ptm(counts);
  CHECK(verify_mle_optimality(counts, est.ptm, 10000, 99));

  // shift one row by 0.05: no longer optimal
  Eigen::MatrixXd shifted = est.ptm.matrix();
  shifted(0, 0) += 0.05;
  shifted(0, 1) -= 0.05;
  CHECK_FALSE(verify_mle_optimality(counts, TransitionMatrix(shifted), 10000, 99));

  // single state: the only feasible matrix is [1]
  const TransitionCounts one = make_counts({{17}});
  CHECK(verify_mle_optimality(one, TransitionMatrix::identity(1), 100, 1));
}

TEST_CASE("estimate_ptm rows are stochastic on random counts and maximize Eq-12") {
  std::mt19937_64 rng(2718);
  std::uniform_int_distribution<int> count_draw(0, 40);
  std::uniform_int_distribution<int> dim_draw(2, 4);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = dim_draw(rng);
    TransitionCounts counts(n);
    for (int i = 1; i <= n; ++i) {
      bool any = false;
      for (int j = 1; j <= n; ++j) {
        const int c = count_draw(rng);
        counts.add(i, j, c);
        any = any || c > 0;
      }
      if (!any) counts.add(i, 1 + trial % n, 1);
    }
    const PtmEstimate est = estimate_ptm(counts);
    for (int i = 1; i <= n; ++i) {
      double row = 0.0;
      for (int j = 1; j <= n; ++j) {
        CHECK(est.ptm.prob(i, j) >= 0.0);
        CHECK(est.ptm.prob(i, j) <= 1.0);
        row += est.ptm.prob(i, j);
      }
      CHECK(std::abs(row - 1.0) <= 1e-12);
    }
    CHECK(verify_mle_optimality(counts, est.ptm, 2000, 7 + trial));
  }
}
