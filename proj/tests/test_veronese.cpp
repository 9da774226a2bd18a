#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "sarid/rng.hpp"
#include "sarid/veronese.hpp"

using namespace sarid;

TEST_CASE("VeroneseSpec enumerates lexicographically") {
  const VeroneseSpec spec(2, 3);
  CHECK(spec.size() == 6);  // C(2+3-1, 2)
  CHECK(spec.exponent(0) == std::vector<int>{2, 0, 0});
  CHECK(spec.exponent(1) == std::vector<int>{1, 1, 0});
  CHECK(spec.exponent(2) == std::vector<int>{1, 0, 1});
  CHECK(spec.exponent(3) == std::vector<int>{0, 2, 0});
  CHECK(spec.exponent(4) == std::vector<int>{0, 1, 1});
  CHECK(spec.exponent(5) == std::vector<int>{0, 0, 2});
  CHECK(spec.index_of({1, 0, 1}) == 2);
  CHECK_THROWS_AS(spec.index_of({3, 0, 0}), std::invalid_argument);

  // binomial-size identity for a few shapes
  CHECK(VeroneseSpec(3, 4).size() == binomial(3 + 4 - 1, 3));
  CHECK(VeroneseSpec(4, 2).size() == 5);
}

TEST_CASE("veronese_map basic values") {
  Eigen::Vector2d v(1.0, 2.0);
  const Eigen::VectorXd m = veronese_map(v, 2);
  CHECK(m.size() == 3);
  CHECK(m(0) == 1.0);
  CHECK(m(1) == 2.0);
  CHECK(m(2) == 4.0);

  Eigen::Vector3d w(0.5, -1.0, 3.0);
  CHECK((veronese_map(w, 1) - w).norm() == 0.0);
  CHECK(veronese_map(w, 2).size() == 6);
}

TEST_CASE("veronese_map homogeneity") {
  CounterRng rng(99, 0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::Vector3d v(rng.uniform(3 * trial, -2.0, 2.0),
                      rng.uniform(3 * trial + 1, -2.0, 2.0),
                      rng.uniform(3 * trial + 2, -2.0, 2.0));
    const double t = rng.uniform(100 + trial, -3.0, 3.0);
    const Eigen::VectorXd lhs = veronese_map((t * v).eval(), 3);
    const Eigen::VectorXd rhs = std::pow(t, 3) * veronese_map(v, 3);
    CHECK((lhs - rhs).norm() <= 1e-10 * rhs.norm() + 1e-14);
  }
}

TEST_CASE("decoupling_coefficients expands products of linear forms") {
  // degree 1: the single form comes back unchanged
  const VeroneseSpec spec1(1, 3);
  Eigen::Vector3d b(-1.0, 0.3, 1.0);
  CHECK((decoupling_coefficients({b}, spec1) - b).norm() == 0.0);

  // x * y over (x, y): monomials x^2, xy, y^2
  const VeroneseSpec spec2(2, 2);
  Eigen::Vector2d e1(1.0, 0.0), e2(0.0, 1.0);
  const Eigen::VectorXd c = decoupling_coefficients({e1, e2}, spec2);
  CHECK(c(0) == 0.0);
  CHECK(c(1) == 1.0);
  CHECK(c(2) == 0.0);
}

TEST_CASE("decoupling_coefficients agrees with direct evaluation") {
  const SarModel model = testing::two_mode_model();
  const VeroneseSpec spec(2, 3);
  std::vector<Eigen::VectorXd> bs;
  for (const auto& s : model.subsystems()) bs.push_back(coefficient_vector(s));
  const Eigen::VectorXd c = decoupling_coefficients(bs, spec);
  CHECK(c.size() == 6);

  CounterRng rng(123, 0);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::Vector3d r(rng.uniform(3 * trial, -2.0, 2.0),
                      rng.uniform(3 * trial + 1, -2.0, 2.0),
                      rng.uniform(3 * trial + 2, -2.0, 2.0));
    const double direct = bs[0].dot(r) * bs[1].dot(r);
    const double embedded = c.dot(veronese_map(r, spec));
    CHECK(embedded == doctest::Approx(direct).epsilon(1e-10));
  }

  // symmetric under permutation of the factors
  const Eigen::VectorXd c_swapped = decoupling_coefficients({bs[1], bs[0]}, spec);
  CHECK((c - c_swapped).norm() <= 1e-12 * c.norm());
}

TEST_CASE("unbiased_power closed forms") {
  const NoiseSpec noise = NoiseSpec::normal(0.25);  // sigma = 0.5
  const double s2 = 0.25;
  for (double y : {-1.7, 0.0, 0.4, 2.3}) {
    CHECK(unbiased_power(y, 0, noise) == 1.0);
    CHECK(unbiased_power(y, 1, noise) == doctest::Approx(y).epsilon(1e-14));
    CHECK(unbiased_power(y, 2, noise) == doctest::Approx(y * y - s2).epsilon(1e-13));
    CHECK(unbiased_power(y, 4, noise) ==
          doctest::Approx(y * y * y * y - 6.0 * s2 * y * y + 3.0 * s2 * s2)
              .epsilon(1e-12));
  }
}

TEST_CASE("unbiased_power_coefficients match direct evaluation") {
  const NoiseSpec noise = NoiseSpec::normal(0.09);
  const auto coef = unbiased_power_coefficients(6, noise);
  for (int h = 0; h <= 6; ++h) {
    for (double y : {-0.9, 0.13, 1.8}) {
      double v = 0.0;
      for (std::size_t p = 0; p < coef[h].size(); ++p) {
        v += coef[h][p] * std::pow(y, static_cast<double>(p));
      }
      CHECK(v == doctest::Approx(unbiased_power(y, h, noise)).epsilon(1e-12));
    }
  }
}

// Monte-Carlo unbiasedness: E[H_h(x + eta)] = x^h within 4 standard errors.
TEST_CASE("unbiased_power kills the noise bias") {
  const std::int64_t draws = 100000;
  CounterRng rng(2024, 7);
  std::uint64_t ctr = 0;
  for (double sigma : {0.1, 0.5}) {
    const NoiseSpec noise = NoiseSpec::normal(sigma * sigma);
    for (double x : {0.0, 1.0, -2.0}) {
      for (int h = 1; h <= 4; ++h) {
        double sum = 0.0, sum_sq = 0.0;
        for (std::int64_t i = 0; i < draws; ++i) {
          const double v = unbiased_power(x + sigma * rng.normal(ctr++), h, noise);
          sum += v;
          sum_sq += v * v;
        }
        const double mean = sum / draws;
        const double var = sum_sq / draws - mean * mean;
        const double se = std::sqrt(var / draws);
        const double target = std::pow(x, h);
        INFO("sigma=", sigma, " x=", x, " h=", h);
        CHECK(std::abs(mean - target) <= 4.0 * se + 1e-12);
      }
    }
  }
}

// Larger-sample check at the degree used by the two-mode pipeline.
TEST_CASE("H_4 Monte-Carlo mean at x = 1, sigma = 0.5") {
  const double sigma = 0.5;
  const NoiseSpec noise = NoiseSpec::normal(sigma * sigma);
  const std::int64_t draws = 1000000;
  CounterRng rng(31337, 1);
  double sum = 0.0, sum_sq = 0.0;
  for (std::int64_t i = 0; i < draws; ++i) {
    const double v = unbiased_power(1.0 + sigma * rng.normal(i), 4, noise);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / draws;
  const double se = std::sqrt((sum_sq / draws - mean * mean) / draws);
  CHECK(std::abs(mean - 1.0) <= 3.0 * se);
}

TEST_CASE("corrected_sample_matrix at sigma 0 is the plain outer product") {
  const Dataset ds = testing::simulate_two_mode(0.04, 50, 3);
  const VeroneseSpec spec(2, 3);
  const NoiseSpec none = NoiseSpec::normal(0.0);
  for (std::int64_t k : {1, 10, 50}) {
    const Eigen::VectorXd nu = veronese_map(regressor(ds, k, false), spec);
    const Eigen::MatrixXd direct = nu * nu.transpose();
    const Eigen::MatrixXd corrected = corrected_sample_matrix(ds, k, spec, none);
    CHECK((corrected - direct).norm() <= 1e-12 * direct.norm());
  }
}

TEST_CASE("corrected_sample_matrix corrects same-time powers only") {
  // degree-1 embedding of (x_k, x_{k-1}, u_{k-1}): the outer product holds
  // x_k^2 on the diagonal and the cross term x_k x_{k-1} off it.
  const Dataset ds = testing::simulate_two_mode(0.09, 30, 5);
  const VeroneseSpec spec(1, 3);
  const NoiseSpec noise = NoiseSpec::normal(0.09);
  const std::int64_t k = 17;
  const Eigen::MatrixXd m = corrected_sample_matrix(ds, k, spec, noise);
  const double yk = ds.y.at(k);
  const double yk1 = ds.y.at(k - 1);
  CHECK(m(0, 0) == doctest::Approx(yk * yk - 0.09).epsilon(1e-13));
  CHECK(m(0, 1) == doctest::Approx(yk * yk1).epsilon(1e-13));  // distinct times
  CHECK(m(1, 1) == doctest::Approx(yk1 * yk1 - 0.09).epsilon(1e-13));
  CHECK(m(0, 2) == doctest::Approx(yk * ds.u.at(k - 1)).epsilon(1e-13));
}

TEST_CASE("accumulate has an exact null direction on noiseless data") {
  const Dataset ds = testing::simulate_two_mode(0.0, 20000, 21);
  const VeroneseSpec spec(2, 3);
  const Eigen::MatrixXd m = accumulate(ds, spec, NoiseSpec::normal(0.0)).mean();
  CHECK((m - m.transpose()).norm() == 0.0);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const double min_sv = svd.singularValues()(m.rows() - 1);
  const double max_sv = svd.singularValues()(0);
  CHECK(min_sv < 1e-8 * max_sv);

  // the decoupling vector of the true subsystems spans that null direction
  const SarModel model = testing::two_mode_model();
  std::vector<Eigen::VectorXd> bs;
  for (const auto& s : model.subsystems()) {
    bs.push_back(coefficient_vector(s));
  }
  const Eigen::VectorXd c = decoupling_coefficients(bs, spec);
  CHECK((m * c).norm() <= 1e-8 * max_sv * c.norm());
}

TEST_CASE("CorrectedMatrix running mean is exact under doubling") {
  const Dataset ds = testing::simulate_two_mode(0.01, 40, 9);
  const VeroneseSpec spec(2, 3);
  const NoiseSpec noise = NoiseSpec::normal(0.01);
  CorrectedMatrix once(spec.size());
  CorrectedMatrix twice(spec.size());
  for (std::int64_t k = 1; k <= ds.N; ++k) {
    const Eigen::MatrixXd s = corrected_sample_matrix(ds, k, spec, noise);
    once.add(s);
    twice.add(s);
    twice.add(s);
  }
  CHECK(twice.count() == 2 * once.count());
  CHECK((twice.mean() - once.mean()).norm() <= 1e-14 * once.mean().norm());

  // merging a matrix with itself doubles the sum exactly, so the mean is
  // bit-identical
  CorrectedMatrix merged = once;
  merged.merge(once);
  CHECK(merged.count() == 2 * once.count());
  CHECK((merged.mean() - once.mean()).norm() == 0.0);
}

TEST_CASE("MomentStats recombination equals the per-sample mean") {
  const Dataset ds = testing::simulate_two_mode(0.04, 500, 33);
  const VeroneseSpec spec(2, 3);
  const MomentStats stats(ds, spec);
  for (double sigma : {0.0, 0.1, 0.35}) {
    const NoiseSpec noise = NoiseSpec::normal(sigma * sigma);
    CorrectedMatrix direct(spec.size());
    for (std::int64_t k = 1; k <= ds.N; ++k) {
      direct.add(corrected_sample_matrix(ds, k, spec, noise));
    }
    const Eigen::MatrixXd a = stats.combine(noise).mean();
    const Eigen::MatrixXd b = direct.mean();
    CHECK((a - b).norm() <= 1e-12 * b.norm());
  }
}

TEST_CASE("noise correction at the true sigma beats no correction") {
  const Dataset ds = testing::simulate_two_mode(0.01, 1000000, 2, 3.0);
  const VeroneseSpec spec(2, 3);
  const MomentStats stats(ds, spec);
  auto min_sv = [&](double sigma) {
    const Eigen::MatrixXd m = stats.combine(NoiseSpec::normal(sigma * sigma)).mean();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(m.rows() - 1);
  };
  CHECK(min_sv(0.1) * 10.0 <= min_sv(0.0));
}

TEST_CASE("prescaled stats find the same null direction") {
  const Dataset ds = testing::simulate_two_mode(0.0, 5000, 44, 3.0);
  const VeroneseSpec spec(2, 3);
  const MomentStats plain(ds, spec);
  const MomentStats scaled(ds, spec, MomentStatsOptions{.prescale = true});
  CHECK(scaled.sigma_scale() > 1.0);

  auto null_vec = [](const Eigen::MatrixXd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    return Eigen::VectorXd(svd.matrixV().col(m.rows() - 1));
  };
  const Eigen::VectorXd v_plain = null_vec(plain.combine(NoiseSpec::normal(0.0)).mean());
  Eigen::VectorXd v_scaled = null_vec(scaled.combine(NoiseSpec::normal(0.0)).mean());
  v_scaled = v_scaled.cwiseQuotient(scaled.monomial_scales()).normalized();
  const double align = std::abs(v_plain.normalized().dot(v_scaled));
  CHECK(align == doctest::Approx(1.0).epsilon(1e-8));
}
