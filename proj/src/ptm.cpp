/**
 * Copyright (C) 2026 The sarid authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "sarid/ptm.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace sarid {

PtmEstimate estimate_ptm(const TransitionCounts& counts, double smoothing) {
  if (smoothing < 0.0) throw std::invalid_argument("estimate_ptm: smoothing < 0");
  const int n = counts.order();
  Eigen::MatrixXd p(n, n);
  std::vector<int> unvisited;
  for (int i = 1; i <= n; ++i) {
    double row_sum = 0.0;
    for (int j = 1; j <= n; ++j) {
      row_sum += static_cast<double>(counts.at(i, j)) + smoothing;
    }
    if (row_sum == 0.0) {
      // State never visited; nothing to estimate, fall back to uniform.
      unvisited.push_back(i);
      for (int j = 1; j <= n; ++j) p(i - 1, j - 1) = 1.0 / static_cast<double>(n);
      continue;
    }
    for (int j = 1; j <= n; ++j) {
      p(i - 1, j - 1) = (static_cast<double>(counts.at(i, j)) + smoothing) / row_sum;
    }
  }
  return PtmEstimate{TransitionMatrix(std::move(p)), std::move(unvisited), smoothing};
}

double normalized_frobenius(const TransitionMatrix& estimate,
                            const TransitionMatrix& truth) {
  if (estimate.order() != truth.order()) {
    throw std::invalid_argument("normalized_frobenius: dimension mismatch");
  }
  return (estimate.matrix() - truth.matrix()).norm() / truth.matrix().norm();
}

double transition_loglik(const TransitionCounts& counts, const TransitionMatrix& P) {
  if (counts.order() != P.order()) {
    throw std::invalid_argument("transition_loglik: dimension mismatch");
  }
  double ll = 0.0;
  for (int i = 1; i <= counts.order(); ++i) {
    for (int j = 1; j <= counts.order(); ++j) {
      const std::int64_t c = counts.at(i, j);
      if (c == 0) continue;
      const double p = P.prob(i, j);
      if (p <= 0.0) return -std::numeric_limits<double>::infinity();
      ll += static_cast<double>(c) * std::log(p);
    }
  }
  return ll;
}

bool verify_mle_optimality(const TransitionCounts& counts,
                           const TransitionMatrix& candidate, int trials,
                           std::uint64_t seed) {
  const int n = counts.order();
  if (candidate.order() != n) {
    throw std::invalid_argument("verify_mle_optimality: dimension mismatch");
  }
  const double candidate_ll = transition_loglik(counts, candidate);
  // Tolerance absorbs rounding when a trial lands numerically on the optimum.
  const double tol = 1e-9 * (1.0 + std::abs(candidate_ll));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);

  Eigen::MatrixXd trial(n, n);
  for (int t = 0; t < trials; ++t) {
    // Alternate global simplex draws with small moves around the candidate,
    // so both far-off optima and local improvements get probed.
    const double alpha = (t % 2 == 0) ? unif(rng) : 0.05 * unif(rng);
    for (int i = 0; i < n; ++i) {
      double total = 0.0;
      Eigen::VectorXd d(n);
      for (int j = 0; j < n; ++j) {
        d(j) = expo(rng);
        total += d(j);
      }
      double row_sum = 0.0;
      for (int j = 0; j < n; ++j) {
        trial(i, j) = (1.0 - alpha) * candidate.prob(i + 1, j + 1) +
                      alpha * d(j) / total;
        row_sum += trial(i, j);
      }
      for (int j = 0; j < n; ++j) trial(i, j) /= row_sum;
    }
    if (transition_loglik(counts, TransitionMatrix(trial)) > candidate_ll + tol) {
      return false;
    }
  }
  return true;
}

}  // namespace sarid
