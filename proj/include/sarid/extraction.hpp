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
#ifndef SARID_EXTRACTION_HPP
#define SARID_EXTRACTION_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sarid/veronese.hpp"

namespace sarid {

/// The data do not separate into n gradient directions (degenerate data or
/// wrong subsystem count).
struct DegenerateClustersError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Analytic gradient of p(r) = c_n . veronese_map(r) at the given point.
Eigen::VectorXd polynomial_gradient(const Eigen::VectorXd& c_n,
                                    const VeroneseSpec& spec,
                                    const Eigen::VectorXd& point);

struct ExtractionOptions {
  std::int64_t pool = 0;    ///< 0: min(10^4, max(N/10, 10 n))
  int restarts = 20;        ///< clustering restarts (first one is greedy-seeded)
  std::uint64_t seed = 0x5a71dULL;
};

/// Recover the n subsystem coefficient vectors from the decoupling vector.
/// Regressors are built from y; the pool keeps the points with the smallest
/// normalized residual |p(r)| / |grad p(r)| (nearest to some hyperplane),
/// their unit gradients are clustered with sign folding, and each cluster
/// mean is rescaled to the [-1, a, c] convention.
///
/// The result is sorted lexicographically by coefficients, so mode numbers
/// carry no information about the data ordering.
///
/// Throws DegenerateClustersError when fewer than n distinguishable gradient
/// clusters exist.
std::vector<Eigen::VectorXd> extract_subsystems(const Eigen::VectorXd& c_n,
                                                const VeroneseSpec& spec,
                                                const Dataset& ds, int n,
                                                const ExtractionOptions& opts = {});

struct MatchResult {
  /// 1-based: estimated[permutation[j] - 1] is matched to truth[j].
  std::vector<int> permutation;
  /// abs_errors[j][t] = |estimated[permutation[j]-1](t) - truth[j](t)|.
  std::vector<std::vector<double>> abs_errors;
  double total_error = 0.0;
  double max_error = 0.0;
};

/// Minimum total-L1-error assignment of estimated vectors to truth vectors
/// (exhaustive over permutations; n is small).
MatchResult match_to_truth(const std::vector<Eigen::VectorXd>& estimated,
                           const std::vector<Eigen::VectorXd>& truth);

/// Convenience: turn [-1, a, c] vectors into a SarModel.
SarModel model_from_coefficient_vectors(const std::vector<Eigen::VectorXd>& b_list,
                                        int n_a, int n_c);

}  // namespace sarid

#endif  // SARID_EXTRACTION_HPP
