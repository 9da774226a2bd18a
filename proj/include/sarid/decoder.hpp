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
#ifndef SARID_DECODER_HPP
#define SARID_DECODER_HPP

#include <cstdint>
#include <vector>

#include "sarid/model.hpp"

namespace sarid {

/// Residual snippets of length n_l separated by n_a skipped samples:
/// start indices (n_a + 1) + (n_a + n_l) l while the snippet fits. The gap
/// makes the noise terms entering different snippets disjoint, so snippets
/// are statistically independent.
struct SnippetPlan {
  int n_l = 2;
  int n_a = 1;
  std::vector<std::int64_t> starts;

  /// Fraction of samples the plan consumes, n_l / (n_l + n_a).
  double data_fraction() const {
    return static_cast<double>(n_l) / static_cast<double>(n_l + n_a);
  }
};

SnippetPlan snippet_plan(std::int64_t N, int n_a, int n_l);

/// All n^{n_l} switching hypotheses in lexicographic order: (1,..,1),
/// (1,..,2), .., (n,..,n). This is the order decode ties resolve toward.
std::vector<std::vector<int>> enumerate_hypotheses(int n, int n_l);

/// One-step model mismatch z_k(mode) = y_k - sum_j a_j y_{k-j} - sum_j c_j u_{k-j}.
/// Under the true mode this is the noise moving average eta_k - sum a_j eta_{k-j}.
double residual(const Dataset& ds, const SarModel& model, std::int64_t k, int mode);

/// Covariance of a residual snippet under a mode hypothesis:
/// sigma^2 A A^T where row t of A maps the stacked noise window
/// (eta_{k-n_a} .. eta_{k+n_l-1}) to z_{k+t}.
Eigen::MatrixXd snippet_covariance(const std::vector<int>& hypothesis,
                                   const SarModel& model, double sigma);

/// Multivariate normal log density at z via Cholesky factorization.
/// Throws std::runtime_error when cov is not positive definite.
double snippet_loglik(const Eigen::VectorXd& z, const Eigen::MatrixXd& cov);

struct DecodedSnippet {
  std::int64_t start = 0;
  std::vector<int> hypothesis;  ///< modes 1..n, length n_l
  double loglik = 0.0;  ///< log density; negative squared residual sum at sigma=0
};

class TransitionCounts {
 public:
  explicit TransitionCounts(int n)
      : counts_(Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n)) {}

  int order() const { return static_cast<int>(counts_.rows()); }
  std::int64_t at(int from_mode, int to_mode) const {
    return counts_(from_mode - 1, to_mode - 1);
  }
  void add(int from_mode, int to_mode, std::int64_t amount = 1) {
    counts_(from_mode - 1, to_mode - 1) += amount;
  }
  std::int64_t total() const { return counts_.sum(); }
  const Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>& matrix() const {
    return counts_;
  }
  void merge(const TransitionCounts& other) { counts_ += other.counts_; }

 private:
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts_;
};

struct DecodeDiagnostics {
  std::int64_t regularized_covariances = 0;  ///< hypotheses needing jitter
};

/// Exhaustive maximum-likelihood decode of one snippet: all n^{n_l} switching
/// hypotheses are scored and the best kept; ties go to the lexicographically
/// smallest hypothesis. With sigma = 0 the Gaussian density degenerates and
/// the decoder falls back to minimum squared residual.
DecodedSnippet decode_snippet(const Dataset& ds, const SarModel& model,
                              double sigma, std::int64_t start, int n_l);

struct DecodeResult {
  std::vector<DecodedSnippet> snippets;
  TransitionCounts counts;  ///< within-snippet transitions only
  DecodeDiagnostics diagnostics;
};

/// Decode every snippet in the plan and count the i -> j transitions inside
/// snippets (never across the n_a gaps). Snippets are independent, so the
/// result does not depend on processing order.
DecodeResult decode_all(const Dataset& ds, const SarModel& model, double sigma,
                        const SnippetPlan& plan);

/// Within-snippet transition counts of the true mode sequence; needs truth.
TransitionCounts true_snippet_counts(const Dataset& ds, const SnippetPlan& plan);

}  // namespace sarid

#endif  // SARID_DECODER_HPP
