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
#include "sarid/decoder.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sarid {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2 pi)

/// Hypotheses in lexicographic order and, for sigma > 0, their Cholesky
/// factors. Shared across snippets: the covariance depends on the hypothesis
/// only, so factorizations happen n^{n_l} times per decode pass, not per
/// snippet.
struct HypothesisTable {
  int n = 0;
  int n_l = 0;
  double sigma = 0.0;
  std::vector<std::vector<int>> hypotheses;
  std::vector<Eigen::MatrixXd> chol;  // lower factors
  std::vector<double> logdet;
  std::int64_t regularized = 0;

  HypothesisTable(const SarModel& model, double sigma_in, int n_l_in)
      : n(model.mode_count()), n_l(n_l_in), sigma(sigma_in) {
    hypotheses = enumerate_hypotheses(n, n_l);
    if (sigma <= 0.0) return;
    chol.reserve(hypotheses.size());
    logdet.reserve(hypotheses.size());
    for (const auto& hyp : hypotheses) {
      Eigen::MatrixXd cov = snippet_covariance(hyp, model, sigma);
      Eigen::LLT<Eigen::MatrixXd> llt(cov);
      if (llt.info() != Eigen::Success) {
        // Near-singular hypothesis covariance; jitter it into factorizable
        // territory and report through diagnostics.
        cov += 1e-12 * cov.trace() * Eigen::MatrixXd::Identity(n_l, n_l);
        llt.compute(cov);
        ++regularized;
        if (llt.info() != Eigen::Success) {
          throw std::runtime_error("decode: hypothesis covariance not positive definite");
        }
      }
      Eigen::MatrixXd L = llt.matrixL();
      double ld = 0.0;
      for (int t = 0; t < n_l; ++t) ld += 2.0 * std::log(L(t, t));
      chol.push_back(std::move(L));
      logdet.push_back(ld);
    }
  }

  /// Index of the best hypothesis for the residual table z(t, mode-1).
  /// Strict improvement keeps the lexicographically smallest on ties.
  std::size_t best(const Eigen::MatrixXd& z, double* best_ll) const {
    std::size_t arg = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd zv(n_l);
    for (std::size_t hi = 0; hi < hypotheses.size(); ++hi) {
      const auto& hyp = hypotheses[hi];
      for (int t = 0; t < n_l; ++t) {
        zv(t) = z(t, hyp[static_cast<std::size_t>(t)] - 1);
      }
      double ll;
      if (sigma <= 0.0) {
        ll = -zv.squaredNorm();
      } else {
        const Eigen::VectorXd w =
            chol[hi].triangularView<Eigen::Lower>().solve(zv);
        ll = -0.5 * (n_l * kLog2Pi + logdet[hi] + w.squaredNorm());
      }
      if (ll > best_val) {
        best_val = ll;
        arg = hi;
      }
    }
    *best_ll = best_val;
    return arg;
  }
};

}  // namespace

std::vector<std::vector<int>> enumerate_hypotheses(int n, int n_l) {
  if (n < 1) throw std::invalid_argument("enumerate_hypotheses: n must be >= 1");
  if (n_l < 1) throw std::invalid_argument("enumerate_hypotheses: n_l must be >= 1");
  std::vector<std::vector<int>> out;
  std::vector<int> h(static_cast<std::size_t>(n_l), 1);
  while (true) {
    out.push_back(h);
    int pos = n_l - 1;
    while (pos >= 0) {
      if (h[static_cast<std::size_t>(pos)] < n) {
        ++h[static_cast<std::size_t>(pos)];
        break;
      }
      h[static_cast<std::size_t>(pos)] = 1;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

SnippetPlan snippet_plan(std::int64_t N, int n_a, int n_l) {
  if (n_l < 1) throw std::invalid_argument("snippet_plan: n_l must be >= 1");
  if (n_a < 0) throw std::invalid_argument("snippet_plan: n_a must be >= 0");
  SnippetPlan plan;
  plan.n_l = n_l;
  plan.n_a = n_a;
  const std::int64_t stride = n_a + n_l;
  for (std::int64_t k = n_a + 1; k + n_l - 1 <= N; k += stride) {
    plan.starts.push_back(k);
  }
  if (plan.starts.empty()) {
    throw std::invalid_argument("snippet_plan: no snippet fits in N = " +
                                std::to_string(N));
  }
  return plan;
}

double residual(const Dataset& ds, const SarModel& model, std::int64_t k, int mode) {
  const SubsystemParams& s = model.subsystem(mode);
  double z = ds.y.at(k);
  for (int j = 1; j <= model.ar_order(); ++j) z -= s.a[static_cast<std::size_t>(j - 1)] * ds.y.at(k - j);
  for (int j = 1; j <= model.input_order(); ++j) z -= s.c[static_cast<std::size_t>(j - 1)] * ds.u.at(k - j);
  return z;
}

Eigen::MatrixXd snippet_covariance(const std::vector<int>& hypothesis,
                                   const SarModel& model, double sigma) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("snippet_covariance: sigma must be positive");
  }
  const int n_l = static_cast<int>(hypothesis.size());
  const int n_a = model.ar_order();
  // Row t of A: z_{k+t} as a combination of (eta_{k-n_a} .. eta_{k+n_l-1}).
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n_l, n_l + n_a);
  for (int t = 0; t < n_l; ++t) {
    const SubsystemParams& s = model.subsystem(hypothesis[static_cast<std::size_t>(t)]);
    A(t, n_a + t) = 1.0;
    for (int j = 1; j <= n_a; ++j) {
      A(t, n_a + t - j) = -s.a[static_cast<std::size_t>(j - 1)];
    }
  }
  return sigma * sigma * (A * A.transpose());
}

double snippet_loglik(const Eigen::VectorXd& z, const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols() || cov.rows() != z.size()) {
    throw std::invalid_argument("snippet_loglik: dimension mismatch");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("snippet_loglik: covariance not positive definite");
  }
  const Eigen::MatrixXd L = llt.matrixL();
  double logdet = 0.0;
  for (Eigen::Index t = 0; t < cov.rows(); ++t) logdet += 2.0 * std::log(L(t, t));
  const Eigen::VectorXd w = L.triangularView<Eigen::Lower>().solve(z);
  return -0.5 * (static_cast<double>(z.size()) * kLog2Pi + logdet + w.squaredNorm());
}

DecodedSnippet decode_snippet(const Dataset& ds, const SarModel& model,
                              double sigma, std::int64_t start, int n_l) {
  HypothesisTable table(model, sigma, n_l);
  Eigen::MatrixXd z(n_l, model.mode_count());
  for (int t = 0; t < n_l; ++t) {
    for (int m = 1; m <= model.mode_count(); ++m) {
      z(t, m - 1) = residual(ds, model, start + t, m);
    }
  }
  DecodedSnippet out;
  out.start = start;
  double ll;
  const std::size_t arg = table.best(z, &ll);
  out.hypothesis = table.hypotheses[arg];
  out.loglik = ll;
  return out;
}

DecodeResult decode_all(const Dataset& ds, const SarModel& model, double sigma,
                        const SnippetPlan& plan) {
  HypothesisTable table(model, sigma, plan.n_l);
  DecodeResult result{.snippets = {},
                      .counts = TransitionCounts(model.mode_count()),
                      .diagnostics = {}};
  result.diagnostics.regularized_covariances = table.regularized;
  result.snippets.reserve(plan.starts.size());
  Eigen::MatrixXd z(plan.n_l, model.mode_count());
  for (std::int64_t start : plan.starts) {
    for (int t = 0; t < plan.n_l; ++t) {
      for (int m = 1; m <= model.mode_count(); ++m) {
        z(t, m - 1) = residual(ds, model, start + t, m);
      }
    }
    double ll;
    const std::size_t arg = table.best(z, &ll);
    const auto& hyp = table.hypotheses[arg];
    for (int t = 0; t + 1 < plan.n_l; ++t) {
      result.counts.add(hyp[static_cast<std::size_t>(t)],
                        hyp[static_cast<std::size_t>(t + 1)]);
    }
    result.snippets.push_back(DecodedSnippet{start, hyp, ll});
  }
  return result;
}

TransitionCounts true_snippet_counts(const Dataset& ds, const SnippetPlan& plan) {
  if (!ds.truth) {
    throw std::invalid_argument("true_snippet_counts: dataset carries no truth");
  }
  int n = 0;
  for (int mode : ds.truth->delta) n = std::max(n, mode);
  if (ds.truth->model) n = std::max(n, ds.truth->model->mode_count());
  TransitionCounts counts(n);
  for (std::int64_t start : plan.starts) {
    for (int t = 0; t + 1 < plan.n_l; ++t) {
      counts.add(ds.truth->mode_at(start + t), ds.truth->mode_at(start + t + 1));
    }
  }
  return counts;
}

}  // namespace sarid
