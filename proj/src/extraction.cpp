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
#include "sarid/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "sarid/rng.hpp"

namespace sarid {

namespace {

constexpr double kParallelCentersTol = 0.9999;  // |cos| above this: same plane
constexpr double kLeadingComponentTol = 1e-9;

double ipow(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

struct Clustering {
  std::vector<Eigen::VectorXd> centers;
  std::vector<int> assignment;
  double objective = -std::numeric_limits<double>::infinity();
  bool valid = false;
};

/// One spherical k-means run with sign folding (g and -g are the same
/// direction). Similarity is |d . c|; assignments and updates fold signs.
Clustering lloyd(const std::vector<Eigen::VectorXd>& dirs,
                 std::vector<Eigen::VectorXd> centers) {
  const int n = static_cast<int>(centers.size());
  const std::size_t m = dirs.size();
  Clustering out;
  out.assignment.assign(m, -1);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < m; ++i) {
      int best = 0;
      double best_sim = -1.0;
      for (int j = 0; j < n; ++j) {
        const double sim = std::abs(dirs[i].dot(centers[static_cast<std::size_t>(j)]));
        if (sim > best_sim) {
          best_sim = sim;
          best = j;
        }
      }
      if (out.assignment[i] != best) {
        out.assignment[i] = best;
        changed = true;
      }
    }
    std::vector<Eigen::VectorXd> means(static_cast<std::size_t>(n));
    std::vector<std::int64_t> sizes(static_cast<std::size_t>(n), 0);
    for (int j = 0; j < n; ++j) {
      means[static_cast<std::size_t>(j)] =
          Eigen::VectorXd::Zero(dirs.front().size());
    }
    for (std::size_t i = 0; i < m; ++i) {
      const int j = out.assignment[i];
      const double sign =
          dirs[i].dot(centers[static_cast<std::size_t>(j)]) >= 0.0 ? 1.0 : -1.0;
      means[static_cast<std::size_t>(j)] += sign * dirs[i];
      ++sizes[static_cast<std::size_t>(j)];
    }
    for (int j = 0; j < n; ++j) {
      if (sizes[static_cast<std::size_t>(j)] == 0 ||
          means[static_cast<std::size_t>(j)].norm() == 0.0) {
        return out;  // dead cluster; caller treats run as failed
      }
      centers[static_cast<std::size_t>(j)] =
          means[static_cast<std::size_t>(j)].normalized();
    }
    if (!changed && iter > 0) break;
  }
  out.centers = std::move(centers);
  out.objective = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    out.objective +=
        std::abs(dirs[i].dot(out.centers[static_cast<std::size_t>(out.assignment[i])]));
  }
  out.valid = true;
  return out;
}

std::vector<Eigen::VectorXd> greedy_seeds(const std::vector<Eigen::VectorXd>& dirs,
                                          int n) {
  std::vector<Eigen::VectorXd> centers;
  centers.push_back(dirs.front());
  while (static_cast<int>(centers.size()) < n) {
    std::size_t arg = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      double align = 0.0;
      for (const auto& c : centers) {
        align = std::max(align, std::abs(dirs[i].dot(c)));
      }
      if (align < best) {
        best = align;
        arg = i;
      }
    }
    centers.push_back(dirs[arg]);
  }
  return centers;
}

}  // namespace

Eigen::VectorXd polynomial_gradient(const Eigen::VectorXd& c_n,
                                    const VeroneseSpec& spec,
                                    const Eigen::VectorXd& point) {
  if (c_n.size() != spec.size() || point.size() != spec.dims()) {
    throw std::invalid_argument("polynomial_gradient: dimension mismatch");
  }
  Eigen::VectorXd g = Eigen::VectorXd::Zero(spec.dims());
  for (Eigen::Index i = 0; i < spec.size(); ++i) {
    if (c_n(i) == 0.0) continue;
    const auto& e = spec.exponent(i);
    for (int j = 0; j < spec.dims(); ++j) {
      if (e[j] == 0) continue;
      double m = static_cast<double>(e[j]);
      for (int t = 0; t < spec.dims(); ++t) {
        m *= ipow(point(t), t == j ? e[t] - 1 : e[t]);
      }
      g(j) += c_n(i) * m;
    }
  }
  return g;
}

std::vector<Eigen::VectorXd> extract_subsystems(const Eigen::VectorXd& c_n,
                                                const VeroneseSpec& spec,
                                                const Dataset& ds, int n,
                                                const ExtractionOptions& opts) {
  if (n < 1) throw std::invalid_argument("extract_subsystems: n must be >= 1");
  const int s = spec.dims();

  if (n == 1) {
    // Degree-1 polynomial: c_1 is the coefficient vector up to scale.
    if (spec.degree() != 1) {
      throw std::invalid_argument("extract_subsystems: spec degree != n");
    }
    if (std::abs(c_n(0)) <= kLeadingComponentTol * c_n.norm()) {
      throw DegenerateClustersError(
          "extract_subsystems: vanishing leading coefficient");
    }
    return {c_n * (-1.0 / c_n(0))};
  }
  if (spec.degree() != n) {
    throw std::invalid_argument("extract_subsystems: spec degree != n");
  }

  std::int64_t pool = opts.pool;
  if (pool <= 0) pool = std::min<std::int64_t>(10000, std::max<std::int64_t>(ds.N / 10, 10 * n));
  pool = std::min(pool, ds.N);
  if (pool < n) {
    throw std::invalid_argument("extract_subsystems: pool smaller than n");
  }

  // Score every sample by its normalized residual; keep the pool of points
  // sitting closest to some hyperplane of the arrangement.
  std::vector<double> scores(static_cast<std::size_t>(ds.N));
  for (std::int64_t k = 1; k <= ds.N; ++k) {
    const Eigen::VectorXd r = regressor(ds, k, false);
    const double p = c_n.dot(veronese_map(r, spec));
    const double gnorm = polynomial_gradient(c_n, spec, r).norm();
    scores[static_cast<std::size_t>(k - 1)] =
        gnorm > 0.0 ? std::abs(p) / gnorm : std::numeric_limits<double>::infinity();
  }
  std::vector<std::int64_t> order(static_cast<std::size_t>(ds.N));
  std::iota(order.begin(), order.end(), std::int64_t{1});
  std::nth_element(order.begin(), order.begin() + (pool - 1), order.end(),
                   [&](std::int64_t a, std::int64_t b) {
                     const double sa = scores[static_cast<std::size_t>(a - 1)];
                     const double sb = scores[static_cast<std::size_t>(b - 1)];
                     return sa != sb ? sa < sb : a < b;
                   });
  order.resize(static_cast<std::size_t>(pool));
  std::sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
    const double sa = scores[static_cast<std::size_t>(a - 1)];
    const double sb = scores[static_cast<std::size_t>(b - 1)];
    return sa != sb ? sa < sb : a < b;
  });

  std::vector<Eigen::VectorXd> dirs;
  dirs.reserve(static_cast<std::size_t>(pool));
  for (std::int64_t k : order) {
    Eigen::VectorXd g = polynomial_gradient(c_n, spec, regressor(ds, k, false));
    const double norm = g.norm();
    if (norm == 0.0) continue;  // exact critical point carries no direction
    dirs.push_back(g / norm);
  }
  if (static_cast<int>(dirs.size()) < n) {
    throw DegenerateClustersError(
        "extract_subsystems: not enough informative gradients");
  }

  Clustering best;
  std::mt19937_64 restart_rng(split_seed(opts.seed, 1));
  for (int restart = 0; restart < std::max(1, opts.restarts); ++restart) {
    std::vector<Eigen::VectorXd> seeds;
    if (restart == 0) {
      seeds = greedy_seeds(dirs, n);
    } else {
      std::vector<std::size_t> idx(dirs.size());
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      std::shuffle(idx.begin(), idx.end(), restart_rng);
      for (int j = 0; j < n; ++j) seeds.push_back(dirs[idx[static_cast<std::size_t>(j)]]);
    }
    Clustering run = lloyd(dirs, std::move(seeds));
    if (run.valid && run.objective > best.objective) best = std::move(run);
  }
  if (!best.valid) {
    throw DegenerateClustersError(
        "extract_subsystems: fewer than n distinguishable gradient clusters");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(best.centers[static_cast<std::size_t>(i)]
                       .dot(best.centers[static_cast<std::size_t>(j)])) >
          kParallelCentersTol) {
        throw DegenerateClustersError(
            "extract_subsystems: two gradient clusters are parallel");
      }
    }
  }

  std::vector<Eigen::VectorXd> result;
  result.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const Eigen::VectorXd& c = best.centers[static_cast<std::size_t>(j)];
    if (std::abs(c(0)) <= kLeadingComponentTol) {
      throw DegenerateClustersError(
          "extract_subsystems: cluster normal has no output component");
    }
    result.push_back(c * (-1.0 / c(0)));
  }
  std::sort(result.begin(), result.end(),
            [s](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
              for (int t = 0; t < s; ++t) {
                if (a(t) != b(t)) return a(t) < b(t);
              }
              return false;
            });
  return result;
}

MatchResult match_to_truth(const std::vector<Eigen::VectorXd>& estimated,
                           const std::vector<Eigen::VectorXd>& truth) {
  if (estimated.size() != truth.size()) {
    throw std::invalid_argument("match_to_truth: counts differ");
  }
  const int n = static_cast<int>(truth.size());
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best_perm = perm;
  double best_total = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
      total += (estimated[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])] -
                truth[static_cast<std::size_t>(j)])
                   .lpNorm<1>();
    }
    if (total < best_total) {
      best_total = total;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  MatchResult out;
  out.total_error = best_total;
  out.permutation.resize(static_cast<std::size_t>(n));
  out.abs_errors.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const int i = best_perm[static_cast<std::size_t>(j)];
    out.permutation[static_cast<std::size_t>(j)] = i + 1;
    const Eigen::VectorXd diff =
        (estimated[static_cast<std::size_t>(i)] - truth[static_cast<std::size_t>(j)])
            .cwiseAbs();
    out.abs_errors[static_cast<std::size_t>(j)] =
        std::vector<double>(diff.data(), diff.data() + diff.size());
    out.max_error = std::max(out.max_error, diff.maxCoeff());
  }
  return out;
}

SarModel model_from_coefficient_vectors(const std::vector<Eigen::VectorXd>& b_list,
                                        int n_a, int n_c) {
  std::vector<SubsystemParams> subsystems;
  subsystems.reserve(b_list.size());
  for (const auto& b : b_list) {
    if (b.size() != n_a + n_c + 1) {
      throw std::invalid_argument("model_from_coefficient_vectors: bad length");
    }
    SubsystemParams s;
    s.a.assign(b.data() + 1, b.data() + 1 + n_a);
    s.c.assign(b.data() + 1 + n_a, b.data() + 1 + n_a + n_c);
    subsystems.push_back(std::move(s));
  }
  return SarModel(n_a, n_c, std::move(subsystems));
}

}  // namespace sarid
