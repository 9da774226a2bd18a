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
#include "sarid/sigma_search.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

namespace sarid {

namespace {

struct Probe {
  double sigma;
  double value;
};

std::pair<double, Eigen::VectorXd> svd_min(const MomentStats& stats, double sigma,
                                           double* max_sv = nullptr) {
  const Eigen::MatrixXd m = stats.combine(NoiseSpec::normal(sigma * sigma)).mean();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const Eigen::Index last = m.rows() - 1;
  if (max_sv) *max_sv = svd.singularValues()(0);
  Eigen::VectorXd v = svd.matrixV().col(last);
  // Undo the optional data prescaling so c_n lives in the raw monomial basis.
  const Eigen::VectorXd scales = stats.monomial_scales();
  if ((scales.array() != 1.0).any()) {
    v = v.cwiseQuotient(scales);
    v.normalize();
  }
  return {svd.singularValues()(last), v};
}

double value_at(const MomentStats& stats, double sigma) {
  return svd_min(stats, sigma).first;
}

/// Golden-section minimization on [lo, hi] down to the given width; returns
/// the best probed point (endpoints included).
Probe golden_min(const MomentStats& stats, double lo, double hi, double width) {
  static const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  Probe best{lo, value_at(stats, lo)};
  auto consider = [&](double s, double v) {
    if (v < best.value || (v == best.value && s < best.sigma)) best = {s, v};
  };
  consider(hi, value_at(stats, hi));
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = value_at(stats, x1);
  double f2 = value_at(stats, x2);
  consider(x1, f1);
  consider(x2, f2);
  while (b - a > width) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = value_at(stats, x1);
      consider(x1, f1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = value_at(stats, x2);
      consider(x2, f2);
    }
  }
  return best;
}

}  // namespace

std::pair<double, Eigen::VectorXd> sigma_objective(const MomentStats& stats,
                                                   double sigma) {
  if (sigma < 0.0) throw std::invalid_argument("sigma_objective: sigma < 0");
  return svd_min(stats, sigma);
}

std::pair<double, Eigen::VectorXd> sigma_objective(const Dataset& ds,
                                                   const VeroneseSpec& spec,
                                                   double sigma) {
  return sigma_objective(MomentStats(ds, spec), sigma);
}

SigmaEstimate estimate_sigma(const MomentStats& stats, SigmaSearchOptions opts) {
  if (opts.grid < 8) throw std::invalid_argument("estimate_sigma: grid must be >= 8");
  double sigma_max = opts.sigma_max > 0.0 ? opts.sigma_max : stats.y_std();
  if (!(sigma_max > 0.0)) {
    // Constant output; the only admissible noise level is zero.
    sigma_max = 1.0;
  }

  SigmaEstimate est;
  est.sigma_max_used = sigma_max;

  double max_sv0 = 0.0;
  svd_min(stats, 0.0, &max_sv0);
  est.epsilon_used = opts.epsilon >= 0.0 ? opts.epsilon : 1e-4 * max_sv0;

  const double step = sigma_max / static_cast<double>(opts.grid - 1);
  const double refine_width = sigma_max / 1e4;

  // Ascending scan. The objective can have several near-zero dips: besides
  // the one at the true sigma, other eigenvalues of the corrected matrix
  // cross zero at larger sigma. Honoring the smallest-sigma rule means
  // stopping at the first dip that reaches the threshold, and because a
  // coarse grid straddles a dip that is much narrower than the spacing, the
  // threshold is tested on the golden-refined value of each bracketed local
  // minimum, not just on raw grid values.
  std::vector<double> values(static_cast<std::size_t>(opts.grid));
  Probe global_best{0.0, std::numeric_limits<double>::infinity()};
  bool global_best_refined = false;
  auto track = [&](const Probe& p, bool refined) {
    if (p.value < global_best.value ||
        (p.value == global_best.value && p.sigma < global_best.sigma)) {
      global_best = p;
      global_best_refined = refined;
    }
  };

  std::optional<Probe> hit;
  for (int i = 0; i < opts.grid && !hit; ++i) {
    const double s = step * static_cast<double>(i);
    values[static_cast<std::size_t>(i)] = value_at(stats, s);
    const double v = values[static_cast<std::size_t>(i)];
    track({s, v}, i > 0 && i < opts.grid - 1);
    if (v < est.epsilon_used) {
      if (i == 0) {
        // No smaller sigma exists; the smallest-sigma rule is exact here.
        hit = Probe{0.0, v};
      } else {
        const double hi = std::min(s + step, sigma_max);
        Probe refined = golden_min(stats, s - step, hi, refine_width);
        if (v < refined.value) refined = {s, v};
        hit = refined;
      }
      break;
    }
    // Bracketed local minimum one step back: refine and test the dip bottom.
    if (i >= 2 && values[static_cast<std::size_t>(i - 1)] <=
                      values[static_cast<std::size_t>(i - 2)] &&
        values[static_cast<std::size_t>(i - 1)] <= v) {
      const Probe refined = golden_min(stats, s - 2.0 * step, s, refine_width);
      track(refined, true);
      if (refined.value < est.epsilon_used) hit = refined;
    }
  }

  Probe result{0.0, values[0]};
  if (hit) {
    est.status = SigmaSearchStatus::kThresholdHit;
    result = *hit;
  } else {
    est.status = SigmaSearchStatus::kGlobalMin;
    result = global_best;
    if (!global_best_refined) {
      est.bracketed = false;
      est.note = "grid minimum at interval endpoint; no bracket to refine";
    }
  }

  auto [value, vec] = svd_min(stats, result.sigma);
  est.sigma = result.sigma;
  est.min_singular_value = value;
  est.c_n = vec;
  return est;
}

SigmaEstimate estimate_sigma(const Dataset& ds, const VeroneseSpec& spec,
                             SigmaSearchOptions opts) {
  return estimate_sigma(MomentStats(ds, spec), opts);
}

}  // namespace sarid
