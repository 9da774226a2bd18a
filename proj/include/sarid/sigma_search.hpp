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
#ifndef SARID_SIGMA_SEARCH_HPP
#define SARID_SIGMA_SEARCH_HPP

#include <string>

#include "sarid/veronese.hpp"

namespace sarid {

enum class SigmaSearchStatus { kThresholdHit, kGlobalMin };

struct SigmaEstimate {
  double sigma = 0.0;
  double min_singular_value = 0.0;
  Eigen::VectorXd c_n;  ///< unit right singular vector, unscaled basis
  SigmaSearchStatus status = SigmaSearchStatus::kGlobalMin;
  bool bracketed = true;   ///< false when the grid minimum sat on an endpoint
  double epsilon_used = 0.0;
  double sigma_max_used = 0.0;
  std::string note;        ///< diagnostics (e.g. why refinement was skipped)
};

struct SigmaSearchOptions {
  double sigma_max = 0.0;  ///< <= 0: use the sample std of y
  int grid = 64;           ///< uniform grid points on [0, sigma_max], >= 8
  double epsilon = -1.0;   ///< < 0: 1e-3 x largest singular value at sigma 0
};

/// Smallest singular value of the corrected matrix at this sigma, plus the
/// associated right singular vector (unit norm, mapped to the unscaled
/// monomial basis when the stats were built with prescaling).
std::pair<double, Eigen::VectorXd> sigma_objective(const MomentStats& stats,
                                                   double sigma);

/// Convenience one-shot form; prefer the MomentStats overloads when probing
/// more than one sigma, the data pass happens once there.
std::pair<double, Eigen::VectorXd> sigma_objective(const Dataset& ds,
                                                   const VeroneseSpec& spec,
                                                   double sigma);

/// Scan an ascending uniform grid on [0, sigma_max]; return the first sigma
/// whose objective drops below epsilon (threshold-hit), golden-section
/// refined inside the bracketing grid interval. When no grid point passes
/// the threshold, refine around the grid-global minimizer instead
/// (global-min). A grid minimum sitting on an endpoint cannot be bracketed;
/// it is returned unrefined with bracketed = false.
SigmaEstimate estimate_sigma(const MomentStats& stats, SigmaSearchOptions opts = {});
SigmaEstimate estimate_sigma(const Dataset& ds, const VeroneseSpec& spec,
                             SigmaSearchOptions opts = {});

}  // namespace sarid

#endif  // SARID_SIGMA_SEARCH_HPP
