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
#ifndef SARID_EXPERIMENT_HPP
#define SARID_EXPERIMENT_HPP

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sarid/decoder.hpp"
#include "sarid/extraction.hpp"
#include "sarid/ptm.hpp"
#include "sarid/sigma_search.hpp"
#include "sarid/simulator.hpp"

namespace sarid {

struct PipelineOptions {
  int n = 2;                     ///< subsystem count (an upper bound is assumed known)
  int n_l = 2;                   ///< snippet length
  SigmaSearchOptions sigma_search;
  double smoothing = 0.0;
  std::int64_t pool = 0;
  int restarts = 20;
  std::uint64_t seed = 0;        ///< clustering restart seed
  bool use_true_model = false;   ///< ablation: decode with the true coefficients
  bool use_true_sigma = false;   ///< ablation: decode with the true sigma
};

/// Full identification result for one dataset.
struct PipelineResult {
  SigmaEstimate sigma_estimate;
  std::vector<Eigen::VectorXd> coefficient_vectors;  ///< aligned to truth labels when known
  std::optional<SarModel> estimated_model;
  std::optional<MatchResult> match;  ///< when the generating model is known
  std::optional<PtmEstimate> ptm;
  std::int64_t snippet_count = 0;
  DecodeDiagnostics decode_diagnostics;
  double sigma_used = 0.0;  ///< sigma fed to the decoder

  // Metrics, NaN when the needed truth is absent.
  double norm = std::numeric_limits<double>::quiet_NaN();
  double gamma = std::numeric_limits<double>::quiet_NaN();
  double decode_accuracy = std::numeric_limits<double>::quiet_NaN();
  double coeff_err_max = std::numeric_limits<double>::quiet_NaN();
};

/// simulate-free identification chain: estimate sigma and c_n, extract the
/// subsystems, decode snippets, estimate the transition matrix, attach
/// truth-based metrics when the dataset carries truth.
PipelineResult identify_pipeline(const Dataset& ds, const PipelineOptions& opts);

struct ExperimentConfig {
  std::optional<SarModel> model;  ///< absent: drawn per run from the ranges below
  int random_n = 2;
  int random_n_a = 1;
  int random_n_c = 1;
  double random_a_min = -0.9, random_a_max = 0.9;
  double random_c_min = -2.0, random_c_max = 2.0;
  std::optional<TransitionMatrix> ptm;  ///< absent: flat-simplex rows per run

  std::vector<double> sigma2 = {0.01};
  std::vector<std::int64_t> N = {1000000};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  int n_l = 2;

  double epsilon = -1.0;   ///< sigma-search threshold; < 0 = auto
  double sigma_max = 0.0;  ///< 0 = auto (sample std of y)
  int grid = 64;
  double smoothing = 0.0;
  std::int64_t pool = 0;

  InputKind input = InputKind::kUniform;
  double input_amplitude = 1.0;
  double state_bound = 1e6;
  bool use_true_model = false;
  bool use_true_sigma = false;

  std::string outdir;        ///< empty: no files written
  bool save_datasets = false;
  int workers = 0;           ///< 0: SARID_WORKERS env, else 1

  void validate() const;
};

std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);

struct RunResult {
  int index = 0;
  std::uint64_t seed = 0;
  double sigma2 = 0.0;
  std::int64_t N = 0;
  std::string error;  ///< empty = success

  std::optional<TransitionMatrix> true_ptm;
  std::optional<TransitionMatrix> est_ptm;
  std::vector<Eigen::VectorXd> est_coeffs;
  double gamma = 0.0;
  double sigma_star = 0.0;
  std::string sigma_status;
  double norm = 0.0;
  double coeff_err_max = 0.0;
  double decode_accuracy = 0.0;
  double wall_seconds = 0.0;

  bool ok() const { return error.empty(); }
};

struct ExperimentReport {
  std::vector<RunResult> runs;

  bool all_ok() const;
  double median_norm() const;  ///< over successful runs
  std::string to_csv() const;  ///< Table-1-style columns plus diagnostics
  std::string to_json() const;
};

/// One run per (sigma2, N, seed) triple. Random draws inside a run derive
/// from its seed, so adding more triples never perturbs existing runs. Runs
/// execute in parallel up to the worker limit; outputs are deterministic
/// regardless. Per-run failures land in RunResult::error, the rest proceed.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

struct SweepRow {
  double sigma2 = 0.0;
  std::uint64_t seed = 0;
  std::int64_t N = 0;
  double norm = 0.0;
  double sigma_star = 0.0;
  double gamma = 0.0;
  double coeff_err_max = 0.0;
  double decode_accuracy = 0.0;
  std::string error;
};

/// Convergence sweep: one simulation per (sigma2, seed) at max(N), truncated
/// to each requested N so the rows are nested prefixes of the same record.
std::vector<SweepRow> run_convergence_sweep(const ExperimentConfig& cfg);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);

}  // namespace sarid

#endif  // SARID_EXPERIMENT_HPP
