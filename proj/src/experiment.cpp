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
#include "sarid/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <json.hpp>
#include <thread>

#include "sarid/io.hpp"
#include "sarid/rng.hpp"

namespace sarid {

namespace {

using nlohmann::json;

// Per-run derivation streams (simulate's own streams are 1..3).
constexpr std::uint64_t kStreamRandomPtm = 10;
constexpr std::uint64_t kStreamRandomModel = 11;
constexpr std::uint64_t kStreamExtraction = 12;

TransitionMatrix random_ptm(int n, std::uint64_t seed) {
  // Flat Dirichlet rows: normalized exponentials of uniforms.
  CounterRng rng(seed, kStreamRandomPtm);
  Eigen::MatrixXd p(n, n);
  std::uint64_t ctr = 0;
  for (int i = 0; i < n; ++i) {
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
      const double u = rng.uniform01(ctr++);
      p(i, j) = -std::log1p(-u);
      total += p(i, j);
    }
    for (int j = 0; j < n; ++j) p(i, j) /= total;
  }
  return TransitionMatrix(std::move(p));
}

SarModel random_model(const ExperimentConfig& cfg, std::uint64_t seed) {
  CounterRng rng(seed, kStreamRandomModel);
  std::uint64_t ctr = 0;
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<SubsystemParams> subsystems;
    for (int m = 0; m < cfg.random_n; ++m) {
      SubsystemParams s;
      for (int j = 0; j < cfg.random_n_a; ++j) {
        s.a.push_back(rng.uniform(ctr++, cfg.random_a_min, cfg.random_a_max));
      }
      for (int j = 0; j < cfg.random_n_c; ++j) {
        s.c.push_back(rng.uniform(ctr++, cfg.random_c_min, cfg.random_c_max));
      }
      subsystems.push_back(std::move(s));
    }
    try {
      return SarModel(cfg.random_n_a, cfg.random_n_c, std::move(subsystems));
    } catch (const std::invalid_argument&) {
      // coincident draw; try again
    }
  }
  throw std::runtime_error("random_model: could not draw distinct subsystems");
}

json model_to_json(const SarModel& m) {
  json j;
  j["n"] = m.mode_count();
  j["n_a"] = m.ar_order();
  j["n_c"] = m.input_order();
  j["subsystems"] = json::array();
  for (const auto& s : m.subsystems()) {
    j["subsystems"].push_back(json{{"a", s.a}, {"c", s.c}});
  }
  return j;
}

SarModel model_from_json(const json& j) {
  std::vector<SubsystemParams> subsystems;
  for (const auto& s : j.at("subsystems")) {
    subsystems.push_back(SubsystemParams{s.at("a").get<std::vector<double>>(),
                                         s.at("c").get<std::vector<double>>()});
  }
  return SarModel(j.at("n_a").get<int>(), j.at("n_c").get<int>(),
                  std::move(subsystems));
}

std::vector<double> ptm_flat(const TransitionMatrix& p) {
  std::vector<double> flat;
  for (Eigen::Index i = 0; i < p.matrix().rows(); ++i) {
    for (Eigen::Index j = 0; j < p.matrix().cols(); ++j) {
      flat.push_back(p.matrix()(i, j));
    }
  }
  return flat;
}

TransitionMatrix ptm_from_flat(const std::vector<double>& flat) {
  const int n = static_cast<int>(std::llround(std::sqrt(static_cast<double>(flat.size()))));
  if (n * n != static_cast<int>(flat.size())) {
    throw std::invalid_argument("ptm: flat length is not a square");
  }
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = flat[static_cast<std::size_t>(i * n + j)];
  return TransitionMatrix(std::move(m));
}

std::string ptm_field(const std::optional<TransitionMatrix>& p) {
  if (!p) return "";
  std::string out;
  for (double v : ptm_flat(*p)) {
    if (!out.empty()) out += ' ';
    out += format_double(v);
  }
  return out;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

int resolve_workers(int cfg_workers) {
  if (cfg_workers > 0) return cfg_workers;
  if (const char* env = std::getenv("SARID_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return std::min(w, 64);
  }
  return 1;
}

struct RunSpec {
  int index;
  double sigma2;
  std::int64_t N;
  std::uint64_t seed;
};

RunResult execute_run(const ExperimentConfig& cfg, const RunSpec& spec) {
  RunResult r;
  r.index = spec.index;
  r.seed = spec.seed;
  r.sigma2 = spec.sigma2;
  r.N = spec.N;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const SarModel model =
        cfg.model ? *cfg.model : random_model(cfg, spec.seed);
    const TransitionMatrix ptm =
        cfg.ptm ? *cfg.ptm : random_ptm(model.mode_count(), spec.seed);
    r.true_ptm = ptm;

    SimOptions sim;
    sim.N = spec.N;
    sim.seed = spec.seed;
    sim.input = cfg.input;
    sim.input_amplitude = cfg.input_amplitude;
    sim.state_bound = cfg.state_bound;
    const Dataset ds = simulate(model, ptm, NoiseSpec::normal(spec.sigma2), sim);

    PipelineOptions popts;
    popts.n = model.mode_count();
    popts.n_l = cfg.n_l;
    popts.sigma_search = SigmaSearchOptions{cfg.sigma_max, cfg.grid, cfg.epsilon};
    popts.smoothing = cfg.smoothing;
    popts.pool = cfg.pool;
    popts.seed = split_seed(spec.seed, kStreamExtraction);
    popts.use_true_model = cfg.use_true_model;
    popts.use_true_sigma = cfg.use_true_sigma;

    const PipelineResult res = identify_pipeline(ds, popts);
    r.est_ptm = res.ptm ? std::optional<TransitionMatrix>(res.ptm->ptm) : std::nullopt;
    r.est_coeffs = res.coefficient_vectors;
    r.gamma = res.gamma;
    r.sigma_star = res.sigma_estimate.sigma;
    r.sigma_status = res.sigma_estimate.status == SigmaSearchStatus::kThresholdHit
                         ? "threshold-hit"
                         : "global-min";
    r.norm = res.norm;
    r.coeff_err_max = res.coeff_err_max;
    r.decode_accuracy = res.decode_accuracy;

    if (!cfg.outdir.empty() && cfg.save_datasets) {
      char name[64];
      std::snprintf(name, sizeof(name), "dataset_%04d.csv", spec.index);
      save_dataset_csv(ds, std::filesystem::path(cfg.outdir) / name);
    }
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

json run_to_json(const RunResult& r) {
  json j;
  j["index"] = r.index;
  j["seed"] = r.seed;
  j["sigma2"] = r.sigma2;
  j["N"] = r.N;
  j["error"] = r.error;
  j["wall_seconds"] = r.wall_seconds;
  if (r.true_ptm) j["true_ptm"] = ptm_flat(*r.true_ptm);
  if (r.est_ptm) j["estimated_ptm"] = ptm_flat(*r.est_ptm);
  if (!r.est_coeffs.empty()) {
    json coeffs = json::array();
    for (const auto& b : r.est_coeffs) {
      coeffs.push_back(std::vector<double>(b.data(), b.data() + b.size()));
    }
    j["estimated_coefficient_vectors"] = coeffs;
  }
  if (r.ok()) {
    j["gamma"] = r.gamma;
    j["sigma_star"] = r.sigma_star;
    j["sigma_status"] = r.sigma_status;
    if (std::isfinite(r.norm)) j["norm_frobenius"] = r.norm;
    if (std::isfinite(r.coeff_err_max)) j["coeff_err_max"] = r.coeff_err_max;
    if (std::isfinite(r.decode_accuracy)) j["decode_accuracy"] = r.decode_accuracy;
  }
  return j;
}

}  // namespace

PipelineResult identify_pipeline(const Dataset& ds, const PipelineOptions& opts) {
  ds.validate();
  if (opts.n < 1) throw std::invalid_argument("identify_pipeline: n must be >= 1");
  const VeroneseSpec spec(opts.n, ds.n_a + ds.n_c + 1);
  const MomentStats stats(ds, spec);

  PipelineResult out;
  out.sigma_estimate = estimate_sigma(stats, opts.sigma_search);

  ExtractionOptions eopts;
  eopts.pool = opts.pool;
  eopts.restarts = opts.restarts;
  eopts.seed = opts.seed;
  std::vector<Eigen::VectorXd> coeffs =
      extract_subsystems(out.sigma_estimate.c_n, spec, ds, opts.n, eopts);

  const bool have_truth_model = ds.truth && ds.truth->model;
  if (have_truth_model) {
    std::vector<Eigen::VectorXd> truth_b;
    for (const auto& s : ds.truth->model->subsystems()) {
      truth_b.push_back(coefficient_vector(s));
    }
    MatchResult m = match_to_truth(coeffs, truth_b);
    // Relabel the estimate so mode j means the same subsystem as truth mode j;
    // the transition-matrix comparison is meaningless otherwise.
    std::vector<Eigen::VectorXd> aligned;
    aligned.reserve(coeffs.size());
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      aligned.push_back(coeffs[static_cast<std::size_t>(m.permutation[j] - 1)]);
    }
    coeffs = std::move(aligned);
    out.coeff_err_max = m.max_error;
    out.match = std::move(m);
  }
  out.coefficient_vectors = coeffs;
  out.estimated_model = model_from_coefficient_vectors(coeffs, ds.n_a, ds.n_c);

  const SarModel& decode_model = (opts.use_true_model && have_truth_model)
                                     ? *ds.truth->model
                                     : *out.estimated_model;
  double sigma_decode = out.sigma_estimate.sigma;
  if (opts.use_true_sigma && ds.truth && ds.truth->noise) {
    sigma_decode = ds.truth->noise->sigma();
  }
  out.sigma_used = sigma_decode;

  const SnippetPlan plan = snippet_plan(ds.N, ds.n_a, opts.n_l);
  const DecodeResult dec = decode_all(ds, decode_model, sigma_decode, plan);
  out.snippet_count = static_cast<std::int64_t>(plan.starts.size());
  out.decode_diagnostics = dec.diagnostics;
  out.ptm = estimate_ptm(dec.counts, opts.smoothing);

  if (ds.truth) {
    out.gamma = noise_to_output_ratio(ds);
    std::int64_t hits = 0, total = 0;
    for (const auto& snip : dec.snippets) {
      for (int t = 0; t < plan.n_l; ++t) {
        hits += snip.hypothesis[static_cast<std::size_t>(t)] ==
                        ds.truth->mode_at(snip.start + t)
                    ? 1
                    : 0;
        ++total;
      }
    }
    out.decode_accuracy =
        total > 0 ? static_cast<double>(hits) / static_cast<double>(total)
                  : std::numeric_limits<double>::quiet_NaN();
    if (ds.truth->ptm) {
      out.norm = normalized_frobenius(out.ptm->ptm, *ds.truth->ptm);
    }
  }
  return out;
}

void ExperimentConfig::validate() const {
  if (sigma2.empty() || N.empty() || seeds.empty()) {
    throw std::invalid_argument("config: sigma2, N and seeds must be non-empty");
  }
  for (double s2 : sigma2) {
    if (!(s2 >= 0.0)) throw std::invalid_argument("config: sigma2 must be >= 0");
  }
  for (std::int64_t n : N) {
    if (n < 1) throw std::invalid_argument("config: N must be >= 1");
  }
  if (n_l < 1) throw std::invalid_argument("config: n_l must be >= 1");
  if (grid < 8) throw std::invalid_argument("config: grid must be >= 8");
  if (smoothing < 0.0) throw std::invalid_argument("config: smoothing must be >= 0");
  if (!(input_amplitude > 0.0)) {
    throw std::invalid_argument("config: input amplitude must be positive");
  }
  if (!model) {
    if (random_n < 1 || random_n_a < 1 || random_n_c < 0) {
      throw std::invalid_argument("config: bad random model shape");
    }
  }
  if (ptm && model && ptm->order() != model->mode_count()) {
    throw std::invalid_argument("config: ptm order disagrees with model n");
  }
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  if (cfg.model) {
    j["model"] = model_to_json(*cfg.model);
  } else {
    j["model"] = "random";
    j["random_model"] = json{{"n", cfg.random_n},
                             {"n_a", cfg.random_n_a},
                             {"n_c", cfg.random_n_c},
                             {"a_range", {cfg.random_a_min, cfg.random_a_max}},
                             {"c_range", {cfg.random_c_min, cfg.random_c_max}}};
  }
  if (cfg.ptm) {
    j["ptm"] = ptm_flat(*cfg.ptm);
  } else {
    j["ptm"] = "random";
  }
  j["sigma2"] = cfg.sigma2;
  j["N"] = cfg.N;
  j["seeds"] = cfg.seeds;
  j["n_l"] = cfg.n_l;
  j["epsilon"] = cfg.epsilon;
  j["sigma_max"] = cfg.sigma_max;
  j["grid"] = cfg.grid;
  j["smoothing"] = cfg.smoothing;
  j["pool"] = cfg.pool;
  j["input"] = cfg.input == InputKind::kPrbs ? "prbs" : "uniform";
  j["input_amplitude"] = cfg.input_amplitude;
  j["state_bound"] = cfg.state_bound;
  j["use_true_model"] = cfg.use_true_model;
  j["use_true_sigma"] = cfg.use_true_sigma;
  j["outdir"] = cfg.outdir;
  j["save_datasets"] = cfg.save_datasets;
  j["workers"] = cfg.workers;
  return j.dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& text) {
  json j = json::parse(text);
  ExperimentConfig cfg;
  if (j.contains("model") && j["model"].is_object()) {
    cfg.model = model_from_json(j["model"]);
  }
  if (j.contains("random_model")) {
    const json& rm = j["random_model"];
    if (rm.contains("n")) cfg.random_n = rm["n"].get<int>();
    if (rm.contains("n_a")) cfg.random_n_a = rm["n_a"].get<int>();
    if (rm.contains("n_c")) cfg.random_n_c = rm["n_c"].get<int>();
    if (rm.contains("a_range")) {
      cfg.random_a_min = rm["a_range"][0].get<double>();
      cfg.random_a_max = rm["a_range"][1].get<double>();
    }
    if (rm.contains("c_range")) {
      cfg.random_c_min = rm["c_range"][0].get<double>();
      cfg.random_c_max = rm["c_range"][1].get<double>();
    }
  }
  if (j.contains("ptm") && j["ptm"].is_array()) {
    cfg.ptm = ptm_from_flat(j["ptm"].get<std::vector<double>>());
  }
  if (j.contains("sigma2")) cfg.sigma2 = j["sigma2"].get<std::vector<double>>();
  if (j.contains("N")) cfg.N = j["N"].get<std::vector<std::int64_t>>();
  if (j.contains("seeds")) cfg.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
  if (j.contains("n_l")) cfg.n_l = j["n_l"].get<int>();
  if (j.contains("epsilon")) cfg.epsilon = j["epsilon"].get<double>();
  if (j.contains("sigma_max")) cfg.sigma_max = j["sigma_max"].get<double>();
  if (j.contains("grid")) cfg.grid = j["grid"].get<int>();
  if (j.contains("smoothing")) cfg.smoothing = j["smoothing"].get<double>();
  if (j.contains("pool")) cfg.pool = j["pool"].get<std::int64_t>();
  if (j.contains("input")) {
    const std::string kind = j["input"].get<std::string>();
    if (kind == "uniform") {
      cfg.input = InputKind::kUniform;
    } else if (kind == "prbs") {
      cfg.input = InputKind::kPrbs;
    } else {
      throw std::invalid_argument("config: unknown input kind '" + kind + "'");
    }
  }
  if (j.contains("input_amplitude")) cfg.input_amplitude = j["input_amplitude"].get<double>();
  if (j.contains("state_bound")) cfg.state_bound = j["state_bound"].get<double>();
  if (j.contains("use_true_model")) cfg.use_true_model = j["use_true_model"].get<bool>();
  if (j.contains("use_true_sigma")) cfg.use_true_sigma = j["use_true_sigma"].get<bool>();
  if (j.contains("outdir")) cfg.outdir = j["outdir"].get<std::string>();
  if (j.contains("save_datasets")) cfg.save_datasets = j["save_datasets"].get<bool>();
  if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
  cfg.validate();
  return cfg;
}

bool ExperimentReport::all_ok() const {
  for (const auto& r : runs) {
    if (!r.ok()) return false;
  }
  return !runs.empty();
}

double ExperimentReport::median_norm() const {
  std::vector<double> norms;
  for (const auto& r : runs) {
    if (r.ok() && std::isfinite(r.norm)) norms.push_back(r.norm);
  }
  if (norms.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(norms.begin(), norms.end());
  const std::size_t m = norms.size() / 2;
  return norms.size() % 2 == 1 ? norms[m] : 0.5 * (norms[m - 1] + norms[m]);
}

// Wall time is deliberately absent: the CSV must be byte-for-byte
// reproducible across reruns of the same config. Timings live in the
// per-run JSON artifacts.
std::string ExperimentReport::to_csv() const {
  std::string out =
      "index,seed,sigma2,N,gamma,sigma_star,sigma_status,true_ptm,estimated_ptm,"
      "norm_frobenius,coeff_err_max,decode_accuracy,error\n";
  for (const auto& r : runs) {
    out += std::to_string(r.index);
    out += ',' + std::to_string(r.seed);
    out += ',' + format_double(r.sigma2);
    out += ',' + std::to_string(r.N);
    out += ',' + (r.ok() ? format_double(r.gamma) : std::string());
    out += ',' + (r.ok() ? format_double(r.sigma_star) : std::string());
    out += ',' + r.sigma_status;
    out += ',' + csv_escape(ptm_field(r.true_ptm));
    out += ',' + csv_escape(ptm_field(r.est_ptm));
    out += ',' + (r.ok() && std::isfinite(r.norm) ? format_double(r.norm) : std::string());
    out += ',' + (r.ok() && std::isfinite(r.coeff_err_max) ? format_double(r.coeff_err_max)
                                                           : std::string());
    out += ',' + (r.ok() && std::isfinite(r.decode_accuracy)
                      ? format_double(r.decode_accuracy)
                      : std::string());
    out += ',' + csv_escape(r.error);
    out += '\n';
  }
  return out;
}

std::string ExperimentReport::to_json() const {
  json j;
  j["runs"] = json::array();
  for (const auto& r : runs) j["runs"].push_back(run_to_json(r));
  const double med = median_norm();
  if (std::isfinite(med)) j["median_norm_frobenius"] = med;
  j["all_ok"] = all_ok();
  return j.dump(2) + "\n";
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<RunSpec> specs;
  int index = 0;
  for (double s2 : cfg.sigma2) {
    for (std::int64_t n : cfg.N) {
      for (std::uint64_t seed : cfg.seeds) {
        specs.push_back(RunSpec{index++, s2, n, seed});
      }
    }
  }

  ExperimentReport report;
  report.runs.resize(specs.size());
  const int workers = std::min<int>(resolve_workers(cfg.workers),
                                    static_cast<int>(specs.size()));
  if (workers <= 1) {
    for (const auto& spec : specs) {
      report.runs[static_cast<std::size_t>(spec.index)] = execute_run(cfg, spec);
    }
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= specs.size()) break;
        report.runs[i] = execute_run(cfg, specs[i]);
      }
    };
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  if (!cfg.outdir.empty()) {
    const std::filesystem::path dir(cfg.outdir);
    for (const auto& r : report.runs) {
      char name[64];
      std::snprintf(name, sizeof(name), "run_%04d.json", r.index);
      atomic_write_file(dir / name, run_to_json(r).dump(2) + "\n");
    }
    atomic_write_file(dir / "report.csv", report.to_csv());
    json summary;
    summary["config"] = json::parse(config_to_json(cfg));
    summary["report"] = json::parse(report.to_json());
    atomic_write_file(dir / "summary.json", summary.dump(2) + "\n");
  }
  return report;
}

std::vector<SweepRow> run_convergence_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.N.size() < 2) {
    throw std::invalid_argument("sweep: need at least two N values");
  }
  std::vector<std::int64_t> n_values = cfg.N;
  std::sort(n_values.begin(), n_values.end());
  const std::int64_t n_max = n_values.back();

  std::vector<SweepRow> rows;
  for (double s2 : cfg.sigma2) {
    for (std::uint64_t seed : cfg.seeds) {
      SweepRow base;
      base.sigma2 = s2;
      base.seed = seed;
      try {
        const SarModel model = cfg.model ? *cfg.model : random_model(cfg, seed);
        const TransitionMatrix ptm =
            cfg.ptm ? *cfg.ptm : random_ptm(model.mode_count(), seed);
        SimOptions sim;
        sim.N = n_max;
        sim.seed = seed;
        sim.input = cfg.input;
        sim.input_amplitude = cfg.input_amplitude;
        sim.state_bound = cfg.state_bound;
        const Dataset full = simulate(model, ptm, NoiseSpec::normal(s2), sim);

        for (std::int64_t n : n_values) {
          SweepRow row = base;
          row.N = n;
          try {
            const Dataset ds = n == n_max ? full : full.prefix(n);
            PipelineOptions popts;
            popts.n = model.mode_count();
            popts.n_l = cfg.n_l;
            popts.sigma_search =
                SigmaSearchOptions{cfg.sigma_max, cfg.grid, cfg.epsilon};
            popts.smoothing = cfg.smoothing;
            popts.pool = cfg.pool;
            popts.seed = split_seed(seed, kStreamExtraction);
            popts.use_true_model = cfg.use_true_model;
            popts.use_true_sigma = cfg.use_true_sigma;
            const PipelineResult res = identify_pipeline(ds, popts);
            row.norm = res.norm;
            row.sigma_star = res.sigma_estimate.sigma;
            row.gamma = res.gamma;
            row.coeff_err_max = res.coeff_err_max;
            row.decode_accuracy = res.decode_accuracy;
          } catch (const std::exception& e) {
            row.error = e.what();
          }
          rows.push_back(std::move(row));
        }
      } catch (const std::exception& e) {
        for (std::int64_t n : n_values) {
          SweepRow row = base;
          row.N = n;
          row.error = e.what();
          rows.push_back(std::move(row));
        }
      }
    }
  }

  if (!cfg.outdir.empty()) {
    atomic_write_file(std::filesystem::path(cfg.outdir) / "sweep.csv",
                      sweep_to_csv(rows));
  }
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      "sigma2,seed,N,norm_frobenius,sigma_star,gamma,coeff_err_max,"
      "decode_accuracy,error\n";
  for (const auto& r : rows) {
    out += format_double(r.sigma2);
    out += ',' + std::to_string(r.seed);
    out += ',' + std::to_string(r.N);
    out += ',' + (r.error.empty() && std::isfinite(r.norm) ? format_double(r.norm)
                                                           : std::string());
    out += ',' + (r.error.empty() ? format_double(r.sigma_star) : std::string());
    out += ',' + (r.error.empty() && std::isfinite(r.gamma) ? format_double(r.gamma)
                                                            : std::string());
    out += ',' + (r.error.empty() && std::isfinite(r.coeff_err_max)
                      ? format_double(r.coeff_err_max)
                      : std::string());
    out += ',' + (r.error.empty() && std::isfinite(r.decode_accuracy)
                      ? format_double(r.decode_accuracy)
                      : std::string());
    out += ',' + csv_escape(r.error);
    out += '\n';
  }
  return out;
}

}  // namespace sarid
