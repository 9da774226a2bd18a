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
#include <CLI11.hpp>
#include <cmath>
#include <json.hpp>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>

#include "sarid/experiment.hpp"
#include "sarid/io.hpp"

namespace {

using namespace sarid;

InputKind parse_input_kind(const std::string& s) {
  if (s == "uniform") return InputKind::kUniform;
  if (s == "prbs") return InputKind::kPrbs;
  throw CLI::ValidationError("--input", "must be 'uniform' or 'prbs'");
}

void print_matrix(const Eigen::MatrixXd& m, const char* indent = "  ") {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::cout << indent;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) std::cout << "  ";
      std::cout << format_double(m(i, j));
    }
    std::cout << "\n";
  }
}

struct SimulateArgs {
  std::string model_path;
  std::string out_path;
  std::int64_t N = 10000;
  double sigma2 = -1.0;
  std::uint64_t seed = 0;
  std::string input = "uniform";
  double amplitude = 1.0;
  double state_bound = 1e6;
  bool no_truth = false;
};

int cmd_simulate(const SimulateArgs& a) {
  ModelDocument doc = load_model_document(a.model_path);
  if (!doc.ptm) {
    throw std::invalid_argument("simulate: model document has no ptm");
  }
  double sigma2 = a.sigma2;
  if (sigma2 < 0.0) sigma2 = doc.noise ? doc.noise->variance() : 0.0;

  SimOptions opts;
  opts.N = a.N;
  opts.seed = a.seed;
  opts.input = parse_input_kind(a.input);
  opts.input_amplitude = a.amplitude;
  opts.state_bound = a.state_bound;
  Dataset ds = simulate(doc.model, *doc.ptm, NoiseSpec::normal(sigma2), opts);
  if (a.no_truth) ds.truth.reset();
  save_dataset_csv(ds, a.out_path);
  std::cout << "wrote " << a.out_path << " (N = " << a.N
            << ", sigma2 = " << format_double(sigma2) << ")\n";
  if (ds.truth) {
    std::cout << "gamma = " << format_double(noise_to_output_ratio(ds)) << "\n";
  }
  return 0;
}

struct IdentifyArgs {
  std::string data_path;
  int n = 2;
  double sigma_max = 0.0;
  int grid = 64;
  double epsilon = -1.0;
  std::int64_t pool = 0;
  std::uint64_t seed = 0x5a71d;
  std::string out_path;
  std::string true_model_path;
  std::string report_path;
  std::string dump_matrix_path;
};

int cmd_identify(const IdentifyArgs& a) {
  Dataset ds = load_dataset_csv(a.data_path);
  const VeroneseSpec spec(a.n, ds.n_a + ds.n_c + 1);
  const MomentStats stats(ds, spec);
  if (stats.count() < spec.size()) {
    std::cerr << "warning: fewer samples than matrix dimension\n";
  }
  SigmaEstimate est = estimate_sigma(stats, SigmaSearchOptions{a.sigma_max, a.grid, a.epsilon});
  std::cout << "sigma_star = " << format_double(est.sigma) << "\n"
            << "sigma2_star = " << format_double(est.sigma * est.sigma) << "\n"
            << "min_singular_value = " << format_double(est.min_singular_value) << "\n"
            << "status = "
            << (est.status == SigmaSearchStatus::kThresholdHit ? "threshold-hit"
                                                               : "global-min")
            << "\n"
            << "epsilon_used = " << format_double(est.epsilon_used) << "\n"
            << "sigma_max_used = " << format_double(est.sigma_max_used) << "\n";
  if (!est.note.empty()) std::cout << "note = " << est.note << "\n";
  std::cout << "c_n =";
  for (Eigen::Index i = 0; i < est.c_n.size(); ++i) {
    std::cout << ' ' << format_double(est.c_n(i));
  }
  std::cout << "\n";

  ExtractionOptions eopts;
  eopts.pool = a.pool;
  eopts.seed = a.seed;
  std::vector<Eigen::VectorXd> coeffs =
      extract_subsystems(est.c_n, spec, ds, a.n, eopts);

  std::optional<SarModel> true_model;
  if (!a.true_model_path.empty()) {
    true_model = load_model_document(a.true_model_path).model;
  } else if (ds.truth && ds.truth->model) {
    true_model = ds.truth->model;
  }
  std::optional<MatchResult> match;
  if (true_model) {
    std::vector<Eigen::VectorXd> truth_b;
    for (const auto& s : true_model->subsystems()) {
      truth_b.push_back(coefficient_vector(s));
    }
    match = match_to_truth(coeffs, truth_b);
    std::vector<Eigen::VectorXd> aligned;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      aligned.push_back(coeffs[static_cast<std::size_t>(match->permutation[j] - 1)]);
    }
    coeffs = std::move(aligned);
  }

  SarModel est_model = model_from_coefficient_vectors(coeffs, ds.n_a, ds.n_c);
  for (int m = 1; m <= est_model.mode_count(); ++m) {
    const auto& s = est_model.subsystem(m);
    std::cout << "subsystem " << m << ": a =";
    for (double v : s.a) std::cout << ' ' << format_double(v);
    std::cout << "; c =";
    for (double v : s.c) std::cout << ' ' << format_double(v);
    std::cout << "\n";
  }
  if (match) {
    std::cout << "coeff_err_max = " << format_double(match->max_error) << "\n";
  }

  if (!a.out_path.empty()) {
    save_model_document(
        ModelDocument{est_model, std::nullopt,
                      NoiseSpec::normal(est.sigma * est.sigma)},
        a.out_path);
    std::cout << "wrote " << a.out_path << "\n";
  }
  if (!a.report_path.empty() && match && true_model) {
    std::string csv = "mode,coef,true,estimated,abs_error\n";
    for (int j = 0; j < est_model.mode_count(); ++j) {
      const Eigen::VectorXd tb = coefficient_vector(true_model->subsystem(j + 1));
      const Eigen::VectorXd eb = coeffs[static_cast<std::size_t>(j)];
      for (Eigen::Index t = 1; t < tb.size(); ++t) {
        const bool ar = t <= ds.n_a;
        csv += std::to_string(j + 1);
        csv += ',';
        csv += (ar ? "a" : "c") + std::to_string(ar ? t : t - ds.n_a);
        csv += ',' + format_double(tb(t));
        csv += ',' + format_double(eb(t));
        csv += ',' + format_double(std::abs(tb(t) - eb(t)));
        csv += '\n';
      }
    }
    atomic_write_file(a.report_path, csv);
    std::cout << "wrote " << a.report_path << "\n";
  }
  if (!a.dump_matrix_path.empty()) {
    atomic_write_file(a.dump_matrix_path,
                      write_matrix_csv(stats.combine(NoiseSpec::normal(
                                                         est.sigma * est.sigma))
                                           .mean()));
    std::cout << "wrote " << a.dump_matrix_path << "\n";
  }
  return 0;
}

struct DecodeArgs {
  std::string data_path;
  std::string model_path;
  double sigma = -1.0;
  int n_l = 2;
  std::string decisions_path;
  std::string counts_path;
};

int cmd_decode(const DecodeArgs& a) {
  Dataset ds = load_dataset_csv(a.data_path);
  ModelDocument doc = load_model_document(a.model_path);
  double sigma = a.sigma;
  if (sigma < 0.0) sigma = doc.noise ? doc.noise->sigma() : 0.0;

  const SnippetPlan plan = snippet_plan(ds.N, ds.n_a, a.n_l);
  const DecodeResult res = decode_all(ds, doc.model, sigma, plan);
  std::cout << "snippets = " << plan.starts.size() << " (data fraction "
            << format_double(plan.data_fraction()) << ")\n"
            << "sigma = " << format_double(sigma) << "\n"
            << "transitions counted = " << res.counts.total() << "\n";
  if (res.diagnostics.regularized_covariances > 0) {
    std::cout << "regularized covariances = "
              << res.diagnostics.regularized_covariances << "\n";
  }
  std::cout << "n_ij =\n";
  std::cout << write_counts_csv(res.counts);
  if (!a.decisions_path.empty()) {
    atomic_write_file(a.decisions_path, write_decisions_csv(res.snippets));
    std::cout << "wrote " << a.decisions_path << "\n";
  }
  if (!a.counts_path.empty()) {
    save_counts_csv(res.counts, a.counts_path);
    std::cout << "wrote " << a.counts_path << "\n";
  }
  return 0;
}

struct EstimatePtmArgs {
  std::string counts_path;
  double smoothing = 0.0;
  std::string true_model_path;
  std::string out_path;
};

int cmd_estimate_ptm(const EstimatePtmArgs& a) {
  const TransitionCounts counts = load_counts_csv(a.counts_path);
  const PtmEstimate est = estimate_ptm(counts, a.smoothing);
  std::cout << "estimated ptm =\n";
  print_matrix(est.ptm.matrix());
  for (int row : est.unvisited_rows) {
    std::cout << "warning: state " << row << " never visited; row set to uniform\n";
  }
  if (a.smoothing > 0.0) {
    std::cout << "smoothing = " << format_double(a.smoothing) << "\n";
  }
  if (!a.true_model_path.empty()) {
    ModelDocument doc = load_model_document(a.true_model_path);
    if (!doc.ptm) {
      throw std::invalid_argument("estimate-ptm: --true-model document has no ptm");
    }
    std::cout << "norm_frobenius = "
              << format_double(normalized_frobenius(est.ptm, *doc.ptm)) << "\n";
  }
  if (!a.out_path.empty()) {
    nlohmann::json j;
    j["n"] = est.ptm.order();
    std::vector<double> flat;
    for (int i = 1; i <= est.ptm.order(); ++i) {
      for (int c = 1; c <= est.ptm.order(); ++c) flat.push_back(est.ptm.prob(i, c));
    }
    j["ptm"] = flat;
    atomic_write_file(a.out_path, j.dump(2) + "\n");
    std::cout << "wrote " << a.out_path << "\n";
  }
  return 0;
}

struct HarnessArgs {
  std::string config_path;
  std::string model_path;
  std::vector<double> sigma2;
  std::vector<std::int64_t> N;
  std::vector<std::uint64_t> seeds;
  int n_l = 0;
  double epsilon = -2.0;
  double sigma_max = -1.0;
  int grid = 0;
  double smoothing = -1.0;
  std::int64_t pool = -1;
  std::string input;
  double amplitude = 0.0;
  double state_bound = 0.0;
  int random_n = 0;
  int random_n_a = 0;
  int random_n_c = -1;
  std::vector<double> a_range;
  std::vector<double> c_range;
  std::string outdir;
  int workers = -1;
  bool use_true_model = false;
  bool use_true_sigma = false;
  bool save_datasets = false;
};

ExperimentConfig build_config(const HarnessArgs& a) {
  ExperimentConfig cfg;
  if (!a.config_path.empty()) {
    cfg = config_from_json(read_file(a.config_path));
  }
  if (!a.model_path.empty()) {
    ModelDocument doc = load_model_document(a.model_path);
    cfg.model = doc.model;
    if (doc.ptm) cfg.ptm = doc.ptm;
  }
  if (!a.sigma2.empty()) cfg.sigma2 = a.sigma2;
  if (!a.N.empty()) cfg.N = a.N;
  if (!a.seeds.empty()) cfg.seeds = a.seeds;
  if (a.n_l > 0) cfg.n_l = a.n_l;
  if (a.epsilon > -2.0) cfg.epsilon = a.epsilon;
  if (a.sigma_max >= 0.0) cfg.sigma_max = a.sigma_max;
  if (a.grid > 0) cfg.grid = a.grid;
  if (a.smoothing >= 0.0) cfg.smoothing = a.smoothing;
  if (a.pool >= 0) cfg.pool = a.pool;
  if (!a.input.empty()) cfg.input = parse_input_kind(a.input);
  if (a.amplitude > 0.0) cfg.input_amplitude = a.amplitude;
  if (a.state_bound > 0.0) cfg.state_bound = a.state_bound;
  if (a.random_n > 0) cfg.random_n = a.random_n;
  if (a.random_n_a > 0) cfg.random_n_a = a.random_n_a;
  if (a.random_n_c >= 0) cfg.random_n_c = a.random_n_c;
  if (a.a_range.size() == 2) {
    cfg.random_a_min = a.a_range[0];
    cfg.random_a_max = a.a_range[1];
  }
  if (a.c_range.size() == 2) {
    cfg.random_c_min = a.c_range[0];
    cfg.random_c_max = a.c_range[1];
  }
  if (!a.outdir.empty()) cfg.outdir = a.outdir;
  if (a.workers >= 0) cfg.workers = a.workers;
  if (a.use_true_model) cfg.use_true_model = true;
  if (a.use_true_sigma) cfg.use_true_sigma = true;
  if (a.save_datasets) cfg.save_datasets = true;
  cfg.validate();
  return cfg;
}

int cmd_experiment(const HarnessArgs& a) {
  const ExperimentConfig cfg = build_config(a);
  const ExperimentReport report = run_experiment(cfg);
  std::cout << report.to_csv();
  const double med = report.median_norm();
  if (std::isfinite(med)) {
    std::cout << "median norm_frobenius = " << format_double(med) << "\n";
  }
  if (!cfg.outdir.empty()) std::cout << "artifacts in " << cfg.outdir << "\n";
  if (!report.all_ok()) {
    std::cerr << "some runs failed; see report for details\n";
    return 2;
  }
  return 0;
}

int cmd_sweep(const HarnessArgs& a) {
  const ExperimentConfig cfg = build_config(a);
  const std::vector<SweepRow> rows = run_convergence_sweep(cfg);
  std::cout << sweep_to_csv(rows);
  if (!cfg.outdir.empty()) std::cout << "artifacts in " << cfg.outdir << "\n";
  for (const auto& r : rows) {
    if (!r.error.empty()) {
      std::cerr << "some sweep points failed\n";
      return 2;
    }
  }
  return 0;
}

struct PlotArgs {
  std::string in_path;
  std::string out_path;
  std::string title = "convergence";
};

int cmd_plot(const PlotArgs& a) {
  // Read the sweep CSV: sigma2,seed,N,norm,...
  std::istringstream in(read_file(a.in_path));
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("plot: empty input");
  struct Point {
    std::uint64_t seed;
    double n;
    double norm;
  };
  std::vector<Point> points;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t pos = 0;
    while (true) {
      std::size_t comma = line.find(',', pos);
      f.push_back(line.substr(pos, comma == std::string::npos ? comma : comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (f.size() < 4 || f[3].empty()) continue;
    points.push_back(Point{std::stoull(f[1]), std::stod(f[2]), std::stod(f[3])});
  }
  if (points.empty()) throw std::invalid_argument("plot: no usable rows");

  double xmin = std::log10(points.front().n), xmax = xmin, ymax = 0.0;
  for (const auto& p : points) {
    xmin = std::min(xmin, std::log10(p.n));
    xmax = std::max(xmax, std::log10(p.n));
    ymax = std::max(ymax, p.norm);
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  ymax *= 1.1;
  if (ymax <= 0.0) ymax = 1.0;

  const double W = 640, H = 420, L = 70, R = 20, T = 30, B = 50;
  auto X = [&](double n) {
    return L + (std::log10(n) - xmin) / (xmax - xmin) * (W - L - R);
  };
  auto Y = [&](double v) { return H - B - v / ymax * (H - T - B); };

  std::map<std::uint64_t, std::vector<Point>> by_seed;
  std::map<double, std::pair<double, int>> avg;  // N -> (sum, count)
  for (const auto& p : points) {
    by_seed[p.seed].push_back(p);
    avg[p.n].first += p.norm;
    avg[p.n].second += 1;
  }

  std::string svg;
  char buf[512];
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" "
         "viewBox=\"0 0 640 420\">\n";
  svg += "<rect width=\"640\" height=\"420\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.0f\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\" "
                "text-anchor=\"middle\">%s</text>\n",
                W / 2, a.title.c_str());
  svg += buf;
  // axes
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                L, H - B, W - R, H - B);
  svg += buf;
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                L, T, L, H - B);
  svg += buf;
  for (int d = static_cast<int>(std::ceil(xmin)); d <= static_cast<int>(std::floor(xmax)); ++d) {
    const double x = X(std::pow(10.0, d));
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>"
                  "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\" "
                  "text-anchor=\"middle\">1e%d</text>\n",
                  x, H - B, x, H - B + 5, x, H - B + 20, d);
    svg += buf;
  }
  for (int t = 0; t <= 5; ++t) {
    const double v = ymax * t / 5.0;
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>"
                  "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\" "
                  "text-anchor=\"end\">%.3f</text>\n",
                  L - 5, Y(v), L, Y(v), L - 8, Y(v) + 4, v);
    svg += buf;
  }
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.0f\" y=\"%.0f\" font-family=\"sans-serif\" font-size=\"12\" "
                "text-anchor=\"middle\">N</text>\n",
                (L + W - R) / 2, H - 10);
  svg += buf;
  svg += "<text x=\"18\" y=\"210\" font-family=\"sans-serif\" font-size=\"12\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 18 210)\">normalized Frobenius "
         "norm</text>\n";

  auto polyline = [&](const std::vector<Point>& pts, const char* color, double width) {
    std::string out = "<polyline fill=\"none\" stroke=\"";
    out += color;
    out += "\" stroke-width=\"";
    out += format_double(width);
    out += "\" points=\"";
    for (const auto& p : pts) {
      std::snprintf(buf, sizeof(buf), "%.1f,%.1f ", X(p.n), Y(p.norm));
      out += buf;
    }
    out += "\"/>\n";
    return out;
  };
  for (auto& [seed, pts] : by_seed) {
    std::sort(pts.begin(), pts.end(),
              [](const Point& a, const Point& b) { return a.n < b.n; });
    svg += polyline(pts, "#9ecae1", 1.0);
  }
  std::vector<Point> mean_pts;
  for (const auto& [n, sc] : avg) {
    mean_pts.push_back(Point{0, n, sc.first / sc.second});
  }
  svg += polyline(mean_pts, "#08519c", 2.0);
  for (const auto& p : mean_pts) {
    std::snprintf(buf, sizeof(buf),
                  "<circle cx=\"%.1f\" cy=\"%.1f\" r=\"3\" fill=\"#08519c\"/>\n",
                  X(p.n), Y(p.norm));
    svg += buf;
  }
  svg += "</svg>\n";
  atomic_write_file(a.out_path, svg);
  std::cout << "wrote " << a.out_path << "\n";
  return 0;
}

void add_harness_options(CLI::App* sub, HarnessArgs& a) {
  sub->add_option("--config", a.config_path, "experiment config JSON");
  sub->add_option("--model", a.model_path,
                  "model document; fixes the model (and ptm when present)");
  sub->add_option("--sigma2", a.sigma2, "noise variances");
  sub->add_option("--N", a.N, "record lengths");
  sub->add_option("--seeds", a.seeds, "run seeds");
  sub->add_option("--n-l", a.n_l, "snippet length");
  sub->add_option("--epsilon", a.epsilon, "sigma-search threshold (-1 = auto)");
  sub->add_option("--sigma-max", a.sigma_max, "sigma-search upper bound (0 = auto)");
  sub->add_option("--grid", a.grid, "sigma-search grid points");
  sub->add_option("--smoothing", a.smoothing, "ptm Laplace smoothing");
  sub->add_option("--pool", a.pool, "extraction pool size (0 = auto)");
  sub->add_option("--input", a.input, "input kind: uniform|prbs");
  sub->add_option("--amplitude", a.amplitude, "input amplitude");
  sub->add_option("--state-bound", a.state_bound, "abort runs when |x| exceeds this");
  sub->add_option("--random-n", a.random_n, "subsystem count for random models");
  sub->add_option("--random-n-a", a.random_n_a, "AR order for random models");
  sub->add_option("--random-n-c", a.random_n_c, "input order for random models");
  sub->add_option("--a-range", a.a_range, "AR coefficient range for random models")
      ->expected(2);
  sub->add_option("--c-range", a.c_range, "input coefficient range for random models")
      ->expected(2);
  sub->add_option("--outdir", a.outdir, "artifact directory");
  sub->add_option("--workers", a.workers, "parallel runs (default: SARID_WORKERS or 1)");
  sub->add_flag("--use-true-model", a.use_true_model, "decode with the true coefficients");
  sub->add_flag("--use-true-sigma", a.use_true_sigma, "decode with the true sigma");
  sub->add_flag("--save-datasets", a.save_datasets, "write per-run dataset CSVs");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"switched AR system identification with Markovian switching"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "generate a synthetic dataset");
  sim_cmd->add_option("--model", sim.model_path, "model document (needs ptm)")->required();
  sim_cmd->add_option("--n,--N", sim.N, "number of samples")->required();
  sim_cmd->add_option("--sigma2", sim.sigma2, "noise variance (default: document)");
  sim_cmd->add_option("--seed", sim.seed, "rng seed");
  sim_cmd->add_option("--input", sim.input, "input kind: uniform|prbs");
  sim_cmd->add_option("--amplitude", sim.amplitude, "input amplitude");
  sim_cmd->add_option("--state-bound", sim.state_bound, "abort when |x| exceeds this");
  sim_cmd->add_option("--out", sim.out_path, "output dataset CSV")->required();
  sim_cmd->add_flag("--no-truth", sim.no_truth, "omit x,delta,eta columns");

  IdentifyArgs ident;
  CLI::App* ident_cmd =
      app.add_subcommand("identify", "estimate sigma, c_n and the subsystems");
  ident_cmd->add_option("--data", ident.data_path, "dataset CSV")->required();
  ident_cmd->add_option("--n", ident.n, "number of subsystems")->required();
  ident_cmd->add_option("--sigma-max", ident.sigma_max, "search bound (0 = std of y)");
  ident_cmd->add_option("--grid", ident.grid, "grid points");
  ident_cmd->add_option("--epsilon", ident.epsilon, "threshold (-1 = auto)");
  ident_cmd->add_option("--pool", ident.pool, "extraction pool (0 = auto)");
  ident_cmd->add_option("--seed", ident.seed, "clustering seed");
  ident_cmd->add_option("--out", ident.out_path, "write estimated model document");
  ident_cmd->add_option("--true-model", ident.true_model_path,
                        "true model document for the error report");
  ident_cmd->add_option("--report", ident.report_path, "per-coefficient error CSV");
  ident_cmd->add_option("--dump-matrix", ident.dump_matrix_path,
                        "write the corrected matrix at sigma_star");

  DecodeArgs dec;
  CLI::App* dec_cmd = app.add_subcommand("decode", "maximum-likelihood switch decoding");
  dec_cmd->add_option("--data", dec.data_path, "dataset CSV")->required();
  dec_cmd->add_option("--model", dec.model_path, "model document")->required();
  dec_cmd->add_option("--sigma", dec.sigma, "noise sigma (default: document)");
  dec_cmd->add_option("--n-l", dec.n_l, "snippet length");
  dec_cmd->add_option("--out-decisions", dec.decisions_path, "per-snippet CSV");
  dec_cmd->add_option("--out-counts", dec.counts_path, "transition counts CSV");

  EstimatePtmArgs ptm;
  CLI::App* ptm_cmd =
      app.add_subcommand("estimate-ptm", "transition matrix MLE from counts");
  ptm_cmd->add_option("--counts", ptm.counts_path, "counts CSV")->required();
  ptm_cmd->add_option("--smoothing", ptm.smoothing, "Laplace smoothing");
  ptm_cmd->add_option("--true-model", ptm.true_model_path,
                      "model document with the true ptm");
  ptm_cmd->add_option("--out", ptm.out_path, "write ptm document");

  HarnessArgs exp_args;
  CLI::App* exp_cmd = app.add_subcommand("experiment", "end-to-end seeded runs");
  add_harness_options(exp_cmd, exp_args);

  HarnessArgs sweep_args;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "convergence sweep over nested N");
  add_harness_options(sweep_cmd, sweep_args);

  PlotArgs plot;
  CLI::App* plot_cmd = app.add_subcommand("plot", "sweep CSV to SVG line chart");
  plot_cmd->add_option("--in", plot.in_path, "sweep CSV")->required();
  plot_cmd->add_option("--out", plot.out_path, "output SVG")->required();
  plot_cmd->add_option("--title", plot.title, "chart title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sim_cmd->parsed()) return cmd_simulate(sim);
    if (ident_cmd->parsed()) return cmd_identify(ident);
    if (dec_cmd->parsed()) return cmd_decode(dec);
    if (ptm_cmd->parsed()) return cmd_estimate_ptm(ptm);
    if (exp_cmd->parsed()) return cmd_experiment(exp_args);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_args);
    if (plot_cmd->parsed()) return cmd_plot(plot);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
