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
#include "sarid/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace sarid {

namespace {

using nlohmann::json;

double parse_double(std::string_view field, const char* what) {
  double v = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument(std::string("could not parse ") + what + ": '" +
                                std::string(field) + "'");
  }
  return v;
}

std::int64_t parse_int(std::string_view field, const char* what) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw std::invalid_argument(std::string("could not parse ") + what + ": '" +
                                std::string(field) + "'");
  }
  return v;
}

std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(pos));
      break;
    }
    out.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

std::string write_model_document(const ModelDocument& doc) {
  json j;
  j["n"] = doc.model.mode_count();
  j["n_a"] = doc.model.ar_order();
  j["n_c"] = doc.model.input_order();
  j["subsystems"] = json::array();
  for (const auto& s : doc.model.subsystems()) {
    j["subsystems"].push_back(json{{"a", s.a}, {"c", s.c}});
  }
  if (doc.ptm) {
    std::vector<double> flat;
    const auto& m = doc.ptm->matrix();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) flat.push_back(m(i, c));
    }
    j["ptm"] = flat;
  }
  if (doc.noise) {
    j["noise"] = json{{"variance", doc.noise->variance()}};
  }
  return j.dump(2) + "\n";
}

ModelDocument read_model_document(const std::string& text) {
  json j = json::parse(text);
  const int n = j.at("n").get<int>();
  const int n_a = j.at("n_a").get<int>();
  const int n_c = j.at("n_c").get<int>();
  std::vector<SubsystemParams> subsystems;
  for (const auto& s : j.at("subsystems")) {
    subsystems.push_back(SubsystemParams{s.at("a").get<std::vector<double>>(),
                                         s.at("c").get<std::vector<double>>()});
  }
  if (static_cast<int>(subsystems.size()) != n) {
    throw std::invalid_argument("model document: n disagrees with subsystems[]");
  }
  std::optional<TransitionMatrix> ptm;
  if (j.contains("ptm")) {
    auto flat = j.at("ptm").get<std::vector<double>>();
    if (static_cast<int>(flat.size()) != n * n) {
      throw std::invalid_argument("model document: ptm must have n*n entries");
    }
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < n; ++c) m(i, c) = flat[static_cast<std::size_t>(i * n + c)];
    ptm = TransitionMatrix(std::move(m));
  }
  std::optional<NoiseSpec> noise;
  if (j.contains("noise")) {
    noise = NoiseSpec::normal(j.at("noise").at("variance").get<double>());
  }
  return ModelDocument{SarModel(n_a, n_c, std::move(subsystems)), std::move(ptm),
                       std::move(noise)};
}

void save_model_document(const ModelDocument& doc, const std::filesystem::path& path) {
  atomic_write_file(path, write_model_document(doc));
}

ModelDocument load_model_document(const std::filesystem::path& path) {
  return read_model_document(read_file(path));
}

std::string write_dataset_csv(const Dataset& ds) {
  ds.validate();
  const bool with_truth = ds.truth.has_value();
  std::string out = with_truth ? "k,u,y,x,delta,eta\n" : "k,u,y\n";
  const std::int64_t lo = std::min(ds.u.first(), ds.y.first());
  const std::int64_t hi = std::max(ds.u.last(), ds.y.last());
  for (std::int64_t k = lo; k <= hi; ++k) {
    out += std::to_string(k);
    out += ',';
    if (ds.u.contains(k)) out += format_double(ds.u.at(k));
    out += ',';
    if (ds.y.contains(k)) out += format_double(ds.y.at(k));
    if (with_truth) {
      out += ',';
      if (ds.truth->x.contains(k)) out += format_double(ds.truth->x.at(k));
      out += ',';
      if (k >= 1 && k <= ds.N) out += std::to_string(ds.truth->mode_at(k));
      out += ',';
      if (ds.truth->eta.contains(k)) out += format_double(ds.truth->eta.at(k));
    }
    out += '\n';
  }
  return out;
}

Dataset read_dataset_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("dataset csv: empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const bool with_truth = line == "k,u,y,x,delta,eta";
  if (!with_truth && line != "k,u,y") {
    throw std::invalid_argument("dataset csv: unexpected header '" + line + "'");
  }

  struct Row {
    std::int64_t k;
    std::optional<double> u, y, x, eta;
    std::optional<int> delta;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_line(line);
    if (fields.size() != (with_truth ? 6u : 3u)) {
      throw std::invalid_argument("dataset csv: bad field count in '" + line + "'");
    }
    Row r{};
    r.k = parse_int(fields[0], "k");
    if (!fields[1].empty()) r.u = parse_double(fields[1], "u");
    if (!fields[2].empty()) r.y = parse_double(fields[2], "y");
    if (with_truth) {
      if (!fields[3].empty()) r.x = parse_double(fields[3], "x");
      if (!fields[4].empty()) r.delta = static_cast<int>(parse_int(fields[4], "delta"));
      if (!fields[5].empty()) r.eta = parse_double(fields[5], "eta");
    }
    rows.push_back(r);
  }
  if (rows.empty()) throw std::invalid_argument("dataset csv: no rows");
  std::sort(rows.begin(), rows.end(),
            [](const Row& a, const Row& b) { return a.k < b.k; });

  auto collect = [&](auto member, const char* what) -> IndexedSeries {
    std::int64_t first = 0;
    bool seen = false, ended = false;
    std::vector<double> v;
    for (const auto& r : rows) {
      const auto& field = r.*member;
      if (!field) {
        if (seen) ended = true;
        continue;
      }
      if (ended) {
        throw std::invalid_argument(std::string("dataset csv: hole in ") + what);
      }
      if (!seen) {
        first = r.k;
        seen = true;
      } else if (r.k != first + static_cast<std::int64_t>(v.size())) {
        throw std::invalid_argument(std::string("dataset csv: ") + what +
                                    " indices not contiguous");
      }
      v.push_back(*field);
    }
    if (!seen) throw std::invalid_argument(std::string("dataset csv: no ") + what);
    return IndexedSeries(first, std::move(v));
  };

  Dataset ds;
  ds.u = collect(&Row::u, "u");
  ds.y = collect(&Row::y, "y");
  ds.N = ds.y.last();
  ds.n_a = static_cast<int>(1 - ds.y.first());
  ds.n_c = static_cast<int>(1 - ds.u.first());
  if (with_truth) {
    DatasetTruth truth{collect(&Row::x, "x"), collect(&Row::eta, "eta"), {},
                       std::nullopt, std::nullopt, std::nullopt, std::nullopt};
    truth.delta.resize(static_cast<std::size_t>(ds.N));
    for (const auto& r : rows) {
      if (r.k >= 1 && r.k <= ds.N) {
        if (!r.delta) throw std::invalid_argument("dataset csv: missing delta");
        truth.delta[static_cast<std::size_t>(r.k - 1)] = *r.delta;
      }
    }
    ds.truth = std::move(truth);
  }
  ds.validate();
  return ds;
}

void save_dataset_csv(const Dataset& ds, const std::filesystem::path& path) {
  atomic_write_file(path, write_dataset_csv(ds));
}

Dataset load_dataset_csv(const std::filesystem::path& path) {
  return read_dataset_csv(read_file(path));
}

std::string write_counts_csv(const TransitionCounts& counts) {
  std::string out;
  for (int i = 1; i <= counts.order(); ++i) {
    for (int j = 1; j <= counts.order(); ++j) {
      if (j > 1) out += ',';
      out += std::to_string(counts.at(i, j));
    }
    out += '\n';
  }
  return out;
}

TransitionCounts read_counts_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::int64_t>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::int64_t> row;
    for (auto field : split_line(line)) row.push_back(parse_int(field, "count"));
    rows.push_back(std::move(row));
  }
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw std::invalid_argument("counts csv: empty");
  TransitionCounts counts(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n) {
      throw std::invalid_argument("counts csv: not square");
    }
    for (int j = 0; j < n; ++j) {
      const std::int64_t c = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (c < 0) throw std::invalid_argument("counts csv: negative count");
      counts.add(i + 1, j + 1, c);
    }
  }
  return counts;
}

void save_counts_csv(const TransitionCounts& counts, const std::filesystem::path& path) {
  atomic_write_file(path, write_counts_csv(counts));
}

TransitionCounts load_counts_csv(const std::filesystem::path& path) {
  return read_counts_csv(read_file(path));
}

std::string write_decisions_csv(const std::vector<DecodedSnippet>& snippets) {
  std::string out = "start,hypothesis,loglik\n";
  for (const auto& s : snippets) {
    out += std::to_string(s.start);
    out += ',';
    for (std::size_t t = 0; t < s.hypothesis.size(); ++t) {
      if (t > 0) out += '-';
      out += std::to_string(s.hypothesis[t]);
    }
    out += ',';
    out += format_double(s.loglik);
    out += '\n';
  }
  return out;
}

std::string write_matrix_csv(const Eigen::MatrixXd& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace sarid
