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
#ifndef SARID_IO_HPP
#define SARID_IO_HPP

#include <filesystem>
#include <optional>
#include <string>

#include "sarid/decoder.hpp"
#include "sarid/model.hpp"

namespace sarid {

/// Model document: JSON with fields n, n_a, n_c, subsystems[].a,
/// subsystems[].c and optional ptm (row-major) and noise.variance.
struct ModelDocument {
  SarModel model;
  std::optional<TransitionMatrix> ptm;
  std::optional<NoiseSpec> noise;
};

std::string write_model_document(const ModelDocument& doc);
ModelDocument read_model_document(const std::string& text);

void save_model_document(const ModelDocument& doc, const std::filesystem::path& path);
ModelDocument load_model_document(const std::filesystem::path& path);

/// Dataset CSV with header k,u,y[,x,delta,eta]; one row per index k
/// including the negative warm-up indices, empty cells where a column is not
/// defined at that k. Numbers are written shortest-round-trip, so reading
/// back reproduces the doubles bit for bit.
std::string write_dataset_csv(const Dataset& ds);
Dataset read_dataset_csv(const std::string& text);

void save_dataset_csv(const Dataset& ds, const std::filesystem::path& path);
Dataset load_dataset_csv(const std::filesystem::path& path);

/// n x n integer matrix, one row per line.
std::string write_counts_csv(const TransitionCounts& counts);
TransitionCounts read_counts_csv(const std::string& text);

void save_counts_csv(const TransitionCounts& counts, const std::filesystem::path& path);
TransitionCounts load_counts_csv(const std::filesystem::path& path);

/// start,hypothesis,loglik rows; hypothesis as dash-separated modes ("1-2").
std::string write_decisions_csv(const std::vector<DecodedSnippet>& snippets);

/// Plain numeric matrix CSV (debug dumps).
std::string write_matrix_csv(const Eigen::MatrixXd& m);

/// Write via a temp file in the same directory followed by a rename, so
/// concurrent runs never observe partial files.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

/// Shortest-round-trip decimal rendering of a double.
std::string format_double(double v);

}  // namespace sarid

#endif  // SARID_IO_HPP
