#pragma once

#include "colide/common.hpp"
#include "colide/graph.hpp"
#include "colide/sem.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace colide {

// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

// Comma-separated numeric table. Rows are samples and columns variables; the
// result is transposed into the d x n layout. With has_header the first line
// supplies variable names. Throws DataError for unreadable or empty files,
// ragged rows, non-numeric or non-finite cells and tables too large to index.
Dataset load_dataset_csv(const std::filesystem::path& path, bool has_header = true);
// Writes a header row; unnamed variables are called x0, x1, ...
void save_dataset_csv(const Dataset& ds, const std::filesystem::path& path);

// Square matrix, one row per line. Throws DataError like load_dataset_csv and
// when the table is not square.
Matrix load_matrix_csv(const std::filesystem::path& path);
void save_matrix_csv(const Matrix& m, const std::filesystem::path& path);

// Also throws DataError for a nonzero diagonal.
WeightedDigraph load_adjacency_csv(const std::filesystem::path& path);
inline void save_adjacency_csv(const WeightedDigraph& g, const std::filesystem::path& path) {
  save_matrix_csv(g.weights(), path);
}

}  // namespace colide
