#include "colide/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string_view>

namespace colide {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

double parse_cell(std::string_view cell, std::size_t line_no) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (cell.empty() || ec != std::errc() || ptr != last) {
    throw DataError("line " + std::to_string(line_no) + ": non-numeric cell '" + std::string(cell) + "'");
  }
  if (!std::isfinite(v)) throw DataError("line " + std::to_string(line_no) + ": non-finite cell");
  return v;
}

struct Table {
  std::vector<std::string> header;
  std::vector<double> values;  // row-major
  std::size_t rows = 0;
  std::size_t cols = 0;
};

Table read_table(const std::filesystem::path& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  Table t;
  std::string line;
  std::size_t line_no = 0;
  bool header_pending = has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (t.cols == 0) {
      t.cols = cells.size();
    } else if (cells.size() != t.cols) {
      throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(t.cols) +
                      " cells, found " + std::to_string(cells.size()));
    }
    if (header_pending) {
      for (auto c : cells) t.header.emplace_back(c);
      header_pending = false;
      continue;
    }
    for (auto c : cells) t.values.push_back(parse_cell(c, line_no));
    ++t.rows;
    if (t.rows > static_cast<std::size_t>(std::numeric_limits<Index>::max()) / t.cols) {
      throw DataError("table dimensions overflow");
    }
  }
  if (t.rows == 0) throw DataError("'" + path.string() + "' holds no data rows");
  return t;
}

void write_or_throw(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw DataError("cannot write '" + path.string() + "'");
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

Dataset load_dataset_csv(const std::filesystem::path& path, bool has_header) {
  const Table t = read_table(path, has_header);
  const auto d = static_cast<Index>(t.cols);
  const auto n = static_cast<Index>(t.rows);
  Matrix X(d, n);
  for (Index s = 0; s < n; ++s)
    for (Index v = 0; v < d; ++v) X(v, s) = t.values[static_cast<std::size_t>(s * d + v)];
  DatasetMeta meta;
  meta.names = t.header;
  return Dataset(std::move(X), std::move(meta));
}

void save_dataset_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  for (Index v = 0; v < ds.d(); ++v) {
    out << (v ? "," : "");
    if (static_cast<std::size_t>(v) < ds.meta.names.size()) {
      out << ds.meta.names[static_cast<std::size_t>(v)];
    } else {
      out << 'x' << v;
    }
  }
  out << '\n';
  for (Index s = 0; s < ds.n(); ++s) {
    for (Index v = 0; v < ds.d(); ++v) out << (v ? "," : "") << format_double(ds.X(v, s));
    out << '\n';
  }
  write_or_throw(out, path);
}

Matrix load_matrix_csv(const std::filesystem::path& path) {
  const Table t = read_table(path, false);
  if (t.rows != t.cols) throw DataError("'" + path.string() + "' is not a square matrix");
  const auto d = static_cast<Index>(t.rows);
  Matrix m(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) m(i, j) = t.values[static_cast<std::size_t>(i * d + j)];
  return m;
}

WeightedDigraph load_adjacency_csv(const std::filesystem::path& path) {
  Matrix m = load_matrix_csv(path);
  try {
    return WeightedDigraph(std::move(m));
  } catch (const std::invalid_argument& e) {
    throw DataError("'" + path.string() + "': " + e.what());
  }
}

void save_matrix_csv(const Matrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_double(m(i, j));
    out << '\n';
  }
  write_or_throw(out, path);
}

}  // namespace colide
