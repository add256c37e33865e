#include "unimix/data.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace unimix {

Dataset make_dataset(std::vector<std::vector<double>> columns,
                     std::vector<std::string> names) {
  if (columns.empty()) throw std::invalid_argument("make_dataset: no columns");
  const std::size_t n = columns[0].size();
  for (const auto& c : columns) {
    if (c.size() != n) throw std::invalid_argument("make_dataset: ragged columns");
  }
  if (n == 0) throw std::invalid_argument("make_dataset: empty dataset");
  Dataset ds;
  ds.cols = std::move(columns);
  if (names.empty()) {
    for (std::size_t l = 0; l < ds.cols.size(); ++l)
      names.push_back("y" + std::to_string(l + 1));
  }
  ds.names = std::move(names);
  const int d = ds.dim();
  ds.sorted.resize(d);
  ds.order.resize(d);
  ds.rank.resize(d);
  for (int l = 0; l < d; ++l) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
      return ds.cols[l][a] < ds.cols[l][b];
    });
    ds.order[l] = idx;
    ds.sorted[l].resize(n);
    ds.rank[l].resize(n);
    for (std::size_t r = 0; r < n; ++r) {
      ds.sorted[l][r] = ds.cols[l][idx[r]];
      ds.rank[l][idx[r]] = static_cast<int>(r);
    }
  }
  return ds;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' '))
      cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path);
  t.header = split_line(line);
  std::size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (line.empty() || line == "\r") continue;
    auto cells = split_line(line);
    if (cells.size() != t.header.size())
      throw std::runtime_error(path + ": row " + std::to_string(row_no) +
                               " has " + std::to_string(cells.size()) +
                               " cells, expected " + std::to_string(t.header.size()));
    std::vector<double> vals(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string& s = cells[c];
      double v = 0.0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size())
        throw std::runtime_error(path + ": row " + std::to_string(row_no) +
                                 ", column '" + t.header[c] +
                                 "': non-numeric or missing value '" + s + "'");
      vals[c] = v;
    }
    t.rows.push_back(std::move(vals));
  }
  return t;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot write file: " + path);
  for (std::size_t c = 0; c < header.size(); ++c)
    std::fprintf(f, "%s%s", header[c].c_str(), c + 1 < header.size() ? "," : "\n");
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      std::fprintf(f, "%.17g%s", row[c], c + 1 < row.size() ? "," : "\n");
  }
  std::fclose(f);
}

Dataset ingest(const std::string& path, const std::vector<std::string>& columns) {
  CsvTable t = read_csv(path);
  std::vector<std::size_t> picks;
  std::vector<std::string> names;
  if (columns.empty()) {
    for (std::size_t c = 0; c < t.header.size(); ++c) picks.push_back(c);
    names = t.header;
  } else {
    for (const auto& name : columns) {
      auto it = std::find(t.header.begin(), t.header.end(), name);
      if (it == t.header.end())
        throw std::runtime_error(path + ": no column named '" + name + "'");
      picks.push_back(static_cast<std::size_t>(it - t.header.begin()));
      names.push_back(name);
    }
  }
  if (t.rows.empty()) throw std::runtime_error(path + ": no data rows");
  std::vector<std::vector<double>> cols(picks.size());
  for (std::size_t k = 0; k < picks.size(); ++k) {
    cols[k].reserve(t.rows.size());
    for (const auto& row : t.rows) cols[k].push_back(row[picks[k]]);
  }
  return make_dataset(std::move(cols), std::move(names));
}

}  // namespace unimix
