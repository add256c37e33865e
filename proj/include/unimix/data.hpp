#ifndef UNIMIX_DATA_HPP
#define UNIMIX_DATA_HPP

#include <string>
#include <vector>

namespace unimix {

// Ordered numeric observations with per-dimension order statistics.
struct Dataset {
  std::vector<std::vector<double>> cols;    // dim x n
  std::vector<std::string> names;
  std::vector<std::vector<double>> sorted;  // per dim, ascending (stable)
  std::vector<std::vector<int>> order;      // order[l][r] = obs index at rank r
  std::vector<std::vector<int>> rank;       // rank[l][i] = rank of obs i in dim l

  std::size_t n() const { return cols.empty() ? 0 : cols[0].size(); }
  int dim() const { return static_cast<int>(cols.size()); }
};

Dataset make_dataset(std::vector<std::vector<double>> columns,
                     std::vector<std::string> names = {});

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// Reads a headered CSV and selects the named columns (all numeric columns
// when none are given). Non-numeric or missing cells raise errors that name
// the offending row.
Dataset ingest(const std::string& path, const std::vector<std::string>& columns);

}  // namespace unimix

#endif
