#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace trop {

// Labeled covariate matrix: one row per tree/point, e columns, labels in
// {0,1}. leaf_order is recorded when rows are cophenetic vectors.
struct Dataset {
  std::size_t n = 0;
  std::size_t e = 0;
  std::vector<double> x;  // row-major, n*e
  std::vector<int> y;
  std::vector<std::string> leaf_order;

  std::span<const double> row(std::size_t i) const { return {x.data() + i * e, e}; }
  void append(int label, std::span<const double> values);
  Dataset with_label(int label) const;
  std::size_t count_label(int label) const;
};

// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double v);

// CSV format: optional '#' comment lines (a "# leaves: A,B,C" comment records
// the pair order's leaf labels), then a "label,x_1,...,x_e" header, then one
// row per observation.
Dataset read_dataset_csv(const std::string& path);
void write_dataset_csv(const std::string& path, const Dataset& d);

}  // namespace trop
