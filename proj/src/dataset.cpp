#include "trop/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace trop {

void Dataset::append(int label, std::span<const double> values) {
  if (n == 0 && e == 0) e = values.size();
  if (values.size() != e) throw std::invalid_argument("row dimension mismatch");
  if (label != 0 && label != 1) throw std::invalid_argument("label must be 0 or 1");
  x.insert(x.end(), values.begin(), values.end());
  y.push_back(label);
  ++n;
}

Dataset Dataset::with_label(int label) const {
  Dataset out;
  out.e = e;
  out.leaf_order = leaf_order;
  for (std::size_t i = 0; i < n; ++i)
    if (y[i] == label) out.append(label, row(i));
  return out;
}

std::size_t Dataset::count_label(int label) const {
  std::size_t c = 0;
  for (const int v : y) c += (v == label);
  return c;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

[[noreturn]] void fail(const std::string& path, std::size_t line, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file '" + path + "'");
  Dataset d;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    if (line[0] == '#') {
      const auto pos = line.find("leaves:");
      if (pos != std::string::npos) {
        for (auto& label : split_csv(line.substr(pos + 7))) {
          while (!label.empty() && label.front() == ' ') label.erase(label.begin());
          while (!label.empty() && (label.back() == ' ' || label.back() == '\n')) label.pop_back();
          if (!label.empty()) d.leaf_order.push_back(label);
        }
      }
      continue;
    }
    if (!header_seen) {
      const auto cols = split_csv(line);
      if (cols.empty() || cols[0] != "label")
        fail(path, lineno, "expected header starting with 'label'");
      header_seen = true;
      continue;
    }
    const auto cols = split_csv(line);
    if (cols.size() < 2) fail(path, lineno, "row has fewer than 2 columns");
    int label;
    if (cols[0] == "0") label = 0;
    else if (cols[0] == "1") label = 1;
    else fail(path, lineno, "label must be 0 or 1, got '" + cols[0] + "'");
    std::vector<double> values;
    values.reserve(cols.size() - 1);
    for (std::size_t i = 1; i < cols.size(); ++i) {
      char* end = nullptr;
      const double v = std::strtod(cols[i].c_str(), &end);
      if (end == cols[i].c_str() || !std::isfinite(v))
        fail(path, lineno, "bad numeric value '" + cols[i] + "'");
      values.push_back(v);
    }
    if (d.n > 0 && values.size() != d.e) fail(path, lineno, "inconsistent row width");
    d.append(label, values);
  }
  if (!header_seen) throw std::runtime_error(path + ": missing header line");
  return d;
}

void write_dataset_csv(const std::string& path, const Dataset& d) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset file '" + path + "'");
  if (!d.leaf_order.empty()) {
    out << "# leaves:";
    for (std::size_t i = 0; i < d.leaf_order.size(); ++i)
      out << (i ? "," : " ") << d.leaf_order[i];
    out << "\n# columns are upper-triangular leaf pairs in lexicographic order\n";
  }
  out << "label";
  for (std::size_t j = 1; j <= d.e; ++j) out << ",x_" << j;
  out << "\n";
  for (std::size_t i = 0; i < d.n; ++i) {
    out << d.y[i];
    const auto r = d.row(i);
    for (const double v : r) out << ',' << format_double(v);
    out << "\n";
  }
  if (!out) throw std::runtime_error("failed while writing '" + path + "'");
}

}  // namespace trop
