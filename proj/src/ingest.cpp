#include "pr2d2ord/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace pr2d2ord {

namespace {
struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

RawTable read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  RawTable t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  {
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) t.header.push_back(tok);
  }
  if (t.header.empty()) throw std::runtime_error(path + ": no header columns");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<double> row;
    std::size_t col = 0;
    while (std::getline(ss, tok, ',')) {
      ++col;
      try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        row.push_back(v);
      } catch (const std::exception&) {
        throw std::runtime_error(path + ": non-numeric cell at row " +
                                 std::to_string(lineno) + ", column " +
                                 std::to_string(col) + " ('" + tok + "')");
      }
    }
    if (row.size() != t.header.size())
      throw std::runtime_error(path + ": row " + std::to_string(lineno) + " has " +
                               std::to_string(row.size()) + " cells, expected " +
                               std::to_string(t.header.size()));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::size_t find_column(const RawTable& t, const std::string& name) {
  const auto it = std::find(t.header.begin(), t.header.end(), name);
  if (it == t.header.end())
    throw std::runtime_error("response column '" + name + "' not found");
  return static_cast<std::size_t>(it - t.header.begin());
}
}  // namespace

IngestResult ingest_csv(const std::string& path, const std::string& response_column,
                        bool standardize) {
  const RawTable t = read_table(path);
  if (t.rows.empty()) throw std::runtime_error(path + ": no data rows");

  const std::size_t ycol =
      response_column.empty() ? t.header.size() - 1 : find_column(t, response_column);

  IngestResult out;
  out.response_column = t.header[ycol];

  // collect and remap response labels to contiguous 1..K preserving order
  std::map<long, int> remap;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double v = t.rows[i][ycol];
    const double r = std::round(v);
    if (std::fabs(v - r) > 1e-9)
      throw std::runtime_error(path + ": response value " + std::to_string(v) +
                               " at data row " + std::to_string(i + 1) +
                               " is not an integer");
    remap[static_cast<long>(r)] = 0;
  }
  if (remap.size() < 2)
    throw std::runtime_error(path + ": fewer than 2 distinct response values");
  int next = 1;
  for (auto& kv : remap) {
    kv.second = next++;
    out.label_values.push_back(static_cast<double>(kv.first));
  }
  out.data.K = static_cast<int>(remap.size());
  out.data.y.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    out.data.y.push_back(remap[static_cast<long>(std::round(row[ycol]))]);
  }

  // covariates: every non-response column
  const std::size_t n = t.rows.size();
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (c == ycol) continue;
    if (standardize) {
      double mean = 0.0;
      for (const auto& row : t.rows) mean += row[c];
      mean /= static_cast<double>(n);
      double ss = 0.0;
      for (const auto& row : t.rows) ss += (row[c] - mean) * (row[c] - mean);
      if (!(ss > 0.0)) {
        out.dropped_columns.push_back(t.header[c]);
        continue;
      }
    }
    keep.push_back(c);
  }
  if (keep.empty()) throw std::runtime_error(path + ": no usable covariate columns");

  out.data.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    out.covariate_names.push_back(t.header[keep[j]]);
    for (std::size_t i = 0; i < n; ++i) {
      out.data.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          t.rows[i][keep[j]];
    }
  }
  if (standardize) {
    for (std::size_t j = 0; j < keep.size(); ++j) {
      auto col = out.data.X.col(static_cast<Eigen::Index>(j));
      const double mean = col.mean();
      const double sd = std::sqrt((col.array() - mean).square().sum() /
                                  (static_cast<double>(n) - 1.0));
      col = (col.array() - mean) / sd;
      out.center.push_back(mean);
      out.scale.push_back(sd);
    }
  } else {
    out.center.assign(keep.size(), 0.0);
    out.scale.assign(keep.size(), 1.0);
  }
  out.data.validate();
  return out;
}

Eigen::MatrixXd ingest_matrix_with_schema(const std::string& path,
                                          const IngestResult& schema) {
  const RawTable t = read_table(path);
  if (t.rows.empty()) throw std::runtime_error(path + ": no data rows");
  std::vector<std::size_t> cols;
  for (const std::string& name : schema.covariate_names) {
    const auto it = std::find(t.header.begin(), t.header.end(), name);
    if (it == t.header.end())
      throw std::runtime_error(path + ": missing covariate column '" + name +
                               "' required by the training schema");
    cols.push_back(static_cast<std::size_t>(it - t.header.begin()));
  }
  Eigen::MatrixXd x(static_cast<Eigen::Index>(t.rows.size()),
                    static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          (t.rows[i][cols[j]] - schema.center[j]) / schema.scale[j];
    }
  }
  return x;
}

}  // namespace pr2d2ord
