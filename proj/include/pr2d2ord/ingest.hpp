#pragma once

#include <string>
#include <vector>

#include "pr2d2ord/types.hpp"

namespace pr2d2ord {

struct IngestResult {
  OrdinalDataset data;
  std::vector<std::string> covariate_names;
  std::vector<std::string> dropped_columns;  // zero-variance, standardize on
  std::vector<double> label_values;          // original values for 1..K
  std::vector<double> center;                // per kept covariate
  std::vector<double> scale;
  std::string response_column;
};

/// Read a comma-separated file with a header row. The response column is
/// selected by name (empty = last column); its values must be integers and
/// are remapped to contiguous 1..K preserving order. With standardize on,
/// covariates are centered and scaled to unit sample variance and
/// zero-variance columns are dropped.
IngestResult ingest_csv(const std::string& path, const std::string& response_column,
                        bool standardize);

/// Apply a previous ingest's schema (column order, centering, scaling) to a
/// new file, for prediction on held-out data.
Eigen::MatrixXd ingest_matrix_with_schema(const std::string& path,
                                          const IngestResult& schema);

}  // namespace pr2d2ord
