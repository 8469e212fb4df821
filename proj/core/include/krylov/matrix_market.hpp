#pragma once

#include <filesystem>
#include <iosfwd>

#include <Eigen/Core>

namespace krylov {

struct MatrixMarketMatrix {
  Eigen::MatrixXd values;
  /// Header declared `symmetric` (lower triangle stored, mirrored on read).
  bool symmetric = false;
};

// Reads real/integer matrices in `array` or `coordinate` layout with
// `general` or `symmetric` storage into a dense matrix. Anything else
// (complex, pattern, skew-symmetric) is a ConfigError.
MatrixMarketMatrix read_matrix_market(std::istream& in);
MatrixMarketMatrix load_matrix_market(const std::filesystem::path& path);

// Writes `array real symmetric` when `symmetric` is set, else `array real general`.
void write_matrix_market(std::ostream& out, const Eigen::MatrixXd& m, bool symmetric);

}  // namespace krylov
