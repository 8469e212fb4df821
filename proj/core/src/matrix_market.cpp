#include "krylov/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "krylov/errors.hpp"
#include "krylov/format.hpp"

namespace krylov {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Next line that is neither blank nor a '%' comment.
bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    return true;
  }
  return false;
}

double parse_value(std::istringstream& ls, const char* what) {
  double v = 0.0;
  if (!(ls >> v)) throw ConfigError(std::string("matrix market: bad ") + what);
  return v;
}

}  // namespace

MatrixMarketMatrix read_matrix_market(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ConfigError("matrix market: empty input");
  std::istringstream hs(lower(header));
  std::string banner, object, layout, field, symmetry;
  hs >> banner >> object >> layout >> field >> symmetry;
  if (banner != "%%matrixmarket" || object != "matrix") {
    throw ConfigError("matrix market: missing %%MatrixMarket matrix banner");
  }
  if (layout != "array" && layout != "coordinate") {
    throw ConfigError("matrix market: unsupported layout '" + layout + "'");
  }
  if (field != "real" && field != "integer" && field != "double") {
    throw ConfigError("matrix market: unsupported field '" + field + "'");
  }
  if (symmetry != "general" && symmetry != "symmetric") {
    throw ConfigError("matrix market: unsupported symmetry '" + symmetry + "'");
  }

  MatrixMarketMatrix out;
  out.symmetric = symmetry == "symmetric";

  std::string line;
  if (!next_data_line(in, line)) throw ConfigError("matrix market: missing size line");
  std::istringstream size_line(line);
  long rows = 0, cols = 0, nnz = 0;
  size_line >> rows >> cols;
  if (layout == "coordinate") size_line >> nnz;
  if (!size_line || rows < 1 || cols < 1 || nnz < 0) {
    throw ConfigError("matrix market: malformed size line");
  }
  if (out.symmetric && rows != cols) {
    throw ConfigError("matrix market: symmetric matrix must be square");
  }
  out.values = Eigen::MatrixXd::Zero(rows, cols);

  if (layout == "array") {
    for (long j = 0; j < cols; ++j) {
      for (long i = out.symmetric ? j : 0; i < rows; ++i) {
        if (!next_data_line(in, line)) throw ConfigError("matrix market: truncated array data");
        std::istringstream ls(line);
        const double v = parse_value(ls, "array entry");
        out.values(i, j) = v;
        if (out.symmetric) out.values(j, i) = v;
      }
    }
  } else {
    for (long k = 0; k < nnz; ++k) {
      if (!next_data_line(in, line)) throw ConfigError("matrix market: truncated coordinate data");
      std::istringstream ls(line);
      long i = 0, j = 0;
      if (!(ls >> i >> j) || i < 1 || j < 1 || i > rows || j > cols) {
        throw ConfigError("matrix market: index out of range on entry " + std::to_string(k + 1));
      }
      const double v = parse_value(ls, "coordinate value");
      // Duplicate entries are summed, as the format intends.
      out.values(i - 1, j - 1) += v;
      if (out.symmetric && i != j) out.values(j - 1, i - 1) += v;
    }
  }
  if (!out.values.allFinite()) throw ConfigError("matrix market: non-finite entry");
  return out;
}

MatrixMarketMatrix load_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open matrix market file " + path.string());
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const Eigen::MatrixXd& m, bool symmetric) {
  out << "%%MatrixMarket matrix array real " << (symmetric ? "symmetric" : "general") << '\n';
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = symmetric ? j : 0; i < m.rows(); ++i) {
      out << format_double(m(i, j)) << '\n';
    }
  }
}

}  // namespace krylov
