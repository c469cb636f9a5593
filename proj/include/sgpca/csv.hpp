#ifndef SGPCA_CSV_HPP
#define SGPCA_CSV_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sgpca/data.hpp"

namespace sgpca {

// Shortest round-trip decimal representation.
std::string format_double(double v);

struct CsvMatrix {
  Eigen::MatrixXd values;  // missing cells hold 0
  Eigen::MatrixXd mask;    // 0 where the cell was empty / NA / NaN
  std::vector<std::string> header;
  bool any_missing = false;
};

// Rectangular numeric CSV; empty cells and the literals NA/NaN (any case)
// mean missing. Throws std::runtime_error with file/line context on parse
// problems.
CsvMatrix read_matrix_csv(const std::string& path, bool has_header);

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m);
// Masked entries are written as NA.
void write_masked_csv(const std::string& path, const MaskedMatrix& data);

// 64-bit FNV-1a over the file bytes, as a hex string (manifest bookkeeping).
std::string file_hash_hex(const std::string& path);

}  // namespace sgpca

#endif  // SGPCA_CSV_HPP
