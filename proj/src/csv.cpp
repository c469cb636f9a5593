#include "sgpca/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sgpca {

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool is_missing_token(const std::string& t) {
  if (t.empty()) return true;
  std::string low;
  low.reserve(t.size());
  for (char c : t) low.push_back(static_cast<char>(std::tolower(c)));
  return low == "na" || low == "nan";
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

}  // namespace

CsvMatrix read_matrix_csv(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  CsvMatrix out;
  std::vector<std::vector<double>> rows;
  std::vector<std::vector<bool>> seen;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && has_header) {
      out.header = split_line(line);
      continue;
    }
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_line(line);
    if (width == 0) {
      width = cells.size();
    } else if (cells.size() != width) {
      std::ostringstream os;
      os << path << ":" << lineno << ": expected " << width
         << " columns, found " << cells.size();
      throw std::runtime_error(os.str());
    }
    std::vector<double> vals(width, 0.0);
    std::vector<bool> obs(width, true);
    for (std::size_t c = 0; c < width; ++c) {
      const std::string& tok = cells[c];
      if (is_missing_token(tok)) {
        vals[c] = 0.0;
        obs[c] = false;
        out.any_missing = true;
        continue;
      }
      double v = 0.0;
      const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        std::ostringstream os;
        os << path << ":" << lineno << ": cannot parse '" << tok
           << "' in column " << (c + 1);
        throw std::runtime_error(os.str());
      }
      if (std::isnan(v)) {
        vals[c] = 0.0;
        obs[c] = false;
        out.any_missing = true;
      } else {
        vals[c] = v;
      }
    }
    rows.push_back(std::move(vals));
    seen.push_back(std::move(obs));
  }
  if (rows.empty()) throw std::runtime_error(path + ": no data rows");
  out.values.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(width));
  out.mask.resize(out.values.rows(), out.values.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t c = 0; c < width; ++c) {
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          rows[i][c];
      out.mask(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          seen[i][c] ? 1.0 : 0.0;
    }
  return out;
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream outf(path);
  if (!outf) throw std::runtime_error("cannot write '" + path + "'");
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) outf << ',';
      outf << format_double(m(i, j));
    }
    outf << '\n';
  }
}

void write_masked_csv(const std::string& path, const MaskedMatrix& data) {
  std::ofstream outf(path);
  if (!outf) throw std::runtime_error("cannot write '" + path + "'");
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
      if (j) outf << ',';
      if (data.observed(i, j))
        outf << format_double(data.values()(i, j));
      else
        outf << "NA";
    }
    outf << '\n';
  }
}

std::string file_hash_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::uint64_t h = 1469598103934665603ull;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace sgpca
