#pragma once

// File formats shared across the project: the dense matrix CSV, RFC-4180
// result tables and atomic (temp file + rename) writes.

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace lapnet {

/// Decimal text with 17 significant digits (round-trips every double).
std::string format_double(double v);

/// Writes `content` to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

std::string read_file(const std::filesystem::path& path);

/// Dense matrix CSV: no header, one row per line, comma separated. Ragged
/// rows, empty files and non-numeric cells raise ParseError.
Eigen::MatrixXd parse_matrix_csv(std::istream& in);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);
std::string format_matrix_csv(const Eigen::MatrixXd& m);
void write_matrix_csv(const std::filesystem::path& path,
                      const Eigen::MatrixXd& m);

/// RFC-4180 table builder: header row, quoting of cells that contain commas,
/// quotes or line breaks, CRLF-free output with '\n' line ends.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& add_row(std::vector<std::string> row);
  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

  static std::string quote(const std::string& cell);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace lapnet
