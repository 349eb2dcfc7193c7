#pragma once

#include <string>
#include <utility>
#include <vector>

namespace fraclab::cli {

/// 17 significant digits, independent of the global locale.
std::string format_real(double value);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  const std::vector<std::string>& header() const { return header_; }
  std::size_t row_count() const { return rows_.size(); }
  void add_row(const std::vector<double>& values);
  /// Row with a leading text cell (no commas or quotes allowed).
  void add_row(const std::string& label, const std::vector<double>& values);
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Files of one run, written in order.
struct ReportBundle {
  std::vector<std::pair<std::string, std::string>> files;
};

/// Writes `content` to `path`; IoError on failure.
void write_file(const std::string& path, const std::string& content);

/// Writes every file of the bundle below `dir` (which must exist).
void write_bundle(const ReportBundle& bundle, const std::string& dir);

}  // namespace fraclab::cli
