#include "cli/report.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <system_error>

#include "fraclab/errors.hpp"

namespace fraclab::cli {

std::string format_real(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(const std::vector<double>& values) {
  if (values.size() != header_.size()) throw Error("csv: row width does not match the header");
  std::vector<std::string> cells;
  for (double v : values) cells.push_back(format_real(v));
  rows_.push_back(std::move(cells));
}

void CsvTable::add_row(const std::string& label, const std::vector<double>& values) {
  if (values.size() + 1 != header_.size()) throw Error("csv: row width does not match the header");
  if (label.find_first_of(",\"\n") != std::string::npos) throw Error("csv: label needs quoting");
  std::vector<std::string> cells{label};
  for (double v : values) cells.push_back(format_real(v));
  rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing " + path);
}

void write_bundle(const ReportBundle& bundle, const std::string& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw IoError("output directory " + dir + " does not exist");
  for (const auto& [name, content] : bundle.files) {
    write_file((std::filesystem::path(dir) / name).string(), content);
  }
}

}  // namespace fraclab::cli
