#include "fraclp/report.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "fraclp/error.hpp"

namespace fraclp {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add(std::vector<std::string> row) {
  require(row.size() == header_.size(), "csv row width differs from the header");
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      os << cells[i];
    }
    os << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return os.str();
}

void CheckLog::record(const std::string& check, const std::string& case_label, const std::string& statistic,
                      double value, const std::string& threshold, bool pass) {
  table.add({check, case_label, statistic, fmt(value), threshold, pass ? "PASS" : "FAIL"});
  all_pass = all_pass && pass;
  ++(pass ? passed : failed);
}

void CheckLog::skip(const std::string& check, const std::string& case_label, const std::string& reason) {
  table.add({check, case_label, reason, "", "", "SKIP"});
  ++skipped;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.parent_path() / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

fs::path write_bundle(const ReportBundle& bundle, const fs::path& dir) {
  const fs::path parent = dir.has_parent_path() ? dir.parent_path() : fs::path(".");
  fs::create_directories(parent);
  fs::path target = dir;
  for (int k = 2; fs::exists(target); ++k) target = fs::path(dir.string() + "-" + std::to_string(k));
  const fs::path staging = parent / ("." + target.filename().string() + ".staging" + std::to_string(::getpid()));
  fs::remove_all(staging);
  fs::create_directories(staging);
  try {
    for (const auto& [stem, table] : bundle.tables) {
      std::ofstream out(staging / (stem + ".csv"), std::ios::binary);
      out << table.str();
      if (!out) throw Error("cannot write table " + stem);
    }
    std::ofstream(staging / "metadata.json", std::ios::binary) << bundle.metadata_json;
    std::ofstream(staging / "summary.txt", std::ios::binary) << bundle.summary;
    fs::rename(staging, target);
  } catch (...) {
    fs::remove_all(staging);
    throw;
  }
  return target;
}

}  // namespace fraclp
