#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace fraclp {

/// Shortest round-trip decimal form, so re-runs give identical bytes.
std::string fmt(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add(std::vector<std::string> row);
  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// One verdict row per check: every PASS/FAIL in a summary has one of these.
struct CheckLog {
  CsvTable table{{"check", "case", "statistic", "value", "threshold", "verdict"}};
  bool all_pass = true;
  int passed = 0, failed = 0, skipped = 0;

  void record(const std::string& check, const std::string& case_label, const std::string& statistic, double value,
              const std::string& threshold, bool pass);
  /// Out-of-scope case; does not affect all_pass.
  void skip(const std::string& check, const std::string& case_label, const std::string& reason);
};

/// CSV tables, a JSON metadata sidecar and a plain-text summary.
struct ReportBundle {
  std::map<std::string, CsvTable> tables;  // file stem -> table
  std::string metadata_json;
  std::string summary;
};

/// Writes the bundle into a fresh directory `dir` (or dir-2, dir-3, ... when
/// taken) by filling a hidden sibling and renaming it. Returns the directory used.
std::filesystem::path write_bundle(const ReportBundle& bundle, const std::filesystem::path& dir);

/// Writes `content` to `path` through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace fraclp
