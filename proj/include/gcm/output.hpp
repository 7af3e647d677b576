#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace gcm {

inline constexpr int kFormatVersion = 1;

/// Shortest round-trip decimal, locale independent ("nan", "inf", "-inf").
std::string format_double(double v);

/// CSV text with a "# gcm-peres format N" line, optional extra comment lines
/// and a header row.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header, int format_version = kFormatVersion);

  void comment(std::string_view text);

  CsvTable& row();
  CsvTable& cell(double v);
  CsvTable& cell(long long v);
  CsvTable& cell(int v) { return cell(static_cast<long long>(v)); }
  CsvTable& cell(std::string_view v);

  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::string> comments_;
  std::vector<std::vector<std::string>> rows_;
  int format_version_;
};

/// Writes to a temporary sibling and renames over path.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view data);

struct ManifestFile {
  std::string name;  // relative to the output directory
  std::string sha256;
  std::size_t bytes;
};

/// Collects files written by one command and emits manifest.json.
class Manifest {
 public:
  Manifest(std::string command, std::filesystem::path directory,
           std::map<std::string, std::string> config);

  /// Atomically writes name under the output directory and records its checksum.
  void write(const std::string& name, std::string_view content);

  void timing(const std::string& label, double seconds);

  const std::vector<ManifestFile>& files() const { return files_; }
  const std::filesystem::path& directory() const { return directory_; }

  /// Writes manifest.json; returns its path.
  std::filesystem::path finish();

 private:
  std::string command_;
  std::filesystem::path directory_;
  std::map<std::string, std::string> config_;
  std::vector<ManifestFile> files_;
  std::vector<std::pair<std::string, double>> timings_;
  std::chrono::steady_clock::time_point start_;
};

/// Project version baked in at build time.
std::string code_version();

}  // namespace gcm
