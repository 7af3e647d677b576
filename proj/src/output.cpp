#include "gcm/output.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#ifndef GCM_PERES_VERSION
#define GCM_PERES_VERSION "unknown"
#endif

namespace gcm {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header, int format_version)
    : header_(std::move(header)), format_version_(format_version) {}

void CsvTable::comment(std::string_view text) { comments_.emplace_back(text); }

CsvTable& CsvTable::row() {
  rows_.emplace_back();
  rows_.back().reserve(header_.size());
  return *this;
}

CsvTable& CsvTable::cell(double v) {
  rows_.back().push_back(format_double(v));
  return *this;
}

CsvTable& CsvTable::cell(long long v) {
  rows_.back().push_back(std::to_string(v));
  return *this;
}

CsvTable& CsvTable::cell(std::string_view v) {
  rows_.back().emplace_back(v);
  return *this;
}

std::string CsvTable::str() const {
  std::string out = "# gcm-peres format " + std::to_string(format_version_) + "\n";
  for (const auto& c : comments_) out += "# " + c + "\n";
  auto join = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += fields[i];
    }
    out += '\n';
  };
  join(header_);
  for (const auto& r : rows_) {
    if (r.size() != header_.size()) throw std::logic_error("CsvTable: row width differs from header");
    join(r);
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!os) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md;
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xf];
  }
  return out;
}

std::string code_version() { return GCM_PERES_VERSION; }

Manifest::Manifest(std::string command, std::filesystem::path directory,
                   std::map<std::string, std::string> config)
    : command_(std::move(command)),
      directory_(std::move(directory)),
      config_(std::move(config)),
      start_(std::chrono::steady_clock::now()) {
  std::filesystem::create_directories(directory_);
}

void Manifest::write(const std::string& name, std::string_view content) {
  write_atomic(directory_ / name, content);
  files_.push_back({name, sha256_hex(content), content.size()});
}

void Manifest::timing(const std::string& label, double seconds) { timings_.emplace_back(label, seconds); }

std::filesystem::path Manifest::finish() {
  nlohmann::ordered_json j;
  j["format_version"] = kFormatVersion;
  j["command"] = command_;
  j["code_version"] = code_version();
  j["config"] = config_;
  auto& files = j["files"] = nlohmann::ordered_json::array();
  for (const auto& f : files_) files.push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  auto& t = j["timings_seconds"] = nlohmann::ordered_json::object();
  for (const auto& [label, s] : timings_) t[label] = s;
  t["total"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  const auto path = directory_ / "manifest.json";
  write_atomic(path, j.dump(2) + "\n");
  return path;
}

}  // namespace gcm
