#include "kpp/io.hpp"

#include "kpp/model.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace kpp {

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& header)
    : path_(path) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += header[i];
  }
  buffer_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += fmt_g(values[i]);
  }
  buffer_ += '\n';
}

void CsvWriter::row_mixed(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += cells[i];
  }
  buffer_ += '\n';
}

void CsvWriter::close() {
  if (closed_) return;
  std::ofstream out(path_, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path_);
  out << buffer_;
  closed_ = true;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot digest missing file " + path);
  std::uint64_t hash = 1469598103934665603ull;
  char c;
  while (in.get(c)) {
    hash ^= std::uint8_t(c);
    hash *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

void write_manifest(const std::string& out_dir, const std::string& subcommand,
                    const std::string& resolved_config_json,
                    const std::vector<std::string>& output_files) {
  nlohmann::json j;
  j["tool_version"] = kToolVersion;
  j["subcommand"] = subcommand;
  j["timestamp_unix"] =
      std::chrono::duration_cast<std::chrono::seconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count();
  if (!resolved_config_json.empty())
    j["resolved_config"] = nlohmann::json::parse(resolved_config_json);
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& f : output_files)
    outs.push_back({{"file", f}, {"fnv1a64", file_digest(f)}});
  j["outputs"] = outs;
  std::ofstream out(out_dir + "/manifest.json", std::ios::binary);
  if (!out) throw ValidationError("cannot write manifest in " + out_dir);
  out << j.dump(2) << '\n';
}

}  // namespace kpp
