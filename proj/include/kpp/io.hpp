#ifndef KPP_IO_HPP
#define KPP_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace kpp {

inline constexpr const char* kToolVersion = "0.1.0";

/// Fixed-width round-trippable formatting shared by every CSV/JSON artifact
/// (%.12g, dot decimal); identical inputs give identical bytes.
std::string fmt_g(double v);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& cells);
  void close();
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::string buffer_;
  bool closed_ = false;
};

/// FNV-1a 64-bit digest of a file's bytes, hex encoded.
std::string file_digest(const std::string& path);

/// Writes <out_dir>/manifest.json recording the resolved invocation, tool
/// version, timestamp and output digests. The timestamp is excluded from
/// all digests so reruns stay byte-comparable.
void write_manifest(const std::string& out_dir, const std::string& subcommand,
                    const std::string& resolved_config_json,
                    const std::vector<std::string>& output_files);

}  // namespace kpp

#endif  // KPP_IO_HPP
