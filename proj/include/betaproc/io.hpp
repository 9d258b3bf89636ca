#pragma once

#include <map>
#include <string>
#include <vector>

namespace betaproc::io {

inline constexpr const char* kToolVersion = "1.0.0";

/// %.17g: enough digits to round-trip any double.
std::string fmt(double v);

/// Leading `# key=value` lines of every CSV file this tool writes. The schema,
/// tool version and config hash come first, then `meta` in key order.
std::string csv_preamble(const std::string& schema, const std::string& config_hash,
                         const std::map<std::string, std::string>& meta = {});

/// Writes the whole file at once, creating parent directories. Errors carry the path.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

/// A CSV file produced by this tool: preamble metadata, header, rows.
struct CsvTable {
  std::map<std::string, std::string> meta;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; throws std::runtime_error if absent.
  std::size_t column(const std::string& name) const;
};

CsvTable parse_csv(const std::string& text);

}  // namespace betaproc::io
