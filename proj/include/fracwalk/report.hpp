#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracwalk/diagnostics.hpp"
#include "fracwalk/gibbs_walk.hpp"

namespace fracwalk {

using ordered_json = nlohmann::ordered_json;

// Shortest round-trip decimal form; '.' decimal point, no locale.
std::string format_double(double v);

// CSV contract: optional '#' comment lines, then one header row, LF endings.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void comment(std::string_view text);
  void header(std::span<const std::string> cols);
  void row(std::span<const std::string> cells);

  static std::string cell(double v) { return format_double(v); }
  static std::string cell(std::int64_t v) { return std::to_string(v); }
  static std::string cell(std::uint64_t v) { return std::to_string(v); }

 private:
  std::ostream& os_;
};

ordered_json comparison_to_json(const ComparisonReport& report);
void comparison_to_csv(std::ostream& os, const ComparisonReport& report,
                       const ordered_json& config);

ordered_json diagnostics_to_json(const SamplerDiagnostics& d);

// "# config: {...}" on one line; excludes execution details such as the
// worker count so outputs are byte-identical across thread counts.
void write_config_comment(CsvWriter& csv, const ordered_json& config);

} // namespace fracwalk
