#include "fracwalk/report.hpp"

#include <charconv>
#include <cmath>

namespace fracwalk {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void CsvWriter::comment(std::string_view text) { os_ << "# " << text << "\n"; }

void CsvWriter::header(std::span<const std::string> cols) { row(cols); }

void CsvWriter::row(std::span<const std::string> cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os_ << ',';
    os_ << cells[i];
  }
  os_ << '\n';
}

ordered_json comparison_to_json(const ComparisonReport& report) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : report.rows) {
    ordered_json row;
    row["label"] = r.label;
    row["mc"] = r.mc;
    row["stderr"] = r.stderr_;
    row["exact"] = r.exact;
    if (!std::isnan(r.asymptote)) row["asymptote"] = r.asymptote;
    row["budget"] = r.budget;
    row["z"] = r.z;
    row["pass"] = r.pass;
    rows.push_back(std::move(row));
  }
  ordered_json out;
  out["quantity"] = report.quantity;
  out["law"] = report.law_spec;
  out["p"] = report.p;
  out["reps"] = report.reps;
  out["seed"] = report.seed;
  out["all_pass"] = report.all_pass();
  out["rows"] = std::move(rows);
  return out;
}

void comparison_to_csv(std::ostream& os, const ComparisonReport& report,
                       const ordered_json& config) {
  CsvWriter csv(os);
  write_config_comment(csv, config);
  const std::vector<std::string> cols{"label",     "mc", "stderr", "exact", "asymptote",
                                      "budget", "z",  "pass"};
  csv.header(cols);
  for (const auto& r : report.rows) {
    const std::vector<std::string> cells{
        r.label,
        CsvWriter::cell(r.mc),
        CsvWriter::cell(r.stderr_),
        CsvWriter::cell(r.exact),
        CsvWriter::cell(r.asymptote),
        CsvWriter::cell(r.budget),
        CsvWriter::cell(r.z),
        r.pass ? "1" : "0",
    };
    csv.row(cells);
  }
}

ordered_json diagnostics_to_json(const SamplerDiagnostics& d) {
  ordered_json out;
  out["burn_in"] = d.burn_in;
  out["components_touching"] = d.components_touching;
  out["exiting_components"] = d.exiting_components;
  out["coalescence_risk"] = d.coalescence_risk;
  out["variance_bias_estimate"] = d.variance_bias_estimate;
  out["heavy_regime_warning"] = d.heavy_regime_warning;
  out["fresh_coins"] = d.fresh_coins;
  return out;
}

void write_config_comment(CsvWriter& csv, const ordered_json& config) {
  csv.comment("config: " + config.dump());
}

} // namespace fracwalk
