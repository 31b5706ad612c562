// fracwalk: simulation and numerical verification of heavy-tailed look-back
// walks, their renewal structure, and their fractional Brownian scaling.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fracwalk/acceptance.hpp"
#include "fracwalk/ancestry.hpp"
#include "fracwalk/diagnostics.hpp"
#include "fracwalk/fbm.hpp"
#include "fracwalk/gibbs_walk.hpp"
#include "fracwalk/parallel.hpp"
#include "fracwalk/renewal.hpp"
#include "fracwalk/report.hpp"
#include "fracwalk/stats.hpp"
#include "fracwalk/tail_law.hpp"

using namespace fracwalk;

namespace {

struct OutputTarget {
  std::ofstream file;
  std::ostream* os = &std::cout;

  explicit OutputTarget(const std::string& path) {
    if (path != "-") {
      file.open(path, std::ios::binary);
      if (!file) throw std::runtime_error("cannot open output file: " + path);
      os = &file;
    }
  }
  std::ostream& stream() { return *os; }
};

std::uint64_t resolve_seed(std::optional<std::uint64_t> seed) {
  if (seed) return *seed;
  std::random_device rd;
  const std::uint64_t s = (std::uint64_t(rd()) << 32) ^ rd();
  std::cerr << "seed: " << s << "\n"; // echoed for copy-paste reproducibility
  return s;
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
  if (out.empty()) throw CLI::ValidationError("list", "empty list");
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  if (out.empty()) throw CLI::ValidationError("list", "empty list");
  return out;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_double(v[i]);
  }
  return s;
}

// Inline the JSON config (if any) as defaults ahead of the explicit flags;
// options use a take-last policy, so the command line wins.
std::vector<std::string> splice_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + std::ptrdiff_t(i), args.begin() + std::ptrdiff_t(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + std::ptrdiff_t(i));
      break;
    }
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  ordered_json cfg = ordered_json::parse(in);
  if (!cfg.is_object()) throw std::runtime_error("config file must hold a JSON object");

  std::string command;
  if (!args.empty() && !args[0].empty() && args[0][0] != '-') {
    command = args[0];
    args.erase(args.begin());
  } else if (cfg.contains("command")) {
    command = cfg["command"].get<std::string>();
  } else {
    throw std::runtime_error("config file gives no command and none was provided");
  }

  std::vector<std::string> merged{command};
  for (const auto& [key, value] : cfg.items()) {
    if (key == "command") continue;
    std::string text;
    if (value.is_string())
      text = value.get<std::string>();
    else if (value.is_array()) {
      for (std::size_t i = 0; i < value.size(); ++i)
        text += (i ? "," : "") + value[i].dump();
    } else
      text = value.dump();
    merged.push_back("--" + key);
    merged.push_back(text);
  }
  merged.insert(merged.end(), args.begin(), args.end());
  return merged;
}

// Options shared by the sampling subcommands.
struct CommonOpts {
  std::string law = "power:alpha=0.25";
  std::string out = "-";
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  int threads = 0;
};

void add_common(CLI::App* sub, CommonOpts& c, bool with_law = true) {
  if (with_law) sub->add_option("--law", c.law, "law spec, e.g. power:alpha=0.25");
  sub->add_option("--out", c.out, "output path, '-' for stdout");
  sub->add_option("--format", c.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--seed", c.seed, "master seed (omitted: drawn and printed)");
  sub->add_option("--threads", c.threads, "worker count (default: hardware)");
}

ordered_json base_config(const std::string& command, const CommonOpts& c) {
  ordered_json cfg;
  cfg["command"] = command;
  cfg["law"] = c.law;
  return cfg;
}

void emit_json(OutputTarget& out, const ordered_json& config, ordered_json body) {
  ordered_json doc;
  doc["config"] = config;
  for (auto& [k, v] : body.items()) doc[k] = std::move(v);
  out.stream() << doc.dump(2) << "\n";
}

// --- subcommand handlers ----------------------------------------------------

int cmd_renewal(const CommonOpts& c, std::int64_t n, const std::string& emit, double p,
                std::int64_t lags, double rel_tol, const std::string& n_list_text) {
  const auto law = TailLaw::parse(c.law);
  OutputTarget out(c.out);
  ordered_json cfg = base_config("renewal", c);
  cfg["n"] = n;
  cfg["emit"] = emit;

  if (emit == "q") {
    const auto seq = renewal_sequence(law, n);
    CsvWriter csv(out.stream());
    write_config_comment(csv, cfg);
    csv.header(std::vector<std::string>{"n", "q"});
    for (std::int64_t i = 0; i <= n; ++i)
      csv.row(std::vector<std::string>{CsvWriter::cell(i), CsvWriter::cell(seq.q[std::size_t(i)])});
    return 0;
  }
  if (emit == "corr") {
    cfg["lags"] = lags;
    cfg["rel_tol"] = rel_tol;
    const auto corr = correlation_sequence(law, lags, rel_tol);
    CsvWriter csv(out.stream());
    write_config_comment(csv, cfg);
    csv.comment("depth: " + std::to_string(corr.depth));
    csv.header(std::vector<std::string>{"i", "c", "trunc_error"});
    for (std::int64_t i = 0; i <= lags; ++i)
      csv.row(std::vector<std::string>{CsvWriter::cell(i), CsvWriter::cell(corr.c[std::size_t(i)]),
                                       CsvWriter::cell(corr.trunc_error[std::size_t(i)])});
    return 0;
  }
  if (emit == "var") {
    cfg["p"] = p;
    cfg["rel_tol"] = rel_tol;
    std::vector<std::int64_t> rows;
    if (!n_list_text.empty()) {
      rows = parse_int_list(n_list_text);
    } else {
      for (std::int64_t m = 1; m <= n; m *= 2) rows.push_back(m);
    }
    cfg["n_list"] = rows;
    const auto corr = correlation_sequence(law, *std::max_element(rows.begin(), rows.end()),
                                           rel_tol);
    CsvWriter csv(out.stream());
    write_config_comment(csv, cfg);
    csv.header(std::vector<std::string>{"n", "exact_var", "asymptotic_var", "ratio"});
    for (const std::int64_t m : rows) {
      const double ev = exact_variance(p, corr, m);
      const double av = asymptotic_variance(law, p, corr, m);
      csv.row(std::vector<std::string>{CsvWriter::cell(m), CsvWriter::cell(ev),
                                       CsvWriter::cell(av), CsvWriter::cell(ev / av)});
    }
    return 0;
  }
  // constants
  cfg["p"] = p;
  cfg["rel_tol"] = rel_tol;
  const auto corr = correlation_sequence(law, 1, rel_tol);
  const auto seq = renewal_sequence(law, corr.depth);
  ordered_json body;
  body["alpha"] = law.alpha();
  body["p"] = p;
  body["K_alpha"] = k_alpha(law.alpha());
  body["c_tilde"] = c_tilde(law, p, corr);
  body["q_square_sum"] = q_square_sum(seq).value;
  body["correlation_depth"] = corr.depth;
  emit_json(out, cfg, std::move(body));
  return 0;
}

int cmd_variance(const CommonOpts& c, double p, const std::string& n_list_text,
                 std::uint64_t reps, std::int64_t burn_mult) {
  const auto law = TailLaw::parse(c.law);
  const auto n_list = parse_int_list(n_list_text);
  const std::uint64_t seed = resolve_seed(c.seed);
  DiagnosticsOptions opts;
  opts.threads = c.threads;
  opts.burn_in_multiplier = burn_mult;
  const auto report = variance_compare(law, p, n_list, reps, seed, opts);

  ordered_json cfg = base_config("variance", c);
  cfg["p"] = p;
  cfg["n_list"] = n_list;
  cfg["reps"] = reps;
  cfg["burn_in_multiplier"] = burn_mult;
  cfg["seed"] = seed;
  OutputTarget out(c.out);
  if (c.format == "json")
    emit_json(out, cfg, comparison_to_json(report));
  else
    comparison_to_csv(out.stream(), report, cfg);
  return report.all_pass() ? 0 : 1;
}

int cmd_simulate(const CommonOpts& c, double p, std::int64_t n, std::int64_t burn_mult,
                 bool adjusted, const std::string& diag_path) {
  const auto law = TailLaw::parse(c.law);
  const std::uint64_t seed = resolve_seed(c.seed);
  ordered_json cfg = base_config("simulate", c);
  cfg["n"] = n;
  cfg["adjusted"] = adjusted;
  if (!adjusted) {
    cfg["p"] = p;
    cfg["burn_in_multiplier"] = burn_mult;
  }
  cfg["seed"] = seed;

  const WalkPath path = adjusted ? sample_adjusted_walk(law, n, seed)
                                 : sample_gibbs_increments(law, p, n, burn_mult * n, seed);
  if (path.diagnostics.heavy_regime_warning && !adjusted)
    std::cerr << "warning: law does not declare alpha < 1/2; the coloring measure is a "
                 "trivial mixture\n";

  OutputTarget out(c.out);
  CsvWriter csv(out.stream());
  write_config_comment(csv, cfg);
  csv.comment("diagnostics: " + diagnostics_to_json(path.diagnostics).dump());
  csv.header(std::vector<std::string>{"i", "x", "s"});
  for (std::int64_t i = 1; i <= n; ++i)
    csv.row(std::vector<std::string>{CsvWriter::cell(i),
                                     std::to_string(int(path.increments[std::size_t(i - 1)])),
                                     CsvWriter::cell(path.positions[std::size_t(i)])});
  if (!diag_path.empty()) {
    std::ofstream diag(diag_path, std::ios::binary);
    ordered_json doc;
    doc["config"] = cfg;
    doc["diagnostics"] = diagnostics_to_json(path.diagnostics);
    diag << doc.dump(2) << "\n";
  }
  return 0;
}

int cmd_rescale(const CommonOpts& c, double p, std::int64_t n, std::int64_t burn_mult,
                const std::string& grid_text) {
  const auto law = TailLaw::parse(c.law);
  const auto grid = parse_double_list(grid_text);
  const std::uint64_t seed = resolve_seed(c.seed);
  const auto corr = correlation_sequence(law, 1);
  const double ct = c_tilde(law, p, corr);
  const double t_max = *std::max_element(grid.begin(), grid.end());
  const auto len = std::int64_t(std::ceil(double(n) * t_max));
  const auto path = sample_gibbs_increments(law, p, std::max<std::int64_t>(len, 1),
                                            burn_mult * std::max<std::int64_t>(len, 1), seed);
  const auto rs = rescale(path, law, ct, n, grid);

  ordered_json cfg = base_config("rescale", c);
  cfg["p"] = p;
  cfg["n"] = n;
  cfg["grid"] = grid;
  cfg["burn_in_multiplier"] = burn_mult;
  cfg["seed"] = seed;
  OutputTarget out(c.out);
  CsvWriter csv(out.stream());
  write_config_comment(csv, cfg);
  csv.comment("c_tilde: " + format_double(ct));
  csv.comment("diagnostics: " + diagnostics_to_json(path.diagnostics).dump());
  csv.header(std::vector<std::string>{"t", "value"});
  for (std::size_t j = 0; j < rs.t.size(); ++j)
    csv.row(std::vector<std::string>{CsvWriter::cell(rs.t[j]), CsvWriter::cell(rs.value[j])});
  return 0;
}

int cmd_meet(const CommonOpts& c, std::int64_t k, const std::string& depth_list_text,
             std::uint64_t reps) {
  const auto law = TailLaw::parse(c.law);
  const auto depths = parse_int_list(depth_list_text);
  const std::uint64_t seed = resolve_seed(c.seed);
  double rho_exact = 1.0; // divergent square-sum laws meet almost surely
  if (law.subcritical()) rho_exact = MeetingProbabilityTable::shared_for(law)->rho(k);

  ordered_json cfg = base_config("meet", c);
  cfg["k"] = k;
  cfg["depth_list"] = depths;
  cfg["reps"] = reps;
  cfg["seed"] = seed;

  ordered_json rows = ordered_json::array();
  std::vector<std::vector<std::string>> csv_rows;
  for (const std::int64_t depth : depths) {
    const auto est = meeting_probability_mc(law, k, depth, reps, seed, c.threads);
    ordered_json row;
    row["k"] = k;
    row["depth"] = depth;
    row["estimate"] = est.estimate;
    row["ci"] = est.ci;
    row["rho_exact"] = rho_exact;
    rows.push_back(std::move(row));
    csv_rows.push_back({CsvWriter::cell(k), CsvWriter::cell(depth), CsvWriter::cell(est.estimate),
                        CsvWriter::cell(est.ci), CsvWriter::cell(rho_exact)});
  }

  OutputTarget out(c.out);
  if (c.format == "json") {
    ordered_json body;
    body["estimate"] = rows.back()["estimate"]; // deepest scan, headline number
    body["rows"] = std::move(rows);
    emit_json(out, cfg, std::move(body));
  } else {
    CsvWriter csv(out.stream());
    write_config_comment(csv, cfg);
    csv.header(std::vector<std::string>{"k", "depth", "estimate", "ci", "rho_exact"});
    for (const auto& r : csv_rows) csv.row(r);
  }
  return 0;
}

int cmd_components(const CommonOpts& c, std::int64_t lo, std::int64_t hi, std::int64_t count_lo,
                   std::int64_t count_hi, std::uint64_t reps) {
  const auto law = TailLaw::parse(c.law);
  const std::uint64_t seed = resolve_seed(c.seed);
  if (count_hi == 0) count_hi = hi;
  std::vector<double> counts(reps);
  parallel_for(
      reps,
      [&](std::uint64_t r) {
        const auto pm = sample_parents(law, lo, hi, seed, std::uint32_t(r));
        counts[r] = double(component_partition(pm).count_on(count_lo, count_hi));
      },
      c.threads);

  ordered_json cfg = base_config("components", c);
  cfg["lo"] = lo;
  cfg["hi"] = hi;
  cfg["count_lo"] = count_lo;
  cfg["count_hi"] = count_hi;
  cfg["reps"] = reps;
  cfg["seed"] = seed;
  OutputTarget out(c.out);
  const auto mv = mean_variance(counts);
  if (c.format == "json") {
    ordered_json body;
    body["mean_count"] = mv.mean;
    body["stderr"] = mv.stderr_mean;
    body["counts"] = counts;
    emit_json(out, cfg, std::move(body));
  } else {
    CsvWriter csv(out.stream());
    write_config_comment(csv, cfg);
    csv.comment("mean_count: " + format_double(mv.mean));
    csv.header(std::vector<std::string>{"replica", "count"});
    for (std::uint64_t r = 0; r < reps; ++r)
      csv.row(std::vector<std::string>{CsvWriter::cell(r), CsvWriter::cell(counts[r])});
  }
  return 0;
}

int cmd_hurst(const CommonOpts& c, double p, const std::string& n_list_text, std::uint64_t reps,
              bool exact_only, std::int64_t burn_mult) {
  const auto law = TailLaw::parse(c.law);
  const auto n_list = parse_int_list(n_list_text);
  std::uint64_t seed = 0;

  std::vector<std::pair<double, double>> curve;
  if (exact_only) {
    const auto corr = correlation_sequence(law, *std::max_element(n_list.begin(), n_list.end()));
    for (const auto n : n_list) curve.emplace_back(double(n), exact_variance(p, corr, n));
  } else {
    seed = resolve_seed(c.seed);
    const auto rho = MeetingProbabilityTable::shared_for(law);
    std::size_t row = 0;
    for (const auto n : n_list) {
      std::vector<double> sn(reps);
      parallel_for(
          reps,
          [&](std::uint64_t r) {
            const std::uint64_t id = row * reps + r;
            sn[r] = double(sample_gibbs_increments(law, p, n, burn_mult * n, seed,
                                                   std::uint32_t(id), rho.get())
                               .positions.back());
          },
          c.threads);
      curve.emplace_back(double(n), mean_variance(sn).var);
      ++row;
    }
  }
  const auto fit = hurst_estimate(curve);

  ordered_json cfg = base_config("hurst", c);
  cfg["p"] = p;
  cfg["n_list"] = n_list;
  cfg["exact_only"] = exact_only;
  if (!exact_only) {
    cfg["reps"] = reps;
    cfg["burn_in_multiplier"] = burn_mult;
    cfg["seed"] = seed;
  }
  OutputTarget out(c.out);
  if (c.format == "json") {
    ordered_json body;
    body["h"] = fit.h;
    body["stderr"] = fit.stderr_;
    ordered_json pts = ordered_json::array();
    for (const auto& [n, var] : curve) {
      ordered_json pt;
      pt["n"] = n;
      pt["var"] = var;
      pts.push_back(std::move(pt));
    }
    body["curve"] = std::move(pts);
    emit_json(out, cfg, std::move(body));
  } else {
    CsvWriter csv(out.stream());
    write_config_comment(csv, cfg);
    csv.comment("h: " + format_double(fit.h) + " stderr: " + format_double(fit.stderr_));
    csv.header(std::vector<std::string>{"n", "var"});
    for (const auto& [n, var] : curve)
      csv.row(std::vector<std::string>{CsvWriter::cell(n), CsvWriter::cell(var)});
  }
  return 0;
}

int cmd_fgn(const CommonOpts& c, double hurst, std::int64_t n, const std::string& emit,
            std::uint64_t reps) {
  const FbmParams params{hurst};
  ordered_json cfg = base_config("fgn", c);
  cfg.erase("law");
  cfg["hurst"] = hurst;
  cfg["n"] = n;
  cfg["emit"] = emit;
  OutputTarget out(c.out);
  CsvWriter csv(out.stream());
  if (emit == "gamma") {
    write_config_comment(csv, cfg);
    csv.header(std::vector<std::string>{"k", "gamma"});
    for (std::int64_t k = 0; k <= n; ++k)
      csv.row(std::vector<std::string>{CsvWriter::cell(k),
                                       CsvWriter::cell(fgn_autocovariance(params, k))});
    return 0;
  }
  const std::uint64_t seed = resolve_seed(c.seed);
  cfg["reps"] = reps;
  cfg["seed"] = seed;
  write_config_comment(csv, cfg);
  std::vector<std::string> header{"i"};
  for (std::uint64_t r = 0; r < reps; ++r) header.push_back("x" + std::to_string(r));
  csv.header(header);
  std::vector<std::vector<double>> paths;
  for (std::uint64_t r = 0; r < reps; ++r) paths.push_back(sample_fgn(params, n, seed, std::uint32_t(r)));
  for (std::int64_t i = 0; i < n; ++i) {
    std::vector<std::string> cells{CsvWriter::cell(i)};
    for (std::uint64_t r = 0; r < reps; ++r) cells.push_back(CsvWriter::cell(paths[r][std::size_t(i)]));
    csv.row(cells);
  }
  return 0;
}

int cmd_fkg(const CommonOpts& c, double p, std::int64_t n, std::uint64_t reps,
            double sigma_mult, std::int64_t burn_mult) {
  const auto law = TailLaw::parse(c.law);
  const std::uint64_t seed = resolve_seed(c.seed);
  DiagnosticsOptions opts;
  opts.threads = c.threads;
  opts.sigma_mult = sigma_mult;
  opts.burn_in_multiplier = burn_mult;
  const auto report = fkg_test(law, p, n, reps, seed, opts);

  ordered_json cfg = base_config("fkg", c);
  cfg["p"] = p;
  cfg["n"] = n;
  cfg["reps"] = reps;
  cfg["sigma_mult"] = sigma_mult;
  cfg["seed"] = seed;
  OutputTarget out(c.out);
  if (c.format == "json")
    emit_json(out, cfg, comparison_to_json(report));
  else
    comparison_to_csv(out.stream(), report, cfg);
  return report.all_pass() ? 0 : 1;
}

int cmd_maxstats(const CommonOpts& c, double p, std::int64_t n, std::uint64_t reps,
                 const std::string& theta_text, std::int64_t burn_mult) {
  const auto law = TailLaw::parse(c.law);
  const auto theta = parse_double_list(theta_text);
  const std::uint64_t seed = resolve_seed(c.seed);
  DiagnosticsOptions opts;
  opts.threads = c.threads;
  opts.burn_in_multiplier = burn_mult;
  const auto ms = max_statistics(law, p, n, reps, theta, seed, opts);

  ordered_json cfg = base_config("maxstats", c);
  cfg["p"] = p;
  cfg["n"] = n;
  cfg["reps"] = reps;
  cfg["theta_list"] = theta;
  cfg["seed"] = seed;
  OutputTarget out(c.out);
  if (c.format == "json") {
    ordered_json body;
    body["identity_max_error"] = ms.identity_max_error;
    ordered_json rows = ordered_json::array();
    for (std::size_t j = 0; j < theta.size(); ++j) {
      ordered_json row;
      row["theta"] = theta[j];
      row["tail_frequency"] = ms.tail_frequency[j];
      rows.push_back(std::move(row));
    }
    body["rows"] = std::move(rows);
    emit_json(out, cfg, std::move(body));
  } else {
    CsvWriter csv(out.stream());
    write_config_comment(csv, cfg);
    csv.comment("identity_max_error: " + format_double(ms.identity_max_error));
    csv.header(std::vector<std::string>{"theta", "tail_frequency"});
    for (std::size_t j = 0; j < theta.size(); ++j)
      csv.row(std::vector<std::string>{CsvWriter::cell(theta[j]),
                                       CsvWriter::cell(ms.tail_frequency[j])});
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"fracwalk: heavy-tailed look-back walks, renewal structure, and "
               "fractional Brownian scaling checks"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  // renewal ------------------------------------------------------------
  CommonOpts c_ren;
  std::int64_t ren_n = 4096, ren_lags = 1024;
  double ren_p = 0.5, ren_tol = kDefaultCorrRelTol;
  std::string ren_emit = "q", ren_nlist;
  auto* ren = app.add_subcommand("renewal", "renewal sequence, correlations, variance tables");
  add_common(ren, c_ren);
  ren->add_option("--n", ren_n, "table length");
  ren->add_option("--emit", ren_emit, "q | corr | var | constants")
      ->check(CLI::IsMember({"q", "corr", "var", "constants"}));
  ren->add_option("--p", ren_p, "color bias for var/constants tables");
  ren->add_option("--lags", ren_lags, "lags for --emit corr");
  ren->add_option("--rel-tol", ren_tol, "correlation truncation tolerance");
  ren->add_option("--n-list", ren_nlist, "rows for --emit var (default dyadic)");

  // variance -----------------------------------------------------------
  CommonOpts c_var;
  c_var.format = "json";
  double var_p = 0.5;
  std::string var_nlist = "64,256,1024";
  std::uint64_t var_reps = 20000;
  std::int64_t var_burn = 8;
  auto* var = app.add_subcommand("variance", "Monte Carlo variance against the exact formula");
  add_common(var, c_var);
  var->add_option("--p", var_p, "color bias");
  var->add_option("--n-list", var_nlist, "walk lengths");
  var->add_option("--reps", var_reps, "replicas per length");
  var->add_option("--burn-mult", var_burn, "burn-in depth multiplier B = mult * n");

  // simulate -----------------------------------------------------------
  CommonOpts c_sim;
  double sim_p = 0.5;
  std::int64_t sim_n = 1024, sim_burn = 8;
  bool sim_adjusted = false;
  std::string sim_diag;
  auto* sim = app.add_subcommand("simulate", "sample one walk path");
  add_common(sim, c_sim);
  sim->add_option("--p", sim_p, "color bias");
  sim->add_option("--n", sim_n, "path length");
  sim->add_option("--burn-mult", sim_burn, "burn-in depth multiplier");
  sim->add_flag("--adjusted", sim_adjusted, "half-line walk with fresh fair coins");
  sim->add_option("--diag", sim_diag, "also write a diagnostics JSON blob here");

  // rescale ------------------------------------------------------------
  CommonOpts c_rsc;
  double rsc_p = 0.5;
  std::int64_t rsc_n = 16384, rsc_burn = 8;
  std::string rsc_grid = "0.25,0.5,0.75,1";
  auto* rsc = app.add_subcommand("rescale", "rescaled walk values on a time grid");
  add_common(rsc, c_rsc);
  rsc->add_option("--p", rsc_p, "color bias");
  rsc->add_option("--n", rsc_n, "scaling parameter n");
  rsc->add_option("--grid", rsc_grid, "comma list of times in [0, T]");
  rsc->add_option("--burn-mult", rsc_burn, "burn-in depth multiplier");

  // meet ---------------------------------------------------------------
  CommonOpts c_meet;
  c_meet.format = "json";
  std::int64_t meet_k = 1;
  std::string meet_depths = "1000000";
  std::uint64_t meet_reps = 100000;
  auto* meet = app.add_subcommand("meet", "ancestral line meeting probability");
  add_common(meet, c_meet);
  meet->add_option("--k", meet_k, "start separation");
  meet->add_option("--depth", meet_depths, "depth or comma list of depths");
  meet->add_option("--reps", meet_reps, "replicas");

  // components ---------------------------------------------------------
  CommonOpts c_comp;
  std::int64_t comp_lo = -100000, comp_hi = 1000, comp_clo = 1, comp_chi = 0;
  std::uint64_t comp_reps = 30;
  auto* comp = app.add_subcommand("components", "window component counts");
  add_common(comp, c_comp);
  comp->add_option("--lo", comp_lo, "window lower end");
  comp->add_option("--hi", comp_hi, "window upper end");
  comp->add_option("--count-lo", comp_clo, "count components meeting [count-lo, count-hi]");
  comp->add_option("--count-hi", comp_chi, "defaults to hi");
  comp->add_option("--reps", comp_reps, "replicas");

  // hurst ----------------------------------------------------------------
  CommonOpts c_hur;
  c_hur.format = "json";
  double hur_p = 0.5;
  std::string hur_nlist = "256,512,1024,2048,4096,8192,16384";
  std::uint64_t hur_reps = 4000;
  std::int64_t hur_burn = 8;
  bool hur_exact = false;
  auto* hur = app.add_subcommand("hurst", "Hurst exponent from a variance curve");
  add_common(hur, c_hur);
  hur->add_option("--p", hur_p, "color bias");
  hur->add_option("--n-list", hur_nlist, "curve abscissae");
  hur->add_option("--reps", hur_reps, "replicas per point");
  hur->add_option("--burn-mult", hur_burn, "burn-in depth multiplier");
  hur->add_flag("--exact-only", hur_exact, "use the exact variance formula, no sampling");

  // fgn ------------------------------------------------------------------
  CommonOpts c_fgn;
  double fgn_h = 0.75;
  std::int64_t fgn_n = 64;
  std::string fgn_emit = "gamma";
  std::uint64_t fgn_reps = 1;
  auto* fgn = app.add_subcommand("fgn", "fractional Gaussian noise oracle");
  add_common(fgn, c_fgn, false);
  fgn->add_option("--hurst", fgn_h, "Hurst parameter in (0,1)");
  fgn->add_option("--n", fgn_n, "vector length (<= 4096)");
  fgn->add_option("--emit", fgn_emit, "gamma | sample")->check(CLI::IsMember({"gamma", "sample"}));
  fgn->add_option("--reps", fgn_reps, "paths for --emit sample");

  // fkg ------------------------------------------------------------------
  CommonOpts c_fkg;
  c_fkg.format = "json";
  double fkg_p = 0.5, fkg_sigma = 3.0;
  std::int64_t fkg_n = 256, fkg_burn = 8;
  std::uint64_t fkg_reps = 20000;
  auto* fkg = app.add_subcommand("fkg", "correlation inequality checks");
  add_common(fkg, c_fkg);
  fkg->add_option("--p", fkg_p, "color bias");
  fkg->add_option("--n", fkg_n, "walk length");
  fkg->add_option("--reps", fkg_reps, "replicas");
  fkg->add_option("--sigma-mult", fkg_sigma, "one-sided band width in standard errors");
  fkg->add_option("--burn-mult", fkg_burn, "burn-in depth multiplier");

  // maxstats ---------------------------------------------------------------
  CommonOpts c_max;
  double max_p = 0.5;
  std::int64_t max_n = 4096, max_burn = 8;
  std::uint64_t max_reps = 20000;
  std::string max_theta = "0,0.5,1,2,4,8";
  auto* mx = app.add_subcommand("maxstats", "running-maximum tail statistics");
  add_common(mx, c_max);
  mx->add_option("--p", max_p, "color bias");
  mx->add_option("--n", max_n, "walk length");
  mx->add_option("--reps", max_reps, "replicas");
  mx->add_option("--theta-list", max_theta, "thresholds theta");
  mx->add_option("--burn-mult", max_burn, "burn-in depth multiplier");

  // suite --------------------------------------------------------------
  int suite_threads = 0;
  std::string suite_only;
  auto* suite = app.add_subcommand("suite", "run the full acceptance suite");
  suite->add_option("--threads", suite_threads, "worker count");
  suite->add_option("--only", suite_only, "comma list of criterion ids");

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = splice_config(std::move(args));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    std::reverse(args.begin(), args.end()); // CLI11's vector parse wants reversed args
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
      std::cout << app.help();
      return 0;
    }
    std::cerr << e.what() << "\n\n" << app.help() << "\n";
    return 2;
  }

  try {
    auto set_threads = [](const CommonOpts& c) {
      if (c.threads > 0) set_default_thread_count(c.threads);
    };
    if (ren->parsed()) {
      set_threads(c_ren);
      return cmd_renewal(c_ren, ren_n, ren_emit, ren_p, ren_lags, ren_tol, ren_nlist);
    }
    if (var->parsed()) {
      set_threads(c_var);
      return cmd_variance(c_var, var_p, var_nlist, var_reps, var_burn);
    }
    if (sim->parsed()) {
      set_threads(c_sim);
      return cmd_simulate(c_sim, sim_p, sim_n, sim_burn, sim_adjusted, sim_diag);
    }
    if (rsc->parsed()) {
      set_threads(c_rsc);
      return cmd_rescale(c_rsc, rsc_p, rsc_n, rsc_burn, rsc_grid);
    }
    if (meet->parsed()) {
      set_threads(c_meet);
      return cmd_meet(c_meet, meet_k, meet_depths, meet_reps);
    }
    if (comp->parsed()) {
      set_threads(c_comp);
      return cmd_components(c_comp, comp_lo, comp_hi, comp_clo, comp_chi, comp_reps);
    }
    if (hur->parsed()) {
      set_threads(c_hur);
      return cmd_hurst(c_hur, hur_p, hur_nlist, hur_reps, hur_exact, hur_burn);
    }
    if (fgn->parsed()) {
      set_threads(c_fgn);
      return cmd_fgn(c_fgn, fgn_h, fgn_n, fgn_emit, fgn_reps);
    }
    if (fkg->parsed()) {
      set_threads(c_fkg);
      return cmd_fkg(c_fkg, fkg_p, fkg_n, fkg_reps, fkg_sigma, fkg_burn);
    }
    if (mx->parsed()) {
      set_threads(c_max);
      return cmd_maxstats(c_max, max_p, max_n, max_reps, max_theta, max_burn);
    }
    if (suite->parsed()) {
      AcceptanceOptions opts;
      opts.threads = suite_threads;
      opts.cli_path = argv[0];
      if (!suite_only.empty())
        for (const auto id : parse_int_list(suite_only)) opts.only.push_back(int(id));
      const auto results = run_acceptance(opts, std::cout);
      return all_passed(results) ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
