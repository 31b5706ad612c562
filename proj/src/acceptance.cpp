#include "fracwalk/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <fstream>
#include <functional>
#include <unistd.h>
#include <sstream>

#include "fracwalk/ancestry.hpp"
#include "fracwalk/diagnostics.hpp"
#include "fracwalk/fbm.hpp"
#include "fracwalk/gibbs_walk.hpp"
#include "fracwalk/parallel.hpp"
#include "fracwalk/stats.hpp"
#include "fracwalk/tail_law.hpp"

namespace fracwalk {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v, int prec = 5) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
  return buf;
}

// Shared heavy artifacts, built lazily by whichever criterion needs them first.
struct Context {
  AcceptanceOptions opts;
  std::optional<CorrelationSequence> corr_quarter; // alpha = 0.25, lags to 2^14
  std::map<double, std::vector<double>> v_at_1;    // rescaled value at t = 1, per p
  std::map<double, std::vector<double>> v_at_half; // rescaled value at t = 1/2, per p

  const CorrelationSequence& corr() {
    if (!corr_quarter)
      corr_quarter = correlation_sequence(TailLaw::power(0.25), std::int64_t(1) << 14);
    return *corr_quarter;
  }

  static constexpr std::int64_t kBigN = std::int64_t(1) << 14;
  static constexpr std::uint64_t kBigReps = 10000;

  void ensure_rescaled(double p) {
    if (v_at_1.count(p)) return;
    const auto law = TailLaw::power(0.25);
    const double ct = c_tilde(law, p, corr());
    const auto rho = MeetingProbabilityTable::shared_for(law);
    const std::uint64_t seed = p == 0.5 ? 0xC7A11 : 0xC7A99;
    std::vector<double> v1(kBigReps), vh(kBigReps);
    const std::vector<double> grid{0.5, 1.0};
    parallel_for(
        kBigReps,
        [&](std::uint64_t r) {
          const auto path = sample_gibbs_increments(law, p, kBigN, 8 * kBigN, seed,
                                                    std::uint32_t(r), rho.get());
          const auto rs = rescale(path, law, ct, kBigN, grid);
          vh[r] = rs.value[0];
          v1[r] = rs.value[1];
        },
        opts.threads);
    v_at_half.emplace(p, std::move(vh));
    v_at_1.emplace(p, std::move(v1));
  }
};

// --- criterion 1 -----------------------------------------------------------

// Independent oracle: hitting frequencies of partial sums of the law.
std::vector<double> mc_hit_frequency(const TailLaw& law, std::uint64_t reps, std::uint64_t seed,
                                     int threads) {
  std::vector<std::uint64_t> masks(reps, 0);
  parallel_for(
      reps,
      [&](std::uint64_t r) {
        std::uint64_t mask = 1; // site 0 always hit
        std::int64_t s = 0, step = 0;
        for (;;) {
          s += law.sample(seed, std::uint32_t(r), step++);
          if (s > 50) break;
          mask |= std::uint64_t(1) << s;
        }
        masks[r] = mask;
      },
      threads);
  std::vector<std::uint64_t> hits(51, 0);
  for (const auto mask : masks)
    for (int n = 0; n <= 50; ++n) hits[std::size_t(n)] += (mask >> n) & 1;
  std::vector<double> freq(51);
  for (int n = 0; n <= 50; ++n) freq[std::size_t(n)] = double(hits[std::size_t(n)]) / double(reps);
  return freq;
}

CriterionResult criterion_renewal_oracle(Context& ctx) {
  CriterionResult res{1, "renewal oracle vs Monte Carlo hitting frequencies", true, "", 0};
  const std::uint64_t reps = 1'000'000;
  double worst_z = 0.0;
  for (const auto& law : {TailLaw::power(0.25), TailLaw::power(0.4),
                          TailLaw::finite_support({0.5, 0.5})}) {
    const auto seq = renewal_sequence(law, 50);
    const auto freq = mc_hit_frequency(law, reps, 0xAC01, ctx.opts.threads);
    for (int n = 1; n <= 50; ++n) {
      const double q = seq.q[std::size_t(n)];
      const double sigma = std::sqrt(std::max(q * (1.0 - q), 1e-12) / double(reps));
      const double z = std::fabs(freq[std::size_t(n)] - q) / sigma;
      worst_z = std::max(worst_z, z);
      if (z >= 4.0) res.pass = false;
    }
  }
  const auto two_point = renewal_sequence(TailLaw::finite_support({0.5, 0.5}), 4);
  const double want[5] = {1.0, 0.5, 0.75, 0.625, 0.6875};
  for (int n = 0; n <= 4; ++n)
    if (std::fabs(two_point.q[std::size_t(n)] - want[n]) > 1e-12) res.pass = false;
  res.detail = "worst |z| = " + fmt(worst_z) + " over 3 laws x 50 sites (limit 4)";
  return res;
}

// --- criterion 2 -----------------------------------------------------------

CriterionResult criterion_partial_sum_asymptics(Context&) {
  CriterionResult res{2, "partial sums of q_n approach the Karamata asymptote", true, "", 0};
  const auto seq = renewal_sequence(TailLaw::power(0.25), 100000);
  auto ratio_at = [&](std::int64_t x) {
    const double sum = pairwise_sum(std::span<const double>(seq.q.data(), std::size_t(x) + 1));
    return sum / (0.90029 * std::pow(double(x), 0.25)); // constant as pinned
  };
  const double r3 = ratio_at(1000), r5 = ratio_at(100000);
  res.pass = r5 >= 0.85 && r5 <= 1.15 && std::fabs(r5 - 1.0) < std::fabs(r3 - 1.0);
  res.detail = "ratio(1e3) = " + fmt(r3) + ", ratio(1e5) = " + fmt(r5) + " (band [0.85, 1.15])";
  return res;
}

// --- criterion 3 -----------------------------------------------------------

CriterionResult criterion_square_sum_dichotomy(Context&) {
  CriterionResult res{3, "sum of q_n^2: stabilizes iff alpha < 1/2", true, "", 0};
  auto change = [](const TailLaw& law) {
    const auto a = q_square_sum(renewal_sequence(law, std::int64_t(1) << 14));
    const auto b = q_square_sum(renewal_sequence(law, std::int64_t(1) << 15));
    return (b.value - a.value) / a.value;
  };
  const double light = change(TailLaw::power(0.25));
  const double heavy = change(TailLaw::power(0.75));
  const double point = change(TailLaw::finite_support({1.0}));
  res.pass = light < 0.01 && heavy > 0.01 && point > 0.01;
  res.detail = "doubling change: alpha=0.25: " + fmt(light) + ", alpha=0.75: " + fmt(heavy) +
               ", point mass: " + fmt(point);
  return res;
}

// --- criterion 4 -----------------------------------------------------------

CriterionResult criterion_phase_transition(Context& ctx) {
  CriterionResult res{4, "component phase transition via meeting probabilities", true, "", 0};
  const std::uint64_t reps = 100000;
  const auto over = meeting_probability_mc(TailLaw::power(0.75), 1, 1000000, reps, 0xACCE5504,
                                           ctx.opts.threads);
  const double rho1 = ctx.corr().rho(1);
  const auto law = TailLaw::power(0.25);
  double prev = -1.0;
  bool monotone = true;
  MeetingEstimate under;
  for (std::int64_t depth : {100, 10000, 1000000}) {
    under = meeting_probability_mc(law, 1, depth, reps, 0xACCE5505, ctx.opts.threads);
    if (under.estimate < prev) monotone = false;
    prev = under.estimate;
  }
  res.pass = over.estimate >= 0.99 && monotone && std::fabs(under.estimate - rho1) <= 0.02 &&
             under.estimate < 1.0 - 0.05;
  res.detail = "alpha=0.75 depth 1e6: " + fmt(over.estimate) +
               " (>= 0.99); alpha=0.25: " + fmt(under.estimate) + " vs rho_1 = " + fmt(rho1);
  return res;
}

// --- criterion 5 -----------------------------------------------------------

CriterionResult criterion_exact_variance(Context& ctx) {
  CriterionResult res{5, "sampler variance matches the exact correlation formula", true, "", 0};
  const std::vector<std::int64_t> ns{1, 64, 256, 1024};
  DiagnosticsOptions opts;
  opts.threads = ctx.opts.threads;
  double worst_z = 0.0;
  std::string fails;
  for (double p : {0.3, 0.5}) {
    const auto rep = variance_compare(TailLaw::power(0.25), p, ns, 20000,
                                      p == 0.3 ? 0x5A3ull : 0x5A5ull, opts);
    for (const auto& row : rep.rows) {
      worst_z = std::max(worst_z, std::fabs(row.z));
      if (!row.pass) {
        res.pass = false;
        fails += " p=" + fmt(p) + " " + row.label;
      }
    }
  }
  const double n1 = exact_variance(0.5, ctx.corr(), 1);
  if (std::fabs(n1 - 1.0) > 1e-13) res.pass = false;
  res.detail = "worst |z| = " + fmt(worst_z) + " over {p} x {n} (3 sigma + budgets)" + fails;
  return res;
}

// --- criterion 6 -----------------------------------------------------------

CriterionResult criterion_variance_asymptotics(Context& ctx) {
  CriterionResult res{6, "variance asymptote ratio and the c~ normalization identity", true, "",
                      0};
  const auto law = TailLaw::power(0.25);
  const auto& corr = ctx.corr();
  const std::int64_t n = std::int64_t(1) << 14;
  const double ratio = exact_variance(0.5, corr, n) / asymptotic_variance(law, 0.5, corr, n);
  bool identity_ok = true;
  double worst_rel = 0.0;
  for (double p : {0.3, 0.5}) {
    const double ct = c_tilde(law, p, corr);
    const double rel = std::fabs(ct * ct * 4.0 * p * (1.0 - p) * k_alpha(0.25) / corr.c[0] - 1.0);
    worst_rel = std::max(worst_rel, rel);
    if (rel > 1e-4) identity_ok = false;
  }
  res.pass = ratio >= 0.8 && ratio <= 1.2 && identity_ok;
  res.detail = "exact/asymptotic at 2^14 = " + fmt(ratio) +
               " (band [0.8, 1.2]); identity rel err = " + fmt(worst_rel);
  return res;
}

// --- criterion 7 -----------------------------------------------------------

CriterionResult criterion_fbm_covariance(Context& ctx) {
  CriterionResult res{7, "rescaled walk has the fractional Brownian covariance", true, "", 0};
  ctx.ensure_rescaled(0.5);
  const auto& v1 = ctx.v_at_1.at(0.5);
  const auto& vh = ctx.v_at_half.at(0.5);
  const double var1 = mean_variance(v1).var;
  const auto cov = covariance(vh, v1);
  const bool var_ok = var1 >= 0.9 && var1 <= 1.1;
  const bool cov_ok = std::fabs(cov.cov - 0.5) <= 3.0 * cov.stderr_;
  res.pass = var_ok && cov_ok;
  res.detail = "Var(V_1) = " + fmt(var1) + " (band [0.9, 1.1]); Cov(V_0.5, V_1) = " +
               fmt(cov.cov) + " +- " + fmt(3.0 * cov.stderr_) + " vs 0.5";
  return res;
}

// --- criterion 8 -----------------------------------------------------------

CriterionResult criterion_gaussianity(Context& ctx) {
  CriterionResult res{8, "rescaled marginals are Gaussian at the moment level", true, "", 0};
  std::string parts;
  for (double p : {0.5, 0.9}) {
    ctx.ensure_rescaled(p);
    const auto& v1 = ctx.v_at_1.at(p);
    const auto chk = gaussianity_check(v1, 1.0);
    if (!chk.moments_pass(3.0)) res.pass = false;
    parts += " p=" + fmt(p) + ": skew " + fmt(chk.skewness) + "/" + fmt(3 * chk.sigma_skew) +
             ", exkurt " + fmt(chk.excess_kurtosis) + "/" + fmt(3 * chk.sigma_kurt) + ";";
  }
  res.detail = "|moment| vs 3 sigma band:" + parts;
  return res;
}

// --- criterion 9 -----------------------------------------------------------

CriterionResult criterion_hurst(Context& ctx) {
  CriterionResult res{9, "Hurst recovery from variance curves", true, "", 0};
  std::vector<std::pair<double, double>> exact_curve;
  for (std::int64_t n = 256; n <= 16384; n *= 2)
    exact_curve.emplace_back(double(n), std::pow(double(n), 1.5));
  const auto noiseless = hurst_estimate(exact_curve);

  const auto law = TailLaw::power(0.25);
  const auto rho = MeetingProbabilityTable::shared_for(law);
  std::vector<std::pair<double, double>> mc_curve;
  std::size_t row = 0;
  for (std::int64_t n = 256; n <= 16384; n *= 2, ++row) {
    const std::uint64_t reps = 4000;
    std::vector<double> sn(reps);
    parallel_for(
        reps,
        [&](std::uint64_t r) {
          sn[r] = double(sample_gibbs_increments(law, 0.5, n, 8 * n, 0x4075 + row,
                                                 std::uint32_t(r), rho.get())
                             .positions.back());
        },
        ctx.opts.threads);
    mc_curve.emplace_back(double(n), mean_variance(sn).var);
  }
  const auto mc = hurst_estimate(mc_curve);
  res.pass = std::fabs(noiseless.h - 0.75) < 1e-12 && std::fabs(mc.h - 0.75) <= 0.05;
  res.detail = "noiseless H = " + fmt(noiseless.h, 12) + "; MC H = " + fmt(mc.h) + " +- " +
               fmt(mc.stderr_) + " (want within 0.05 of 0.75)";
  return res;
}

// --- criterion 10 ----------------------------------------------------------

CriterionResult criterion_fkg(Context& ctx) {
  CriterionResult res{10, "FKG: increasing functionals are not negatively correlated", true, "",
                      0};
  DiagnosticsOptions opts;
  opts.threads = ctx.opts.threads;
  opts.sigma_mult = 4.0; // Bonferroni family-wise band over the whole grid
  double worst_z = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0xF6A0;
  for (const auto& law : {TailLaw::power(0.25), TailLaw::finite_support({0.5, 0.5})}) {
    for (double p : {0.3, 0.5, 0.7}) {
      const auto rep = fkg_test(law, p, 256, 20000, seed++, opts);
      for (const auto& row : rep.rows) {
        if (row.label.find("B_0n") == std::string::npos)
          worst_z = std::min(worst_z, row.z); // most negative increasing-pair z
        if (!row.pass) res.pass = false;
      }
    }
  }
  res.detail = "lowest increasing-pair z = " + fmt(worst_z) +
               " across 2 laws x 3 p x 8 pairs (limit -4)";
  return res;
}

// --- criterion 11 ----------------------------------------------------------

CriterionResult criterion_fgn_oracle(Context& ctx) {
  CriterionResult res{11, "fGn oracle: exact covariance and telescoping sums", true, "", 0};
  const FbmParams params{0.75};
  const std::int64_t n = 16;
  const std::uint64_t reps = 100000;
  auto sampler = FgnSampler::shared_for(params, n);
  std::vector<std::vector<double>> coords;
  coords.resize(std::size_t(n));
  for (auto& c : coords) c.resize(reps);
  parallel_for(
      reps,
      [&](std::uint64_t r) {
        const auto x = sampler->sample(0xF64, std::uint32_t(r));
        for (std::int64_t i = 0; i < n; ++i) coords[std::size_t(i)][r] = x[std::size_t(i)];
      },
      ctx.opts.threads);
  double worst_z = 0.0;
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::uint64_t r = 0; r < reps; ++r)
        s += coords[std::size_t(i)][r] * coords[std::size_t(j)][r];
      const double emp = s / double(reps);
      const double want = fgn_autocovariance(params, j - i);
      const double sigma = std::sqrt((1.0 + want * want) / double(reps));
      worst_z = std::max(worst_z, std::fabs(emp - want) / sigma);
    }
  if (worst_z >= 4.0) res.pass = false;

  double worst_rel = 0.0;
  for (double h : {0.55, 0.75, 0.95}) {
    // sum_{i,j<=n} gamma(|i-j|) = n gamma(0) + 2 sum_k (n-k) gamma(k)
    std::vector<double> gam(513, 0.0);
    for (std::int64_t k = 0; k <= 512; ++k) gam[std::size_t(k)] = fgn_autocovariance({h}, k);
    for (std::int64_t m = 1; m <= 512; ++m) {
      double total = double(m) * gam[0];
      for (std::int64_t k = 1; k < m; ++k) total += 2.0 * double(m - k) * gam[std::size_t(k)];
      worst_rel = std::max(worst_rel,
                           std::fabs(total / std::pow(double(m), 2.0 * h) - 1.0));
    }
  }
  if (worst_rel > 1e-9) res.pass = false;
  res.detail = "worst covariance |z| = " + fmt(worst_z) + " (limit 4); worst telescoping rel err = " +
               fmt(worst_rel);
  return res;
}

// --- criterion 12 ----------------------------------------------------------

int run_cli(const std::string& cli, const std::string& args, const fs::path& out,
            const fs::path& err) {
  const std::string cmd = cli + " " + args + " > " + out.string() + " 2> " + err.string();
  return std::system(cmd.c_str());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CriterionResult criterion_reproducibility(Context& ctx) {
  CriterionResult res{12, "CLI outputs are byte-identical across thread counts", true, "", 0};
  if (ctx.opts.cli_path.empty()) {
    res.pass = false;
    res.detail = "no CLI path provided";
    return res;
  }
  const fs::path dir = fs::temp_directory_path() /
                       ("fracwalk-accept-" + std::to_string(std::uint64_t(::getpid())));
  fs::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> runs{
      {"renewal", "renewal --law power:alpha=0.25 --n 512 --seed 7"},
      {"variance", "variance --law power:alpha=0.25 --p 0.5 --n-list 16,64 --reps 2000 --seed 7"},
      {"meet", "meet --law power:alpha=0.25 --k 1 --depth 10000 --reps 20000 --seed 7"},
      {"fgn", "fgn --hurst 0.75 --n 16 --emit sample --reps 4 --seed 7"},
      {"rescale", "rescale --law power:alpha=0.25 --p 0.5 --n 1024 --grid 0.25,0.5,1 --seed 7"},
      {"fkg", "fkg --law finite:0.5,0.5 --p 0.3 --n 64 --reps 2000 --seed 7"},
  };
  std::string mismatch;
  for (const auto& [name, args] : runs) {
    std::string reference;
    for (int threads : {1, 4, 16}) {
      const fs::path out = dir / (name + "-" + std::to_string(threads) + ".out");
      const fs::path err = dir / (name + "-" + std::to_string(threads) + ".err");
      const int rc = run_cli(ctx.opts.cli_path, args + " --threads " + std::to_string(threads),
                             out, err);
      if (rc != 0 && !(name == "variance" || name == "fkg")) {
        // statistical subcommands may exit 1 on a failed check; others must not
        res.pass = false;
        mismatch += " " + name + ":exit" + std::to_string(rc);
        break;
      }
      const std::string bytes = slurp(out);
      if (threads == 1)
        reference = bytes;
      else if (bytes != reference) {
        res.pass = false;
        mismatch += " " + name + ":threads" + std::to_string(threads);
      }
    }
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  res.detail = res.pass ? "6 subcommands x threads {1,4,16} byte-identical"
                        : ("mismatches:" + mismatch);
  return res;
}

} // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, std::ostream& out) {
  Context ctx;
  ctx.opts = opts;
  using Fn = std::function<CriterionResult(Context&)>;
  const std::vector<Fn> criteria{
      criterion_renewal_oracle,     criterion_partial_sum_asymptics,
      criterion_square_sum_dichotomy, criterion_phase_transition,
      criterion_exact_variance,     criterion_variance_asymptotics,
      criterion_fbm_covariance,     criterion_gaussianity,
      criterion_hurst,              criterion_fkg,
      criterion_fgn_oracle,         criterion_reproducibility,
  };
  std::vector<CriterionResult> results;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = int(i) + 1;
    if (!opts.only.empty() &&
        std::find(opts.only.begin(), opts.only.end(), id) == opts.only.end())
      continue;
    const auto start = std::chrono::steady_clock::now();
    CriterionResult res = criteria[i](ctx);
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char line[512];
    std::snprintf(line, sizeof(line), "[%2d/12] %s  %s (%.1fs) - %s\n", res.id,
                  res.pass ? "PASS" : "FAIL", res.name.c_str(), res.seconds, res.detail.c_str());
    out << line << std::flush;
    results.push_back(std::move(res));
  }
  return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

} // namespace fracwalk
