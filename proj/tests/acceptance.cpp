// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ristrain/config.hpp"
#include "ristrain/validation.hpp"

using namespace ristrain;

namespace {

namespace fs = std::filesystem;

struct Verdict {
  bool passed = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x, int precision = 4) {
  std::ostringstream os;
  os.precision(precision);
  os << x;
  return os.str();
}

const fs::path kSource = RISTRAIN_SOURCE_DIR;
const std::string kCli = RISTRAIN_CLI_PATH;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = "\"" + kCli + "\" " + args;
  return std::system(cmd.c_str());
}

std::vector<double> rates_for(const SweepReport& rep, Scheme s) {
  std::vector<double> out;
  for (const auto& row : rep.rows) {
    if (row.scheme == s) out.push_back(row.success_rate);
  }
  return out;
}

double binomial_se(double p, int n) { return std::sqrt(p * (1.0 - p) / n); }

// Largest drop between consecutive points beyond two standard errors of the difference,
// or a non-positive number when the curve is monotone within that band.
double monotone_violation(const std::vector<double>& p, int n) {
  double worst = -1.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const double band = 2.0 * std::hypot(binomial_se(p[i], n), binomial_se(p[i + 1], n));
    worst = std::max(worst, p[i] - p[i + 1] - band);
  }
  return worst;
}

Verdict factorization() {
  const auto start = Clock::now();
  ScenarioConfig cfg;
  cfg.n_h = 32;
  cfg.n_v = 8;
  cfg.n_t = 8;
  cfg.n_r = 8;
  const CheckResult r = check_factorization(cfg, 1000, 2024);
  const double secs = seconds_since(start);
  return {r.passed && secs < 10.0, r.detail + ", " + fmt(secs, 3) + " s"};
}

Verdict codebook_fidelity() {
  const std::vector<std::vector<int>> table = {
      {1, 9, 17, 25, 33, 41, 49, 57}, {2, 10, 18, 26, 34, 42, 50, 58},
      {3, 11, 19, 27, 35, 43, 51, 59}, {4, 12, 20, 28, 36, 44, 52, 60},
      {5, 13, 21, 29, 37, 45, 53, 61}, {6, 14, 22, 30, 38, 46, 54, 62},
      {7, 15, 23, 31, 39, 47, 55, 63}, {8, 16, 24, 32, 40, 48, 56, 64}};
  const Codebook cb = build_codebook(64, 8);
  bool ok = cb.bins() == table;
  for (const auto& bin : cb.bins()) ok = ok && intra_set_distance(bin) == 8;
  return {ok, "8 bins of 8 directions, intra-set distance 8"};
}

Verdict noiseless_soundness() {
  const auto start = Clock::now();
  bool ok = true;
  std::string detail;
  for (auto [n, m] : {std::pair{16, 2}, {32, 4}, {64, 8}}) {
    ScenarioConfig cfg;
    cfg.n_h = n;
    cfg.n_v = 8;
    cfg.n_r = 8;
    cfg.n_t = 1;
    const CheckResult r = check_noiseless_soundness(cfg, m, false);
    ok = ok && r.passed;
    detail += "(" + std::to_string(n) + "," + std::to_string(m) + "): " + r.detail + "; ";
  }
  const double secs = seconds_since(start);
  return {ok && secs < 30.0, detail + fmt(secs, 3) + " s"};
}

Verdict oracle_equivalence() {
  const auto start = Clock::now();
  ExperimentPlan plan;
  plan.scenario.n_h = 8;
  plan.scenario.n_v = 2;
  plan.scenario.n_r = 2;
  plan.scenario.n_t = 4;
  plan.ris_search = {2, 0, false};
  plan.user_search = {2, 0, false};
  plan.schemes = {Scheme::ps};
  plan.snr_db = {20.0};
  plan.trials = 500;
  plan.master_seed = 4;
  plan.truth = TruthModel::grid;
  plan.noise_enabled = false;
  plan.validate();
  const double gamma = gamma_for_average_snr(plan.scenario, plan.snr_db[0]);
  int hits = 0;
  int ris_hits = 0;
  int user_hits = 0;
  for (int t = 0; t < plan.trials; ++t) {
    const ChannelRealization real = draw_realization(plan, t);
    const OraclePair best = exhaustive_search(plan.scenario, real, gamma);
    const TrialOutcome ps = run_trial(plan, 0, Scheme::ps, t);
    if (ps.eta >= best.snr * (1.0 - 1e-9)) ++hits;
    if (ps.ris_index == ps.ris_optimal) ++ris_hits;
    if (ps.user_index == ps.user_optimal) ++user_hits;
  }
  const double frac = static_cast<double>(hits) / plan.trials;
  const double secs = seconds_since(start);
  return {frac >= 0.99 && secs < 30.0,
          std::to_string(hits) + "/500 trials reach the exhaustive maximum (RIS index right in " +
              std::to_string(ris_hits) + ", user index right in " + std::to_string(user_hits) +
              "), " + fmt(secs, 3) + " s"};
}

Verdict desk_success_curves() {
  const auto start = Clock::now();
  const CliConfig cfg = parse_config(kSource / "configs/desk.ini");
  const ExperimentPlan& plan = cfg.plan;
  const ScenarioConfig& sc = plan.scenario;
  const bool shape = sc.n_t == 1 && sc.n_r == 64 && sc.n_h == 64 && sc.n_v == 8 &&
                     plan.ris_search.beams_per_sweep == 8 && plan.trials == 2000 &&
                     plan.snr_db.size() == 15;
  const SweepReport rep = run_monte_carlo(plan, cfg.workers);
  const std::vector<double> ps = rates_for(rep, Scheme::ps);
  const std::vector<double> cs = rates_for(rep, Scheme::cs);
  const double ps_drop = monotone_violation(ps, plan.trials);
  const double cs_drop = monotone_violation(cs, plan.trials);
  double worst_gap = 1.0;
  for (std::size_t i = 0; i < ps.size(); ++i) worst_gap = std::min(worst_gap, ps[i] - cs[i]);
  // Middle third of the SNR points.
  const std::size_t lo = ps.size() / 3;
  const std::size_t hi = ps.size() - ps.size() / 3;
  double mid_gap = -1.0;
  for (std::size_t i = lo; i < hi; ++i) mid_gap = std::max(mid_gap, ps[i] - cs[i]);
  const double secs = seconds_since(start);
  const bool ok = shape && ps_drop <= 0.0 && cs_drop <= 0.0 && worst_gap >= 0.0 &&
                  mid_gap >= 0.05 && secs < 300.0;
  std::string detail = "PS " + fmt(ps.front(), 3) + ".." + fmt(ps.back(), 3) + ", CS " +
                       fmt(cs.front(), 3) + ".." + fmt(cs.back(), 3) +
                       "; drop beyond 2 SE: PS " + fmt(std::max(ps_drop, 0.0), 3) + ", CS " +
                       fmt(std::max(cs_drop, 0.0), 3) + "; min(PS-CS) " + fmt(worst_gap, 3) +
                       ", max mid-range PS-CS " + fmt(mid_gap, 3) + "; " + fmt(secs, 3) + " s";
  if (!shape) detail = "configs/desk.ini is not the desk scenario; " + detail;
  return {ok, detail};
}

Verdict refine_bins_effect() {
  ExperimentPlan plan = parse_config(kSource / "configs/paper.ini").plan;
  plan.scenario.n_t = 1;
  plan.schemes = {Scheme::ps};
  plan.trials = 7500;
  const Codebook cb(plan.scenario.n_h, plan.ris_search.beams_per_sweep);
  plan.ris_search.refine_bins = cb.bin_count();
  const std::vector<double> full = rates_for(run_monte_carlo(plan), Scheme::ps);
  plan.ris_search.refine_bins = cb.bin_count() / 2;
  const std::vector<double> half = rates_for(run_monte_carlo(plan), Scheme::ps);
  double worst = 0.0;
  std::string detail = "T=" + std::to_string(cb.bin_count()) + " vs " +
                       std::to_string(cb.bin_count() / 2) + " at the top 3 points:";
  for (std::size_t i = full.size() - 3; i < full.size(); ++i) {
    worst = std::max(worst, std::abs(full[i] - half[i]));
    detail += " " + fmt(full[i], 4) + "/" + fmt(half[i], 4);
  }
  return {worst <= 0.02, detail + ", max difference " + fmt(worst, 3)};
}

Verdict symbol_accounting() {
  bool ok = true;
  int configs = 0;
  for (auto [n, m] : {std::pair{16, 2}, {32, 4}, {64, 8}, {160, 8}, {64, 4}, {128, 16}}) {
    const Codebook cb(n, m);
    for (int t : {1, cb.bin_count() / 2, cb.bin_count()}) {
      if (t < 1) continue;
      ScenarioConfig cfg;
      cfg.n_h = n;
      cfg.n_v = 4;
      cfg.n_r = 4;
      const CheckResult r = check_symbol_accounting(cfg, SearchConfig{m, t, true});
      const int issued = instrumented_symbol_count(cb.bin_count(), m, t);
      ok = ok && r.passed && issued == cb.bin_count() + cb.coarse_rounds() + t &&
           training_symbol_budget(cb.bin_count(), m, t) == issued + 1;
      ++configs;
    }
  }
  ExperimentPlan plan;
  plan.scenario.n_h = 64;
  plan.scenario.n_v = 8;
  plan.scenario.n_r = 8;
  plan.ris_search = {8, 0, true};
  plan.snr_db = {10.0};
  plan.trials = 20;
  const SweepReport rep = parse_report_csv(format_report(run_monte_carlo(plan)));
  const int issued = instrumented_symbol_count(8, 8, 8);
  for (const auto& row : rep.rows) {
    if (row.scheme == Scheme::ps) ok = ok && row.symbols == issued && row.budget == issued + 1;
  }
  return {ok, std::to_string(configs) + " (N,M,T) configs; 64x8 report row: symbols " +
                  std::to_string(issued) + ", budget " + std::to_string(issued + 1)};
}

Verdict slice_and_modulus() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<std::pair<int, int>> sizes = {{16, 2}, {32, 4}, {64, 8},  {160, 8},
                                                  {64, 4}, {128, 16}, {256, 8}, {24, 8}};
  std::uniform_int_distribution<std::size_t> pick(0, sizes.size() - 1);
  const int cases = 10000;
  double worst_slice = 0.0;
  for (int c = 0; c < cases; ++c) {
    const auto [n, m] = sizes[pick(rng)];
    const int l = n / m;
    const double alpha = u(rng);
    const int s = std::uniform_int_distribution<int>(1, m)(rng);
    const ComplexVec full = steering_h(n, alpha);
    const ComplexVec expect = std::polar(1.0, std::numbers::pi * (s - 1) * l * alpha) *
                              std::sqrt(static_cast<double>(l) / n) * steering_h(l, alpha);
    worst_slice =
        std::max(worst_slice, (full.segment((s - 1) * l, l) - expect).cwiseAbs().maxCoeff());
  }
  double worst_mod = 0.0;
  for (int c = 0; c < cases; ++c) {
    const auto [n, m] = sizes[pick(rng)];
    const Codebook cb(n, m);
    const int round = std::uniform_int_distribution<int>(1, cb.coarse_rounds() + 1)(rng);
    const int width = cb.directions_in_round(round);
    std::vector<int> dirs(width);
    for (int& d : dirs) d = std::uniform_int_distribution<int>(1, n)(rng);
    const ComplexVec v = multibeam_vector(cb, round, dirs);
    worst_mod = std::max(worst_mod, (v.cwiseAbs().array() - 1.0).abs().maxCoeff());
  }
  return {worst_slice <= 1e-12 && worst_mod <= 1e-12,
          std::to_string(cases) + " cases each; max slice error " + fmt(worst_slice, 3) +
              ", max modulus error " + fmt(worst_mod, 3)};
}

Verdict sweep_determinism() {
  const fs::path dir = fs::temp_directory_path() / "ristrain_acceptance";
  fs::create_directories(dir);
  const std::string config = "--config \"" + (kSource / "configs/desk.ini").string() + "\"";
  const fs::path a = dir / "a.csv", b = dir / "b.csv", c = dir / "c.csv";
  const bool ran = run_cli("sweep " + config + " --seed 7 --workers 1 --out \"" + a.string() +
                           "\"") == 0 &&
                   run_cli("sweep " + config + " --seed 7 --workers 1 --out \"" + b.string() +
                           "\"") == 0 &&
                   run_cli("sweep " + config + " --seed 7 --workers 4 --out \"" + c.string() +
                           "\"") == 0;
  const std::string ta = read_file(a);
  const bool ok = ran && !ta.empty() && ta == read_file(b) && ta == read_file(c);
  fs::remove_all(dir);
  return {ok, "desk sweep, seed 7: repeated run and 4 workers match 1 worker byte for byte"};
}

Verdict paper_scale() {
  const auto start = Clock::now();
  const fs::path out = fs::temp_directory_path() / "ristrain_acceptance_paper.csv";
  const int status =
      run_cli("sweep --config \"" + (kSource / "configs/paper.ini").string() + "\" --out \"" +
              out.string() + "\"");
  const double secs = seconds_since(start);
  bool ok = status == 0;
  std::string detail;
  if (ok) {
    const CliConfig cfg = parse_config(kSource / "configs/paper.ini");
    const SweepReport rep = parse_report_csv(read_file(out));
    ok = cfg.plan.scenario.n_h == 160 && cfg.plan.scenario.n_v == 160 &&
         cfg.plan.scenario.n_r == 64 && cfg.plan.trials == 7500 &&
         rep.rows.size() == 2 * cfg.plan.snr_db.size();
    for (const auto& row : rep.rows) ok = ok && row.trials == 7500;
    const std::vector<double> ps = rates_for(rep, Scheme::ps);
    const std::vector<double> cs = rates_for(rep, Scheme::cs);
    detail = std::to_string(rep.rows.size()) + " rows; top point PS " + fmt(ps.back(), 3) +
             ", CS " + fmt(cs.back(), 3) + "; ";
  }
  fs::remove(out);
  return {ok && secs < 1800.0, detail + fmt(secs, 4) + " s"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"factorization equivalence", factorization},
      {"codebook fidelity", codebook_fidelity},
      {"noiseless soundness", noiseless_soundness},
      {"oracle equivalence", oracle_equivalence},
      {"desk-scale success curves", desk_success_curves},
      {"refinement bins at high SNR", refine_bins_effect},
      {"symbol accounting", symbol_accounting},
      {"slice identity and unit modulus", slice_and_modulus},
      {"sweep determinism", sweep_determinism},
      {"paper-scale feasibility", paper_scale},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.passed) ++failed;
    std::cout << (v.passed ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": "
              << v.detail << std::endl;
  }
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
