// ristrain: beam-training simulator front end.
//
//   ristrain sweep --config <ini> --out <file> [--seed N] [--scheme ps|cs|bs|oracle]... [--json]
//   ristrain trace --config <ini> --seed N [--snr DB]
//   ristrain dump-codebook <N> <M>
//   ristrain validate --config <ini>
//
// The master seed can also be set with RISTRAIN_SEED; --seed wins.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ristrain/config.hpp"
#include "ristrain/validation.hpp"

namespace {

using namespace ristrain;

constexpr int kExitFailure = 1;
constexpr int kExitMissingFile = 2;
constexpr int kExitSchema = 3;
constexpr int kExitCodebook = 4;

int exit_code_for(const ConfigError& e) {
  switch (e.kind()) {
    case ConfigError::Kind::missing_file: return kExitMissingFile;
    case ConfigError::Kind::syntax:
    case ConfigError::Kind::schema: return kExitSchema;
    case ConfigError::Kind::codebook: return kExitCodebook;
  }
  return kExitFailure;
}

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("RISTRAIN_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(raw, &used);
    if (used != std::string(raw).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(ConfigError::Kind::schema,
                      std::string("RISTRAIN_SEED is not an unsigned integer: ") + raw);
  }
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

int cmd_sweep(CliConfig cfg, const std::filesystem::path& out, std::optional<std::uint64_t> seed,
              const std::vector<std::string>& schemes, bool json, std::optional<unsigned> workers) {
  if (auto s = env_seed()) cfg.plan.master_seed = *s;
  if (seed) cfg.plan.master_seed = *seed;
  if (!schemes.empty()) {
    cfg.plan.schemes.clear();
    for (const auto& s : schemes) cfg.plan.schemes.push_back(parse_scheme(s));
    cfg.plan.validate();
  }
  if (json) cfg.format = ReportFormat::json;
  if (workers) cfg.workers = *workers;
  const std::filesystem::path target = out.empty() ? cfg.output : out;
  if (target.empty()) throw std::invalid_argument("sweep: no output path (--out or [output] path)");

  if (cfg.verbose) {
    std::cerr << "sweep: " << cfg.plan.snr_db.size() << " SNR points x "
              << cfg.plan.schemes.size() << " schemes x " << cfg.plan.trials << " trials\n";
  }
  const SweepReport report = run_monte_carlo(cfg.plan, cfg.workers);

  std::filesystem::path tmp = target;
  tmp += ".partial";
  try {
    emit_report(report, tmp, cfg.format);
    std::filesystem::rename(tmp, target);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw;
  }
  return 0;
}

int cmd_trace(CliConfig cfg, std::optional<std::uint64_t> seed, std::optional<double> snr) {
  if (auto s = env_seed()) cfg.plan.master_seed = *s;
  if (seed) cfg.plan.master_seed = *seed;
  const ExperimentPlan& plan = cfg.plan;
  const ScenarioConfig& sc = plan.scenario;
  const double snr_db =
      snr ? *snr : *std::max_element(plan.snr_db.begin(), plan.snr_db.end());

  const ChannelRealization real = draw_realization(plan, 0);
  const double gamma = gamma_for_average_snr(sc, snr_db);
  const Codebook cb(sc.n_h, plan.ris_search.beams_per_sweep);
  const int t = plan.ris_search.refine_count(cb.bin_count());
  const FactoredLink link(sc, real, gamma);
  const ComplexVec w_u = omni_user_beam(sc.n_t);
  Rng rng = make_substream(plan.master_seed, {0x74726163, 0});
  const MeasureFn measure = ris_prober(link, cb, w_u, rng, plan.noise_enabled);

  std::cout << std::setprecision(6);
  std::cout << "seed " << plan.master_seed << ", average SNR " << snr_db << " dB\n";
  std::cout << "RIS codebook N=" << cb.size() << " M=" << cb.beams_per_sweep()
            << " L=" << cb.bin_count() << " T=" << t << "\n";
  std::cout << "true phase gradient " << real.omega_tilde() << ", nearest grid index "
            << optimal_direction(cb.grid(), real.omega_tilde()) << "\n\n";

  SearchState state = first_round(cb, measure);
  std::cout << "round 1: one sweep per bin\n";
  for (int l = 1; l <= cb.bin_count(); ++l) {
    std::cout << "  B(" << l << ") {" << join(cb.bin(l)) << "}  eta=" << state.bin_snr[l - 1]
              << "\n";
  }
  rank_bins(cb, state, t);
  std::cout << "bins by descending SNR:\n";
  for (int k = 1; k <= cb.bin_count(); ++k) {
    std::cout << "  B'(" << k << ") {" << join(cb.bin(state.ranked_bins[k - 1])) << "}"
              << (k <= t ? "" : "  (not refined)") << "\n";
  }
  std::cout << "eta_max=" << state.eta_max << " eta_th=" << state.eta_th << "\n";

  for (int r = 2; r <= cb.coarse_rounds(); ++r) {
    const std::vector<int> before = state.candidates;
    coarse_round(cb, state, r, measure);
    const SweepRecord& rec = state.sweep_log.back();
    std::cout << "round " << r << ": S(" << r << ",1) {" << join(rec.directions)
              << "}  eta=" << rec.measured << (rec.measured > state.eta_th ? " > " : " <= ")
              << "eta_th  ->  X(" << r << ") {" << join(state.candidates) << "}\n";
  }
  fine_candidates(cb, state, measure);
  const SweepRecord& probe = state.sweep_log.back();
  std::cout << "round " << probe.round << ": probe {" << join(probe.directions)
            << "}  eta=" << probe.measured << "  ->  m=" << state.probe_slot
            << " k=" << state.chosen_slot << " p=" << state.pivot << "\n";
  std::cout << "fine candidates D {" << join(state.fine) << "}\n";
  const SearchResult result = fine_round(cb, state, measure);
  const int last_round = cb.coarse_rounds() + 2;
  for (const auto& rec : result.sweep_log) {
    if (rec.round == last_round) {
      std::cout << "round " << rec.round << ": single beam {" << rec.directions.front()
                << "}  eta=" << rec.measured << "\n";
    }
  }
  std::cout << "chosen RIS direction " << result.chosen_index << " (optimal "
            << optimal_direction(cb.grid(), real.omega_tilde()) << ")\n";
  std::cout << "training symbols: " << result.symbol_count
            << " swept; stated budget L + log2(M) + T + 1 = "
            << training_symbol_budget(cb.bin_count(), cb.beams_per_sweep(), t) << "\n";

  if (sc.n_t > 1) {
    Rng user_rng = make_substream(plan.master_seed, {0x74726163, 1});
    const SearchResult user = run_user_training(sc, real, result.chosen_vector, plan.user_search,
                                                gamma, user_rng);
    std::cout << "\nuser node: chosen direction " << user.chosen_index << " (optimal "
              << optimal_direction(DirectionGrid(sc.n_t), real.omega_u) << "), "
              << user.symbol_count << " symbols\n";
    for (const auto& rec : user.sweep_log) {
      std::cout << "  round " << rec.round << " {" << join(rec.directions)
                << "}  eta=" << rec.measured << "\n";
    }
  }
  return 0;
}

int cmd_dump_codebook(int n, int m) {
  const Codebook cb(n, m);
  for (const auto& bin : cb.bins()) std::cout << join(bin) << "\n";
  return 0;
}

int cmd_validate(const CliConfig& cfg) {
  bool ok = true;
  for (const auto& check : run_invariant_suite(cfg.plan)) {
    std::cout << (check.passed ? "PASS " : "FAIL ") << check.name << ": " << check.detail << "\n";
    ok = ok && check.passed;
  }
  return ok ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS-assisted mmWave beam-training simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> schemes;
  bool json = false;
  std::optional<unsigned> workers;
  std::optional<double> snr;
  int dump_n = 0;
  int dump_m = 0;

  auto* sweep = app.add_subcommand("sweep", "Monte Carlo success-rate and rate sweep");
  sweep->add_option("--config", config_path, "Config file")->required();
  sweep->add_option("--out", out_path, "Output report path");
  sweep->add_option("--seed", seed, "Master seed");
  sweep->add_option("--scheme", schemes, "Scheme(s): ps, cs, bs, oracle")
      ->check(CLI::IsMember({"ps", "cs", "bs", "oracle"}));
  sweep->add_flag("--json", json, "Write JSON instead of CSV");
  sweep->add_option("--workers", workers, "Worker threads (0 = all cores)");

  auto* trace = app.add_subcommand("trace", "Round-by-round log of one seeded trial");
  trace->add_option("--config", config_path, "Config file")->required();
  trace->add_option("--seed", seed, "Master seed");
  trace->add_option("--snr", snr, "Average SNR in dB (default: highest configured point)");

  auto* dump = app.add_subcommand("dump-codebook", "Print bins of the (N, M) codebook as CSV");
  dump->add_option("N", dump_n, "Grid size")->required();
  dump->add_option("M", dump_m, "Beams per sweep")->required();

  auto* validate = app.add_subcommand("validate", "Run the invariant suite on a config");
  validate->add_option("--config", config_path, "Config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (dump->parsed()) return cmd_dump_codebook(dump_n, dump_m);
    const CliConfig cfg = parse_config(config_path);
    if (sweep->parsed()) return cmd_sweep(cfg, out_path, seed, schemes, json, workers);
    if (trace->parsed()) return cmd_trace(cfg, seed, snr);
    if (validate->parsed()) return cmd_validate(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
