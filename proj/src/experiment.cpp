#include "ristrain/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace ristrain {

namespace {

// Stream tags keep channel and measurement randomness independent.
constexpr std::uint64_t kChannelStream = 1;
constexpr std::uint64_t kMeasureStream = 2;

constexpr std::string_view kCsvHeader =
    "snr_db,scheme,success_rate,mean_rate,trials,symbols,budget,seed";

double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }

double array_gain(const ScenarioConfig& cfg) {
  const double nh = cfg.n_h;
  const double nv = cfg.n_v;
  return nv * nv * nh * nh * cfg.n_r;
}

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::ps: return "ps";
    case Scheme::cs: return "cs";
    case Scheme::bs: return "bs";
    case Scheme::oracle: return "oracle";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  for (Scheme s : {Scheme::ps, Scheme::cs, Scheme::bs, Scheme::oracle}) {
    if (name == to_string(s)) return s;
  }
  throw std::invalid_argument("unknown scheme '" + std::string(name) +
                              "' (expected ps, cs, bs or oracle)");
}

void ExperimentPlan::validate() const {
  scenario.validate();
  if (trials < 1) throw std::invalid_argument("plan: trials must be >= 1");
  if (snr_db.empty()) throw std::invalid_argument("plan: at least one SNR point is required");
  ris_search.validate(scenario.n_h);
  if (scenario.n_t > 1) user_search.validate(scenario.n_t);
  const bool needs_bs = std::any_of(schemes.begin(), schemes.end(),
                                    [](Scheme s) { return s == Scheme::cs || s == Scheme::bs; });
  if (needs_bs && !std::has_single_bit(static_cast<unsigned>(scenario.n_t))) {
    throw std::invalid_argument("plan: binary search at the user node needs N_t a power of 2");
  }
}

double link_gamma(const ScenarioConfig& cfg, double p_tot_w) {
  if (!(p_tot_w > 0)) throw std::invalid_argument("transmit power must be positive");
  const double zeta0 = db_to_lin(cfg.zeta0_db);
  const double pl_ia = zeta0 * std::pow(cfg.d_ia, -cfg.delta_ia);
  const double pl_ui = zeta0 * std::pow(cfg.d_ui, -cfg.delta_ui);
  return p_tot_w * pl_ia * pl_ui / cfg.noise_power_w();
}

double average_snr_db(const ScenarioConfig& cfg, double p_tot_w) {
  return 10.0 * std::log10(link_gamma(cfg, p_tot_w) * array_gain(cfg));
}

double transmit_power_for_snr(const ScenarioConfig& cfg, double snr_db) {
  return db_to_lin(snr_db) / (link_gamma(cfg, 1.0) * array_gain(cfg));
}

double gamma_for_average_snr(const ScenarioConfig& cfg, double snr_db) {
  return db_to_lin(snr_db) / array_gain(cfg);
}

double success_rate(std::span<const std::pair<int, int>> outcomes) {
  if (outcomes.empty()) throw std::invalid_argument("success_rate: no outcomes");
  const auto hits = std::count_if(outcomes.begin(), outcomes.end(),
                                  [](const auto& o) { return o.first == o.second; });
  return static_cast<double>(hits) / static_cast<double>(outcomes.size());
}

double achievable_rate(double eta) {
  if (eta < 0) throw std::invalid_argument("achievable_rate: negative SNR");
  return std::log2(1.0 + eta);
}

ChannelRealization draw_realization(const ExperimentPlan& plan, std::size_t trial) {
  const ScenarioConfig& cfg = plan.scenario;
  Rng rng = make_substream(plan.master_seed, {kChannelStream, trial});
  ChannelRealization real = geometric_realization(cfg);
  real.mu_ui = sample_rician(cfg.kappa_ui_db, rng);
  real.mu_ia = sample_rician(cfg.kappa_ia_db, rng);

  auto draw_direction = [&](int n) {
    if (plan.truth == TruthModel::grid) {
      std::uniform_int_distribution<int> pick(1, n);
      return DirectionGrid(n).value(pick(rng));
    }
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return u(rng);
  };
  const double tilde = draw_direction(cfg.n_h);
  real.omega_i = wrap_mod2(real.omega_r - tilde);
  if (cfg.n_t > 1) real.omega_u = draw_direction(cfg.n_t);
  return real;
}

TrialOutcome run_trial(const ExperimentPlan& plan, std::size_t snr_index, Scheme scheme,
                       std::size_t trial) {
  const ScenarioConfig& cfg = plan.scenario;
  const ChannelRealization real = draw_realization(plan, trial);
  const double gamma = gamma_for_average_snr(cfg, plan.snr_db.at(snr_index));
  Rng rng = make_substream(plan.master_seed,
                           {kMeasureStream, snr_index, static_cast<std::uint64_t>(scheme), trial});

  SearchConfig ris = plan.ris_search;
  SearchConfig user = plan.user_search;
  ris.noise_enabled = user.noise_enabled = plan.noise_enabled;

  const Codebook ris_cb(cfg.n_h, ris.beams_per_sweep);
  const DirectionGrid user_grid(cfg.n_t);

  TrialOutcome out;
  out.ris_optimal = optimal_direction(ris_cb.grid(), real.omega_tilde());
  out.user_optimal = cfg.n_t == 1 ? 1 : optimal_direction(user_grid, real.omega_u);

  if (scheme == Scheme::oracle) {
    const OraclePair best = exhaustive_search(cfg, real, gamma);
    out.ris_index = best.ris_index;
    out.user_index = best.user_index;
    out.eta = best.snr;
    out.symbols = cfg.n_h * cfg.n_t;
    out.budget = out.symbols;
    return out;
  }

  const SearchResult at_ris = scheme == Scheme::cs ? cs_search(cfg, real, ris, gamma, rng)
                                                   : run_ris_training(cfg, real, ris, gamma, rng);
  const SearchResult at_user =
      scheme == Scheme::ps
          ? run_user_training(cfg, real, at_ris.chosen_vector, user, gamma, rng)
          : bs_search(cfg, real, at_ris.chosen_vector, gamma, rng, plan.noise_enabled);

  out.ris_index = at_ris.chosen_index;
  out.user_index = at_user.chosen_index;
  out.symbols = at_ris.symbol_count + at_user.symbol_count;
  out.budget = out.symbols + (scheme == Scheme::cs ? 0 : 1) +
               (scheme == Scheme::ps && cfg.n_t > 1 ? 1 : 0);
  const FactoredLink link(cfg, real, gamma);
  out.eta = pair_snr(link, ris_cb, out.ris_index, user_grid, out.user_index);
  return out;
}

SweepReport run_monte_carlo(const ExperimentPlan& plan, unsigned workers) {
  plan.validate();
  const std::size_t n_snr = plan.snr_db.size();
  const std::size_t n_scheme = plan.schemes.size();
  const std::size_t n_trials = static_cast<std::size_t>(plan.trials);
  const std::size_t jobs = n_snr * n_scheme * n_trials;

  std::vector<TrialOutcome> slots(jobs);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::size_t error_job = jobs;
  std::string error_text;

  auto worker = [&] {
    for (;;) {
      const std::size_t job = next.fetch_add(1);
      if (job >= jobs || failed.load()) return;
      const std::size_t trial = job % n_trials;
      const std::size_t scheme_index = (job / n_trials) % n_scheme;
      const std::size_t snr_index = job / (n_trials * n_scheme);
      try {
        slots[job] = run_trial(plan, snr_index, plan.schemes[scheme_index], trial);
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (job < error_job) {
          error_job = job;
          error_text = "trial " + std::to_string(trial) + " (snr " +
                       fmt6(plan.snr_db[snr_index]) + " dB, scheme " +
                       std::string(to_string(plan.schemes[scheme_index])) + "): " + e.what();
        }
        failed = true;
      }
    }
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(jobs, 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }
  if (failed) throw std::runtime_error("monte carlo aborted at " + error_text);

  SweepReport report;
  for (std::size_t s = 0; s < n_snr; ++s) {
    for (std::size_t k = 0; k < n_scheme; ++k) {
      const std::size_t base = (s * n_scheme + k) * n_trials;
      std::size_t hits = 0;
      double rate_sum = 0.0;
      double symbol_sum = 0.0;
      double budget_sum = 0.0;
      for (std::size_t t = 0; t < n_trials; ++t) {
        const TrialOutcome& o = slots[base + t];
        hits += o.success() ? 1 : 0;
        rate_sum += achievable_rate(o.eta);
        symbol_sum += o.symbols;
        budget_sum += o.budget;
      }
      const double n = static_cast<double>(n_trials);
      report.rows.push_back({plan.snr_db[s], plan.schemes[k], hits / n, rate_sum / n,
                             plan.trials, symbol_sum / n, budget_sum / n, plan.master_seed});
    }
  }
  return report;
}

std::string format_report(const SweepReport& report, ReportFormat format) {
  if (format == ReportFormat::json) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : report.rows) {
      rows.push_back({{"snr_db", r.snr_db},
                      {"scheme", to_string(r.scheme)},
                      {"success_rate", r.success_rate},
                      {"mean_rate", r.mean_rate},
                      {"trials", r.trials},
                      {"symbols", r.symbols},
                      {"budget", r.budget},
                      {"seed", r.seed}});
    }
    return rows.dump(2) + "\n";
  }
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : report.rows) {
    out += fmt6(r.snr_db) + ',' + std::string(to_string(r.scheme)) + ',' + fmt6(r.success_rate) +
           ',' + fmt6(r.mean_rate) + ',' + std::to_string(r.trials) + ',' + fmt6(r.symbols) + ',' +
           fmt6(r.budget) + ',' + std::to_string(r.seed) + '\n';
  }
  return out;
}

SweepReport parse_report_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::invalid_argument("report: missing or unexpected CSV header");
  }
  SweepReport report;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 8) throw std::invalid_argument("report: malformed row '" + line + "'");
    ReportRow r;
    r.snr_db = std::stod(f[0]);
    r.scheme = parse_scheme(f[1]);
    r.success_rate = std::stod(f[2]);
    r.mean_rate = std::stod(f[3]);
    r.trials = std::stoi(f[4]);
    r.symbols = std::stod(f[5]);
    r.budget = std::stod(f[6]);
    r.seed = std::stoull(f[7]);
    report.rows.push_back(r);
  }
  return report;
}

void emit_report(const SweepReport& report, const std::filesystem::path& path,
                 ReportFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << format_report(report, format);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

}  // namespace ristrain
