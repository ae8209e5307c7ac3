// Monte Carlo harness: success rate and achievable rate versus average SNR.
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ristrain/baselines.hpp"
#include "ristrain/channel.hpp"
#include "ristrain/search.hpp"

namespace ristrain {

/// Training scheme pair (RIS / user node):
///   ps     - proposed search at both nodes
///   cs     - coarse search at the RIS, binary search at the user
///   bs     - proposed search at the RIS, binary search at the user
///   oracle - exhaustive search over all grid pairs
enum class Scheme { ps, cs, bs, oracle };

std::string_view to_string(Scheme s);
/// Throws std::invalid_argument for an unknown name.
Scheme parse_scheme(std::string_view name);

/// How the true azimuth directions are drawn per trial.
enum class TruthModel { continuous, grid };

struct ExperimentPlan {
  ScenarioConfig scenario;
  SearchConfig ris_search;
  SearchConfig user_search;
  std::vector<Scheme> schemes{Scheme::ps, Scheme::cs};
  std::vector<double> snr_db;
  int trials = 7500;
  std::uint64_t master_seed = 0;
  TruthModel truth = TruthModel::continuous;
  bool noise_enabled = true;

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;
};

struct TrialOutcome {
  int ris_index = 0;
  int ris_optimal = 0;
  int user_index = 0;
  int user_optimal = 0;
  double eta = 0.0;  // noiseless SNR at the chosen pair
  int symbols = 0;  // sweeps actually issued
  int budget = 0;   // stated budget: one more than issued per proposed-search stage

  bool success() const { return ris_index == ris_optimal && user_index == user_optimal; }
};

struct ReportRow {
  double snr_db = 0.0;
  Scheme scheme = Scheme::ps;
  double success_rate = 0.0;
  double mean_rate = 0.0;
  int trials = 0;
  double symbols = 0.0;  // mean training symbols issued per trial
  double budget = 0.0;   // mean stated training-symbol budget per trial
  std::uint64_t seed = 0;
};

struct SweepReport {
  std::vector<ReportRow> rows;
};

/// Average SNR in dB for total transmit power p_tot_w:
///   P_tot (zeta0 d_ia^-delta_ia)(zeta0 d_ui^-delta_ui) N_v^2 N_h^2 N_r / N_0.
/// Throws std::invalid_argument for non-positive power.
double average_snr_db(const ScenarioConfig& cfg, double p_tot_w);

/// Inverse of average_snr_db.
double transmit_power_for_snr(const ScenarioConfig& cfg, double snr_db);

/// Transmit SNR with both pathlosses applied, P_tot zeta0^2 d_ia^-delta_ia d_ui^-delta_ui / N_0.
/// This is the gamma_tot fed to the received-SNR model.
double link_gamma(const ScenarioConfig& cfg, double p_tot_w);

/// gamma_tot that realizes the given average SNR.
double gamma_for_average_snr(const ScenarioConfig& cfg, double snr_db);

/// Fraction of (chosen, optimal) pairs that agree. Throws on empty input.
double success_rate(std::span<const std::pair<int, int>> outcomes);

/// log2(1 + eta). Throws std::invalid_argument for negative eta.
double achievable_rate(double eta);

/// Fading gains and true directions for one trial. Depends only on (seed, trial).
ChannelRealization draw_realization(const ExperimentPlan& plan, std::size_t trial);

TrialOutcome run_trial(const ExperimentPlan& plan, std::size_t snr_index, Scheme scheme,
                       std::size_t trial);

/// Runs every (snr point, scheme, trial). workers = 0 uses the hardware concurrency.
/// The report does not depend on the worker count.
SweepReport run_monte_carlo(const ExperimentPlan& plan, unsigned workers = 0);

enum class ReportFormat { csv, json };

std::string format_report(const SweepReport& report, ReportFormat format = ReportFormat::csv);
/// Parses the CSV produced by format_report.
SweepReport parse_report_csv(std::string_view text);
/// Writes the report; throws std::runtime_error with the path on I/O failure.
void emit_report(const SweepReport& report, const std::filesystem::path& path,
                 ReportFormat format = ReportFormat::csv);

}  // namespace ristrain
