// Self-check suite run by `ristrain validate` against a configured scenario.
#pragma once

#include <string>
#include <vector>

#include "ristrain/experiment.hpp"

namespace ristrain {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Full-matrix vs factored SNR on random draws of the scenario dimensions.
CheckResult check_factorization(const ScenarioConfig& cfg, int draws, std::uint64_t seed);

/// Every sub-array slice of a full-array beam equals the phase-shifted shorter beam,
/// and every multi-beam sweep vector of the codebook has unit-modulus elements.
CheckResult check_codebook_vectors(const Codebook& cb);

/// Noise off, LoS-only gains, every grid direction as truth, T = L: the search must
/// return the true index each time. user_node selects the N_t grid with the RIS matched.
CheckResult check_noiseless_soundness(const ScenarioConfig& cfg, int beams_per_sweep,
                                      bool user_node);

/// Sweep log length equals L + log2(M) + T for the configured search.
CheckResult check_symbol_accounting(const ScenarioConfig& cfg, const SearchConfig& search);

std::vector<CheckResult> run_invariant_suite(const ExperimentPlan& plan);

}  // namespace ristrain
