#pragma once

// Monte Carlo singularity experiments on configuration-model adjacency matrices.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "regsing/gfp.hpp"

namespace regsing {

struct ExperimentConfig {
  int n = 0;
  int d = 0;
  std::vector<PrimeModulus> primes;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// n * trials above this is refused.
inline constexpr std::uint64_t kTrialWorkGuard = 50'000'000;
inline constexpr int kMaxVertices = 5000;

/// Throws ParameterError on a bad config and GuardError when the work guard trips.
void validate(const ExperimentConfig& cfg);

struct TrialRecord {
  std::uint64_t trial = 0;
  std::vector<bool> singular_mod_p;  // parallel to cfg.primes
  bool det_zero = false;
  bool identical_rows = false;
  double elapsed_ms = 0.0;
};

struct Proportion {
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  double estimate = 0.0;
  double low = 0.0;
  double high = 0.0;
};

struct SummaryStats {
  int n = 0, d = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> primes;
  std::vector<Proportion> singular_mod_p;
  Proportion singular_over_q;
  Proportion identical_rows;
  std::uint64_t invariant_violations = 0;
};

struct ExperimentResult {
  SummaryStats summary;
  std::vector<TrialRecord> records;  // ordered by trial index
};

/// Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

/// One trial: sample with stream = trial index, then decide singularity mod each prime and over Q.
TrialRecord run_trial(const ExperimentConfig& cfg, std::uint64_t trial);

/// Runs every trial on up to cfg.threads workers; the result does not depend on the thread count.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Number of records violating identical_rows => det_zero => singular mod every prime.
std::uint64_t count_invariant_violations(const std::vector<TrialRecord>& records);

/// One JSON object per line. Timings are written only when `with_timing` is set.
void write_trial_records(std::ostream& os, const ExperimentConfig& cfg,
                         const std::vector<TrialRecord>& records, bool with_timing = false);

std::string summary_to_json(const SummaryStats& s);

}  // namespace regsing
