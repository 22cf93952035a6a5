#include "regsing/mc_harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "regsing/error.hpp"
#include "regsing/graph_model.hpp"

namespace regsing {

namespace {

Proportion make_proportion(std::uint64_t successes, std::uint64_t trials) {
  Proportion p{successes, trials, 0.0, 0.0, 1.0};
  if (trials > 0) {
    p.estimate = static_cast<double>(successes) / trials;
    std::tie(p.low, p.high) = wilson_interval(successes, trials);
  }
  return p;
}

nlohmann::ordered_json to_json(const Proportion& p) {
  nlohmann::ordered_json j;
  j["successes"] = p.successes;
  j["trials"] = p.trials;
  j["fraction"] = p.estimate;
  j["wilson95"] = {p.low, p.high};
  return j;
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  if (cfg.n < 1) throw ParameterError("n must be >= 1");
  if (cfg.d < 3) throw ParameterError("d must be >= 3");
  if (cfg.trials < 1) throw ParameterError("trials must be >= 1");
  if (cfg.threads < 1) throw ParameterError("threads must be >= 1");
  for (const auto& p : cfg.primes) require_coprime(p, cfg.d);
  if (cfg.n > kMaxVertices) {
    throw GuardError("n = " + std::to_string(cfg.n) + " exceeds the vertex guard of " +
                     std::to_string(kMaxVertices));
  }
  if (static_cast<std::uint64_t>(cfg.n) * cfg.trials > kTrialWorkGuard) {
    throw GuardError("n * trials = " + std::to_string(static_cast<std::uint64_t>(cfg.n) * cfg.trials) +
                     " exceeds the work guard of " + std::to_string(kTrialWorkGuard));
  }
}

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0 || successes > trials) throw ParameterError("wilson_interval needs 0 <= successes <= trials, trials >= 1");
  const double n = static_cast<double>(trials);
  const double phat = successes / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2 * n)) / denom;
  const double half = z / denom * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

TrialRecord run_trial(const ExperimentConfig& cfg, std::uint64_t trial) {
  const auto start = std::chrono::steady_clock::now();
  TrialRecord rec;
  rec.trial = trial;
  const IntMatrix a = adjacency_from_permutation(sample_configuration(cfg.n, cfg.d, {cfg.seed, trial}));
  rec.identical_rows = has_identical_rows(a);
  rec.det_zero = int_determinant_is_zero(a);
  rec.singular_mod_p.reserve(cfg.primes.size());
  for (const auto& p : cfg.primes) rec.singular_mod_p.push_back(fp_determinant(a, p) == 0);
  rec.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::uint64_t count_invariant_violations(const std::vector<TrialRecord>& records) {
  std::uint64_t bad = 0;
  for (const auto& r : records) {
    bool ok = !r.identical_rows || r.det_zero;
    if (r.det_zero) ok = ok && std::all_of(r.singular_mod_p.begin(), r.singular_mod_p.end(), [](bool b) { return b; });
    bad += !ok;
  }
  return bad;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  ExperimentResult out;
  out.records.resize(cfg.trials);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t t = next++; t < cfg.trials; t = next++) out.records[t] = run_trial(cfg, t);
  };
  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(cfg.threads, cfg.trials));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < workers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  SummaryStats& s = out.summary;
  s.n = cfg.n;
  s.d = cfg.d;
  s.seed = cfg.seed;
  for (const auto& p : cfg.primes) s.primes.push_back(p.value());
  std::vector<std::uint64_t> mod_hits(cfg.primes.size(), 0);
  std::uint64_t q_hits = 0, row_hits = 0;
  for (const auto& r : out.records) {
    for (std::size_t i = 0; i < mod_hits.size(); ++i) mod_hits[i] += r.singular_mod_p[i];
    q_hits += r.det_zero;
    row_hits += r.identical_rows;
  }
  for (auto h : mod_hits) s.singular_mod_p.push_back(make_proportion(h, cfg.trials));
  s.singular_over_q = make_proportion(q_hits, cfg.trials);
  s.identical_rows = make_proportion(row_hits, cfg.trials);
  s.invariant_violations = count_invariant_violations(out.records);
  return out;
}

void write_trial_records(std::ostream& os, const ExperimentConfig& cfg,
                         const std::vector<TrialRecord>& records, bool with_timing) {
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["trial"] = r.trial;
    nlohmann::ordered_json mod = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < cfg.primes.size(); ++i) {
      mod[std::to_string(cfg.primes[i].value())] = static_cast<bool>(r.singular_mod_p[i]);
    }
    j["singular_mod_p"] = mod;
    j["det_zero"] = r.det_zero;
    j["identical_rows"] = r.identical_rows;
    if (with_timing) j["elapsed_ms"] = r.elapsed_ms;
    os << j.dump() << '\n';
  }
}

std::string summary_to_json(const SummaryStats& s) {
  nlohmann::ordered_json j;
  j["n"] = s.n;
  j["d"] = s.d;
  j["seed"] = s.seed;
  nlohmann::ordered_json mod = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < s.primes.size(); ++i) mod[std::to_string(s.primes[i])] = to_json(s.singular_mod_p[i]);
  j["singular_mod_p"] = mod;
  j["singular_over_q"] = to_json(s.singular_over_q);
  j["identical_rows"] = to_json(s.identical_rows);
  j["invariant_violations"] = s.invariant_violations;
  return j.dump(2);
}

}  // namespace regsing
