// regsing: command-line front end for the singularity experiments.
//
// Exit codes: 0 success, 1 a checked invariant failed, 2 bad flags or
// parameters, 3 a resource guard refused the request.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "regsing/error.hpp"
#include "regsing/gfp.hpp"
#include "regsing/graph_model.hpp"
#include "regsing/lclt.hpp"
#include "regsing/mc_harness.hpp"
#include "regsing/rate_ldp.hpp"
#include "regsing/walk_census.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace regsing;

namespace {

struct Flags {
  int n = 3;
  int d = 3;
  std::vector<std::uint32_t> p{2};
  std::uint64_t seed = 7;
  std::uint64_t trials = 1;
  double b = 10.0;
  double tol = 1e-10;
  std::string out;
  std::string format = "json";
  unsigned threads = 1;
  std::vector<double> density;
  int resolution = 100;
  std::string records;
  std::vector<std::string> inputs;
};

std::string fmt_double(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

std::string type_string(const TypeVector& t) {
  std::string s;
  for (std::size_t i = 0; i < t.counts.size(); ++i) s += (i ? " " : "") + std::to_string(t.counts[i]);
  return s;
}

json type_json(const TypeVector& t) { return json(t.counts); }

// --out wins; otherwise REGSING_OUT_DIR/<stem>.<format>; otherwise stdout.
void emit(const Flags& f, const std::string& stem, const std::string& text) {
  std::string path = f.out;
  if (path.empty()) {
    if (const char* dir = std::getenv("REGSING_OUT_DIR"); dir && *dir) {
      fs::create_directories(dir);
      path = (fs::path(dir) / (stem + "." + f.format)).string();
    }
  }
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ParameterError("cannot open output file " + path);
  os << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int single_prime(const Flags& f) {
  if (f.p.size() != 1) throw ParameterError("this subcommand takes exactly one --p");
  const PrimeModulus pm(f.p[0]);
  require_coprime(pm, f.d);
  return static_cast<int>(pm.value());
}

void require_d(const Flags& f) {
  if (f.d < 3) throw ParameterError("--d must be >= 3");
}

void require_n(const Flags& f) {
  if (f.n < 1) throw ParameterError("--n must be >= 1");
}

std::string stem(const std::string& cmd, const Flags& f, bool with_p = true) {
  std::string s = cmd + "_n" + std::to_string(f.n) + "_d" + std::to_string(f.d);
  if (with_p)
    for (auto q : f.p) s += "_p" + std::to_string(q);
  return s;
}

// ---- sample ---------------------------------------------------------------

int cmd_sample(const Flags& f) {
  require_n(f);
  require_d(f);
  if (f.trials < 1) throw ParameterError("--trials must be >= 1");
  if (static_cast<std::uint64_t>(f.n) * f.d * f.trials > kTrialWorkGuard)
    throw GuardError("n * d * trials exceeds the work guard of " + std::to_string(kTrialWorkGuard));
  std::ostringstream os;
  for (std::uint64_t t = 0; t < f.trials; ++t) {
    const auto s = sample_configuration(f.n, f.d, {f.seed, t});
    if (f.format == "csv") {
      os << "# seed " << f.seed << " stream " << t << "\n";
      write_adjacency_csv(os, adjacency_from_permutation(s));
    } else {
      os << sample_to_json_line(s) << "\n";
    }
  }
  Flags named = f;
  if (f.format == "json") named.format = "jsonl";
  emit(named, "sample_n" + std::to_string(f.n) + "_d" + std::to_string(f.d) + "_s" + std::to_string(f.seed), os.str());
  return 0;
}

// ---- exact ----------------------------------------------------------------

int cmd_exact(const Flags& f) {
  require_n(f);
  require_d(f);
  const int p = single_prime(f);
  if (!(f.b > 0)) throw ParameterError("--b-threshold must be positive");
  const auto counts = walk_endpoint_counts(f.n, f.d, p);
  const auto part = type_class_partition(counts, f.b);
  if (f.format == "csv") {
    FactorialTable fact;
    std::ostringstream os;
    os << "type,class,graphs_with_null_vector,term\n";
    for (const auto& t : enumerate_types(f.n, p)) {
      os << type_string(t) << "," << to_string(classify_type(t, f.b)) << ","
         << graphs_with_null_vector(t, counts).get_str() << "," << key_sum_term(t, counts, fact).get_str() << "\n";
    }
    emit(f, stem("exact", f), os.str());
  } else {
    json j;
    j["command"] = "exact";
    j["n"] = f.n;
    j["d"] = f.d;
    j["p"] = p;
    j["b_threshold"] = f.b;
    j["key_sum"] = part.total.get_str();
    j["key_sum_value"] = part.total.get_d();
    j["e_sum"] = part.e_sum.get_str();
    j["e_sum_value"] = part.e_sum.get_d();
    j["n_sum"] = part.n_sum.get_str();
    j["n_sum_value"] = part.n_sum.get_d();
    j["degenerate"] = part.degenerate.get_str();
    j["total_mass_check"] = counts.total_mass_check();
    j["parity_check"] = counts.parity_check();
    const double sb = max_support_bound_log_ratio(counts);
    j["support_bound_max_log_ratio"] = std::isfinite(sb) ? json(sb) : json(nullptr);
    emit(f, stem("exact", f), dump(j));
  }
  return counts.total_mass_check() && counts.parity_check() ? 0 : 1;
}

// ---- oracle ---------------------------------------------------------------

int cmd_oracle(const Flags& f) {
  require_n(f);
  require_d(f);
  const int p = single_prime(f);
  if (f.n * f.d > kEnumerationGuard)
    throw GuardError("oracle enumerates (nd)! permutations; nd = " + std::to_string(f.n * f.d) +
                     " exceeds the guard of " + std::to_string(kEnumerationGuard));
  const auto counts = walk_endpoint_counts(f.n, f.d, p);
  const auto brute = brute_force_all_null_counts(f.n, f.d, PrimeModulus(p));

  struct Row {
    std::uint64_t vectors = 0;
    bool equal = true;
    std::uint64_t brute = 0;
  };
  std::map<TypeVector, Row> rows;
  for (std::size_t idx = 0; idx < brute.size(); ++idx) {
    std::vector<std::uint32_t> v(f.n);
    std::size_t x = idx;
    for (int i = 0; i < f.n; ++i, x /= p) v[i] = static_cast<std::uint32_t>(x % p);
    const TypeVector t{phi(v, p)};
    Row& r = rows[t];
    ++r.vectors;
    r.brute = brute[idx];
    r.equal = r.equal && graphs_with_null_vector(t, counts) == brute[idx];
  }
  bool all = true;
  if (f.format == "csv") {
    std::ostringstream os;
    os << "type,vectors,walk_count,brute_count,equal\n";
    for (const auto& [t, r] : rows) {
      all = all && r.equal;
      os << type_string(t) << "," << r.vectors << "," << graphs_with_null_vector(t, counts).get_str() << ","
         << r.brute << "," << (r.equal ? "true" : "false") << "\n";
    }
    emit(f, stem("oracle", f), os.str());
  } else {
    json j;
    j["command"] = "oracle";
    j["n"] = f.n;
    j["d"] = f.d;
    j["p"] = p;
    json arr = json::array();
    for (const auto& [t, r] : rows) {
      all = all && r.equal;
      arr.push_back({{"type", type_json(t)},
                     {"vectors", r.vectors},
                     {"walk_count", graphs_with_null_vector(t, counts).get_str()},
                     {"brute_count", r.brute},
                     {"equal", r.equal}});
    }
    j["types"] = arr;
    j["all_equal"] = all;
    emit(f, stem("oracle", f), dump(j));
  }
  return all ? 0 : 1;
}

// ---- lclt -----------------------------------------------------------------

int cmd_lclt(const Flags& f) {
  require_n(f);
  require_d(f);
  const int p = single_prime(f);
  if (!(f.b > 0)) throw ParameterError("--b-threshold must be positive");
  const auto scan = lclt_error_scan(f.n, f.d, p, f.b);
  if (f.format == "csv") {
    std::ostringstream os;
    os << "type,exact,gaussian,rel_error\n";
    for (const auto& r : scan.rows)
      os << type_string(r.type) << "," << fmt_double(r.exact) << "," << fmt_double(r.gaussian) << ","
         << fmt_double(r.rel_error) << "\n";
    emit(f, stem("lclt", f), os.str());
  } else {
    json j;
    j["command"] = "lclt";
    j["n"] = f.n;
    j["d"] = f.d;
    j["p"] = p;
    j["b_threshold"] = f.b;
    json rows = json::array();
    for (const auto& r : scan.rows) {
      rows.push_back({{"type", type_json(r.type)},
                      {"exact", r.exact},
                      {"gaussian", r.gaussian},
                      {"rel_error", std::isfinite(r.rel_error) ? json(r.rel_error) : json(nullptr)}});
    }
    j["rows"] = rows;
    j["max_rel_error"] = std::isfinite(scan.max_rel_error) ? json(scan.max_rel_error) : json(nullptr);
    emit(f, stem("lclt", f), dump(j));
  }
  return 0;
}

// ---- rate -----------------------------------------------------------------

json certificate_json(const RateCertificate& c) {
  auto num = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  json j;
  j["density"] = c.density;
  j["alpha"] = c.alpha;
  j["dual"] = c.dual;
  j["rate"] = num(c.rate);
  j["rate_upper_bound"] = num(c.rate_upper_bound);
  j["residual"] = num(c.residual);
  j["converged"] = c.converged;
  j["status"] = to_string(c.status);
  j["iterations"] = c.iterations;
  return j;
}

int cmd_rate(const Flags& f) {
  require_d(f);
  const int p = single_prime(f);
  const MaxentOptions opt{f.tol, 200};
  if (!f.density.empty()) {
    if (static_cast<int>(f.density.size()) != p) throw ParameterError("--density needs exactly p entries");
    const DensityVector nv(f.density);
    const auto cert = maxent_alpha(nv, f.d, p, opt);
    json j;
    j["command"] = "rate";
    j["d"] = f.d;
    j["p"] = p;
    j["certificate"] = certificate_json(cert);
    j["amgm_sum"] = amgm_sum(nv, f.d, p);
    const auto st = stationary_alpha(nv, f.d, p);
    j["stationary"] = {{"lambda", st.lambda},
                       {"closed_form_rate", st.closed_form_rate},
                       {"direct_rate", st.direct_rate},
                       {"moment_residual", st.moment_residual},
                       {"satisfies_constraint", st.satisfies_constraint}};
    if (f.format == "csv") {
      std::ostringstream os;
      os << "density,rate,rate_upper_bound,residual,status\n";
      for (std::size_t k = 0; k < f.density.size(); ++k) os << (k ? " " : "") << fmt_double(f.density[k]);
      os << "," << fmt_double(cert.rate) << "," << fmt_double(cert.rate_upper_bound) << ","
         << fmt_double(cert.residual) << "," << to_string(cert.status) << "\n";
      emit(f, "rate_d" + std::to_string(f.d) + "_p" + std::to_string(p) + "_density", os.str());
    } else {
      emit(f, "rate_d" + std::to_string(f.d) + "_p" + std::to_string(p) + "_density", dump(j));
    }
    return 0;
  }

  const auto scan = negativity_grid_scan(f.d, p, f.resolution);
  const auto eigen = gram_spectrum(f.d, p);
  const auto cf = gram_closed_form(f.d, p);
  const auto quad = quadratic_expansion_check(f.d, p);
  const std::string name = "rate_d" + std::to_string(f.d) + "_p" + std::to_string(p) + "_r" + std::to_string(f.resolution);
  if (f.format == "csv") {
    std::ostringstream os;
    os << "d,p,resolution,grid_points,excluded,infeasible,not_converged,max_rate,max_upper_bound,negative\n";
    os << f.d << "," << p << "," << f.resolution << "," << scan.grid_points << "," << scan.excluded << ","
       << scan.infeasible << "," << scan.not_converged << "," << fmt_double(scan.max_rate) << ","
       << fmt_double(scan.max_upper_bound) << "," << (scan.negative ? "true" : "false") << "\n";
    emit(f, name, os.str());
  } else {
    json j;
    j["command"] = "rate";
    j["d"] = f.d;
    j["p"] = p;
    j["scan"] = {{"resolution", f.resolution},
                 {"grid_points", scan.grid_points},
                 {"excluded", scan.excluded},
                 {"infeasible", scan.infeasible},
                 {"not_converged", scan.not_converged},
                 {"max_rate", scan.max_rate},
                 {"max_upper_bound", scan.max_upper_bound},
                 {"argmax", scan.argmax},
                 {"negative", scan.negative}};
    j["gram"] = {{"eigenvalues", eigen},
                 {"closed_form_top", cf.top},
                 {"closed_form_bulk", cf.bulk},
                 {"bulk_multiplicity", cf.bulk_multiplicity}};
    j["quadratic_expansion"] = {{"radius", quad.radius},
                                {"directions", quad.directions},
                                {"worst_ratio", quad.worst_ratio},
                                {"worst_ratio_rel_dev", quad.worst_ratio_rel_dev},
                                {"worst_coefficient", quad.worst_coefficient},
                                {"target_coefficient", -p / 2.0}};
    emit(f, name, dump(j));
  }
  return 0;
}

// ---- mc -------------------------------------------------------------------

int cmd_mc(const Flags& f) {
  ExperimentConfig cfg;
  cfg.n = f.n;
  cfg.d = f.d;
  for (auto q : f.p) cfg.primes.emplace_back(q);
  cfg.trials = f.trials;
  cfg.seed = f.seed;
  cfg.threads = f.threads;
  validate(cfg);
  const auto res = run_experiment(cfg);
  if (!f.records.empty()) {
    std::ofstream os(f.records, std::ios::binary);
    if (!os) throw ParameterError("cannot open records file " + f.records);
    write_trial_records(os, cfg, res.records);
  }
  if (f.format == "csv") {
    std::ostringstream os;
    os << "quantity,successes,trials,fraction,wilson_low,wilson_high\n";
    auto row = [&](const std::string& q, const Proportion& pr) {
      os << q << "," << pr.successes << "," << pr.trials << "," << fmt_double(pr.estimate) << ","
         << fmt_double(pr.low) << "," << fmt_double(pr.high) << "\n";
    };
    for (std::size_t i = 0; i < cfg.primes.size(); ++i)
      row("singular_mod_" + std::to_string(cfg.primes[i].value()), res.summary.singular_mod_p[i]);
    row("singular_over_q", res.summary.singular_over_q);
    row("identical_rows", res.summary.identical_rows);
    emit(f, stem("mc", f) + "_s" + std::to_string(f.seed), os.str());
  } else {
    json j = json::parse(summary_to_json(res.summary));
    json out;
    out["command"] = "mc";
    out["trials"] = f.trials;
    for (auto& [k, v] : j.items()) out[k] = v;
    emit(f, stem("mc", f) + "_s" + std::to_string(f.seed), dump(out));
  }
  return res.summary.invariant_violations == 0 ? 0 : 1;
}

// ---- report ---------------------------------------------------------------

struct ReportRow {
  std::string source, claim, setting, quantity, value;
};

void report_rows(const std::string& source, const json& j, std::vector<ReportRow>& out) {
  const std::string cmd = j.value("command", "");
  auto setting = [&] {
    std::string s;
    for (const char* k : {"n", "d", "p"})
      if (j.contains(k)) s += std::string(s.empty() ? "" : " ") + k + "=" + j[k].dump();
    return s;
  };
  auto num = [](const json& v) { return v.is_null() ? std::string("n/a") : fmt_double(v.get<double>()); };
  if (cmd == "exact") {
    const double ks = j["key_sum_value"].get<double>();
    out.push_back({source, "kernel count ~ |M|", setting(), "key_sum", j["key_sum"].get<std::string>()});
    out.push_back({source, "kernel count ~ |M|", setting(), "|key_sum - 1|", fmt_double(std::abs(ks - 1))});
    out.push_back({source, "kernel count ~ |M|", setting(), "class N sum", num(j["n_sum_value"])});
  } else if (cmd == "oracle") {
    out.push_back({source, "walk representation", setting(), "all types equal", j["all_equal"].dump()});
  } else if (cmd == "lclt") {
    out.push_back({source, "local CLT", setting() + " b=" + j["b_threshold"].dump(), "max rel error",
                   num(j["max_rel_error"])});
  } else if (cmd == "rate") {
    if (j.contains("scan")) {
      out.push_back({source, "rate <= 0", setting(), "max off-neighborhood bound", num(j["scan"]["max_upper_bound"])});
      out.push_back({source, "rate <= 0", setting(), "quadratic ratio", num(j["quadratic_expansion"]["worst_ratio"])});
    } else {
      out.push_back({source, "rate <= 0", setting(), "rate", num(j["certificate"]["rate"])});
    }
  } else if (cmd == "mc") {
    for (auto& [q, pr] : j["singular_mod_p"].items()) {
      const double asym = 1.0 / (std::stod(q) - 1);
      out.push_back({source, "P(singular mod p) <= (1+o(1))/(p-1)", setting(), "mod " + q + " fraction [Wilson]",
                     fmt_double(pr["fraction"].get<double>()) + " [" + fmt_double(pr["wilson95"][0].get<double>()) +
                         ", " + fmt_double(pr["wilson95"][1].get<double>()) + "] vs " + fmt_double(asym)});
    }
    const auto& q = j["singular_over_q"];
    out.push_back({source, "P(singular over Q) = o(1)", setting(), "fraction [Wilson]",
                   fmt_double(q["fraction"].get<double>()) + " [" + fmt_double(q["wilson95"][0].get<double>()) + ", " +
                       fmt_double(q["wilson95"][1].get<double>()) + "]"});
    out.push_back({source, "implication chain", setting(), "violations", j["invariant_violations"].dump()});
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

int cmd_report(Flags f) {
  std::vector<std::string> inputs = f.inputs;
  if (inputs.empty()) {
    const char* dir = std::getenv("REGSING_OUT_DIR");
    if (!dir || !*dir) throw ParameterError("report needs --in files or REGSING_OUT_DIR");
    for (const auto& e : fs::directory_iterator(dir))
      if (e.path().extension() == ".json") inputs.push_back(e.path().string());
    std::sort(inputs.begin(), inputs.end());
  }
  std::vector<ReportRow> rows;
  for (const auto& path : inputs) {
    std::ifstream is(path);
    if (!is) throw ParameterError("cannot read " + path);
    json j;
    try {
      j = json::parse(is);
    } catch (const json::exception& e) {
      throw ParameterError(path + ": " + e.what());
    }
    report_rows(fs::path(path).filename().string(), j, rows);
  }
  std::ostringstream os;
  if (f.format == "csv") {
    os << "source,claim,setting,quantity,value\n";
    for (const auto& r : rows)
      os << csv_field(r.source) << "," << csv_field(r.claim) << "," << csv_field(r.setting) << ","
         << csv_field(r.quantity) << "," << csv_field(r.value) << "\n";
  } else {
    std::vector<ReportRow> all{{"source", "claim", "setting", "quantity", "value"}};
    all.insert(all.end(), rows.begin(), rows.end());
    std::size_t w[4] = {0, 0, 0, 0};
    for (const auto& r : all) {
      w[0] = std::max(w[0], r.source.size());
      w[1] = std::max(w[1], r.claim.size());
      w[2] = std::max(w[2], r.setting.size());
      w[3] = std::max(w[3], r.quantity.size());
    }
    for (const auto& r : all) {
      os << std::left << std::setw(static_cast<int>(w[0])) << r.source << "  " << std::setw(static_cast<int>(w[1]))
         << r.claim << "  " << std::setw(static_cast<int>(w[2])) << r.setting << "  "
         << std::setw(static_cast<int>(w[3])) << r.quantity << "  " << r.value << "\n";
    }
    f.format = "txt";
  }
  emit(f, "report", os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regsing: singularity of random regular-graph adjacency matrices over F_p and Q"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&](CLI::App* sub, bool with_p, bool many_p = false) {
    sub->add_option("--n", f.n, "number of vertices")->capture_default_str();
    sub->add_option("--d", f.d, "degree (>= 3)")->capture_default_str();
    if (with_p) {
      auto* opt = sub->add_option("--p", f.p, many_p ? "primes, repeatable or comma separated" : "prime modulus");
      opt->capture_default_str();
      if (many_p) opt->delimiter(',');
      else opt->expected(1);
    }
    sub->add_option("--out", f.out, "output file (default: $REGSING_OUT_DIR/<name>, else stdout)");
    sub->add_option("--format", f.format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    sub->add_option("--threads", f.threads, "worker threads; results do not depend on it")
        ->check(CLI::Range(1u, 1024u))
        ->capture_default_str();
  };

  auto* sample = app.add_subcommand(
      "sample", "Draw configuration-model multigraphs (uniform permutation of nd points) with a fixed seed.");
  common(sample, false);
  sample->add_option("--seed", f.seed, "base seed")->capture_default_str();
  sample->add_option("--trials", f.trials, "number of samples, streams 0..trials-1")->capture_default_str();

  auto* exact = app.add_subcommand(
      "exact",
      "Exact key sum: the expected number of nonzero F_p kernel vectors, which tends to 1 "
      "(sum over graphs of nonzero kernel vectors is (1+o(1)) |M_{n,d}|), split into "
      "equidistributed and non-equidistributed profile classes.");
  common(exact, true);
  exact->add_option("--b-threshold", f.b, "class threshold b in sum (n_j/n - 1/p)^2 <= b ln n / n")->capture_default_str();

  auto* oracle = app.add_subcommand(
      "oracle",
      "Check the walk representation of |{G : A(G) v = 0}| against brute force over all (nd)! configurations (nd <= 10).");
  common(oracle, true);

  auto* lclt = app.add_subcommand(
      "lclt",
      "Local central limit estimate: compare exact walk endpoint probabilities with the Gaussian point mass "
      "over admissible equidistributed profiles.");
  common(lclt, true);
  lclt->add_option("--b-threshold", f.b, "class threshold b")->capture_default_str();

  auto* rate = app.add_subcommand(
      "rate",
      "Large-deviation rate function: nonpositive, zero only at the uniform density and at (1,0,...,0). "
      "With --density prints one max-entropy certificate, otherwise a negativity grid scan, the Gram "
      "spectrum and the quadratic expansion check near uniform.");
  common(rate, true);
  rate->add_option("--density", f.density, "comma separated density (n_0/n, ..., n_{p-1}/n)")->delimiter(',');
  rate->add_option("--resolution", f.resolution, "grid subdivisions per axis (>= 10)")->capture_default_str();
  rate->add_option("--tol", f.tol, "moment residual tolerance")->capture_default_str();

  auto* mc = app.add_subcommand(
      "mc",
      "Monte Carlo: fraction of singular adjacency matrices mod each prime (asymptotically at most 1/(p-1)) "
      "and over Q (o(1)), with Wilson 95% intervals. Exit 0 only if identical rows => det = 0 => singular "
      "mod every p held on every trial.");
  common(mc, true, true);
  mc->add_option("--seed", f.seed, "base seed; trial t uses stream t")->capture_default_str();
  mc->add_option("--trials", f.trials, "number of trials")->capture_default_str();
  mc->add_option("--records", f.records, "also write one JSON line per trial to this file");

  auto* report = app.add_subcommand(
      "report", "Collate JSON outputs of the other subcommands into one table, grouped by the claim each exercises.");
  report->add_option("--in", f.inputs, "input JSON files (default: every *.json in $REGSING_OUT_DIR)");
  report->add_option("--out", f.out, "output file");
  report->add_option("--format", f.format, "json renders a text table; csv a CSV table")
      ->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*sample) return cmd_sample(f);
    if (*exact) return cmd_exact(f);
    if (*oracle) return cmd_oracle(f);
    if (*lclt) return cmd_lclt(f);
    if (*rate) return cmd_rate(f);
    if (*mc) return cmd_mc(f);
    if (*report) return cmd_report(f);
  } catch (const GuardError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
