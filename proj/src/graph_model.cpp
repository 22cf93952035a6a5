#include "regsing/graph_model.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "regsing/error.hpp"

namespace regsing {

namespace {

void require_graph_params(int n, int d) {
  if (n < 1) throw ParameterError("vertex count n must be >= 1, got " + std::to_string(n));
  if (d < 3) throw ParameterError("degree d must be >= 3, got " + std::to_string(d));
}

}  // namespace

void validate_sample(const ConfigurationSample& s) {
  if (s.n < 1 || s.d < 1) throw ParameterError("sample needs n >= 1 and d >= 1");
  const std::size_t points = static_cast<std::size_t>(s.n) * s.d;
  if (s.perm.size() != points) throw ParameterError("perm length does not equal n*d");
  std::vector<bool> seen(points, false);
  for (auto x : s.perm) {
    if (x >= points || seen[x]) throw ParameterError("perm is not a bijection");
    seen[x] = true;
  }
}

ConfigurationSample sample_configuration(int n, int d, RngSeed seed) {
  require_graph_params(n, d);
  ConfigurationSample s{n, d, seed, {}};
  const std::size_t points = static_cast<std::size_t>(n) * d;
  s.perm.resize(points);
  std::iota(s.perm.begin(), s.perm.end(), 0U);
  Philox rng(seed);
  for (std::size_t i = points; i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(s.perm[i - 1], s.perm[j]);
  }
  return s;
}

IntMatrix adjacency_from_permutation(const ConfigurationSample& s) {
  IntMatrix a(s.n, s.n);
  const auto d = static_cast<std::uint32_t>(s.d);
  for (std::size_t q = 0; q < s.perm.size(); ++q) {
    a(q / d, s.perm[q] / d) += 1;
  }
  return a;
}

ConfigurationEnumerator::ConfigurationEnumerator(int n, int d) {
  if (n < 1 || d < 1) throw ParameterError("enumeration needs n >= 1 and d >= 1");
  if (n * d > kEnumerationGuard) {
    throw GuardError("refusing to enumerate (" + std::to_string(n * d) +
                     ")! permutations: n*d must be <= " + std::to_string(kEnumerationGuard));
  }
  sample_.n = n;
  sample_.d = d;
  sample_.perm.resize(static_cast<std::size_t>(n) * d);
  std::iota(sample_.perm.begin(), sample_.perm.end(), 0U);
}

bool ConfigurationEnumerator::advance() {
  if (done_) return false;
  done_ = !std::next_permutation(sample_.perm.begin(), sample_.perm.end());
  return !done_;
}

std::uint64_t configuration_count(int n, int d) {
  if (n * d > 20) throw GuardError("(nd)! overflows 64 bits for n*d > 20");
  std::uint64_t f = 1;
  for (int i = 2; i <= n * d; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

bool has_identical_rows(const IntMatrix& a) {
  if (!a.square()) throw DimensionError("has_identical_rows: matrix is not square");
  std::vector<std::size_t> order(a.rows());
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](std::size_t x, std::size_t y) {
    auto rx = a.row(x), ry = a.row(y);
    return std::lexicographical_compare(rx.begin(), rx.end(), ry.begin(), ry.end());
  };
  std::sort(order.begin(), order.end(), less);
  for (std::size_t i = 1; i < order.size(); ++i) {
    auto r0 = a.row(order[i - 1]), r1 = a.row(order[i]);
    if (std::equal(r0.begin(), r0.end(), r1.begin())) return true;
  }
  return false;
}

bool is_d_regular(const IntMatrix& a, int d) {
  if (!a.square()) return false;
  std::vector<std::int64_t> col(a.cols(), 0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    std::int64_t sum = 0;
    for (std::size_t c = 0; c < a.cols(); ++c) {
      const auto x = a(r, c);
      if (x < 0 || x > d) return false;
      sum += x;
      col[c] += x;
    }
    if (sum != d) return false;
  }
  return std::all_of(col.begin(), col.end(), [d](std::int64_t x) { return x == d; });
}

std::string sample_to_json_line(const ConfigurationSample& s) {
  nlohmann::ordered_json j;
  j["n"] = s.n;
  j["d"] = s.d;
  j["seed"] = s.seed.seed;
  j["stream"] = s.seed.stream;
  j["perm"] = s.perm;
  return j.dump();
}

ConfigurationSample sample_from_json_line(const std::string& line) {
  ConfigurationSample s;
  try {
    const auto j = nlohmann::json::parse(line);
    s.n = j.at("n").get<int>();
    s.d = j.at("d").get<int>();
    s.seed.seed = j.at("seed").get<std::uint64_t>();
    s.seed.stream = j.at("stream").get<std::uint64_t>();
    s.perm = j.at("perm").get<std::vector<std::uint32_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("malformed sample record: ") + e.what());
  }
  validate_sample(s);
  return s;
}

void write_adjacency_csv(std::ostream& os, const IntMatrix& a) {
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (c) os << ',';
      os << a(r, c);
    }
    os << '\n';
  }
}

}  // namespace regsing
