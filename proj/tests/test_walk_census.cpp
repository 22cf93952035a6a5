#include <doctest.h>

#include <cmath>
#include <map>

#include "regsing/error.hpp"
#include "regsing/graph_model.hpp"
#include "regsing/walk_census.hpp"

using namespace regsing;

namespace {

// Step profiles by direct enumeration of F_p^d, without grouping.
std::vector<std::vector<int>> all_steps(int d, int p) {
  std::vector<std::vector<int>> out;
  std::vector<int> a(d, 0);
  for (;;) {
    int s = 0;
    for (int x : a) s += x;
    if (s % p == 0) {
      std::vector<int> w(p, 0);
      for (int x : a) ++w[x];
      out.push_back(w);
    }
    int i = 0;
    while (i < d && ++a[i] == p) a[i++] = 0;
    if (i == d) break;
  }
  return out;
}

// Endpoint counts by enumerating every sequence of n steps.
std::map<std::vector<int>, long> sequence_counts(int n, int d, int p) {
  const auto steps = all_steps(d, p);
  std::map<std::vector<int>, long> out;
  std::vector<std::size_t> idx(n, 0);
  for (;;) {
    std::vector<int> e(p, 0);
    for (auto i : idx)
      for (int k = 0; k < p; ++k) e[k] += steps[i][k];
    ++out[e];
    int j = 0;
    while (j < n && ++idx[j] == steps.size()) idx[j++] = 0;
    if (j == n) break;
  }
  return out;
}

TypeVector profile_of(const std::vector<std::uint32_t>& v, int p) {
  return TypeVector{phi(v, p)};
}

}  // namespace

TEST_CASE("phi examples") {
  CHECK(phi(std::vector<std::uint32_t>{0, 1, 1}, 2) == std::vector<int>{1, 2});
  CHECK(phi(std::vector<std::uint32_t>{0, 2, 2, 1}, 3) == std::vector<int>{1, 1, 2});
  CHECK(phi(std::vector<std::uint32_t>{0, 0, 0}, 2) == std::vector<int>{3, 0});
  CHECK_THROWS_AS(phi(std::vector<std::uint32_t>{0, 2}, 2), DomainError);
}

TEST_CASE("build_U examples and invariants") {
  const auto u32 = build_U(3, 2);
  REQUIRE(u32.items.size() == 2);
  CHECK(u32.items[0].w == std::vector<int>{3, 0});
  CHECK(u32.items[0].mult == 1);
  CHECK(u32.items[1].w == std::vector<int>{1, 2});
  CHECK(u32.items[1].mult == 3);

  std::map<std::vector<int>, std::uint64_t> u33;
  for (const auto& it : build_U(3, 3).items) u33[it.w] = it.mult;
  CHECK(u33 == std::map<std::vector<int>, std::uint64_t>{{{3, 0, 0}, 1}, {{1, 1, 1}, 6}, {{0, 3, 0}, 1}, {{0, 0, 3}, 1}});

  for (int d : {3, 4, 5, 6}) {
    for (int p : {2, 3, 5, 7}) {
      const auto u = build_U(d, p);
      std::uint64_t expect = 1;
      for (int i = 1; i < d; ++i) expect *= p;
      CHECK(u.total_multiplicity() == expect);

      std::map<std::vector<int>, std::uint64_t> direct;
      for (const auto& w : all_steps(d, p)) ++direct[w];
      std::map<std::vector<int>, std::uint64_t> grouped;
      for (const auto& it : u.items) grouped[it.w] = it.mult;
      CHECK(grouped == direct);

      std::vector<int> top(p, 0);
      top[0] = d;
      CHECK(u.items[0].w == top);
      CHECK(u.items[0].mult == 1);
      for (std::size_t i = 1; i < u.items.size(); ++i) {
        CHECK(u.items[i].w[0] <= d - 2);
        CHECK(d - u.items[i].w[0] >= 2);
      }
    }
  }
}

TEST_CASE("walk_endpoint_counts examples") {
  const auto c1 = walk_endpoint_counts(1, 3, 3);
  for (const auto& it : build_U(3, 3).items) CHECK(c1.count(it.w) == it.mult);

  const auto c2 = walk_endpoint_counts(2, 3, 2);
  CHECK(c2.entries().size() == 3);
  CHECK(c2.count({6, 0}) == 1);
  CHECK(c2.count({4, 2}) == 6);
  CHECK(c2.count({2, 4}) == 9);
  CHECK(c2.count({3, 3}) == 0);
  CHECK(c2.total_mass() == 16);

  const auto c3 = walk_endpoint_counts(3, 3, 2);
  CHECK(c3.count({3, 6}) == 27);
  CHECK(c3.count({9, 0}) == 1);
}

TEST_CASE("walk_endpoint_counts matches sequence enumeration") {
  for (auto [n, d, p] : {std::tuple{3, 3, 2}, {2, 3, 5}, {3, 4, 3}, {4, 3, 3}, {2, 5, 2}}) {
    const auto counts = walk_endpoint_counts(n, d, p);
    const auto oracle = sequence_counts(n, d, p);
    CHECK(counts.entries().size() == oracle.size());
    for (const auto& [e, c] : oracle) CHECK(counts.count(e) == c);
    CHECK(counts.total_mass_check());
    CHECK(counts.parity_check());
  }
}

TEST_CASE("mass, parity and support bound on every computed lattice") {
  for (auto [n, d, p] : {std::tuple{1, 3, 2}, {2, 3, 2}, {2, 3, 5}, {3, 3, 2}, {10, 3, 2}, {20, 3, 2},
                         {12, 4, 3}, {8, 5, 2}, {6, 3, 7}}) {
    const auto counts = walk_endpoint_counts(n, d, p);
    CHECK(counts.total_mass_check());
    CHECK(counts.parity_check());
    CHECK(max_support_bound_log_ratio(counts) <= 0.0);
  }
  CHECK(lattice_size(2, 3, 2) == 7);
  CHECK_THROWS_AS(walk_endpoint_counts(2000, 7, 7), GuardError);
}

TEST_CASE("graphs_with_null_vector and key_sum examples") {
  const auto c2 = walk_endpoint_counts(2, 3, 2);
  CHECK(graphs_with_null_vector(TypeVector{{2, 0}}, c2) == 720);
  CHECK(graphs_with_null_vector(TypeVector{{1, 1}}, c2) == 0);
  CHECK(key_sum(c2) == 0);

  const auto c3 = walk_endpoint_counts(3, 3, 2);
  CHECK(graphs_with_null_vector(TypeVector{{1, 2}}, c3) == 116640);
  CHECK(key_sum(3, 3, 2) == mpq_class(27, 28));
}

TEST_CASE("brute_force_null_count examples") {
  const PrimeModulus two(2);
  CHECK(brute_force_null_count(FpVector({1, 1}, two), 3) == 0);
  CHECK(brute_force_null_count(FpVector({0, 0}, two), 3) == 720);
  CHECK(brute_force_null_count(FpVector({0, 1, 1}, two), 3) == 116640);
  CHECK_THROWS_AS(brute_force_null_count(FpVector({0, 0, 0, 0}, two), 3), GuardError);
}

TEST_CASE("walk representation equals the brute-force oracle for nd <= 9") {
  for (auto [n, d, p] : {std::tuple{1, 3, 2}, {2, 3, 2}, {2, 3, 5}, {3, 3, 2}, {1, 4, 5}, {2, 4, 5}, {1, 5, 2}}) {
    const PrimeModulus pm(p);
    const auto counts = walk_endpoint_counts(n, d, p);
    const auto brute = brute_force_all_null_counts(n, d, pm);
    mpz_class nonzero_total = 0;
    for (std::size_t idx = 0; idx < brute.size(); ++idx) {
      std::vector<std::uint32_t> v(n);
      std::size_t x = idx;
      for (int i = 0; i < n; ++i, x /= p) v[i] = x % p;
      const TypeVector t = profile_of(v, p);
      CHECK(graphs_with_null_vector(t, counts) == brute[idx]);
      if (idx != 0) nonzero_total += brute[idx];
    }
    FactorialTable fact;
    CHECK(key_sum(counts) * mpq_class(fact(n * d)) == mpq_class(nonzero_total));
  }
}

TEST_CASE("type classes cover F_p^n") {
  for (auto [n, p] : {std::pair{7, 2}, {5, 3}, {4, 5}, {3, 7}}) {
    mpz_class total = 0;
    for (const auto& t : enumerate_types(n, p)) total += type_class_size(t);
    mpz_class expect;
    mpz_ui_pow_ui(expect.get_mpz_t(), p, n);
    CHECK(total == expect);
  }
  CHECK(enumerate_types(3, 2).size() == 4);
}

TEST_CASE("type_class_partition is an exact split of the key sum") {
  const auto counts = walk_endpoint_counts(40, 3, 2);
  const mpq_class ks = key_sum(counts);
  for (double b : {0.25, 1.0, 10.0, 1e6}) {
    const auto part = type_class_partition(counts, b);
    CHECK(part.e_sum + part.n_sum == ks);
    CHECK(part.total == ks);
    CHECK(part.degenerate == 1);
  }
  // Raising the threshold only moves terms from N to E.
  CHECK(type_class_partition(counts, 1.0).n_sum >= type_class_partition(counts, 10.0).n_sum);
  CHECK(type_class_partition(counts, 1e6).n_sum == 0);

  CHECK(squared_deviation(TypeVector{{30, 10}}) == mpq_class(1, 8));
  CHECK(is_equidistributed(TypeVector{{20, 20}}, 0.01));
  CHECK_FALSE(is_equidistributed(TypeVector{{40, 0}}, 1.0));
  CHECK_THROWS_AS(type_class_partition(counts, 0.0), ParameterError);
}

TEST_CASE("key sum matches the Monte Carlo mean number of nonzero kernel vectors") {
  // E[p^{dim ker} - 1] over the configuration model is exactly the key sum.
  const int n = 20, d = 3;
  const PrimeModulus two(2);
  const double exact = key_sum(n, d, 2).get_d();
  const int trials = 20000;
  double sum = 0, sum2 = 0;
  for (int t = 0; t < trials; ++t) {
    const IntMatrix a = adjacency_from_permutation(sample_configuration(n, d, {31, static_cast<std::uint64_t>(t)}));
    const double x = std::ldexp(1.0, static_cast<int>(fp_kernel_size_exponent(a, two))) - 1.0;
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / trials;
  const double se = std::sqrt((sum2 / trials - mean * mean) / trials);
  MESSAGE("key_sum(20,3,2) = ", exact, ", Monte Carlo mean = ", mean, " +- ", se);
  CHECK(std::abs(mean - exact) < 5 * se);
}
