#include <doctest.h>

#include <random>

#include "regsing/error.hpp"
#include "regsing/gfp.hpp"
#include "regsing/graph_model.hpp"

using namespace regsing;

namespace {

// Cofactor expansion mod p; independent of the elimination code.
std::int64_t cofactor_det_mod(const std::vector<std::vector<std::int64_t>>& m, std::int64_t p) {
  const std::size_t n = m.size();
  if (n == 0) return 1 % p;
  if (n == 1) return ((m[0][0] % p) + p) % p;
  std::int64_t acc = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<std::int64_t>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<std::int64_t> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      minor.push_back(row);
    }
    const std::int64_t term = (((m[0][c] % p) + p) % p) * cofactor_det_mod(minor, p) % p;
    acc = (c % 2 == 0) ? (acc + term) % p : (acc - term + p) % p;
  }
  return acc;
}

// Largest k with a nonzero k x k minor mod p, by enumerating row/column subsets.
std::size_t minor_rank(const IntMatrix& a, std::int64_t p) {
  const std::size_t n = a.rows(), m = a.cols();
  for (std::size_t k = std::min(n, m); k > 0; --k) {
    for (unsigned rs = 0; rs < (1U << n); ++rs) {
      if (static_cast<std::size_t>(__builtin_popcount(rs)) != k) continue;
      for (unsigned cs = 0; cs < (1U << m); ++cs) {
        if (static_cast<std::size_t>(__builtin_popcount(cs)) != k) continue;
        std::vector<std::vector<std::int64_t>> sub;
        for (std::size_t r = 0; r < n; ++r) {
          if (!(rs >> r & 1)) continue;
          std::vector<std::int64_t> row;
          for (std::size_t c = 0; c < m; ++c)
            if (cs >> c & 1) row.push_back(a(r, c));
          sub.push_back(row);
        }
        if (cofactor_det_mod(sub, p) != 0) return k;
      }
    }
  }
  return 0;
}

IntMatrix random_matrix(std::mt19937_64& gen, std::size_t rows, std::size_t cols, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  IntMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = dist(gen);
  return m;
}

}  // namespace

TEST_CASE("primality and modulus construction") {
  std::vector<bool> sieve(2000, true);
  sieve[0] = sieve[1] = false;
  for (std::size_t i = 2; i < sieve.size(); ++i)
    if (sieve[i])
      for (std::size_t j = i * i; j < sieve.size(); j += i) sieve[j] = false;
  for (std::size_t i = 0; i < sieve.size(); ++i) CHECK(is_prime(i) == sieve[i]);
  CHECK(is_prime(2147483647ULL));
  CHECK_FALSE(is_prime(2147483649ULL));  // 3 * 715827883

  CHECK_THROWS_AS(PrimeModulus(1), ParameterError);
  CHECK_THROWS_AS(PrimeModulus(4), ParameterError);
  CHECK_THROWS_AS(PrimeModulus(2147483659U), ParameterError);  // prime, but >= 2^31
  CHECK_THROWS_AS(require_coprime(PrimeModulus(3), 3), ParameterError);
  CHECK_NOTHROW(require_coprime(PrimeModulus(2), 3));

  const PrimeModulus p(101);
  for (std::uint32_t a = 1; a < 101; ++a) CHECK(static_cast<std::uint64_t>(a) * p.inverse(a) % 101 == 1);
  CHECK(p.reduce(-1) == 100);
  CHECK_THROWS_AS(FpVector({0, 101}, p), DomainError);
}

TEST_CASE("fp_rank examples") {
  CHECK(fp_rank(IntMatrix::identity(5), PrimeModulus(7)) == 5);
  CHECK(fp_rank(IntMatrix{{1, 1}, {1, 1}}, PrimeModulus(2)) == 1);
  CHECK(fp_rank(IntMatrix(), PrimeModulus(2)) == 0);

  const IntMatrix m{{1, 2, 0}, {0, 1, 2}, {2, 0, 1}};
  const std::size_t oracle = minor_rank(m, 3);
  CHECK(oracle == 2);  // det = 9 == 0 mod 3, leading 2x2 minor is 1
  CHECK(fp_rank(m, PrimeModulus(3)) == oracle);
  CHECK(fp_rank(m, PrimeModulus(5)) == minor_rank(m, 5));
}

TEST_CASE("fp_rank agrees with the minor oracle on small random matrices") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t r = 1 + gen() % 4, c = 1 + gen() % 4;
    const IntMatrix m = random_matrix(gen, r, c, -3, 3);
    for (std::uint32_t p : {2U, 3U, 5U}) CHECK(fp_rank(m, PrimeModulus(p)) == minor_rank(m, p));
  }
}

TEST_CASE("fp_kernel_size_exponent") {
  CHECK(fp_kernel_size_exponent(IntMatrix::identity(4), PrimeModulus(5)) == 0);
  CHECK(fp_kernel_size_exponent(IntMatrix(3, 3), PrimeModulus(2)) == 3);
  CHECK_THROWS_AS(fp_kernel_size_exponent(IntMatrix(2, 3), PrimeModulus(2)), DimensionError);

  // Sampled singular adjacency matrices: count kernel vectors exhaustively.
  for (std::uint32_t pv : {2U, 5U}) {
    const PrimeModulus p(pv);
    int found = 0;
    for (std::uint64_t stream = 0; stream < 2000 && found < 5; ++stream) {
      const int n = 3 + stream % 2;
      const IntMatrix a = adjacency_from_permutation(sample_configuration(n, 3, {99, stream}));
      const std::size_t k = fp_kernel_size_exponent(a, p);
      std::uint64_t total = 1;
      for (int i = 0; i < n; ++i) total *= pv;
      std::uint64_t kernel = 0;
      for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::vector<std::uint32_t> v(n);
        std::uint64_t x = idx;
        for (int i = 0; i < n; ++i, x /= pv) v[i] = x % pv;
        const auto av = fp_mat_vec(a, FpVector(v, p));
        kernel += std::all_of(av.begin(), av.end(), [](std::uint32_t e) { return e == 0; });
      }
      std::uint64_t pk = 1;
      for (std::size_t i = 0; i < k; ++i) pk *= pv;
      CHECK(kernel == pk);
      if (k >= 1) {
        ++found;
        CHECK(pk - 1 >= pv - 1);
      }
    }
    CHECK(found == 5);
  }
}

TEST_CASE("int_determinant examples") {
  CHECK(int_determinant(IntMatrix::identity(6)) == 1);
  CHECK(int_determinant(IntMatrix{{1, 2, 3}, {4, 5, 6}, {1, 2, 3}}) == 0);
  CHECK(int_determinant(IntMatrix{{2, 1}, {1, 1}}) == 1);
  CHECK(int_determinant(IntMatrix{{0, 1}, {1, 0}}) == -1);
  CHECK(int_determinant(IntMatrix()) == 1);
  CHECK_THROWS_AS(int_determinant(IntMatrix(2, 3)), DimensionError);
  CHECK_THROWS_AS(bareiss_determinant(IntMatrix(3, 2)), DimensionError);
  CHECK(int_determinant_is_zero(IntMatrix{{3, 0}, {3, 0}}));
  CHECK_FALSE(int_determinant_is_zero(IntMatrix{{3}}));
}

TEST_CASE("CRT determinant equals Bareiss determinant on random matrices up to 30x30") {
  std::mt19937_64 gen(5);
  for (std::size_t n = 1; n <= 30; ++n) {
    for (int rep = 0; rep < 3; ++rep) {
      const IntMatrix m = random_matrix(gen, n, n, 0, 5);
      CHECK(int_determinant(m) == bareiss_determinant(m));
    }
  }
  // Signed entries exercise the symmetric lift.
  for (int rep = 0; rep < 40; ++rep) {
    const IntMatrix m = random_matrix(gen, 8, 8, -9, 9);
    CHECK(int_determinant(m) == bareiss_determinant(m));
  }
}

TEST_CASE("det == 0 mod p iff rank < n") {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + gen() % 7;
    const IntMatrix m = random_matrix(gen, n, n, 0, 3);
    const mpz_class det = int_determinant(m);
    for (std::uint32_t pv : {2U, 3U, 5U, 7U}) {
      const PrimeModulus p(pv);
      const bool det_zero_mod_p = mpz_divisible_ui_p(det.get_mpz_t(), pv) != 0;
      CHECK(det_zero_mod_p == (fp_rank(m, p) < n));
      CHECK(mpz_fdiv_ui(det.get_mpz_t(), pv) == fp_determinant(m, p));
    }
  }
}

TEST_CASE("fp_rank is invariant under row swaps and integer row additions") {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t r = 2 + gen() % 6, c = 2 + gen() % 6;
    IntMatrix m = random_matrix(gen, r, c, 0, 4);
    const PrimeModulus p(trial % 2 ? 3 : 7);
    const std::size_t before = fp_rank(m, p);
    const std::size_t i = gen() % r, j = (i + 1 + gen() % (r - 1)) % r;
    const std::int64_t mult = static_cast<std::int64_t>(gen() % 11) - 5;
    for (std::size_t k = 0; k < c; ++k) m(i, k) += mult * m(j, k);
    CHECK(fp_rank(m, p) == before);
    for (std::size_t k = 0; k < c; ++k) std::swap(m(i, k), m(j, k));
    CHECK(fp_rank(m, p) == before);
  }
}

TEST_CASE("all-ones vector is never in the kernel of an adjacency matrix when gcd(p, d) = 1") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const int d = 3 + s % 3;
    const IntMatrix a = adjacency_from_permutation(sample_configuration(6 + s % 5, d, {3, s}));
    for (std::uint32_t pv : {2U, 3U, 5U, 7U}) {
      const PrimeModulus p(pv);
      if (pv % d == 0 || d % pv == 0) continue;
      const auto av = fp_mat_vec(a, FpVector(std::vector<std::uint32_t>(a.cols(), 1), p));
      for (auto e : av) CHECK(e == d % pv);
    }
  }
}

TEST_CASE("CRT prime count follows the Hadamard bound") {
  // A d-regular adjacency row has squared norm at most d^2.
  const IntMatrix a = adjacency_from_permutation(sample_configuration(50, 3, {1, 0}));
  const mpz_class bound2 = hadamard_bound_squared(a);
  mpz_class ceiling;
  mpz_ui_pow_ui(ceiling.get_mpz_t(), 9, 50);
  CHECK(bound2 <= ceiling);
  const std::size_t count = crt_prime_count(a);
  mpz_class modulus = 1;
  for (auto q : crt_primes(count)) modulus *= static_cast<unsigned long>(q);
  CHECK(modulus * modulus > 4 * bound2);
  // Primes are distinct, descending, and below 2^31.
  const auto primes = crt_primes(count);
  for (std::size_t i = 1; i < primes.size(); ++i) CHECK(primes[i] < primes[i - 1]);
  CHECK(primes[0] == 2147483647U);
}
