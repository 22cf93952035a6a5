#pragma once

// Exact linear algebra over F_p and over the integers.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include <gmpxx.h>

namespace regsing {

/// Deterministic primality test for 64-bit integers (Miller-Rabin with a fixed witness set).
bool is_prime(std::uint64_t n);

/// A prime modulus below 2^31.
class PrimeModulus {
 public:
  /// Throws ParameterError unless `p` is a prime in [2, 2^31).
  explicit PrimeModulus(std::uint32_t p);

  std::uint32_t value() const { return p_; }

  /// Residue of an arbitrary signed integer.
  std::uint32_t reduce(std::int64_t x) const {
    std::int64_t r = x % static_cast<std::int64_t>(p_);
    return static_cast<std::uint32_t>(r < 0 ? r + p_ : r);
  }

  std::uint32_t inverse(std::uint32_t a) const;

  friend bool operator==(const PrimeModulus&, const PrimeModulus&) = default;

 private:
  std::uint32_t p_;
};

/// Throws ParameterError when gcd(p, d) != 1.
void require_coprime(const PrimeModulus& p, int d);

/// Dense row-major integer matrix.
///
/// Entries are 64-bit: every matrix in this toolkit is an adjacency matrix
/// (entries in {0..d}) or a small test matrix, and all determinant work is
/// promoted to GMP integers or word-size residues internally.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols, std::int64_t fill = 0);
  IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows);

  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  std::int64_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::int64_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const std::int64_t> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<std::int64_t> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> data_;
};

/// Vector over F_p; every entry is a residue below p.
class FpVector {
 public:
  FpVector(std::vector<std::uint32_t> entries, const PrimeModulus& p);

  std::size_t size() const { return entries_.size(); }
  std::uint32_t operator[](std::size_t i) const { return entries_[i]; }
  std::span<const std::uint32_t> entries() const { return entries_; }
  const PrimeModulus& modulus() const { return p_; }

 private:
  std::vector<std::uint32_t> entries_;
  PrimeModulus p_;
};

/// Rank of `m` reduced mod p. The empty matrix has rank 0.
std::size_t fp_rank(const IntMatrix& m, const PrimeModulus& p);

/// k such that the kernel of the square matrix `m` over F_p has p^k elements.
std::size_t fp_kernel_size_exponent(const IntMatrix& m, const PrimeModulus& p);

/// det(m) mod p for a square matrix.
std::uint32_t fp_determinant(const IntMatrix& m, const PrimeModulus& p);

/// (A v) mod p.
std::vector<std::uint32_t> fp_mat_vec(const IntMatrix& m, const FpVector& v);

/// Square of the Hadamard bound: prod_i ||row_i||^2 >= det(m)^2.
mpz_class hadamard_bound_squared(const IntMatrix& m);

/// The fixed, descending list of word-size primes used for determinant CRT.
/// The first `count` primes below 2^31 are generated deterministically.
std::span<const std::uint32_t> crt_primes(std::size_t count);

/// Number of CRT primes whose product M satisfies M > 2 * Hadamard bound.
std::size_t crt_prime_count(const IntMatrix& m);

/// Exact determinant by residues modulo word-size primes and CRT recombination.
mpz_class int_determinant(const IntMatrix& m);

/// Exact determinant by Bareiss fraction-free elimination over GMP integers.
mpz_class bareiss_determinant(const IntMatrix& m);

/// det(m) == 0, decided exactly. Stops at the first prime with a nonzero residue.
bool int_determinant_is_zero(const IntMatrix& m);

}  // namespace regsing
