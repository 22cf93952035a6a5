#include "regsing/gfp.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <string>
#include <utility>

#include "regsing/error.hpp"

namespace regsing {

namespace {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, a, m);
    a = mul_mod(a, a, m);
    e >>= 1;
  }
  return r;
}

// Barrett reduction for moduli below 2^31 and inputs below 2^63.
struct Barrett {
  std::uint64_t p;
  std::uint64_t m;  // floor(2^64 / p)

  explicit Barrett(std::uint32_t mod)
      : p(mod), m(static_cast<std::uint64_t>((static_cast<unsigned __int128>(1) << 64) / mod)) {}

  std::uint32_t reduce(std::uint64_t t) const {
    std::uint64_t q = static_cast<std::uint64_t>((static_cast<unsigned __int128>(t) * m) >> 64);
    std::uint64_t r = t - q * p;
    while (r >= p) r -= p;
    return static_cast<std::uint32_t>(r);
  }
};

struct EliminationResult {
  std::size_t rank = 0;
  std::uint32_t det = 0;  // meaningful only for square input
};

// Gaussian elimination in place over F_p on a row-major residue matrix.
EliminationResult eliminate(std::vector<std::uint32_t>& a, std::size_t rows, std::size_t cols,
                            const PrimeModulus& pm) {
  const Barrett br(pm.value());
  const std::uint32_t p = pm.value();
  std::size_t rank = 0;
  std::uint64_t det = 1;
  bool negate = false;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && a[piv * cols + c] == 0) ++piv;
    if (piv == rows) {
      det = 0;
      continue;
    }
    if (piv != rank) {
      std::swap_ranges(a.begin() + piv * cols, a.begin() + (piv + 1) * cols,
                       a.begin() + rank * cols);
      negate = !negate;
    }
    std::uint32_t* prow = a.data() + rank * cols;
    const std::uint32_t pivot = prow[c];
    det = br.reduce(det * pivot);
    // Normalize the pivot row so that the multiplier per row is the entry itself.
    const std::uint64_t inv = pm.inverse(pivot);
    for (std::size_t j = c; j < cols; ++j) prow[j] = br.reduce(prow[j] * inv);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      std::uint32_t* row = a.data() + r * cols;
      const std::uint32_t f = row[c];
      if (f == 0) continue;
      const std::uint64_t neg = p - f;
      for (std::size_t j = c; j < cols; ++j) {
        row[j] = br.reduce(row[j] + neg * prow[j]);
      }
    }
    ++rank;
  }
  EliminationResult out;
  out.rank = rank;
  if (rows == cols) {
    if (rank < rows) {
      out.det = 0;
    } else {
      std::uint32_t d = static_cast<std::uint32_t>(det);
      out.det = (negate && d != 0) ? p - d : d;
    }
  }
  return out;
}

std::vector<std::uint32_t> reduce_matrix(const IntMatrix& m, const PrimeModulus& p) {
  std::vector<std::uint32_t> a(m.rows() * m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) a[r * m.cols() + c] = p.reduce(row[c]);
  }
  return a;
}

void require_square(const IntMatrix& m, const char* what) {
  if (!m.square()) {
    throw DimensionError(std::string(what) + ": matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected square");
  }
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL,
                          37ULL}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This witness set is exact for all n < 3.3 * 10^24.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL,
                          37ULL}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeModulus::PrimeModulus(std::uint32_t p) : p_(p) {
  if (p >= (1U << 31) || !is_prime(p)) {
    throw ParameterError("modulus " + std::to_string(p) + " is not a prime below 2^31");
  }
}

std::uint32_t PrimeModulus::inverse(std::uint32_t a) const {
  // Extended Euclid on (a, p).
  std::int64_t old_r = a % p_, r = p_;
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
  }
  if (old_r != 1) throw DomainError("zero has no inverse mod " + std::to_string(p_));
  return reduce(old_s);
}

void require_coprime(const PrimeModulus& p, int d) {
  if (std::gcd(static_cast<int>(p.value()), d) != 1) {
    throw ParameterError("gcd(p, d) must be 1; got p=" + std::to_string(p.value()) +
                         ", d=" + std::to_string(d));
  }
}

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, std::int64_t fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

FpVector::FpVector(std::vector<std::uint32_t> entries, const PrimeModulus& p)
    : entries_(std::move(entries)), p_(p) {
  for (auto e : entries_) {
    if (e >= p.value()) {
      throw DomainError("entry " + std::to_string(e) + " is not a residue mod " +
                        std::to_string(p.value()));
    }
  }
}

std::size_t fp_rank(const IntMatrix& m, const PrimeModulus& p) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  auto a = reduce_matrix(m, p);
  return eliminate(a, m.rows(), m.cols(), p).rank;
}

std::size_t fp_kernel_size_exponent(const IntMatrix& m, const PrimeModulus& p) {
  require_square(m, "fp_kernel_size_exponent");
  return m.rows() - fp_rank(m, p);
}

std::uint32_t fp_determinant(const IntMatrix& m, const PrimeModulus& p) {
  require_square(m, "fp_determinant");
  if (m.rows() == 0) return 1 % p.value();
  auto a = reduce_matrix(m, p);
  return eliminate(a, m.rows(), m.cols(), p).det;
}

std::vector<std::uint32_t> fp_mat_vec(const IntMatrix& m, const FpVector& v) {
  if (m.cols() != v.size()) throw DimensionError("fp_mat_vec: length mismatch");
  const auto& p = v.modulus();
  std::vector<std::uint32_t> out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::uint64_t acc = 0;
    auto row = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) {
      acc = (acc + static_cast<std::uint64_t>(p.reduce(row[c])) * v[c]) % p.value();
    }
    out[r] = static_cast<std::uint32_t>(acc);
  }
  return out;
}

mpz_class hadamard_bound_squared(const IntMatrix& m) {
  mpz_class bound = 1;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    mpz_class norm2 = 0;
    for (auto x : m.row(r)) {
      mpz_class e(static_cast<long>(x));
      norm2 += e * e;
    }
    bound *= norm2;
  }
  return bound;
}

std::span<const std::uint32_t> crt_primes(std::size_t count) {
  static std::mutex mu;
  static std::vector<std::uint32_t> primes;
  std::lock_guard<std::mutex> lock(mu);
  std::uint32_t candidate = primes.empty() ? (1U << 31) - 1 : primes.back() - 2;
  while (primes.size() < count) {
    if (is_prime(candidate)) primes.push_back(candidate);
    candidate -= 2;
  }
  return {primes.data(), count};
}

std::size_t crt_prime_count(const IntMatrix& m) {
  // Need M > 2 |det|, i.e. M^2 > 4 * (Hadamard bound)^2.
  const mpz_class target = 4 * hadamard_bound_squared(m);
  mpz_class modulus = 1;
  std::size_t count = 0;
  while (modulus * modulus <= target) {
    ++count;
    modulus *= static_cast<unsigned long>(crt_primes(count)[count - 1]);
  }
  return std::max<std::size_t>(count, 1);
}

mpz_class int_determinant(const IntMatrix& m) {
  require_square(m, "int_determinant");
  if (m.rows() == 0) return 1;
  const auto primes = crt_primes(crt_prime_count(m));
  mpz_class x = 0;
  mpz_class modulus = 1;
  for (std::uint32_t q : primes) {
    const PrimeModulus pm(q);
    const std::uint32_t r = fp_determinant(m, pm);
    // Garner step: x += modulus * ((r - x) * modulus^{-1} mod q).
    const std::uint32_t x_mod = static_cast<std::uint32_t>(mpz_fdiv_ui(x.get_mpz_t(), q));
    const std::uint32_t m_mod = static_cast<std::uint32_t>(mpz_fdiv_ui(modulus.get_mpz_t(), q));
    const std::uint64_t diff = (static_cast<std::uint64_t>(r) + q - x_mod) % q;
    const std::uint64_t t = diff * pm.inverse(m_mod) % q;
    x += modulus * static_cast<unsigned long>(t);
    modulus *= static_cast<unsigned long>(q);
  }
  // Symmetric lift into (-M/2, M/2].
  if (2 * x > modulus) x -= modulus;
  return x;
}

mpz_class bareiss_determinant(const IntMatrix& m) {
  require_square(m, "bareiss_determinant");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  std::vector<mpz_class> a(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) a[r * n + c] = static_cast<long>(m(r, c));
  mpz_class prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k * n + k] == 0) {
      std::size_t piv = k + 1;
      while (piv < n && a[piv * n + k] == 0) ++piv;
      if (piv == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(a[k * n + c], a[piv * n + c]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class v = a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a[i * n + j] = std::move(v);
      }
    }
    prev = a[k * n + k];
  }
  return sign * a[(n - 1) * n + (n - 1)];
}

bool int_determinant_is_zero(const IntMatrix& m) {
  require_square(m, "int_determinant_is_zero");
  if (m.rows() == 0) return false;
  for (std::uint32_t q : crt_primes(crt_prime_count(m))) {
    if (fp_determinant(m, PrimeModulus(q)) != 0) return false;
  }
  return true;
}

}  // namespace regsing
