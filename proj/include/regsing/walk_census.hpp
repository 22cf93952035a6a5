#pragma once

// Exact walk representation of the null-vector count.
//
// For a fixed v in F_p^n with value profile t = (n_0, ..., n_{p-1}), the
// number of configurations G with A(G) v = 0 over F_p equals
//
//     prod_j (d n_j)!  *  #{(u_1..u_n) in U^n : u_1 + ... + u_n = d t},
//
// where U = U_{d,p} is the multiset of value profiles of sum-zero d-tuples
// over F_p. Everything here is exact (GMP integers and rationals).

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "regsing/gfp.hpp"

namespace regsing {

/// Value profile (n_0, ..., n_{p-1}) of a vector in F_p^n.
struct TypeVector {
  std::vector<int> counts;

  int n() const;
  int p() const { return static_cast<int>(counts.size()); }
  /// sum_j j * n_j == 0 mod p; only these profiles can be annihilated.
  bool admissible() const;
  /// The profile of the zero vector, (n, 0, ..., 0).
  bool is_zero_type() const;

  friend bool operator==(const TypeVector&, const TypeVector&) = default;
  friend auto operator<=>(const TypeVector&, const TypeVector&) = default;
};

/// Component j counts the entries of `a` equal to j. Throws DomainError on an entry >= p.
std::vector<int> phi(std::span<const std::uint32_t> a, int p);

struct UItem {
  std::vector<int> w;     // length p, sums to d
  std::uint64_t mult = 0;
};

/// U_{d,p} grouped by distinct profile; items sorted with (d, 0, ..., 0) first.
struct UMultiset {
  int d = 0;
  int p = 0;
  std::vector<UItem> items;

  std::uint64_t total_multiplicity() const;
};

/// Enumerates the p^{d-1} tuples a in F_p^d with sum a == 0 and groups them by phi(a).
UMultiset build_U(int d, int p);

/// Largest lattice size C(dn + p - 1, p - 1) the convolution will allocate for.
inline constexpr std::uint64_t kLatticeGuard = 20'000'000;

/// Exact endpoint counts of the n-step walk with steps drawn from U_{d,p} with multiplicity.
class LatticeCounts {
 public:
  LatticeCounts(int n, int d, int p, std::map<std::vector<int>, mpz_class> counts)
      : n_(n), d_(d), p_(p), counts_(std::move(counts)) {}

  int n() const { return n_; }
  int d() const { return d_; }
  int p() const { return p_; }

  /// Count at an endpoint; zero for unreachable endpoints.
  mpz_class count(const std::vector<int>& endpoint) const;
  const std::map<std::vector<int>, mpz_class>& entries() const { return counts_; }

  mpz_class total_mass() const;
  /// total_mass() == p^{(d-1) n}.
  bool total_mass_check() const;
  /// No mass on endpoints with sum_j j m_j != 0 mod p.
  bool parity_check() const;

 private:
  int n_, d_, p_;
  std::map<std::vector<int>, mpz_class> counts_;
};

/// C(dn + p - 1, p - 1), saturating at UINT64_MAX.
std::uint64_t lattice_size(int n, int d, int p);

/// n-fold convolution of the U_{d,p} counting measure, one step at a time.
/// Throws GuardError when lattice_size exceeds kLatticeGuard.
LatticeCounts walk_endpoint_counts(int n, int d, int p);

/// Memoized table of k! as GMP integers.
class FactorialTable {
 public:
  const mpz_class& operator()(int k);
  mpz_class multinomial(int total, std::span<const int> parts);

 private:
  std::vector<mpz_class> table_{mpz_class(1)};
};

/// All profiles of length p summing to n, lexicographically.
std::vector<TypeVector> enumerate_types(int n, int p);

/// Number of vectors in F_p^n with profile t: the multinomial n! / prod n_j!.
mpz_class type_class_size(const TypeVector& t);

/// |{G : A(G) v = 0}| for any v with profile t: prod_j (d n_j)! * count(d t).
mpz_class graphs_with_null_vector(const TypeVector& t, const LatticeCounts& counts);

/// The summand of the key sum for profile t:
/// multinomial(n; t) / multinomial(dn; d t) * count(d t).
mpq_class key_sum_term(const TypeVector& t, const LatticeCounts& counts, FactorialTable& fact);

/// sum over profiles with n_0 < n of key_sum_term; equals sum_{v != 0} |{G : A v = 0}| / (nd)!.
mpq_class key_sum(const LatticeCounts& counts);
mpq_class key_sum(int n, int d, int p);

/// Brute-force count of configurations with A(G) v == 0 mod p over all (nd)! permutations.
/// Throws GuardError when n*d exceeds the enumeration guard.
std::uint64_t brute_force_null_count(const FpVector& v, int d);

/// Brute-force counts for every v in F_p^n at once, indexed by the base-p digits of v
/// (v_0 least significant).
std::vector<std::uint64_t> brute_force_all_null_counts(int n, int d, const PrimeModulus& p);

/// sum_j (n_j / n - 1/p)^2 as an exact rational.
mpq_class squared_deviation(const TypeVector& t);

/// squared_deviation(t) <= b ln(n) / n.
bool is_equidistributed(const TypeVector& t, double b);

struct ClassPartition {
  mpq_class e_sum;       // equidistributed profiles (excluding the zero profile)
  mpq_class n_sum;       // the remaining nonzero profiles
  mpq_class degenerate;  // the zero profile (n, 0, ..., 0); always 1
  mpq_class total;       // e_sum + n_sum == key_sum
};

ClassPartition type_class_partition(const LatticeCounts& counts, double b);
ClassPartition type_class_partition(int n, int d, int p, double b);

/// max over profiles with n_0 = n - m, m >= 1, of ln count(d t) - (d m / 2) ln(p^{d-1} n).
/// The support bound says this is <= 0. Returns -infinity when no such profile is reachable.
double max_support_bound_log_ratio(const LatticeCounts& counts);

}  // namespace regsing
