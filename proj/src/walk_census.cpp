#include "regsing/walk_census.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "regsing/error.hpp"
#include "regsing/graph_model.hpp"

namespace regsing {

namespace {

void require_walk_params(int n, int d, int p) {
  if (n < 1) throw ParameterError("n must be >= 1");
  if (d < 1) throw ParameterError("d must be >= 1");
  (void)PrimeModulus(static_cast<std::uint32_t>(p));
}

// ln of a positive GMP integer.
double log_mpz(const mpz_class& x) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

std::vector<int> scaled(const TypeVector& t, int d) {
  std::vector<int> e(t.counts);
  for (auto& x : e) x *= d;
  return e;
}

void compositions(int remaining, int slot, std::vector<int>& cur, std::vector<TypeVector>& out) {
  if (slot + 1 == static_cast<int>(cur.size())) {
    cur[slot] = remaining;
    out.push_back(TypeVector{cur});
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    cur[slot] = k;
    compositions(remaining - k, slot + 1, cur, out);
  }
}

}  // namespace

int TypeVector::n() const { return std::accumulate(counts.begin(), counts.end(), 0); }

bool TypeVector::admissible() const {
  long s = 0;
  for (int j = 0; j < p(); ++j) s += static_cast<long>(j) * counts[j];
  return s % p() == 0;
}

bool TypeVector::is_zero_type() const {
  return std::all_of(counts.begin() + 1, counts.end(), [](int x) { return x == 0; });
}

std::vector<int> phi(std::span<const std::uint32_t> a, int p) {
  std::vector<int> out(p, 0);
  for (auto x : a) {
    if (x >= static_cast<std::uint32_t>(p)) {
      throw DomainError("phi: entry " + std::to_string(x) + " is not below p=" + std::to_string(p));
    }
    ++out[x];
  }
  return out;
}

std::uint64_t UMultiset::total_multiplicity() const {
  std::uint64_t s = 0;
  for (const auto& it : items) s += it.mult;
  return s;
}

UMultiset build_U(int d, int p) {
  if (d < 1) throw ParameterError("build_U: d must be >= 1");
  (void)PrimeModulus(static_cast<std::uint32_t>(p));
  std::map<std::vector<int>, std::uint64_t> groups;
  std::vector<std::uint32_t> a(d, 0);
  // Odometer over the first d-1 coordinates; the last one closes the sum.
  while (true) {
    std::uint32_t s = 0;
    for (int i = 0; i + 1 < d; ++i) s += a[i];
    a[d - 1] = (p - s % p) % p;
    ++groups[phi(a, p)];
    int i = 0;
    while (i + 1 < d && ++a[i] == static_cast<std::uint32_t>(p)) a[i++] = 0;
    if (i + 1 == d) break;
  }
  UMultiset u{d, p, {}};
  for (auto& [w, m] : groups) u.items.push_back({w, m});
  // Lexicographically descending puts (d, 0, ..., 0) first.
  std::sort(u.items.begin(), u.items.end(), [](const UItem& x, const UItem& y) { return x.w > y.w; });
  return u;
}

mpz_class LatticeCounts::count(const std::vector<int>& endpoint) const {
  auto it = counts_.find(endpoint);
  return it == counts_.end() ? mpz_class(0) : it->second;
}

mpz_class LatticeCounts::total_mass() const {
  mpz_class s = 0;
  for (const auto& [e, c] : counts_) s += c;
  return s;
}

bool LatticeCounts::total_mass_check() const {
  mpz_class expected;
  mpz_ui_pow_ui(expected.get_mpz_t(), p_, static_cast<unsigned long>(d_ - 1) * n_);
  return total_mass() == expected;
}

bool LatticeCounts::parity_check() const {
  for (const auto& [e, c] : counts_) {
    long s = 0;
    for (int j = 0; j < p_; ++j) s += static_cast<long>(j) * e[j];
    if (s % p_ != 0 && c != 0) return false;
  }
  return true;
}

std::uint64_t lattice_size(int n, int d, int p) {
  // C(dn + p - 1, p - 1) computed incrementally; each partial product is an exact binomial.
  const std::uint64_t top = static_cast<std::uint64_t>(d) * n + p - 1;
  unsigned __int128 c = 1;
  for (std::uint64_t k = 1; k <= static_cast<std::uint64_t>(p - 1); ++k) {
    c = c * (top - (p - 1) + k) / k;
    if (c > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(c);
}

LatticeCounts walk_endpoint_counts(int n, int d, int p) {
  require_walk_params(n, d, p);
  const std::uint64_t size = lattice_size(n, d, p);
  if (size > kLatticeGuard) {
    throw GuardError("lattice of walk endpoints has C(dn+p-1, p-1) = " + std::to_string(size) +
                     " points, above the guard of " + std::to_string(kLatticeGuard));
  }
  const UMultiset u = build_U(d, p);
  std::map<std::vector<int>, mpz_class> cur;
  cur[std::vector<int>(p, 0)] = 1;
  for (int step = 0; step < n; ++step) {
    std::map<std::vector<int>, mpz_class> next;
    std::vector<int> e(p);
    for (const auto& [pos, c] : cur) {
      for (const auto& item : u.items) {
        for (int j = 0; j < p; ++j) e[j] = pos[j] + item.w[j];
        mpz_class& slot = next[e];
        mpz_addmul_ui(slot.get_mpz_t(), c.get_mpz_t(), item.mult);
      }
    }
    cur = std::move(next);
  }
  return LatticeCounts(n, d, p, std::move(cur));
}

const mpz_class& FactorialTable::operator()(int k) {
  if (k < 0) throw DomainError("factorial of a negative number");
  while (static_cast<int>(table_.size()) <= k) {
    table_.push_back(table_.back() * static_cast<unsigned long>(table_.size()));
  }
  return table_[k];
}

mpz_class FactorialTable::multinomial(int total, std::span<const int> parts) {
  mpz_class r = (*this)(total);
  for (int k : parts) mpz_divexact(r.get_mpz_t(), r.get_mpz_t(), (*this)(k).get_mpz_t());
  return r;
}

std::vector<TypeVector> enumerate_types(int n, int p) {
  if (n < 0 || p < 1) throw ParameterError("enumerate_types: need n >= 0 and p >= 1");
  std::vector<TypeVector> out;
  std::vector<int> cur(p, 0);
  compositions(n, 0, cur, out);
  std::sort(out.begin(), out.end());
  return out;
}

mpz_class type_class_size(const TypeVector& t) {
  FactorialTable fact;
  return fact.multinomial(t.n(), t.counts);
}

mpz_class graphs_with_null_vector(const TypeVector& t, const LatticeCounts& counts) {
  if (t.p() != counts.p() || t.n() != counts.n()) {
    throw ParameterError("graphs_with_null_vector: profile does not match the lattice (n, p)");
  }
  FactorialTable fact;
  mpz_class prefactor = 1;
  for (int nj : t.counts) prefactor *= fact(counts.d() * nj);
  return prefactor * counts.count(scaled(t, counts.d()));
}

mpq_class key_sum_term(const TypeVector& t, const LatticeCounts& counts, FactorialTable& fact) {
  const std::vector<int> endpoint = scaled(t, counts.d());
  mpz_class walks = counts.count(endpoint);
  if (walks == 0) return 0;
  mpq_class term(fact.multinomial(t.n(), t.counts) * walks,
                 fact.multinomial(counts.d() * t.n(), endpoint));
  term.canonicalize();
  return term;
}

mpq_class key_sum(const LatticeCounts& counts) {
  FactorialTable fact;
  mpq_class total = 0;
  for (const auto& t : enumerate_types(counts.n(), counts.p())) {
    if (t.is_zero_type()) continue;
    total += key_sum_term(t, counts, fact);
  }
  return total;
}

mpq_class key_sum(int n, int d, int p) { return key_sum(walk_endpoint_counts(n, d, p)); }

std::uint64_t brute_force_null_count(const FpVector& v, int d) {
  const int n = static_cast<int>(v.size());
  const auto p = v.modulus().value();
  ConfigurationEnumerator it(n, d);
  std::uint64_t hits = 0;
  do {
    const auto& perm = it.current().perm;
    bool zero = true;
    for (int k = 0; k < n && zero; ++k) {
      std::uint32_t s = 0;
      for (int q = k * d; q < (k + 1) * d; ++q) s += v[perm[q] / d];
      zero = s % p == 0;
    }
    hits += zero;
  } while (it.advance());
  return hits;
}

std::vector<std::uint64_t> brute_force_all_null_counts(int n, int d, const PrimeModulus& pm) {
  const std::uint32_t p = pm.value();
  std::size_t vectors = 1;
  for (int i = 0; i < n; ++i) vectors *= p;
  // Row k of A(G) applied to v is sum_l A[k][l] v_l; precompute the base-p digits.
  std::vector<std::uint32_t> digits(vectors * n);
  for (std::size_t idx = 0; idx < vectors; ++idx) {
    std::size_t x = idx;
    for (int i = 0; i < n; ++i, x /= p) digits[idx * n + i] = static_cast<std::uint32_t>(x % p);
  }
  std::vector<std::uint64_t> hits(vectors, 0);
  ConfigurationEnumerator it(n, d);
  do {
    const IntMatrix a = adjacency_from_permutation(it.current());
    for (std::size_t idx = 0; idx < vectors; ++idx) {
      const std::uint32_t* v = digits.data() + idx * n;
      bool zero = true;
      for (int k = 0; k < n && zero; ++k) {
        std::uint64_t s = 0;
        for (int l = 0; l < n; ++l) s += static_cast<std::uint64_t>(a(k, l)) * v[l];
        zero = s % p == 0;
      }
      hits[idx] += zero;
    }
  } while (it.advance());
  return hits;
}

mpq_class squared_deviation(const TypeVector& t) {
  const int n = t.n();
  const int p = t.p();
  // sum_j (p n_j - n)^2 / (p n)^2
  mpz_class num = 0;
  for (int nj : t.counts) {
    mpz_class x = static_cast<long>(p) * nj - n;
    num += x * x;
  }
  mpz_class den = static_cast<long>(p) * n;
  mpq_class q(num, den * den);
  q.canonicalize();
  return q;
}

bool is_equidistributed(const TypeVector& t, double b) {
  const int n = t.n();
  return squared_deviation(t).get_d() <= b * std::log(static_cast<double>(n)) / n;
}

ClassPartition type_class_partition(const LatticeCounts& counts, double b) {
  if (!(b > 0)) throw ParameterError("class threshold b must be positive");
  FactorialTable fact;
  ClassPartition out;
  for (const auto& t : enumerate_types(counts.n(), counts.p())) {
    const mpq_class term = key_sum_term(t, counts, fact);
    if (t.is_zero_type()) {
      out.degenerate += term;
    } else if (is_equidistributed(t, b)) {
      out.e_sum += term;
    } else {
      out.n_sum += term;
    }
  }
  out.total = out.e_sum + out.n_sum;
  return out;
}

ClassPartition type_class_partition(int n, int d, int p, double b) {
  return type_class_partition(walk_endpoint_counts(n, d, p), b);
}

double max_support_bound_log_ratio(const LatticeCounts& counts) {
  const int n = counts.n(), d = counts.d(), p = counts.p();
  const double base = (d - 1) * std::log(static_cast<double>(p)) + std::log(static_cast<double>(n));
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& t : enumerate_types(n, p)) {
    const int m = n - t.counts[0];
    if (m == 0) continue;
    const mpz_class c = counts.count(scaled(t, d));
    if (c == 0) continue;
    worst = std::max(worst, log_mpz(c) - 0.5 * d * m * base);
  }
  return worst;
}

}  // namespace regsing
