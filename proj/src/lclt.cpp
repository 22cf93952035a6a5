#include "regsing/lclt.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "regsing/error.hpp"

namespace regsing {

namespace {

double log_mpz(const mpz_class& x) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::numbers::ln2;
}

}  // namespace

MomentData moments(int d, int p) {
  const PrimeModulus pm(static_cast<std::uint32_t>(p));
  require_coprime(pm, d);
  MomentData m{d, p, {}, {}};
  m.mean.assign(p, mpq_class(d, p));
  m.covariance.resize(static_cast<std::size_t>(p) * p);
  const mpq_class diag = mpq_class(d, p) - mpq_class(d, p * p);
  const mpq_class off = -mpq_class(d, p * p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) m.covariance[static_cast<std::size_t>(i) * p + j] = i == j ? diag : off;
  for (auto& x : m.mean) x.canonicalize();
  for (auto& x : m.covariance) x.canonicalize();
  return m;
}

MomentData empirical_moments(const UMultiset& u) {
  const int p = u.p;
  MomentData m{u.d, p, std::vector<mpq_class>(p), std::vector<mpq_class>(static_cast<std::size_t>(p) * p)};
  const mpz_class total = static_cast<unsigned long>(u.total_multiplicity());
  std::vector<mpz_class> first(p);
  std::vector<mpz_class> second(static_cast<std::size_t>(p) * p);
  for (const auto& it : u.items) {
    for (int i = 0; i < p; ++i) {
      first[i] += static_cast<unsigned long>(it.mult) * it.w[i];
      for (int j = 0; j < p; ++j) {
        second[static_cast<std::size_t>(i) * p + j] +=
            static_cast<unsigned long>(it.mult) * it.w[i] * it.w[j];
      }
    }
  }
  for (int i = 0; i < p; ++i) {
    m.mean[i] = mpq_class(first[i], total);
    m.mean[i].canonicalize();
  }
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      mpq_class e2(second[static_cast<std::size_t>(i) * p + j], total);
      e2.canonicalize();
      m.covariance[static_cast<std::size_t>(i) * p + j] = e2 - m.mean[i] * m.mean[j];
    }
  }
  return m;
}

std::complex<double> characteristic_function(std::span<const double> t, const UMultiset& u) {
  if (static_cast<int>(t.size()) != u.p) throw DimensionError("characteristic_function: t must have length p");
  std::complex<double> acc = 0.0;
  for (const auto& it : u.items) {
    double phase = 0.0;
    for (int j = 0; j < u.p; ++j) phase += t[j] * it.w[j];
    acc += static_cast<double>(it.mult) * std::polar(1.0, phase);
  }
  return acc / static_cast<double>(u.total_multiplicity());
}

std::complex<double> characteristic_function(std::span<const double> t, int d, int p) {
  return characteristic_function(t, build_U(d, p));
}

std::complex<double> centered_characteristic_function(std::span<const double> t, const UMultiset& u) {
  const double mu = static_cast<double>(u.d) / u.p;
  const double shift = mu * std::accumulate(t.begin(), t.end(), 0.0);
  return std::polar(1.0, -shift) * characteristic_function(t, u);
}

GaussianEstimate gaussian_point_mass(const TypeVector& t, int d, int p) {
  if (t.p() != p) throw DimensionError("gaussian_point_mass: profile length differs from p");
  const int n = t.n();
  if (n < 1) throw ParameterError("gaussian_point_mass: profile must have n >= 1");
  const double q = squared_deviation(t).get_d();
  const double pd = p;
  const double log_value = 1.5 * std::log(pd) +
                           0.5 * (pd - 1) * std::log(pd / (2 * std::numbers::pi * d * n)) -
                           0.5 * d * pd * n * q;
  return {t, t.admissible(), std::exp(log_value)};
}

LcltScan lclt_error_scan(const LatticeCounts& counts, double b) {
  if (!(b > 0)) throw ParameterError("class threshold b must be positive");
  const int n = counts.n(), d = counts.d(), p = counts.p();
  LcltScan scan{n, d, p, b, {}, 0.0};
  const double log_total = (d - 1) * static_cast<double>(n) * std::log(static_cast<double>(p));
  for (const auto& t : enumerate_types(n, p)) {
    if (!t.admissible() || !is_equidistributed(t, b)) continue;
    std::vector<int> endpoint(t.counts);
    for (auto& x : endpoint) x *= d;
    const mpz_class c = counts.count(endpoint);
    const GaussianEstimate g = gaussian_point_mass(t, d, p);
    LcltScanRow row{t, 0.0, g.value, std::numeric_limits<double>::infinity()};
    if (c != 0) {
      // Ratio formed in log space so tiny probabilities never underflow.
      const double log_exact = log_mpz(c) - log_total;
      row.exact = std::exp(log_exact);
      row.rel_error = std::abs(std::exp(std::log(g.value) - log_exact) - 1.0);
    }
    scan.max_rel_error = std::max(scan.max_rel_error, row.rel_error);
    scan.rows.push_back(std::move(row));
  }
  return scan;
}

LcltScan lclt_error_scan(int n, int d, int p, double b) {
  return lclt_error_scan(walk_endpoint_counts(n, d, p), b);
}

}  // namespace regsing
