#pragma once

// Moments and characteristic function of a uniform step from U_{d,p}, and the
// Gaussian point-mass approximation of the walk endpoint probabilities.

#include <complex>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "regsing/walk_census.hpp"

namespace regsing {

struct MomentData {
  int d = 0;
  int p = 0;
  std::vector<mpq_class> mean;        // length p
  std::vector<mpq_class> covariance;  // p x p, row-major

  const mpq_class& cov(int i, int j) const { return covariance[static_cast<std::size_t>(i) * p + j]; }
};

/// Closed-form moments: mean d/p in every coordinate, covariance (d/p) I - (d/p^2) J.
/// Throws ParameterError unless gcd(p, d) == 1.
MomentData moments(int d, int p);

/// Mean and covariance of a uniform draw from U by direct summation (exact).
MomentData empirical_moments(const UMultiset& u);

/// E exp(i <t, X>) for X uniform on U_{d,p} with multiplicity.
std::complex<double> characteristic_function(std::span<const double> t, const UMultiset& u);
std::complex<double> characteristic_function(std::span<const double> t, int d, int p);

/// E exp(i <t, X - mu>).
std::complex<double> centered_characteristic_function(std::span<const double> t, const UMultiset& u);

struct GaussianEstimate {
  TypeVector type;
  bool admissible = false;
  double value = 0.0;
};

/// p^{3/2} (p / (2 pi d n))^{(p-1)/2} exp(-(d p n / 2) q(t)), q(t) = sum_j (n_j/n - 1/p)^2.
/// The value is returned for inadmissible profiles too; their exact probability is 0.
GaussianEstimate gaussian_point_mass(const TypeVector& t, int d, int p);

struct LcltScanRow {
  TypeVector type;
  double exact = 0.0;       // count(d t) / p^{(d-1) n}
  double gaussian = 0.0;
  double rel_error = 0.0;   // |gaussian / exact - 1|; +inf when exact == 0
};

struct LcltScan {
  int n = 0, d = 0, p = 0;
  double b = 0.0;
  std::vector<LcltScanRow> rows;
  double max_rel_error = 0.0;
};

/// Exhaustive comparison over admissible equidistributed profiles.
LcltScan lclt_error_scan(const LatticeCounts& counts, double b);
LcltScan lclt_error_scan(int n, int d, int p, double b);

}  // namespace regsing
