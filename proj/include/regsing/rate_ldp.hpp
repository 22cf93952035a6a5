#pragma once

// Large-deviation rate function for the walk endpoint counts.
//
// For a density nv on {0..p-1} the rate is
//
//     R(nv) = sup { H(alpha) : sum_j alpha_j w_j = d nv, alpha in simplex }
//             + (d - 1) sum_k nv_k ln nv_k,
//
// where alpha ranges over distributions on the p^{d-1} elements of U_{d,p}
// and H is the Shannon entropy. The supremum is a max-entropy problem whose
// dual is the smooth convex log-partition function of the exponential family
// alpha_j(theta) ~ exp(<theta, w_j>).

#include <cstdint>
#include <string>
#include <vector>

#include "regsing/walk_census.hpp"

namespace regsing {

/// Nonnegative weights summing to 1 within 1e-12.
class DensityVector {
 public:
  explicit DensityVector(std::vector<double> values);
  static DensityVector uniform(int p);
  static DensityVector point_mass_at_zero(int p);

  int p() const { return static_cast<int>(values_.size()); }
  double operator[](int k) const { return values_[k]; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

/// sum_k nv_k ln nv_k with 0 ln 0 = 0.
double neg_entropy(const DensityVector& nv);

enum class SolveStatus { converged, not_converged, infeasible };

std::string to_string(SolveStatus s);

struct RateCertificate {
  std::vector<double> density;
  std::vector<double> alpha;  // one weight per element of U_{d,p}, items in build_U order
  std::vector<double> dual;   // theta; zero on coordinates where nv vanishes
  double rate = 0.0;          // H(alpha) + (d-1) sum nv ln nv at the returned alpha
  double rate_upper_bound = 0.0;  // dual objective + (d-1) sum nv ln nv; >= the true rate
  double residual = 0.0;      // max_k |sum_j alpha_j w_j(k) - d nv_k|
  bool converged = false;
  SolveStatus status = SolveStatus::not_converged;
  int iterations = 0;
};

struct MaxentOptions {
  double tol = 1e-10;
  int max_iter = 200;
};

/// Damped Newton on the dual, starting from theta = 0 (uniform alpha).
/// Coordinates with nv_k = 0 are removed together with every w_j that uses them.
RateCertificate maxent_alpha(const DensityVector& nv, const UMultiset& u, MaxentOptions opt = {});
RateCertificate maxent_alpha(const DensityVector& nv, int d, int p, MaxentOptions opt = {});

/// H(alpha) + (d-1) sum nv ln nv for an explicit per-element alpha.
double rate_of_alpha(const std::vector<double>& alpha, const DensityVector& nv, int d);

/// max_k |sum_j alpha_j w_j(k) - d nv_k| for a per-element alpha.
double moment_residual(const std::vector<double>& alpha, const DensityVector& nv, const UMultiset& u);

/// sum_j prod_k nv_k^{((d-1)/d) w_j(k)} over the p^{d-1} elements, with 0^0 = 1. At most 1.
double amgm_sum(const DensityVector& nv, const UMultiset& u);
double amgm_sum(const DensityVector& nv, int d, int p);

/// The stationary point of the Lagrangian, alpha_j = e^{d-2+lambda} prod_k nv_k^{((d-1)/d) w_j(k)}.
struct StationaryAlpha {
  std::vector<double> alpha;  // per element, normalized
  double lambda = 0.0;
  double closed_form_rate = 0.0;  // -(d - 2 + lambda)
  double direct_rate = 0.0;       // rate_of_alpha(alpha)
  double moment_residual = 0.0;
  /// moment_residual below the tolerance passed in; only then must the two rates agree.
  bool satisfies_constraint = false;
};

StationaryAlpha stationary_alpha(const DensityVector& nv, const UMultiset& u, double tol = 1e-9);
StationaryAlpha stationary_alpha(const DensityVector& nv, int d, int p, double tol = 1e-9);

/// Eigenvalues (ascending) of sum_j w_j w_j^T over the elements of U_{d,p}.
std::vector<double> gram_spectrum(int d, int p);

/// Nonzero eigenvalues (ascending, |lambda| > 1e-8 scale) of the full Gram matrix <w_i, w_j>.
/// Throws GuardError above 1024 elements.
std::vector<double> gram_matrix_nonzero_eigenvalues(int d, int p);

struct GramClosedForm {
  double top = 0.0;        // d^2 p^{d-2}, eigenvector (1, ..., 1)
  double bulk = 0.0;       // d p^{d-2}
  int bulk_multiplicity = 0;  // p - 1
};

GramClosedForm gram_closed_form(int d, int p);

/// |d^2 sum delta_k^2 - eps^T G eps| where d delta = sum_j eps_j w_j.
double constraint_map_gap(const std::vector<double>& eps, const UMultiset& u);

struct QuadraticExpansionReport {
  int d = 0, p = 0;
  double radius = 0.0;
  int directions = 0;
  double worst_ratio = 0.0;             // rate(s delta) / rate(s delta / 2) farthest from 4
  double worst_ratio_rel_dev = 0.0;     // |ratio / 4 - 1|
  double worst_coefficient = 0.0;       // rate(s delta) / (s^2 |delta|^2) farthest from -p/2
  double worst_coefficient_rel_dev = 0.0;
  double rate_at_zero = 0.0;
};

/// Checks rate(uniform + s delta) = -(p/2) s^2 |delta|^2 + O(s^3) on random sum-zero
/// unit directions delta drawn from a fixed Philox stream.
QuadraticExpansionReport quadratic_expansion_check(int d, int p, double radius = 1e-3,
                                                   int directions = 16, std::uint64_t seed = 1);

struct NegativityScan {
  int d = 0, p = 0, resolution = 0;
  std::size_t grid_points = 0;
  std::size_t excluded = 0;      // within 2/resolution of an equality point
  std::size_t infeasible = 0;
  std::size_t not_converged = 0;
  double max_rate = 0.0;         // over converged points
  double max_upper_bound = 0.0;  // over every feasible or undecided point
  std::vector<double> argmax;
  bool negative = false;         // max_upper_bound < 0
};

/// Scans the simplex grid {k / resolution}. Requires resolution >= 10.
NegativityScan negativity_grid_scan(int d, int p, int resolution);

enum class TypeClass { zero_type, equidistributed, non_equidistributed };

std::string to_string(TypeClass c);

/// zero-type iff t = (n, 0, ..., 0); equidistributed iff sum (n_j/n - 1/p)^2 <= b ln n / n.
TypeClass classify_type(const TypeVector& t, double b);

}  // namespace regsing
