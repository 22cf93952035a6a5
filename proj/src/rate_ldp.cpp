#include "regsing/rate_ldp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "regsing/error.hpp"
#include "regsing/rng.hpp"

namespace regsing {

namespace {

double xlogx(double x) { return x > 0 ? x * std::log(x) : 0.0; }

void require_rate_params(int d, int p) {
  if (d < 3) throw ParameterError("rate function needs d >= 3");
  require_coprime(PrimeModulus(static_cast<std::uint32_t>(p)), d);
}

void require_matching(const DensityVector& nv, const UMultiset& u) {
  if (nv.p() != u.p) throw DimensionError("density length differs from p");
}

// Expands per-item weights to one weight per element of U.
std::vector<double> expand(const UMultiset& u, const std::vector<double>& per_item) {
  std::vector<double> out;
  out.reserve(u.total_multiplicity());
  for (std::size_t i = 0; i < u.items.size(); ++i) out.insert(out.end(), u.items[i].mult, per_item[i]);
  return out;
}

// prod_k nv_k^{e w(k)} with 0^0 = 1.
double profile_power(const DensityVector& nv, const std::vector<int>& w, double e) {
  double log_v = 0.0;
  for (int k = 0; k < nv.p(); ++k) {
    if (w[k] == 0) continue;
    if (nv[k] <= 0.0) return 0.0;
    log_v += e * w[k] * std::log(nv[k]);
  }
  return std::exp(log_v);
}

// Dual state for theta restricted to the active coordinates.
struct DualPoint {
  double value = 0.0;           // log-partition - <theta, c>
  Eigen::VectorXd grad;         // E[w] - c
  Eigen::MatrixXd hess;         // Cov[w]
  Eigen::VectorXd item_prob;    // group probability m_i a_i
  Eigen::VectorXd log_elem;     // ln a_i per element of item i
};

struct ActiveProblem {
  Eigen::MatrixXd w;        // items x active coords
  Eigen::VectorXd log_mult;
  Eigen::VectorXd c;        // d * nv on active coords
};

DualPoint evaluate(const ActiveProblem& pr, const Eigen::VectorXd& theta, bool second_order) {
  DualPoint out;
  const Eigen::VectorXd s = pr.w * theta;
  const Eigen::VectorXd logits = s + pr.log_mult;
  const double top = logits.maxCoeff();
  const double lse = top + std::log((logits.array() - top).exp().sum());
  out.item_prob = (logits.array() - lse).exp();
  out.log_elem = s.array() - lse;
  out.value = lse - theta.dot(pr.c);
  const Eigen::VectorXd mean = pr.w.transpose() * out.item_prob;
  out.grad = mean - pr.c;
  if (second_order) {
    const Eigen::MatrixXd centered = pr.w.rowwise() - mean.transpose();
    out.hess = centered.transpose() * out.item_prob.asDiagonal() * centered;
  }
  return out;
}

}  // namespace

DensityVector::DensityVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ParameterError("density must be nonempty");
  double s = 0.0;
  for (double x : values_) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw ParameterError("density entries must be finite and >= 0");
    s += x;
  }
  if (std::abs(s - 1.0) > 1e-12) throw ParameterError("density must sum to 1 within 1e-12");
}

DensityVector DensityVector::uniform(int p) { return DensityVector(std::vector<double>(p, 1.0 / p)); }

DensityVector DensityVector::point_mass_at_zero(int p) {
  std::vector<double> v(p, 0.0);
  v[0] = 1.0;
  return DensityVector(std::move(v));
}

double neg_entropy(const DensityVector& nv) {
  double s = 0.0;
  for (double x : nv.values()) s += xlogx(x);
  return s;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::not_converged: return "not_converged";
    case SolveStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

RateCertificate maxent_alpha(const DensityVector& nv, const UMultiset& u, MaxentOptions opt) {
  require_matching(nv, u);
  const int p = u.p, d = u.d;
  RateCertificate cert;
  cert.density = nv.values();
  cert.dual.assign(p, 0.0);

  std::vector<int> coords;
  for (int k = 0; k < p; ++k)
    if (nv[k] > 0.0) coords.push_back(k);
  std::vector<std::size_t> items;
  for (std::size_t i = 0; i < u.items.size(); ++i) {
    const auto& w = u.items[i].w;
    bool ok = true;
    for (int k = 0; k < p && ok; ++k) ok = nv[k] > 0.0 || w[k] == 0;
    if (ok) items.push_back(i);
  }
  const double tail = (d - 1) * neg_entropy(nv);
  if (items.empty()) {
    cert.status = SolveStatus::infeasible;
    cert.rate = cert.rate_upper_bound = -std::numeric_limits<double>::infinity();
    cert.residual = std::numeric_limits<double>::infinity();
    return cert;
  }

  ActiveProblem pr;
  const auto m = static_cast<Eigen::Index>(items.size());
  const auto a = static_cast<Eigen::Index>(coords.size());
  pr.w.resize(m, a);
  pr.log_mult.resize(m);
  pr.c.resize(a);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& item = u.items[items[i]];
    pr.log_mult[i] = std::log(static_cast<double>(item.mult));
    for (Eigen::Index k = 0; k < a; ++k) pr.w(i, k) = item.w[coords[k]];
  }
  for (Eigen::Index k = 0; k < a; ++k) pr.c[k] = d * nv[coords[k]];

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(a);
  DualPoint cur = evaluate(pr, theta, true);
  int it = 0;
  constexpr double kThetaCap = 1e4;
  for (; it < opt.max_iter; ++it) {
    if (cur.grad.cwiseAbs().maxCoeff() < opt.tol) break;
    // Pseudo-inverse Newton step; the Hessian is singular along (1, ..., 1).
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cur.hess);
    const Eigen::VectorXd& ev = eig.eigenvalues();
    const double cutoff = 1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff());
    Eigen::VectorXd inv = ev.unaryExpr([cutoff](double x) { return x > cutoff ? 1.0 / x : 0.0; });
    Eigen::VectorXd step = -(eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose() * cur.grad);
    double slope = step.dot(cur.grad);
    if (!(slope < 0.0)) {
      step = -cur.grad;
      slope = step.dot(cur.grad);
    }
    double t = 1.0;
    DualPoint trial;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
      trial = evaluate(pr, theta + t * step, true);
      // Near the optimum the value stalls at rounding level, so a shrinking gradient also counts.
      if (trial.value <= cur.value + 1e-4 * t * slope ||
          (trial.value <= cur.value + 1e-14 * std::abs(cur.value) &&
           trial.grad.norm() < (1.0 - 1e-4 * t) * cur.grad.norm())) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    theta += t * step;
    cur = std::move(trial);
    if (theta.cwiseAbs().maxCoeff() > kThetaCap) break;
  }

  cert.iterations = it;
  cert.residual = cur.grad.cwiseAbs().maxCoeff();
  cert.converged = cert.residual < opt.tol;
  std::vector<double> per_item(u.items.size(), 0.0);
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    per_item[items[i]] = std::exp(cur.log_elem[i]);
    entropy -= cur.item_prob[i] * cur.log_elem[i];
  }
  cert.alpha = expand(u, per_item);
  for (Eigen::Index k = 0; k < a; ++k) cert.dual[coords[k]] = theta[k];
  cert.rate = entropy + tail;
  cert.rate_upper_bound = cur.value + tail;
  if (cert.converged) {
    cert.status = SolveStatus::converged;
  } else {
    // A direction with <theta, w_j - c> < 0 for every active item separates d*nv from the hull.
    const Eigen::VectorXd dir = theta.normalized();
    const double sep = ((pr.w * dir).array() - dir.dot(pr.c)).maxCoeff();
    cert.status = (theta.norm() > 1.0 && sep < 0.0) ? SolveStatus::infeasible : SolveStatus::not_converged;
    if (cert.status == SolveStatus::infeasible) {
      cert.rate = cert.rate_upper_bound = -std::numeric_limits<double>::infinity();
    }
  }
  return cert;
}

RateCertificate maxent_alpha(const DensityVector& nv, int d, int p, MaxentOptions opt) {
  require_rate_params(d, p);
  return maxent_alpha(nv, build_U(d, p), opt);
}

double rate_of_alpha(const std::vector<double>& alpha, const DensityVector& nv, int d) {
  double h = 0.0;
  for (double x : alpha) h -= xlogx(x);
  return h + (d - 1) * neg_entropy(nv);
}

double moment_residual(const std::vector<double>& alpha, const DensityVector& nv, const UMultiset& u) {
  require_matching(nv, u);
  if (alpha.size() != u.total_multiplicity()) throw DimensionError("alpha must have p^{d-1} entries");
  std::vector<double> mom(u.p, 0.0);
  std::size_t e = 0;
  for (const auto& item : u.items) {
    for (std::uint64_t r = 0; r < item.mult; ++r, ++e) {
      for (int k = 0; k < u.p; ++k) mom[k] += alpha[e] * item.w[k];
    }
  }
  double worst = 0.0;
  for (int k = 0; k < u.p; ++k) worst = std::max(worst, std::abs(mom[k] - u.d * nv[k]));
  return worst;
}

double amgm_sum(const DensityVector& nv, const UMultiset& u) {
  require_matching(nv, u);
  const double e = static_cast<double>(u.d - 1) / u.d;
  double s = 0.0;
  for (const auto& item : u.items) s += static_cast<double>(item.mult) * profile_power(nv, item.w, e);
  return s;
}

double amgm_sum(const DensityVector& nv, int d, int p) {
  require_rate_params(d, p);
  return amgm_sum(nv, build_U(d, p));
}

StationaryAlpha stationary_alpha(const DensityVector& nv, const UMultiset& u, double tol) {
  require_matching(nv, u);
  const int d = u.d;
  const double e = static_cast<double>(d - 1) / d;
  const double total = amgm_sum(nv, u);
  StationaryAlpha out;
  // Normalization: e^{d-2+lambda} * total = 1.
  out.lambda = -std::log(total) - (d - 2);
  out.closed_form_rate = -(d - 2 + out.lambda);
  std::vector<double> per_item;
  for (const auto& item : u.items) per_item.push_back(profile_power(nv, item.w, e) / total);
  out.alpha = expand(u, per_item);
  out.direct_rate = rate_of_alpha(out.alpha, nv, d);
  out.moment_residual = moment_residual(out.alpha, nv, u);
  out.satisfies_constraint = out.moment_residual < tol;
  return out;
}

StationaryAlpha stationary_alpha(const DensityVector& nv, int d, int p, double tol) {
  require_rate_params(d, p);
  return stationary_alpha(nv, build_U(d, p), tol);
}

std::vector<double> gram_spectrum(int d, int p) {
  const UMultiset u = build_U(d, p);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(p, p);
  for (const auto& item : u.items) {
    Eigen::VectorXd w(p);
    for (int k = 0; k < p; ++k) w[k] = item.w[k];
    s += static_cast<double>(item.mult) * w * w.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = eig.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

std::vector<double> gram_matrix_nonzero_eigenvalues(int d, int p) {
  const UMultiset u = build_U(d, p);
  const auto count = static_cast<Eigen::Index>(u.total_multiplicity());
  if (count > 1024) throw GuardError("Gram matrix above 1024 x 1024 refused");
  Eigen::MatrixXd w(count, p);
  Eigen::Index r = 0;
  for (const auto& item : u.items)
    for (std::uint64_t c = 0; c < item.mult; ++c, ++r)
      for (int k = 0; k < p; ++k) w(r, k) = item.w[k];
  const Eigen::MatrixXd gram = w * w.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  std::vector<double> out;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    if (std::abs(eig.eigenvalues()[i]) > 1e-8 * scale) out.push_back(eig.eigenvalues()[i]);
  }
  return out;
}

GramClosedForm gram_closed_form(int d, int p) {
  const double pd2 = std::pow(static_cast<double>(p), d - 2);
  return {static_cast<double>(d) * d * pd2, d * pd2, p - 1};
}

double constraint_map_gap(const std::vector<double>& eps, const UMultiset& u) {
  if (eps.size() != u.total_multiplicity()) throw DimensionError("eps must have p^{d-1} entries");
  std::vector<std::vector<int>> elems;
  for (const auto& item : u.items) elems.insert(elems.end(), item.mult, item.w);
  std::vector<double> delta(u.p, 0.0);
  for (std::size_t j = 0; j < elems.size(); ++j)
    for (int k = 0; k < u.p; ++k) delta[k] += eps[j] * elems[j][k] / u.d;
  double lhs = 0.0;
  for (double x : delta) lhs += u.d * u.d * x * x;
  double rhs = 0.0;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t j = 0; j < elems.size(); ++j) {
      const double ip = std::inner_product(elems[i].begin(), elems[i].end(), elems[j].begin(), 0.0);
      rhs += eps[i] * eps[j] * ip;
    }
  }
  return std::abs(lhs - rhs);
}

QuadraticExpansionReport quadratic_expansion_check(int d, int p, double radius, int directions,
                                                   std::uint64_t seed) {
  require_rate_params(d, p);
  if (!(radius > 0) || radius > 0.5 / p) throw ParameterError("radius must lie in (0, 1/(2p)]");
  const UMultiset u = build_U(d, p);
  QuadraticExpansionReport rep;
  rep.d = d;
  rep.p = p;
  rep.radius = radius;
  rep.directions = directions;
  const double target = -0.5 * p;
  rep.rate_at_zero = maxent_alpha(DensityVector::uniform(p), u).rate;

  Philox rng({seed, 0});
  auto rate_at = [&](const std::vector<double>& dir, double s) {
    std::vector<double> v(p);
    for (int k = 0; k < p; ++k) v[k] = 1.0 / p + s * dir[k];
    // Renormalize away the rounding so the density check passes.
    const double sum = std::accumulate(v.begin(), v.end(), 0.0);
    for (auto& x : v) x /= sum;
    return maxent_alpha(DensityVector(v), u).rate;
  };
  for (int i = 0; i < directions; ++i) {
    std::vector<double> dir(p);
    if (i == 0 && p == 2) {
      dir = {1.0, -1.0};
    } else {
      for (auto& x : dir) x = 2.0 * rng.uniform01() - 1.0;
    }
    const double mean = std::accumulate(dir.begin(), dir.end(), 0.0) / p;
    double norm2 = 0.0;
    for (auto& x : dir) {
      x -= mean;
      norm2 += x * x;
    }
    const double norm = std::sqrt(norm2);
    for (auto& x : dir) x /= norm;
    const double r1 = rate_at(dir, radius);
    const double r2 = rate_at(dir, radius / 2);
    const double ratio = r1 / r2;
    const double coef = r1 / (radius * radius);
    const double ratio_dev = std::abs(ratio / 4.0 - 1.0);
    const double coef_dev = std::abs(coef / target - 1.0);
    if (i == 0 || ratio_dev > rep.worst_ratio_rel_dev) {
      rep.worst_ratio_rel_dev = ratio_dev;
      rep.worst_ratio = ratio;
    }
    if (i == 0 || coef_dev > rep.worst_coefficient_rel_dev) {
      rep.worst_coefficient_rel_dev = coef_dev;
      rep.worst_coefficient = coef;
    }
  }
  return rep;
}

NegativityScan negativity_grid_scan(int d, int p, int resolution) {
  require_rate_params(d, p);
  if (resolution < 10) throw ParameterError("grid resolution must be >= 10");
  const UMultiset u = build_U(d, p);
  NegativityScan scan;
  scan.d = d;
  scan.p = p;
  scan.resolution = resolution;
  scan.max_rate = -std::numeric_limits<double>::infinity();
  scan.max_upper_bound = -std::numeric_limits<double>::infinity();
  const double radius = 2.0 / resolution;
  for (const auto& t : enumerate_types(resolution, p)) {
    ++scan.grid_points;
    std::vector<double> v(p);
    double du = 0.0, dz = 0.0;
    for (int k = 0; k < p; ++k) {
      v[k] = static_cast<double>(t.counts[k]) / resolution;
      du += (v[k] - 1.0 / p) * (v[k] - 1.0 / p);
      dz += (v[k] - (k == 0 ? 1.0 : 0.0)) * (v[k] - (k == 0 ? 1.0 : 0.0));
    }
    if (std::sqrt(du) < radius || std::sqrt(dz) < radius) {
      ++scan.excluded;
      continue;
    }
    const RateCertificate c = maxent_alpha(DensityVector(v), u);
    if (c.status == SolveStatus::infeasible) {
      ++scan.infeasible;
      continue;
    }
    if (c.status == SolveStatus::not_converged) ++scan.not_converged;
    if (c.converged && c.rate > scan.max_rate) scan.max_rate = c.rate;
    if (c.rate_upper_bound > scan.max_upper_bound) {
      scan.max_upper_bound = c.rate_upper_bound;
      scan.argmax = v;
    }
  }
  scan.negative = scan.max_upper_bound < 0.0;
  return scan;
}

std::string to_string(TypeClass c) {
  switch (c) {
    case TypeClass::zero_type: return "zero-type";
    case TypeClass::equidistributed: return "equidistributed";
    case TypeClass::non_equidistributed: return "non-equidistributed";
  }
  return "unknown";
}

TypeClass classify_type(const TypeVector& t, double b) {
  if (!(b > 0)) throw ParameterError("class threshold b must be positive");
  if (t.is_zero_type()) return TypeClass::zero_type;
  return is_equidistributed(t, b) ? TypeClass::equidistributed : TypeClass::non_equidistributed;
}

}  // namespace regsing
