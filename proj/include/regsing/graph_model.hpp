#pragma once

// Configuration-model d-regular directed multigraphs.
//
// Vertex k owns the fiber of points {k*d, ..., k*d + d - 1}. A permutation
// `perm` of all n*d points adds one directed edge k -> l for every point q in
// fiber k, where perm[q] lies in fiber l. Loops and multi-edges are kept.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "regsing/gfp.hpp"
#include "regsing/rng.hpp"

namespace regsing {

struct ConfigurationSample {
  int n = 0;
  int d = 0;
  RngSeed seed;  // zero for enumerated samples
  std::vector<std::uint32_t> perm;
};

/// Throws ParameterError unless perm is a bijection on n*d points and n >= 1, d >= 1.
void validate_sample(const ConfigurationSample& s);

/// Uniform permutation of n*d points by Fisher-Yates driven by Philox(seed).
ConfigurationSample sample_configuration(int n, int d, RngSeed seed);

/// A[k][l] = #{q in fiber k : perm[q] in fiber l}.
IntMatrix adjacency_from_permutation(const ConfigurationSample& s);

/// Largest n*d for which full enumeration is allowed.
inline constexpr int kEnumerationGuard = 10;

/// Lexicographic stream over all (nd)! permutations.
class ConfigurationEnumerator {
 public:
  /// Throws GuardError when n*d exceeds kEnumerationGuard.
  ConfigurationEnumerator(int n, int d);

  const ConfigurationSample& current() const { return sample_; }
  /// Moves to the next permutation; false once the stream is exhausted.
  bool advance();

 private:
  ConfigurationSample sample_;
  bool done_ = false;
};

/// (nd)! for the enumeration guard range.
std::uint64_t configuration_count(int n, int d);

/// True iff two rows of the square matrix are equal.
bool has_identical_rows(const IntMatrix& a);

/// Every row and column sums to d and entries lie in [0, d].
bool is_d_regular(const IntMatrix& a, int d);

/// {"n":..,"d":..,"seed":..,"stream":..,"perm":[..]} on one line.
std::string sample_to_json_line(const ConfigurationSample& s);
ConfigurationSample sample_from_json_line(const std::string& line);

/// Comma-separated rows, one per line.
void write_adjacency_csv(std::ostream& os, const IntMatrix& a);

}  // namespace regsing
