#pragma once

#include "fracmatch/rational.hpp"

#include <vector>

namespace fracmatch {

// Ground truth for the two extremal quantities at desk scale, by exhaustive
// enumeration of the faces of the arrangement of the C(n,k) hyperplanes
// { sum_{j in e} x_j = 0 } inside the zero-sum subspace.
//
// By symmetry the search is restricted to the cone x_1 >= ... >= x_n, which
// is parameterized as x = sum_j y_j z_j with y >= 0 over the monotone basis
// z_j. Sign vectors are grown one hyperplane at a time; a partial vector is
// kept only if an exact-rational LP realizes all its strict signs with a
// common positive margin. Branch-and-bound incumbents come from the step
// vectors, so subtrees that cannot improve the extremum are cut.

struct BruteForceOptions {
  long max_n = 8;        // refuse larger instances unless raised explicitly
  bool use_seeds = true; // start branch-and-bound from the step-vector incumbents
};

struct BruteForceResult {
  long value = 0;
  std::vector<Ratio> witness;  // zero-sum weight vector attaining value
  unsigned long long faces = 0;
  unsigned long long lp_calls = 0;
  unsigned long long nodes = 0;
};

/// Minimum over all faces of #{e : sum_{j in e} beta_j >= 0} (ties at zero
/// included). Exact; throws std::invalid_argument above the cap.
BruteForceResult brute_force_min_nonneg(long n, long k, const BruteForceOptions& opt = {});

/// Maximum over all faces of #{e : sum_{j in e} beta_j > 0} (strict). The
/// maximum is attained on full-dimensional cells, so zero signs are skipped.
BruteForceResult brute_force_max_pos(long n, long k, const BruteForceOptions& opt = {});

}  // namespace fracmatch
