#pragma once

#include "fracmatch/rational.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace fracmatch {

// Counting objective over the weight simplex: for weights g on the first
// `support` coordinates of [n-1] (zero beyond), count the k-sets x of [n]
// with sum_{j in x} g_j strictly above k/n, and its Gaussian smoothing
//   f(g) = sum_x Phi((sum_j g_j x_j - k/n) / sigma).
// Only the part of x inside [support] matters, so sums are enumerated over
// subsets of [support] weighted by C(n - support, k - |subset|).

/// Raised when a floating-point comparison lands within the guard band of
/// the threshold; the exact-rational entry point never raises it.
struct IndeterminateComparison : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact count for rational weights (ties resolved exactly). Weights must be
/// nonnegative and sum to 1.
Count count_exceeding(const std::vector<Ratio>& gamma, long support, long n, long k);

/// Floating count; throws IndeterminateComparison if any subset sum lies
/// within `guard` of the threshold k/n.
Count count_exceeding(const Eigen::VectorXd& gamma, long support, long n, long k,
                      double guard = 1e-12);

double smoothed_count(const Eigen::VectorXd& gamma, long support, double sigma, long n, long k);

/// Partial derivatives of the smoothed count w.r.t. the first `support`
/// weights (no simplex substitution).
Eigen::VectorXd smoothed_partials(const Eigen::VectorXd& gamma, long support, double sigma,
                                  long n, long k);

/// Reduced gradient under gamma_support = 1 - sum of the others: entry j is
/// the difference of the two density sums over {x: j in x, a not in x} and
/// {x: a in x, j not in x}, a = support. Size support-1.
Eigen::VectorXd smoothed_count_grad(const Eigen::VectorXd& gamma, long support, double sigma,
                                    long n, long k);

/// min over realizable k-sets of |sum_j gamma_j x_j - k/n|, exactly.
Ratio threshold_margin(const std::vector<Ratio>& gamma, long support, long n, long k);
double threshold_margin(const Eigen::VectorXd& gamma, long support, long n, long k);

std::vector<Ratio> uniform_step_weights(long support);

struct TwoLevelProfile {
  long b = 0;
  double lambda = 0;
  double gamma_a = 0;
};

struct StepProfile {
  bool is_uniform_step = false;
  std::optional<TwoLevelProfile> two_level;
  double mu = 0;  // the threshold k/n
};

/// Classifies weights as a uniform step, a two-level profile (top b weights
/// at lambda - gamma_a, rest at gamma_a, with lambda determined by n and k),
/// or neither.
StepProfile classify_step(const Eigen::VectorXd& gamma, long support, long n, long k,
                          double tol = 1e-6);

struct AnnealConfig {
  std::vector<double> sigma_schedule;  // strictly decreasing, positive
  double step_size = 0.05;
  int iters_per_stage = 200;
  int restarts = 8;
  std::uint64_t seed = 1;
  int jobs = 1;

  static AnnealConfig defaults();
};

struct AnnealResult {
  Eigen::VectorXd gamma;  // size n-1, zero beyond the support
  Count count;            // exceed count at gamma
  StepProfile profile;
  int best_restart = 0;
};

/// Projected-gradient ascent of the smoothed count on the simplex restricted
/// to support [a], annealing sigma down the schedule; returns the best count
/// over restarts. Deterministic for a fixed seed (including jobs > 1).
AnnealResult anneal_maximize(long n, long k, long a, const AnnealConfig& cfg);

/// Euclidean projection onto the probability simplex.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v);

}  // namespace fracmatch
