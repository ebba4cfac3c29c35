#pragma once

#include "fracmatch/interval.hpp"
#include "fracmatch/rational.hpp"

#include <string>
#include <vector>

namespace fracmatch {

// Line-by-line audit of an explicit normal-approximation constant chain for
// hypergeometric tails: every displayed constant is recomputed in certified
// arithmetic and compared against its claimed value. Statuses are a pure
// function of the enclosure and the claim, so reports are reproducible
// bit for bit.

struct SigmaResult {
  Ratio variance;         // (ka/n)(1 - a/n)(1 - k/n), exact
  DirectedBound sigma;    // its square root
};

SigmaResult hypergeometric_sigma(long n, long k, long a);

/// Lattice cut indices for the intersection count i with x~(i) = (i - ka/n)/sigma:
///   k2 = ceil(ka/n - delta sigma^2)        (the sandwich k2-1 < ka/n - d s^2 <= k2)
///   k1 = min{ i >= 0 : x~(i) >= -1 }
///   k0 = max{ i : x~(i) <= 0 } = floor(ka/n)
/// All comparisons are exact-rational (the sigma comparison is squared).
struct LatticeIndices {
  long k0 = 0, k1 = 0, k2 = 0;
};

LatticeIndices lattice_indices(long n, long k, long a, const Ratio& delta);

/// The three error terms and their sum at the chain's reference parameters.
struct BeTerms {
  DirectedBound chebyshev;  // (n/(n-1)) / (delta^2 sigma^2)
  DirectedBound local;      // (60/s^2) e^{1/s^2} + (3/s) e^{1/s}
  DirectedBound tail;       // the three-term Gaussian tail display
  DirectedBound total;
};

BeTerms be_chain_terms(double sigma = 55.0, long n = 120001, const Ratio& delta = Ratio(1, 20));

/// The cubic-moment line: closed form of the integral (1/c^2 at c = 0.07),
/// the lattice correction 4 (3/(2c))^{3/2} e^{-3/2} / sigma, and their sum,
/// audited against the printed bound of 16.
struct CubicMomentAudit {
  DirectedBound integral;
  DirectedBound correction;
  DirectedBound total;
};

CubicMomentAudit cubic_moment_audit(double sigma = 55.0);

/// Certified upper bound (1 - a_frac)^{-1/2} e^{1/1000} for the Stirling
/// correction factor over { n >= n_min, a <= a_frac n, k in (n/5, n/4),
/// i <= ka/n }; validates that the lumped exponent really is <= 1/1000 on
/// that regime before using it.
DirectedBound stirling_factor_bound(long n_min = 120001, const Ratio& a_frac = Ratio(1, 5));

/// Pointwise check of the entropy inequality
///   (n-a) H((k-i)/(n-a)) - n H(k/n) <= i ln(k/n) + (a-i) ln(1 - k/n)
/// with natural-log entropy. slack = rhs - lhs as an enclosure.
struct EntropySlack {
  DirectedBound slack;
  bool certified = false;  // slack.lo >= 0
  bool refuted = false;    // slack.hi < 0
};

EntropySlack entropy_inequality_slack(long n, long k, long a, long i);

/// sup over the open band p in (lo, hi) of (rho + 0.43 s1^3)/(3 s1^3) with
/// s1^2 = p(1-p), rho = s1^2 (1 - 2 s1^2). The expression is decreasing in p
/// on the band, so the sup is the (unattained) boundary value at p = lo,
/// exactly 71/100 for the default band.
struct BernoulliSup {
  DirectedBound sup;
  Ratio boundary_exact;      // exact value at p = lo when s1 is rational
  bool boundary_is_rational = false;
  bool decreasing_on_grid = false;  // certified strict decrease across the grid
};

BernoulliSup bernoulli_be_sup(const Ratio& lo = Ratio(1, 5), const Ratio& hi = Ratio(1, 4),
                              int grid = 32);

/// The same expression at a single p.
DirectedBound bernoulli_be_value(const Ratio& p);

/// |P0 - 1/2| exactly, P0 = sum_{i < p a} C(a,i) p^i (1-p)^{a-i}.
Ratio bernoulli_center_gap(long a, const Ratio& p);

/// gap < 0.71/sqrt(a), decided exactly (squared comparison).
bool bernoulli_gap_within(long a, const Ratio& p);

/// Smallest a with 1.1203 (1/2 + 0.71/sqrt(a)) < 3/4, decided exactly.
struct SmallSupportThreshold {
  long a_star = 0;
  long printed = 14;
};

SmallSupportThreshold small_support_threshold();
bool small_support_inequality(long a);

/// The tiny-complement cases b = n - a < 9: the chain's lower sum at a = n-b
/// equals (after the index substitution i -> k-i) the upper tail
/// sum_{i > kb/n} C(b,i) C(n-b,k-i), checked exactly against (3/4) C(n,k).
struct ComplementCase {
  long n = 0, k = 0, b = 0;
  bool holds = false;
  double ratio = 0;   // lhs / C(n,k), for display
  Ratio ratio_exact;  // the worst lhs / C(n,k) over the band, exactly
};

std::vector<ComplementCase> small_complement_checks(const std::vector<long>& n_list,
                                                    long b_max = 8);

/// Certified check of the full chain at one large point:
///   sum_{i < ka/n} C(a,i) C(n-a,k-i) <= 1.1203 (1/2 + 0.71/sqrt(a)) C(n,k).
bool lower_chain_spot_check(long n, long k, long a);

/// Certified enclosure of |P(i <= ka/n) - 1/2| for the hypergeometric
/// intersection count; exact summation for small n, certified log-space
/// summation otherwise.
DirectedBound hypergeometric_center_gap(long n, long k, long a);

enum class AuditStatus { Pass, FailAsPrinted, Boundary };

struct AuditItem {
  std::string name;
  DirectedBound computed;
  std::string claim;  // e.g. "< 0.1323"
  AuditStatus status = AuditStatus::Pass;
  std::string note;
};

struct BoundReport {
  std::vector<AuditItem> items;        // fixed order
  std::vector<std::string> annotations;
};

BoundReport build_bound_report();
std::string report_to_text(const BoundReport& r);
std::string report_to_json(const BoundReport& r);
bool report_has_failures(const BoundReport& r);

}  // namespace fracmatch
