#pragma once

#include "fracmatch/interval.hpp"
#include "fracmatch/rational.hpp"

#include <cstdint>
#include <unordered_map>

namespace fracmatch {

/// C(n,k) by the multiplicative formula with exact stepwise division.
/// Returns 0 for k > n; C(n,0) = 1.
Count binomial(std::uint64_t n, std::uint64_t k);

/// Per-worker memo table of binomial coefficients, keyed by (n, min(k, n-k)).
/// Not synchronized: either give each worker its own instance or route all
/// access through a single writer.
class Binomials {
 public:
  const Count& at(std::uint64_t n, std::uint64_t k);

  std::size_t size() const { return table_.size(); }
  void clear() { table_.clear(); }

  /// Replaces a memo entry with an arbitrary value. Exists solely so the
  /// self-test's consistency audit can be exercised against a corrupted
  /// table; never call it otherwise.
  void overwrite_entry(std::uint64_t n, std::uint64_t k, Count value);

 private:
  static std::uint64_t key(std::uint64_t n, std::uint64_t k) { return (n << 24) ^ k; }
  std::unordered_map<std::uint64_t, Count> table_;
  Count zero_{0};
};

/// Recomputes a sample of memoized entries through the Pascal recurrence and
/// returns the first mismatch as "C(n,k)" text, or empty if consistent.
std::string audit_binomials(Binomials& b, std::uint64_t n_max, int samples, std::uint64_t seed);

/// Enclosure of ln(m!).
DirectedBound ln_factorial_bounds(std::uint64_t m);

/// Enclosure of log2 C(n,k), 0 <= k <= n. Width is ~1e-12 relative, far
/// inside the 1e-6 contract, for n up to a few hundred thousand.
DirectedBound log2_binomial_bounds(std::uint64_t n, std::uint64_t k);

}  // namespace fracmatch
