#pragma once

#include <gmpxx.h>

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracmatch {

/// Arbitrary-precision integer count. All combinatorial quantities in this
/// library are exact; machine floating point appears only inside
/// DirectedBound enclosures.
using Count = mpz_class;
using Int = mpz_class;

/// Exact rational, kept canonical (reduced, positive denominator).
using Ratio = mpq_class;

using RatioVector = Eigen::Matrix<Ratio, Eigen::Dynamic, 1>;
using RatioMatrix = Eigen::Matrix<Ratio, Eigen::Dynamic, Eigen::Dynamic>;

inline Ratio make_ratio(const Int& num, const Int& den) {
  if (sgn(den) == 0) throw std::invalid_argument("make_ratio: zero denominator");
  Ratio q(num, den);
  q.canonicalize();
  return q;
}

inline Ratio make_ratio(long num, long den) { return make_ratio(Int(num), Int(den)); }

/// ⌊q⌋ for a canonical rational.
inline Int floor_ratio(const Ratio& q) {
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

/// ⌈q⌉ for a canonical rational.
inline Int ceil_ratio(const Ratio& q) {
  Int r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline bool is_integer(const Ratio& q) { return mpz_cmp_ui(q.get_den_mpz_t(), 1) == 0; }

/// Parses "a/b" or "a" into a canonical Ratio. Throws on malformed input.
Ratio parse_ratio(const std::string& text);

/// Parses a comma- or space-separated list of rationals.
std::vector<Ratio> parse_ratio_list(const std::string& text);

std::string to_string(const Ratio& q);
std::string to_string(const Int& z);

}  // namespace fracmatch

// Dense Eigen types over exact rationals (used by the simplex solver).
namespace Eigen {
template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  typedef mpq_class Real;
  typedef mpq_class NonInteger;
  typedef mpq_class Nested;

  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }

  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100,
  };
};
}  // namespace Eigen
