#pragma once

#include "fracmatch/rational.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace fracmatch {

namespace detail {

// One-ulp steps via the integer representation. Library calls rounded to
// nearest are within 0.5 ulp of the true value, so stepping a full ulp
// outward yields a valid directed bound.
inline double step_up(double x) {
  if (std::isnan(x) || x == std::numeric_limits<double>::infinity()) return x;
  if (x == 0.0) return std::numeric_limits<double>::denorm_min();
  std::uint64_t b;
  std::memcpy(&b, &x, 8);
  if (b >> 63) --b; else ++b;
  std::memcpy(&x, &b, 8);
  return x;
}

inline double step_down(double x) {
  if (std::isnan(x) || x == -std::numeric_limits<double>::infinity()) return x;
  if (x == 0.0) return -std::numeric_limits<double>::denorm_min();
  std::uint64_t b;
  std::memcpy(&b, &x, 8);
  if (b >> 63) ++b; else --b;
  std::memcpy(&x, &b, 8);
  return x;
}

inline double pad_up(double x, int ulps) {
  for (int i = 0; i < ulps; ++i) x = step_up(x);
  return x;
}

inline double pad_down(double x, int ulps) {
  for (int i = 0; i < ulps; ++i) x = step_down(x);
  return x;
}

// glibc's exp/log families are documented at <= 2 ulp; we pad by 3.
constexpr int kLibmPad = 3;

}  // namespace detail

/// Certified enclosure of a real number: the true value lies in [lo, hi].
/// Every operation rounds outward, so enclosures compose soundly.
struct DirectedBound {
  double lo = 0.0;
  double hi = 0.0;

  DirectedBound() = default;
  DirectedBound(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(lo <= hi)) throw std::invalid_argument("DirectedBound: lo > hi");
  }

  static DirectedBound exact(double x) { return DirectedBound(x, x); }

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

inline DirectedBound operator-(const DirectedBound& a) { return {-a.hi, -a.lo}; }

inline DirectedBound operator+(const DirectedBound& a, const DirectedBound& b) {
  return {detail::step_down(a.lo + b.lo), detail::step_up(a.hi + b.hi)};
}

inline DirectedBound operator-(const DirectedBound& a, const DirectedBound& b) {
  return {detail::step_down(a.lo - b.hi), detail::step_up(a.hi - b.lo)};
}

inline DirectedBound operator*(const DirectedBound& a, const DirectedBound& b) {
  const double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  const double lo = std::min(std::min(p1, p2), std::min(p3, p4));
  const double hi = std::max(std::max(p1, p2), std::max(p3, p4));
  return {detail::step_down(lo), detail::step_up(hi)};
}

inline DirectedBound operator/(const DirectedBound& a, const DirectedBound& b) {
  if (b.lo <= 0.0 && b.hi >= 0.0)
    throw std::domain_error("DirectedBound: division by interval containing zero");
  const double p1 = a.lo / b.lo, p2 = a.lo / b.hi, p3 = a.hi / b.lo, p4 = a.hi / b.hi;
  const double lo = std::min(std::min(p1, p2), std::min(p3, p4));
  const double hi = std::max(std::max(p1, p2), std::max(p3, p4));
  return {detail::step_down(lo), detail::step_up(hi)};
}

inline DirectedBound operator+(const DirectedBound& a, double b) { return a + DirectedBound::exact(b); }
inline DirectedBound operator-(const DirectedBound& a, double b) { return a - DirectedBound::exact(b); }
inline DirectedBound operator*(const DirectedBound& a, double b) { return a * DirectedBound::exact(b); }
inline DirectedBound operator/(const DirectedBound& a, double b) { return a / DirectedBound::exact(b); }
inline DirectedBound operator+(double a, const DirectedBound& b) { return DirectedBound::exact(a) + b; }
inline DirectedBound operator-(double a, const DirectedBound& b) { return DirectedBound::exact(a) - b; }
inline DirectedBound operator*(double a, const DirectedBound& b) { return DirectedBound::exact(a) * b; }
inline DirectedBound operator/(double a, const DirectedBound& b) { return DirectedBound::exact(a) / b; }

inline DirectedBound abs_bound(const DirectedBound& a) {
  if (a.lo >= 0.0) return a;
  if (a.hi <= 0.0) return -a;
  return {0.0, std::max(-a.lo, a.hi)};
}

inline DirectedBound sqrt_bound(const DirectedBound& a) {
  if (a.lo < 0.0) throw std::domain_error("sqrt_bound: negative interval");
  // IEEE sqrt is correctly rounded; one ulp outward suffices.
  return {detail::step_down(std::sqrt(a.lo)), detail::step_up(std::sqrt(a.hi))};
}

inline DirectedBound exp_bound(const DirectedBound& a) {
  return {detail::pad_down(std::exp(a.lo), detail::kLibmPad),
          detail::pad_up(std::exp(a.hi), detail::kLibmPad)};
}

inline DirectedBound log_bound(const DirectedBound& a) {
  if (a.lo <= 0.0) throw std::domain_error("log_bound: non-positive interval");
  return {detail::pad_down(std::log(a.lo), detail::kLibmPad),
          detail::pad_up(std::log(a.hi), detail::kLibmPad)};
}

inline DirectedBound log2_bound(const DirectedBound& a) {
  if (a.lo <= 0.0) throw std::domain_error("log2_bound: non-positive interval");
  return {detail::pad_down(std::log2(a.lo), detail::kLibmPad),
          detail::pad_up(std::log2(a.hi), detail::kLibmPad)};
}

inline DirectedBound exp2_bound(const DirectedBound& a) {
  return {detail::pad_down(std::exp2(a.lo), detail::kLibmPad),
          detail::pad_up(std::exp2(a.hi), detail::kLibmPad)};
}

inline DirectedBound pi_bound() {
  return {detail::step_down(M_PI), detail::step_up(M_PI)};
}

inline DirectedBound ln2_bound() {
  return {detail::step_down(M_LN2), detail::step_up(M_LN2)};
}

/// Enclosure of an exact integer (works for any magnitude via the sign and
/// truncate-toward-zero semantics of mpz_get_d).
inline DirectedBound bound_of(const Int& z) {
  const double d = z.get_d();
  if (sgn(z) >= 0) return {d, detail::step_up(d)};
  return {detail::step_down(d), d};
}

/// Enclosure of an exact rational (mpq_get_d truncates toward zero).
inline DirectedBound bound_of(const Ratio& q) {
  const double d = q.get_d();
  if (sgn(q) >= 0) return {d, detail::step_up(d)};
  return {detail::step_down(d), d};
}

/// Enclosure of log2 of a positive big integer, valid for any magnitude.
inline DirectedBound log2_of(const Int& z) {
  if (sgn(z) <= 0) throw std::domain_error("log2_of: non-positive integer");
  long e2 = 0;
  const double d = mpz_get_d_2exp(&e2, z.get_mpz_t());  // d in [0.5,1), truncated
  const DirectedBound mant{d, detail::step_up(d)};
  return log2_bound(mant) + DirectedBound::exact(static_cast<double>(e2));
}

/// Enclosure of log2 of a positive rational.
inline DirectedBound log2_of(const Ratio& q) {
  if (sgn(q) <= 0) throw std::domain_error("log2_of: non-positive rational");
  return log2_of(Int(q.get_num())) - log2_of(Int(q.get_den()));
}

}  // namespace fracmatch
