#include "fracmatch/binomial.hpp"

#include <algorithm>
#include <array>
#include <mutex>
#include <random>
#include <sstream>
#include <vector>

namespace fracmatch {

Count binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return Count(0);
  k = std::min(k, n - k);
  Count r(1);
  for (std::uint64_t i = 1; i <= k; ++i) {
    mpz_mul_ui(r.get_mpz_t(), r.get_mpz_t(), static_cast<unsigned long>(n - k + i));
    mpz_divexact_ui(r.get_mpz_t(), r.get_mpz_t(), static_cast<unsigned long>(i));
  }
  return r;
}

const Count& Binomials::at(std::uint64_t n, std::uint64_t k) {
  if (k > n) return zero_;
  k = std::min(k, n - k);
  const std::uint64_t id = key(n, k);
  auto it = table_.find(id);
  if (it != table_.end()) return it->second;

  Count value;
  if (k == 0) {
    value = 1;
  } else {
    // Extend from the row neighbor when present: C(n,k) = C(n,k-1)(n-k+1)/k.
    auto prev = table_.find(key(n, k - 1));
    if (prev != table_.end()) {
      value = prev->second;
      mpz_mul_ui(value.get_mpz_t(), value.get_mpz_t(), static_cast<unsigned long>(n - k + 1));
      mpz_divexact_ui(value.get_mpz_t(), value.get_mpz_t(), static_cast<unsigned long>(k));
    } else {
      value = binomial(n, k);
    }
  }
  return table_.emplace(id, std::move(value)).first->second;
}

void Binomials::overwrite_entry(std::uint64_t n, std::uint64_t k, Count value) {
  if (k > n) return;
  k = std::min(k, n - k);
  table_[key(n, k)] = std::move(value);
}

std::string audit_binomials(Binomials& b, std::uint64_t n_max, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick_n(2, n_max);
  for (int s = 0; s < samples; ++s) {
    const std::uint64_t n = pick_n(rng);
    const std::uint64_t k = std::uniform_int_distribution<std::uint64_t>(1, n - 1)(rng);
    const Count& memo = b.at(n, k);
    const Count pascal = b.at(n - 1, k) + b.at(n - 1, k - 1);
    if (memo != pascal) {
      std::ostringstream os;
      os << "C(" << n << "," << k << ")";
      return os.str();
    }
  }
  return std::string();
}

namespace {

// ln(m!) for m < kSmallFactorials, from exact factorials. Built once.
constexpr std::uint64_t kSmallFactorials = 4096;

const std::vector<DirectedBound>& small_ln_factorials() {
  static const std::vector<DirectedBound> table = [] {
    std::vector<DirectedBound> t(kSmallFactorials);
    Count f(1);
    t[0] = DirectedBound::exact(0.0);
    const DirectedBound ln2 = ln2_bound();
    for (std::uint64_t m = 1; m < kSmallFactorials; ++m) {
      mpz_mul_ui(f.get_mpz_t(), f.get_mpz_t(), static_cast<unsigned long>(m));
      t[m] = log2_of(f) * ln2;
    }
    return t;
  }();
  return table;
}

// Stirling series for ln Gamma(x) with the classical alternating remainder:
// the error after the 1/x^7 term is below 1/(1188 x^9).
DirectedBound ln_gamma_stirling(double x) {
  const DirectedBound xb = DirectedBound::exact(x);
  const DirectedBound lnx = log_bound(xb);
  // 0.5*ln(2*pi)
  const DirectedBound half_ln_2pi = log_bound(pi_bound() * 2.0) * 0.5;
  DirectedBound s = (xb - 0.5) * lnx - xb + half_ln_2pi;
  const DirectedBound inv = 1.0 / xb;
  const DirectedBound inv2 = inv * inv;
  DirectedBound term = inv;  // x^{-1}
  s = s + term / 12.0;
  term = term * inv2;  // x^{-3}
  s = s - term / 360.0;
  term = term * inv2;  // x^{-5}
  s = s + term / 1260.0;
  term = term * inv2;  // x^{-7}
  s = s - term / 1680.0;
  term = term * inv2;  // x^{-9}
  const DirectedBound rem = term / 1188.0;
  return s + DirectedBound(-rem.hi, rem.hi);
}

}  // namespace

DirectedBound ln_factorial_bounds(std::uint64_t m) {
  if (m < kSmallFactorials) return small_ln_factorials()[m];
  return ln_gamma_stirling(static_cast<double>(m) + 1.0);
}

DirectedBound log2_binomial_bounds(std::uint64_t n, std::uint64_t k) {
  if (k > n) throw std::invalid_argument("log2_binomial_bounds: k > n");
  if (k == 0 || k == n) return DirectedBound::exact(0.0);
  const DirectedBound ln_c = ln_factorial_bounds(n) - ln_factorial_bounds(k) - ln_factorial_bounds(n - k);
  return ln_c / ln2_bound();
}

}  // namespace fracmatch
