#include "fracmatch/tails.hpp"

#include <algorithm>
#include <stdexcept>

namespace fracmatch {

namespace {

void check_tail_params(long n, long k, long a) {
  if (n < 2 || k < 1 || k >= n || a < 1 || a > n - 1)
    throw std::invalid_argument("tail parameters out of range");
}

Count tail_from(long n, long k, long a, long i_min, Binomials& memo) {
  const long i_lo = std::max({i_min, 0L, k - (n - a)});
  const long i_hi = std::min(a, k);
  Count sum(0);
  Count term;
  for (long i = i_lo; i <= i_hi; ++i) {
    term = memo.at(a, i);
    term *= memo.at(n - a, k - i);
    sum += term;
  }
  return sum;
}

thread_local Binomials tls_memo;

}  // namespace

long tail_start_strict(long n, long k, long a) {
  check_tail_params(n, k, a);
  return static_cast<long>((static_cast<unsigned long long>(k) * a) / n) + 1;
}

long tail_start_weak(long n, long k, long a) {
  check_tail_params(n, k, a);
  const unsigned long long ka = static_cast<unsigned long long>(k) * a;
  return static_cast<long>((ka + n - 1) / n);
}

Count tail_strict(long n, long k, long a, Binomials& memo) {
  return tail_from(n, k, a, tail_start_strict(n, k, a), memo);
}

Count tail_weak(long n, long k, long a, Binomials& memo) {
  return tail_from(n, k, a, tail_start_weak(n, k, a), memo);
}

Count tail_strict(long n, long k, long a) { return tail_strict(n, k, a, tls_memo); }
Count tail_weak(long n, long k, long a) { return tail_weak(n, k, a, tls_memo); }

namespace {

template <typename Cmp>
ExtremumProfile scan_extremum(long n, long k, bool keep_table, bool strict, Cmp better) {
  if (k < 1 || k >= n) throw std::invalid_argument("extremum scan: need 1 <= k < n");
  ExtremumProfile out;
  if (keep_table) out.table.reserve(n - 1);
  for (long a = 1; a <= n - 1; ++a) {
    Count v = strict ? tail_strict(n, k, a, tls_memo) : tail_weak(n, k, a, tls_memo);
    if (a == 1 || better(v, out.value)) {
      out.value = v;
      out.args.assign(1, a);
    } else if (v == out.value) {
      out.args.push_back(a);
    }
    if (keep_table) out.table.push_back(std::move(v));
  }
  return out;
}

}  // namespace

ExtremumProfile max_tail_strict(long n, long k, bool keep_table) {
  return scan_extremum(n, k, keep_table, true, [](const Count& a, const Count& b) { return a > b; });
}

ExtremumProfile min_tail_weak(long n, long k, bool keep_table) {
  return scan_extremum(n, k, keep_table, false, [](const Count& a, const Count& b) { return a < b; });
}

Count max_tail_shifted(long n, long k) {
  if (k < 1 || k >= n) throw std::invalid_argument("max_tail_shifted: need 1 <= k < n");
  Count best(0);
  Count sum, term;
  for (long s = 1; s <= k; ++s) {
    // m_s = ceil(n s / k) - 1
    const long m = static_cast<long>((static_cast<unsigned long long>(n) * s + k - 1) / k) - 1;
    sum = 0;
    for (long i = 0; i + s <= k; ++i) {
      term = tls_memo.at(m, i + s);
      term *= tls_memo.at(n - m, k - s - i);
      sum += term;
    }
    if (s == 1 || sum > best) best = sum;
  }
  return best;
}

ComplementReport check_complement_identity(long n, long k) {
  ComplementReport r;
  r.p = max_tail_strict(n, k).value;
  r.q = min_tail_weak(n, k).value;
  r.total = tls_memo.at(n, k);
  r.holds = (r.p + r.q == r.total);
  return r;
}

MmsReport check_mms_identity(long n, long k) {
  MmsReport r;
  r.precondition_ok = (n >= 4 * k);
  ExtremumProfile q = min_tail_weak(n, k);
  r.q = q.value;
  r.minimizers = q.args;
  r.expected = tls_memo.at(n - 1, k - 1);
  r.holds = (r.q == r.expected);
  return r;
}

DivisibilityReport check_divisibility_case(long n, long k) {
  DivisibilityReport r;
  r.precondition_ok = (n % k == 0);
  r.q = min_tail_weak(n, k).value;
  r.expected = tls_memo.at(n - 1, k - 1);
  r.holds = (r.q == r.expected);
  return r;
}

PeriodicityReport check_periodicity(long n, long k) {
  PeriodicityReport r;
  r.q_n = min_tail_weak(n, k).value;
  if (r.q_n != tls_memo.at(n - 1, k - 1)) {
    r.status = PeriodicityStatus::Vacuous;
    return r;
  }
  r.q_next = min_tail_weak(n + k, k).value;
  r.status = (r.q_next == tls_memo.at(n + k - 1, k - 1)) ? PeriodicityStatus::Holds
                                                         : PeriodicityStatus::Fails;
  return r;
}

}  // namespace fracmatch
