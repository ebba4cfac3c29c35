#pragma once

#include "fracmatch/binomial.hpp"
#include "fracmatch/rational.hpp"

#include <vector>

namespace fracmatch {

// Hypergeometric tail sums over splits [a] | [n]\[a]. The summation index i
// counts the part of a k-set inside [a]; the threshold is the exact rational
// ka/n. The strict and weak variants differ exactly on the lattice points
// n | ka, so both cutoffs route through exact integer arithmetic:
//   strict: i >= floor(ka/n) + 1
//   weak:   i >= ceil(ka/n)

/// First index of the strict tail.
long tail_start_strict(long n, long k, long a);

/// First index of the weak tail.
long tail_start_weak(long n, long k, long a);

/// Sum of C(a,i) C(n-a,k-i) over i > ka/n. Zero when the range is empty.
Count tail_strict(long n, long k, long a, Binomials& memo);

/// Sum of C(a,i) C(n-a,k-i) over i >= ka/n.
Count tail_weak(long n, long k, long a, Binomials& memo);

// Convenience overloads with a thread-local memo table.
Count tail_strict(long n, long k, long a);
Count tail_weak(long n, long k, long a);

/// Value of an extremum over the split size a, with every attaining a and
/// (optionally) the full per-a table.
struct ExtremumProfile {
  Count value;
  std::vector<long> args;    // all a in [1, n-1] attaining value
  std::vector<Count> table;  // per-a values (index a-1), filled when requested
};

/// max over a in [1,n-1] of the strict tail.
ExtremumProfile max_tail_strict(long n, long k, bool keep_table = false);

/// min over a in [1,n-1] of the weak tail.
ExtremumProfile min_tail_weak(long n, long k, bool keep_table = false);

/// The same maximum in its shifted form: max over s in [1,k] of
/// sum_{i=0}^{k-s} C(m_s, i+s) C(n-m_s, k-s-i) with m_s = ceil(ns/k) - 1.
/// Agreement with max_tail_strict is a tested claim, not an assumption.
Count max_tail_shifted(long n, long k);

struct ComplementReport {
  bool holds = false;
  Count p, q, total;  // total = C(n,k)
};

/// Checks max strict tail + min weak tail == C(n,k).
ComplementReport check_complement_identity(long n, long k);

struct MmsReport {
  bool precondition_ok = false;  // n >= 4k
  bool holds = false;            // min weak tail == C(n-1,k-1)
  Count q, expected;
  std::vector<long> minimizers;
};

/// Checks min_tail_weak(n,k) == C(n-1,k-1); meaningful under n >= 4k but the
/// evaluation is always reported so out-of-regime failures stay visible.
MmsReport check_mms_identity(long n, long k);

struct DivisibilityReport {
  bool precondition_ok = false;  // k | n
  bool holds = false;
  Count q, expected;
};

DivisibilityReport check_divisibility_case(long n, long k);

enum class PeriodicityStatus { Vacuous, Holds, Fails };

struct PeriodicityReport {
  PeriodicityStatus status = PeriodicityStatus::Vacuous;
  Count q_n, q_next;
};

/// If min_tail_weak(n,k) == C(n-1,k-1), verifies the same identity at n+k.
PeriodicityReport check_periodicity(long n, long k);

}  // namespace fracmatch
