#pragma once

#include "fracmatch/binomial.hpp"
#include "fracmatch/interval.hpp"
#include "fracmatch/tails.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace fracmatch {

// Exhaustive verification of
//     sum_{i > ka/n} C(a,i) C(n-a,k-i)  <=  C(n-1,k)
// over a configured range of n, the k rule, and all a in [1, n-1].
//
// The fast path is certified: a cell may be declared ok without exact
// arithmetic only when an outward-rounded upper enclosure of log2(lhs) sits
// below a lower enclosure of log2(rhs). Everything else falls through to
// exact big-integer comparison, so filtered and exact sweeps always agree.

enum class KRule { Quarter, Band, Explicit };

struct SweepConfig {
  long n_min = 2;
  long n_max = 2;
  KRule k_rule = KRule::Quarter;
  std::vector<long> k_list;  // used when k_rule == Explicit
  int workers = 1;
  std::string out_path;
  std::string checkpoint_path;
  bool filtered = false;            // false: every cell exact
  double filter_slack_bits = 32.0;  // certified-summation truncation budget
  bool resume = false;
  long stop_after = 0;  // stop (resumable) after this many n this run; 0 = off
};

enum class CellPath { Crude, Refined, Exact };

struct CellResult {
  bool ok = false;
  bool in_scope = true;  // k <= n/4, the regime the inequality is stated for
  CellPath path = CellPath::Exact;
  Count lhs, rhs;          // populated on the exact path
  double margin_log2 = 0;  // log2(rhs/lhs); lower bound on filtered paths; inf if lhs=0
  bool equality = false;   // exact path only: lhs == rhs
};

/// Exact verdict for one cell.
CellResult verify_cell(long n, long k, long a, Binomials& memo);

/// Same verdict through the crude/refined/exact chain.
CellResult verify_cell_filtered(long n, long k, long a, Binomials& memo,
                                double slack_bits = 32.0);

struct SweepRecord {
  long n = 0, k = 0;
  long worst_a = 0;  // argmin of margin_log2 (smallest such a)
  bool ok = false;
  std::optional<double> margin_log2;  // min over a; null when lhs = 0 for all a
  std::vector<long> equality_as;      // all a with lhs == rhs exactly
  long exact_fallbacks = 0;           // cells of this (n,k) that needed exact arithmetic
};

struct Checkpoint {
  int version = 1;
  std::string config_digest;
  std::vector<long> completed_n;                  // sorted, fully verified
  std::vector<std::array<long, 3>> violations;    // (n, k, a)
};

std::string checkpoint_to_json(const Checkpoint& c);
Checkpoint checkpoint_from_json(const std::string& text);

/// Canonical serialization of the semantic sweep definition (range, k rule,
/// filter settings). Worker count and file paths are execution details and
/// deliberately excluded: the ledger is scheduler-independent.
std::string canonical_config_json(const SweepConfig& c);
std::string config_digest(const SweepConfig& c);

std::string record_to_json(const SweepRecord& r);

/// The k values in scope for one n under a rule.
std::vector<long> ks_for(const SweepConfig& c, long n);

struct SweepSummary {
  unsigned long long cells = 0;
  long records = 0;
  long violations = 0;
  bool interrupted = false;  // stopped via stop_after; checkpoint resumable
};

/// Runs the sweep. Records stream to out_path as JSONL in canonical (n,k)
/// order regardless of worker count; the checkpoint advances only after all
/// (k,a) of an n are written. Throws std::runtime_error on I/O failure
/// (checkpoint stays intact) and std::invalid_argument on config/digest
/// mismatch.
SweepSummary run_sweep(const SweepConfig& config);

/// Per-(n,k) verification without any file I/O; used by tests and the
/// acceptance suite.
SweepRecord sweep_pair(long n, long k, const SweepConfig& c, Binomials& memo,
                       unsigned long long* cells = nullptr);

}  // namespace fracmatch
