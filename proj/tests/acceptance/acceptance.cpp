// Acceptance suite: end-to-end checks of the whole toolkit, one verdict line
// per criterion. Exit code is the number of failed criteria.

#include "fracmatch/appendix.hpp"
#include "fracmatch/arrangement.hpp"
#include "fracmatch/binomial.hpp"
#include "fracmatch/hypergraph.hpp"
#include "fracmatch/io_util.hpp"
#include "fracmatch/parallel.hpp"
#include "fracmatch/smooth.hpp"
#include "fracmatch/sweep.hpp"
#include "fracmatch/tails.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>
#include <vector>

using namespace fracmatch;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

struct Criterion {
  std::string title;
  Clock::time_point start = Clock::now();
  bool ok = true;
  std::ostringstream detail;

  explicit Criterion(std::string t) : title(std::move(t)) {}

  template <typename... Args>
  void require(bool cond, Args&&... context) {
    if (cond) return;
    ok = false;
    (detail << ... << context) << '\n';
  }

  void finish() {
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("%s — %s (%.1fs)\n", ok ? "PASS" : "FAIL", title.c_str(), secs);
    if (!ok) std::fputs(detail.str().c_str(), stdout);
    if (!ok) ++g_failures;
    std::fflush(stdout);
  }
};

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "fracmatch_acceptance";
  std::filesystem::create_directories(dir);
  return dir;
}

int workers() { return std::max(2, default_jobs()); }

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

bool record_has_equality_at(const std::string& line, long a) {
  const auto eq = line.find("\"equality_as\":[");
  if (eq == std::string::npos) return false;
  const auto close = line.find(']', eq);
  const std::string list = "," + line.substr(eq + 15, close - eq - 15) + ",";
  return list.find("," + std::to_string(a) + ",") != std::string::npos;
}

// ---------------------------------------------------------------------------

void criterion1_formula_values() {
  Criterion c("criterion 1: formula anchor values");
  const ExtremumProfile p103 = max_tail_strict(10, 3);
  c.require(p103.value == 85, "p(10,3) = ", p103.value.get_str(), ", want 85");
  c.require(p103.args == std::vector<long>{3}, "argmax of p(10,3) is not {3}");
  c.require(min_tail_weak(10, 3).value == 35, "q(10,3) != 35");
  c.require(min_tail_weak(9, 2).value == 8, "q(9,2) != 8");
  c.require(max_tail_shifted(10, 3) == 85, "shifted form at (10,3) != 85");
  c.finish();
}

void criterion2_identities() {
  Criterion c("criterion 2: complement identity (n <= 60), form agreement (n <= 100)");
  for (long n = 3; n <= 60 && c.ok; ++n)
    for (long k = 2; k < n; ++k)
      c.require(check_complement_identity(n, k).holds, "complement fails at (", n, ",", k, ")");
  std::atomic<long> mismatches{0};
  parallel_for(98, workers(), [&](std::size_t idx) {
    const long n = static_cast<long>(idx) + 3;
    for (long k = 2; k < n; ++k)
      if (max_tail_shifted(n, k) != max_tail_strict(n, k).value) ++mismatches;
  });
  c.require(mismatches == 0, "shifted form disagrees on ", mismatches.load(), " pairs");
  c.finish();
}

void criterion3_minimum_identity() {
  Criterion c("criterion 3: weak-tail minimum equals C(n-1,k-1) for n <= 400, k <= n/4");
  std::atomic<long> bad{0};
  parallel_for(399, workers(), [&](std::size_t idx) {
    const long n = static_cast<long>(idx) + 2;
    for (long k = 1; 4 * k <= n; ++k)
      if (!check_mms_identity(n, k).holds) ++bad;
  });
  c.require(bad == 0, bad.load(), " failures inside the regime");
  const MmsReport forced = check_mms_identity(10, 3);
  c.require(!forced.precondition_ok, "(10,3) should be outside the regime");
  c.require(!forced.holds && forced.q == 35 && forced.expected == 36,
            "(10,3) forced check should fail with 35 != 36");
  c.finish();
}

void criterion4a_desk_sweep() {
  Criterion c("criterion 4a: exact sweep n <= 300, k <= n/4, all a");
  const auto dir = scratch_dir();
  SweepConfig cfg;
  cfg.n_min = 2;
  cfg.n_max = 300;
  cfg.workers = workers();
  cfg.out_path = (dir / "desk.jsonl").string();
  cfg.checkpoint_path = (dir / "desk.ckpt").string();
  const SweepSummary s = run_sweep(cfg);
  c.require(s.violations == 0, "violations: ", s.violations);

  std::istringstream in(read_file(cfg.out_path));
  std::string line;
  long records = 0;
  while (std::getline(in, line) && c.ok) {
    ++records;
    const long n = std::stol(line.substr(line.find("\"n\":") + 4));
    c.require(record_has_equality_at(line, n - 1), "equality_as misses a = n-1 in: ", line);
  }
  c.require(records == s.records, "ledger rows ", records, " vs summary ", s.records);
  c.finish();
}

void criterion4b_filtered_sweep() {
  Criterion c("criterion 4b: filtered sweep n <= 3000 plus 100000-cell filter/exact audit");
  const auto dir = scratch_dir();
  SweepConfig cfg;
  cfg.n_min = 2;
  cfg.n_max = 3000;
  cfg.filtered = true;
  cfg.workers = workers();
  cfg.out_path = (dir / "filtered.jsonl").string();
  cfg.checkpoint_path = (dir / "filtered.ckpt").string();
  const SweepSummary s = run_sweep(cfg);
  c.require(s.violations == 0, "violations: ", s.violations);

  std::atomic<long> disagreements{0};
  const std::size_t shards = 64;
  parallel_for(shards, workers(), [&](std::size_t shard) {
    std::mt19937_64 rng(0xACCE5500ull + shard);
    Binomials memo;
    const int per_shard = 100000 / static_cast<int>(shards) + 1;
    for (int t = 0; t < per_shard; ++t) {
      const long n = 8 + static_cast<long>(rng() % 1493);
      const long k = 1 + static_cast<long>(rng() % std::max(1L, n / 4));
      const long a = 1 + static_cast<long>(rng() % (n - 1));
      if (verify_cell_filtered(n, k, a, memo).ok != verify_cell(n, k, a, memo).ok)
        ++disagreements;
      if (memo.size() > 100000) memo.clear();
    }
  });
  c.require(disagreements == 0, "filter/exact disagreements: ", disagreements.load());
  c.finish();
}

void criterion4c_spot_shard() {
  Criterion c("criterion 4c: spot shard n = 120000, k = 29999, all a");
  const auto dir = scratch_dir();
  SweepConfig cfg;
  cfg.n_min = 120000;
  cfg.n_max = 120000;
  cfg.k_rule = KRule::Explicit;
  cfg.k_list = {29999};
  cfg.filtered = true;
  cfg.workers = 1;
  cfg.out_path = (dir / "spot.jsonl").string();
  cfg.checkpoint_path = (dir / "spot.ckpt").string();
  const SweepSummary s = run_sweep(cfg);
  c.require(s.violations == 0, "violations: ", s.violations);
  c.require(s.cells == 119999, "cells: ", s.cells);
  c.require(record_has_equality_at(read_file(cfg.out_path), 119999),
            "spot record misses equality at a = n-1");

  std::vector<long> sample;
  std::mt19937_64 rng(0xC0FFEE);
  for (int t = 0; t < 100; ++t) sample.push_back(1 + static_cast<long>(rng() % 119999));
  std::atomic<long> bad{0};
  parallel_for(sample.size(), workers(), [&](std::size_t i) {
    Binomials memo;
    const CellResult exact = verify_cell(120000, 29999, sample[i], memo);
    const CellResult filt = verify_cell_filtered(120000, 29999, sample[i], memo);
    if (!exact.ok || exact.ok != filt.ok) ++bad;
  });
  c.require(bad == 0, "exact cross-check mismatches: ", bad.load());
  c.finish();
}

void criterion5_oracles() {
  Criterion c("criterion 5: arrangement oracles and LP certificates");
  Binomials memo;
  for (long n = 4; n <= 7; ++n)
    for (long k = 2; k <= n - 2; ++k) {
      const BruteForceResult q = brute_force_min_nonneg(n, k);
      const BruteForceResult p = brute_force_max_pos(n, k);
      c.require(q.value == min_tail_weak(n, k).value, "q mismatch at (", n, ",", k, ")");
      c.require(p.value == max_tail_strict(n, k).value, "p mismatch at (", n, ",", k, ")");
      c.require(Count(p.value) + Count(q.value) == memo.at(n, k), "complement fails at (", n,
                ",", k, ")");
      c.require(count_nonneg_edges(q.witness, k).count == q.value,
                "q witness does not attain its value at (", n, ",", k, ")");
    }

  std::mt19937_64 rng(555);
  int done = 0;
  while (done < 200) {
    const long n = 4 + static_cast<long>(rng() % 7);
    const long k = 2 + static_cast<long>(rng() % (n - 2));
    const Hypergraph full = complete_hypergraph(n, k);
    Hypergraph inst{n, k, {}};
    for (std::uint64_t e : full.edges)
      if (rng() % 3) inst.edges.push_back(e);
    if (inst.edges.empty() || inst.edges.size() > 200) continue;
    ++done;
    const PfmResult res = solve_pfm(inst);
    if (res.outcome == PfmOutcome::Matching)
      c.require(verify_certificate(inst, *res.matching), "matching certificate fails");
    else
      c.require(res.outcome == PfmOutcome::Separated && verify_certificate(inst, *res.separation),
                "separation certificate fails");
  }
  c.finish();
}

void criterion6_optimizer() {
  Criterion c("criterion 6: optimizer reaches the conjectured maxima; gradient and smoothing");
  AnnealConfig cfg = AnnealConfig::defaults();
  cfg.restarts = 6;
  cfg.seed = 11;
  cfg.jobs = workers();
  for (auto [n, k] : std::vector<std::pair<long, long>>{{8, 2}, {10, 3}, {12, 4}, {13, 3}}) {
    Count best(0);
    bool step_at_best = false;
    for (long a = 1; a <= n - 1; ++a) {
      const AnnealResult r = anneal_maximize(n, k, a, cfg);
      if (r.count > best) {
        best = r.count;
        step_at_best = r.profile.is_uniform_step;
      }
    }
    const Count want = max_tail_strict(n, k).value;
    c.require(best == want, "anneal max at (", n, ",", k, ") = ", best.get_str(), ", want ",
              want.get_str());
    c.require(step_at_best, "best profile at (", n, ",", k, ") is not a uniform step");
  }

  // Gradient vs central differences on 100 random interior points.
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  for (int t = 0; t < 100; ++t) {
    const long n = 8 + static_cast<long>(rng() % 4);
    const long k = 2 + static_cast<long>(rng() % 2);
    const long a = 3 + static_cast<long>(rng() % (n - 3));
    Eigen::VectorXd g(a);
    for (long j = 0; j < a; ++j) g[j] = unif(rng);
    g /= g.sum();
    const double sigma = 0.1;
    const Eigen::VectorXd grad = smoothed_count_grad(g, a, sigma, n, k);
    const double eps = 1e-6;
    for (long j = 0; j + 1 < a; ++j) {
      Eigen::VectorXd hi = g, lo = g;
      hi[j] += eps;
      hi[a - 1] -= eps;
      lo[j] -= eps;
      lo[a - 1] += eps;
      const double fd =
          (smoothed_count(hi, a, sigma, n, k) - smoothed_count(lo, a, sigma, n, k)) / (2 * eps);
      const double scale = std::max({std::abs(fd), std::abs(grad[j]), 1e-6});
      c.require(std::abs(fd - grad[j]) / scale < 1e-6, "gradient off at t=", t, " j=", j);
    }
  }

  // |N - f| <= C(n,k) Phi(-margin/sigma) on 100 random rational points.
  Binomials memo;
  int tested = 0;
  while (tested < 100) {
    const long n = 6 + static_cast<long>(rng() % 6);
    const long k = 1 + static_cast<long>(rng() % (n - 1));
    const long a = 1 + static_cast<long>(rng() % (n - 1));
    std::vector<Ratio> g(a);
    long total = 0;
    std::vector<long> raw(a);
    for (long j = 0; j < a; ++j) {
      raw[j] = 1 + static_cast<long>(rng() % 63);
      total += raw[j];
    }
    for (long j = 0; j < a; ++j) g[j] = make_ratio(raw[j], total);
    const Ratio margin = threshold_margin(g, a, n, k);
    if (sgn(margin) == 0) continue;
    ++tested;
    Eigen::VectorXd gd(a);
    for (long j = 0; j < a; ++j) gd[j] = g[j].get_d();
    const double count = count_exceeding(g, a, n, k).get_d();
    const double size = memo.at(n, k).get_d();
    for (double sigma : {0.3, 0.05, 0.01}) {
      const double f = smoothed_count(gd, a, sigma, n, k);
      const double bound = size * norm_cdf(-margin.get_d() / sigma);
      c.require(std::abs(count - f) <= bound * (1 + 1e-9) + 1e-9,
                "smoothing bound broken at test ", tested, " sigma=", sigma);
    }
  }
  c.finish();
}

void criterion7_audit() {
  Criterion c("criterion 7: constant-chain audit");
  const BeTerms t = be_chain_terms(55.0, 120001, Ratio(1, 20));
  c.require(t.chebyshev.hi < 0.1323, "chebyshev term ", t.chebyshev.hi);
  c.require(t.local.hi < 0.077, "local term ", t.local.hi);
  c.require(t.tail.hi < 0.011, "tail term ", t.tail.hi);
  c.require(t.total.hi < 0.2203, "total ", t.total.hi);

  const DirectedBound st = stirling_factor_bound();
  c.require(st.hi <= 1.1203, "stirling factor ", st.hi);

  const BernoulliSup bs = bernoulli_be_sup();
  c.require(bs.boundary_is_rational && bs.boundary_exact == make_ratio(71, 100),
            "boundary value is not exactly 71/100");
  c.require(bs.decreasing_on_grid, "interior decrease not certified");

  const CubicMomentAudit cm = cubic_moment_audit();
  c.require(cm.integral.lo > 204.07 && cm.integral.hi < 204.09,
            "cubic-moment integral outside 204.08 +/- 0.01: [", cm.integral.lo, ", ",
            cm.integral.hi, "]");
  c.require(cm.total.lo > 16.0, "cubic-moment line unexpectedly satisfies the printed bound");

  const SmallSupportThreshold th = small_support_threshold();
  c.require(th.a_star == 18, "threshold a* = ", th.a_star, ", want 18");
  c.require(th.a_star != th.printed, "printed threshold unexpectedly agrees");

  for (const ComplementCase& cc : small_complement_checks({100, 1000, 5000}))
    c.require(cc.holds, "tiny-complement case fails at n=", cc.n, " b=", cc.b);

  // Certified center-gap at the large regime point, budgeted generously.
  const DirectedBound gap = hypergeometric_center_gap(66000, 16000, 33000);
  c.require(gap.hi < 0.2203, "large center gap ", gap.hi);

  // Every report enclosure respects the relative width budget.
  const BoundReport rep = build_bound_report();
  for (const AuditItem& it : rep.items) {
    const double scale = std::max(1.0, std::abs(it.computed.hi));
    c.require(it.computed.width() < 1e-6 * scale, "wide enclosure in ", it.name);
  }
  c.require(report_has_failures(rep), "the audit should flag the printed discrepancies");
  c.finish();
}

void criterion8_determinism() {
  Criterion c("criterion 8: scheduler-independent ledgers and resume fidelity");
  const auto dir = scratch_dir();

  SweepConfig one;
  one.n_min = 2;
  one.n_max = 150;
  one.workers = 1;
  one.out_path = (dir / "det1.jsonl").string();
  one.checkpoint_path = (dir / "det1.ckpt").string();
  SweepConfig eight = one;
  eight.workers = 8;
  eight.out_path = (dir / "det8.jsonl").string();
  eight.checkpoint_path = (dir / "det8.ckpt").string();
  run_sweep(one);
  run_sweep(eight);
  c.require(read_file(one.out_path) == read_file(eight.out_path),
            "1-worker and 8-worker ledgers differ");

  SweepConfig part = one;
  part.out_path = (dir / "resume.jsonl").string();
  part.checkpoint_path = (dir / "resume.ckpt").string();
  part.workers = 4;
  part.stop_after = 50;
  const SweepSummary first = run_sweep(part);
  c.require(first.interrupted, "stop_after did not interrupt");
  part.stop_after = 0;
  part.resume = true;
  run_sweep(part);
  c.require(read_file(part.out_path) == read_file(one.out_path),
            "resumed ledger differs from the uninterrupted one");
  c.finish();
}

}  // namespace

int main() {
  criterion1_formula_values();
  criterion2_identities();
  criterion3_minimum_identity();
  criterion4a_desk_sweep();
  criterion4b_filtered_sweep();
  criterion4c_spot_shard();
  criterion5_oracles();
  criterion6_optimizer();
  criterion7_audit();
  criterion8_determinism();
  if (g_failures == 0)
    std::printf("acceptance: all criteria passed\n");
  else
    std::printf("acceptance: %d criteria FAILED\n", g_failures);
  return g_failures;
}
