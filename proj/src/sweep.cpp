#include "fracmatch/sweep.hpp"

#include "fracmatch/io_util.hpp"
#include "fracmatch/parallel.hpp"
#include "fracmatch/sha256.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

namespace fracmatch {

namespace {

using detail::step_down;
using detail::step_up;

constexpr double kInf = std::numeric_limits<double>::infinity();

long strict_lo(long n, long k, long a) {
  const long i0 = static_cast<long>((static_cast<unsigned long long>(k) * a) / n) + 1;
  return std::max({i0, 0L, k - (n - a)});
}

// Exact mode of the term sequence C(a,i) C(n-a,k-i); terms are nondecreasing
// up to the mode and nonincreasing after it.
long term_mode(long n, long k, long a) {
  return static_cast<long>((static_cast<unsigned long long>(a + 1) * (k + 1)) /
                           (static_cast<unsigned long long>(n) + 2));
}

double exact_margin_log2(const Count& lhs, const Count& rhs) {
  if (sgn(lhs) == 0) return kInf;
  if (lhs == rhs) return 0.0;
  return (log2_of(rhs) - log2_of(lhs)).mid();
}

}  // namespace

CellResult verify_cell(long n, long k, long a, Binomials& memo) {
  CellResult res;
  res.in_scope = (4 * k <= n);
  res.path = CellPath::Exact;
  res.lhs = tail_strict(n, k, a, memo);
  res.rhs = memo.at(n - 1, k);
  res.ok = (res.lhs <= res.rhs);
  res.equality = (res.lhs == res.rhs);
  res.margin_log2 = exact_margin_log2(res.lhs, res.rhs);
  return res;
}

CellResult verify_cell_filtered(long n, long k, long a, Binomials& memo, double slack_bits) {
  CellResult res;
  res.in_scope = (4 * k <= n);

  const long i_lo = strict_lo(n, k, a);
  const long i_hi = std::min(a, k);
  if (i_lo > i_hi) {
    res.ok = true;
    res.path = CellPath::Crude;
    res.margin_log2 = kInf;
    return res;
  }

  const DirectedBound rhs_log2 = log2_binomial_bounds(n - 1, k);

  auto term_log2 = [&](long i) {
    return log2_binomial_bounds(a, i) + log2_binomial_bounds(n - a, k - i);
  };
  const DirectedBound t0 = term_log2(i_lo);

  // Crude: #terms times the largest term. The term sequence is unimodal, so
  // the largest lies at the mode clamped into [i_lo, i_hi]; the one-off
  // neighbors cover the tie cases.
  const long nterms = i_hi - i_lo + 1;
  {
    const long peak = std::clamp(term_mode(n, k, a), i_lo, i_hi);
    double peak_hi = (peak == i_lo) ? t0.hi : term_log2(peak).hi;
    if (peak > i_lo) peak_hi = std::max(peak_hi, t0.hi);
    if (peak + 1 <= i_hi) peak_hi = std::max(peak_hi, term_log2(peak + 1).hi);
    const double crude_hi =
        step_up(peak_hi + detail::pad_up(std::log2(static_cast<double>(nterms)), detail::kLibmPad));
    if (crude_hi <= rhs_log2.lo) {
      res.ok = true;
      res.path = CellPath::Crude;
      res.margin_log2 = rhs_log2.lo - crude_hi;
      return res;
    }
  }

  // Refined: certified summation of the scaled terms with a geometric
  // remainder. Term ratios (a-i)(k-i) / ((i+1)(n-a-k+i+1)) are exact in
  // double for this range, and log-concavity makes them nonincreasing, so
  // once the ratio drops below one the rest of the tail is dominated by a
  // geometric series.
  {
    const double scale = std::floor(t0.hi);
    DirectedBound u = exp2_bound(t0 - DirectedBound::exact(scale));
    double sum_lo = u.lo, sum_hi = u.hi;
    double u_lo = u.lo, u_hi = u.hi;
    const double cut = std::ldexp(1.0, static_cast<int>(-slack_bits));
    for (long i = i_lo; i < i_hi; ++i) {
      const double num = static_cast<double>(a - i) * static_cast<double>(k - i);
      const double den = static_cast<double>(i + 1) * static_cast<double>(n - a - k + i + 1);
      const double r_lo = step_down(num / den);
      const double r_hi = step_up(num / den);
      if (r_hi < 1.0) {
        const double rem_hi = step_up(step_up(u_hi * r_hi) / step_down(1.0 - r_hi));
        if (rem_hi <= cut * sum_lo) {
          sum_hi = step_up(sum_hi + rem_hi);
          break;
        }
      }
      u_lo = step_down(u_lo * r_lo);
      u_hi = step_up(u_hi * r_hi);
      sum_lo = step_down(sum_lo + u_lo);
      sum_hi = step_up(sum_hi + u_hi);
    }
    const DirectedBound lhs_log2 =
        log2_bound(DirectedBound(sum_lo, sum_hi)) + DirectedBound::exact(scale);
    if (lhs_log2.hi <= rhs_log2.lo) {
      res.ok = true;
      res.path = CellPath::Refined;
      res.margin_log2 = rhs_log2.lo - lhs_log2.hi;
      return res;
    }
  }

  return verify_cell(n, k, a, memo);
}

std::vector<long> ks_for(const SweepConfig& c, long n) {
  std::vector<long> ks;
  switch (c.k_rule) {
    case KRule::Quarter:
      for (long k = 1; 4 * k <= n; ++k) ks.push_back(k);
      break;
    case KRule::Band:
      for (long k = 1; k < n; ++k)
        if (5 * k > n && 4 * k < n) ks.push_back(k);
      break;
    case KRule::Explicit:
      for (long k : c.k_list)
        if (k >= 1 && k < n) ks.push_back(k);
      std::sort(ks.begin(), ks.end());
      ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
      break;
  }
  return ks;
}

SweepRecord sweep_pair(long n, long k, const SweepConfig& c, Binomials& memo,
                       unsigned long long* cells) {
  SweepRecord rec;
  rec.n = n;
  rec.k = k;
  rec.ok = true;
  double best_margin = kInf;
  rec.worst_a = 1;
  for (long a = 1; a <= n - 1; ++a) {
    CellResult cell = c.filtered ? verify_cell_filtered(n, k, a, memo, c.filter_slack_bits)
                                 : verify_cell(n, k, a, memo);
    if (cells) ++*cells;
    if (!cell.ok) rec.ok = false;
    if (cell.path == CellPath::Exact) {
      ++rec.exact_fallbacks;
      if (cell.equality) rec.equality_as.push_back(a);
    }
    if (cell.margin_log2 < best_margin) {
      best_margin = cell.margin_log2;
      rec.worst_a = a;
    }
  }
  if (best_margin < kInf) rec.margin_log2 = best_margin;
  return rec;
}

std::string canonical_config_json(const SweepConfig& c) {
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["n_min"] = c.n_min;
  j["n_max"] = c.n_max;
  switch (c.k_rule) {
    case KRule::Quarter: j["k_rule"] = "quarter"; break;
    case KRule::Band: j["k_rule"] = "band"; break;
    case KRule::Explicit: j["k_rule"] = "explicit"; break;
  }
  j["k_list"] = c.k_list;
  j["a_rule"] = "all";
  j["filtered"] = c.filtered;
  j["filter_slack_bits"] = c.filter_slack_bits;
  return j.dump();
}

std::string config_digest(const SweepConfig& c) { return sha256_hex(canonical_config_json(c)); }

std::string record_to_json(const SweepRecord& r) {
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["k"] = r.k;
  j["worst_a"] = r.worst_a;
  j["ok"] = r.ok;
  if (r.margin_log2)
    j["margin_log2"] = *r.margin_log2;
  else
    j["margin_log2"] = nullptr;
  j["equality_as"] = r.equality_as;
  j["exact_fallbacks"] = r.exact_fallbacks;
  return j.dump();
}

std::string checkpoint_to_json(const Checkpoint& c) {
  nlohmann::ordered_json j;
  j["version"] = c.version;
  j["config_digest"] = c.config_digest;
  j["completed_n"] = c.completed_n;
  nlohmann::ordered_json v = nlohmann::ordered_json::array();
  for (const auto& t : c.violations) v.push_back({t[0], t[1], t[2]});
  j["violations"] = v;
  return j.dump();
}

Checkpoint checkpoint_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  Checkpoint c;
  c.version = j.at("version").get<int>();
  c.config_digest = j.at("config_digest").get<std::string>();
  c.completed_n = j.at("completed_n").get<std::vector<long>>();
  for (const auto& t : j.at("violations")) {
    c.violations.push_back({t.at(0).get<long>(), t.at(1).get<long>(), t.at(2).get<long>()});
  }
  return c;
}

namespace {

// Everything one n contributes to the ledger.
struct NResult {
  long n = 0;
  std::vector<SweepRecord> records;
  std::vector<std::array<long, 3>> violations;
  unsigned long long cells = 0;
};

NResult run_one_n(long n, const SweepConfig& c, Binomials& memo) {
  NResult out;
  out.n = n;
  for (long k : ks_for(c, n)) {
    SweepRecord rec = sweep_pair(n, k, c, memo, &out.cells);
    if (!rec.ok) {
      // Locate every violating a for the checkpoint.
      for (long a = 1; a <= n - 1; ++a) {
        CellResult cell = verify_cell(n, k, a, memo);
        if (!cell.ok) out.violations.push_back({n, k, a});
      }
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

SweepSummary run_sweep(const SweepConfig& config) {
  if (config.n_min < 2) throw std::invalid_argument("run_sweep: n_min must be >= 2");
  if (config.n_max < config.n_min) throw std::invalid_argument("run_sweep: empty n range");
  if (config.out_path.empty() || config.checkpoint_path.empty())
    throw std::invalid_argument("run_sweep: out_path and checkpoint_path required");

  const std::string digest = config_digest(config);
  Checkpoint cp;
  cp.config_digest = digest;

  std::ios_base::openmode out_mode = std::ios::binary | std::ios::trunc;
  if (config.resume) {
    cp = checkpoint_from_json(read_file(config.checkpoint_path));
    if (cp.version != 1) throw std::invalid_argument("run_sweep: unknown checkpoint version");
    if (cp.config_digest != digest)
      throw std::invalid_argument("run_sweep: checkpoint digest mismatch, refusing to resume");
    std::ifstream probe(config.out_path);
    if (!probe) throw std::runtime_error("run_sweep: resume requested but ledger missing");
    out_mode = std::ios::binary | std::ios::app;
  } else {
    write_file_atomic(config.checkpoint_path, checkpoint_to_json(cp));
  }

  std::ofstream out(config.out_path, out_mode);
  if (!out) throw std::runtime_error("run_sweep: cannot open ledger " + config.out_path);

  std::vector<long> todo;
  for (long n = config.n_min; n <= config.n_max; ++n)
    if (!std::binary_search(cp.completed_n.begin(), cp.completed_n.end(), n)) todo.push_back(n);

  SweepSummary summary;
  summary.violations = static_cast<long>(cp.violations.size());

  std::mutex mu;
  std::condition_variable cv;
  std::map<long, NResult> ready;
  std::exception_ptr worker_error;
  std::atomic<std::size_t> next_index{0};
  std::atomic<bool> stop{false};
  const int jobs = std::max(1, config.workers);

  auto worker = [&] {
    Binomials memo;
    try {
      for (;;) {
        if (stop.load()) return;
        const std::size_t idx = next_index.fetch_add(1);
        if (idx >= todo.size()) return;
        if (memo.size() > 200000) memo.clear();
        NResult r = run_one_n(todo[idx], config, memo);
        {
          std::lock_guard<std::mutex> lock(mu);
          ready.emplace(r.n, std::move(r));
        }
        cv.notify_one();
      }
    } catch (...) {
      {
        std::lock_guard<std::mutex> lock(mu);
        if (!worker_error) worker_error = std::current_exception();
      }
      stop.store(true);
      cv.notify_one();
    }
  };

  std::vector<std::thread> pool;
  const int spawn = static_cast<int>(std::min<std::size_t>(jobs, todo.size()));
  for (int t = 0; t < spawn; ++t) pool.emplace_back(worker);

  long written_this_run = 0;
  std::exception_ptr io_error;
  try {
    for (std::size_t pos = 0; pos < todo.size(); ++pos) {
      const long expect = todo[pos];
      NResult r;
      {
        std::unique_lock<std::mutex> lock(mu);
        cv.wait(lock, [&] { return ready.count(expect) > 0 || worker_error; });
        if (worker_error && ready.count(expect) == 0) std::rethrow_exception(worker_error);
        r = std::move(ready.at(expect));
        ready.erase(expect);
      }
      for (const SweepRecord& rec : r.records) {
        out << record_to_json(rec) << '\n';
        ++summary.records;
      }
      out.flush();
      if (!out) throw std::runtime_error("run_sweep: ledger write failed");
      summary.cells += r.cells;
      summary.violations += static_cast<long>(r.violations.size());

      cp.completed_n.push_back(r.n);
      std::sort(cp.completed_n.begin(), cp.completed_n.end());
      cp.violations.insert(cp.violations.end(), r.violations.begin(), r.violations.end());
      write_file_atomic(config.checkpoint_path, checkpoint_to_json(cp));

      ++written_this_run;
      if (config.stop_after > 0 && written_this_run >= config.stop_after &&
          pos + 1 < todo.size()) {
        summary.interrupted = true;
        stop.store(true);
        break;
      }
    }
  } catch (...) {
    io_error = std::current_exception();
    stop.store(true);
  }

  // Unblock and join workers; late results are discarded (their n stays
  // uncheckpointed and will be redone on resume).
  stop.store(true);
  next_index.store(todo.size());
  for (auto& th : pool) th.join();
  if (io_error) std::rethrow_exception(io_error);
  return summary;
}

}  // namespace fracmatch
