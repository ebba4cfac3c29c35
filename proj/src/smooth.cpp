#include "fracmatch/smooth.hpp"

#include "fracmatch/binomial.hpp"
#include "fracmatch/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace fracmatch {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

double norm_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

void check_weights(long size, long support, long n, long k) {
  if (n < 2 || k < 1 || k >= n) throw std::invalid_argument("weights: need 1 <= k < n");
  if (support < 1 || support > n - 1 || size < support)
    throw std::invalid_argument("weights: support out of range");
}

// Enumerates subsets of [support] of size <= k via DFS, calling
// visit(size, sum, membership) once per subset (including the empty one).
template <typename F>
void for_each_subset(const Eigen::VectorXd& gamma, long support, long k, F&& visit) {
  std::vector<long> stack;
  double sum = 0;
  auto rec = [&](auto&& self, long next) -> void {
    visit(static_cast<long>(stack.size()), sum, stack);
    if (static_cast<long>(stack.size()) == k) return;
    for (long j = next; j < support; ++j) {
      stack.push_back(j);
      sum += gamma[j];
      self(self, j + 1);
      sum -= gamma[j];
      stack.pop_back();
    }
  };
  rec(rec, 0);
}

}  // namespace

Count count_exceeding(const std::vector<Ratio>& gamma, long support, long n, long k) {
  check_weights(static_cast<long>(gamma.size()), support, n, k);
  Ratio total(0);
  for (long j = 0; j < support; ++j) {
    if (sgn(gamma[j]) < 0) throw std::invalid_argument("weights must be nonnegative");
    total += gamma[j];
  }
  if (total != 1) throw std::invalid_argument("weights must sum to 1");

  // DP over the support merging equal (size, sum) states, so structured
  // weights (steps, two-level) stay polynomial.
  std::map<Ratio, std::vector<Count>> states;
  states[Ratio(0)] = std::vector<Count>(1, Count(1));  // size-indexed multiplicities
  constexpr std::size_t kStateCap = 1u << 22;
  for (long j = 0; j < support; ++j) {
    std::map<Ratio, std::vector<Count>> next = states;
    for (const auto& [sum, counts] : states) {
      const Ratio moved = sum + gamma[j];
      auto& dst = next[moved];
      const std::size_t want = std::min<std::size_t>(counts.size() + 1, static_cast<std::size_t>(k) + 1);
      if (dst.size() < want) dst.resize(want, Count(0));
      for (std::size_t c = 0; c + 1 <= static_cast<std::size_t>(k) && c < counts.size(); ++c)
        if (sgn(counts[c]) != 0) dst[c + 1] += counts[c];
    }
    states.swap(next);
    if (states.size() > kStateCap)
      throw std::invalid_argument("count_exceeding: state space too large for exact DP");
  }

  const Ratio threshold = make_ratio(k, n);
  Binomials memo;
  Count result(0);
  for (const auto& [sum, counts] : states) {
    if (!(sum > threshold)) continue;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (sgn(counts[i]) == 0) continue;
      const long rest = k - static_cast<long>(i);
      if (rest < 0 || rest > n - support) continue;
      result += counts[i] * memo.at(n - support, rest);
    }
  }
  return result;
}

Count count_exceeding(const Eigen::VectorXd& gamma, long support, long n, long k, double guard) {
  check_weights(gamma.size(), support, n, k);
  const double threshold = static_cast<double>(k) / n;
  Binomials memo;
  Count result(0);
  for_each_subset(gamma, support, k, [&](long size, double sum, const std::vector<long>&) {
    const long rest = k - size;
    if (rest < 0 || rest > n - support) return;
    const double d = sum - threshold;
    if (std::abs(d) <= guard)
      throw IndeterminateComparison("count_exceeding: subset sum within guard of threshold");
    if (d > 0) result += memo.at(n - support, rest);
  });
  return result;
}

double smoothed_count(const Eigen::VectorXd& gamma, long support, double sigma, long n, long k) {
  check_weights(gamma.size(), support, n, k);
  if (!(sigma > 0)) throw std::invalid_argument("smoothed_count: sigma must be positive");
  const double threshold = static_cast<double>(k) / n;
  Binomials memo;
  double f = 0;
  for_each_subset(gamma, support, k, [&](long size, double sum, const std::vector<long>&) {
    const long rest = k - size;
    if (rest < 0 || rest > n - support) return;
    f += memo.at(n - support, rest).get_d() * norm_cdf((sum - threshold) / sigma);
  });
  return f;
}

Eigen::VectorXd smoothed_partials(const Eigen::VectorXd& gamma, long support, double sigma,
                                  long n, long k) {
  check_weights(gamma.size(), support, n, k);
  if (!(sigma > 0)) throw std::invalid_argument("smoothed_partials: sigma must be positive");
  const double threshold = static_cast<double>(k) / n;
  Binomials memo;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(support);
  for_each_subset(gamma, support, k, [&](long size, double sum, const std::vector<long>& members) {
    const long rest = k - size;
    if (rest < 0 || rest > n - support) return;
    const double z = (sum - threshold) / sigma;
    const double w = memo.at(n - support, rest).get_d() * kInvSqrt2Pi *
                     std::exp(-0.5 * z * z) / sigma;
    for (long j : members) p[j] += w;
  });
  return p;
}

Eigen::VectorXd smoothed_count_grad(const Eigen::VectorXd& gamma, long support, double sigma,
                                    long n, long k) {
  const Eigen::VectorXd p = smoothed_partials(gamma, support, sigma, n, k);
  if (support < 2) return Eigen::VectorXd(0);
  return p.head(support - 1).array() - p[support - 1];
}

Ratio threshold_margin(const std::vector<Ratio>& gamma, long support, long n, long k) {
  check_weights(static_cast<long>(gamma.size()), support, n, k);
  const Ratio threshold = make_ratio(k, n);
  std::optional<Ratio> best;
  std::vector<long> stack;
  Ratio sum(0);
  auto consider = [&](long size) {
    const long rest = k - size;
    if (rest < 0 || rest > n - support) return;
    Ratio d = sum - threshold;
    if (sgn(d) < 0) d = -d;
    if (!best || d < *best) best = d;
  };
  auto rec = [&](auto&& self, long next) -> void {
    consider(static_cast<long>(stack.size()));
    if (static_cast<long>(stack.size()) == k) return;
    for (long j = next; j < support; ++j) {
      stack.push_back(j);
      sum += gamma[j];
      self(self, j + 1);
      sum -= gamma[j];
      stack.pop_back();
    }
  };
  rec(rec, 0);
  return *best;
}

double threshold_margin(const Eigen::VectorXd& gamma, long support, long n, long k) {
  check_weights(gamma.size(), support, n, k);
  const double threshold = static_cast<double>(k) / n;
  double best = std::numeric_limits<double>::infinity();
  for_each_subset(gamma, support, k, [&](long size, double sum, const std::vector<long>&) {
    const long rest = k - size;
    if (rest < 0 || rest > n - support) return;
    best = std::min(best, std::abs(sum - threshold));
  });
  return best;
}

std::vector<Ratio> uniform_step_weights(long support) {
  if (support < 1) throw std::invalid_argument("uniform_step_weights: support must be >= 1");
  return std::vector<Ratio>(support, make_ratio(1, support));
}

StepProfile classify_step(const Eigen::VectorXd& gamma, long support, long n, long k,
                          double tol) {
  check_weights(gamma.size(), support, n, k);
  StepProfile prof;
  prof.mu = static_cast<double>(k) / n;

  bool uniform = true;
  const double step = 1.0 / static_cast<double>(support);
  for (long j = 0; j < support; ++j)
    if (std::abs(gamma[j] - step) > tol) uniform = false;
  prof.is_uniform_step = uniform;
  if (uniform) return prof;

  // Two-level: top b weights at lambda - g, the rest at g, where lambda is
  // pinned by n and k. Degenerates when n = 2k - is then reported neither.
  const double ratio = static_cast<double>(k - 1) / (n - 2);
  const double denom = 1.0 - 2.0 * ratio;
  if (std::abs(denom) > 1e-12 && support >= 2) {
    const double lambda = 2.0 * (prof.mu - ratio) / denom;
    const double g = gamma[support - 1];
    const double high = lambda - g;
    if (std::abs(high - g) > tol) {
      long b = 0;
      while (b < support && std::abs(gamma[b] - high) <= tol) ++b;
      bool rest_ok = b >= 1 && b < support;
      for (long j = b; j < support && rest_ok; ++j)
        if (std::abs(gamma[j] - g) > tol) rest_ok = false;
      if (rest_ok && std::abs(b * lambda + (support - 2 * b) * g - 1.0) <= 10 * tol) {
        prof.two_level = TwoLevelProfile{b, lambda, g};
      }
    }
  }
  return prof;
}

Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
  const long m = v.size();
  std::vector<double> u(v.data(), v.data() + m);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0, theta = 0;
  for (long i = 0; i < m; ++i) {
    css += u[i];
    const double t = (css - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0) theta = t;
  }
  Eigen::VectorXd out(m);
  for (long i = 0; i < m; ++i) out[i] = std::max(0.0, v[i] - theta);
  return out;
}

namespace {

// Exact count after snapping to a nearby rational point; the deterministic
// fallback when a floating comparison is indeterminate.
Count count_snapped(const Eigen::VectorXd& gamma, long support, long n, long k) {
  const long den = 720720;  // lcm(1..16), keeps step-like values exact
  std::vector<long> num(support);
  long total = 0;
  for (long j = 0; j < support; ++j) {
    num[j] = std::llround(std::max(0.0, gamma[j]) * den);
    total += num[j];
  }
  num[0] += den - total;  // restore the simplex constraint exactly
  if (num[0] < 0) num[0] = 0;
  std::vector<Ratio> g(support);
  long fixed = 0;
  for (long j = 0; j < support; ++j) fixed += num[j];
  for (long j = 0; j < support; ++j) g[j] = make_ratio(num[j], fixed);
  return count_exceeding(g, support, n, k);
}

struct RestartOutcome {
  Count count{0};
  Eigen::VectorXd gamma;
};

RestartOutcome run_restart(long n, long k, long a, const AnnealConfig& cfg, int restart) {
  std::mt19937_64 rng(cfg.seed * 0x9e3779b97f4a7c15ull + restart);
  Eigen::VectorXd g(a);
  if (restart == 0) {
    g.setConstant(1.0 / static_cast<double>(a));
  } else {
    std::exponential_distribution<double> expo(1.0);
    double s = 0;
    for (long j = 0; j < a; ++j) {
      g[j] = expo(rng);
      s += g[j];
    }
    g /= s;
  }

  if (a >= 2) {
    for (double sigma : cfg.sigma_schedule) {
      const double eta = cfg.step_size * std::clamp(sigma, 1e-3, 1.0);
      for (int it = 0; it < cfg.iters_per_stage; ++it) {
        Eigen::VectorXd p = smoothed_partials(g, a, sigma, n, k);
        Eigen::VectorXd d = p.array() - p.mean();
        const double scale = d.cwiseAbs().maxCoeff();
        if (scale < 1e-300) break;
        g = project_simplex(g + (eta / scale) * d);
      }
    }
  }

  RestartOutcome out;
  out.gamma = g;
  std::uniform_real_distribution<double> jitter(-1e-9, 1e-9);
  Eigen::VectorXd probe = g;
  for (int attempt = 0;; ++attempt) {
    try {
      out.count = count_exceeding(probe, a, n, k);
      break;
    } catch (const IndeterminateComparison&) {
      if (attempt >= 8) {
        out.count = count_snapped(g, a, n, k);
        break;
      }
      for (long j = 0; j < a; ++j) probe[j] = g[j] + jitter(rng);
      probe = project_simplex(probe);
    }
  }

  // Ascent that settled next to the uniform step gets snapped onto it when
  // the exact step count is no worse; this removes the float fuzz left by
  // the final small-sigma stages.
  const double step = 1.0 / static_cast<double>(a);
  if ((g.array() - step).abs().maxCoeff() < 1e-2) {
    const Count exact_step = count_exceeding(uniform_step_weights(a), a, n, k);
    if (exact_step >= out.count) {
      out.count = exact_step;
      out.gamma.setConstant(step);
    }
  }
  return out;
}

}  // namespace

AnnealConfig AnnealConfig::defaults() {
  AnnealConfig cfg;
  const int stages = 20;
  const double first = 0.5, last = 1e-4;
  const double decay = std::pow(last / first, 1.0 / (stages - 1));
  double s = first;
  for (int i = 0; i < stages; ++i, s *= decay) cfg.sigma_schedule.push_back(s);
  return cfg;
}

AnnealResult anneal_maximize(long n, long k, long a, const AnnealConfig& cfg) {
  if (a < 1 || a > n - 1) throw std::invalid_argument("anneal_maximize: support out of range");
  if (cfg.sigma_schedule.empty()) throw std::invalid_argument("anneal_maximize: empty schedule");
  for (std::size_t i = 0; i + 1 < cfg.sigma_schedule.size(); ++i)
    if (!(cfg.sigma_schedule[i] > cfg.sigma_schedule[i + 1]))
      throw std::invalid_argument("anneal_maximize: schedule must be strictly decreasing");
  if (!(cfg.sigma_schedule.back() > 0))
    throw std::invalid_argument("anneal_maximize: final sigma must be positive");

  const int restarts = std::max(1, cfg.restarts);
  std::vector<RestartOutcome> outcomes(restarts);
  parallel_for(restarts, cfg.jobs,
               [&](std::size_t r) { outcomes[r] = run_restart(n, k, a, cfg, static_cast<int>(r)); });

  // Deterministic reduction: larger count wins, ties by the lexicographically
  // smaller rounded gamma.
  auto rounded = [](const Eigen::VectorXd& v) {
    std::vector<long long> r(v.size());
    for (long i = 0; i < v.size(); ++i) r[i] = std::llround(v[i] * 1e9);
    return r;
  };
  int best = 0;
  for (int r = 1; r < restarts; ++r) {
    if (outcomes[r].count > outcomes[best].count ||
        (outcomes[r].count == outcomes[best].count &&
         rounded(outcomes[r].gamma) < rounded(outcomes[best].gamma)))
      best = r;
  }

  AnnealResult res;
  res.best_restart = best;
  res.count = outcomes[best].count;
  res.gamma = Eigen::VectorXd::Zero(n - 1);
  res.gamma.head(a) = outcomes[best].gamma;
  res.profile = classify_step(res.gamma, a, n, k);
  return res;
}

}  // namespace fracmatch
