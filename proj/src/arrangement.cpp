#include "fracmatch/arrangement.hpp"

#include "fracmatch/hypergraph.hpp"
#include "fracmatch/simplex.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace fracmatch {

namespace {

struct Edge {
  std::vector<long> verts;  // sorted ascending, 1-based
  std::vector<long> coef;   // coef[j-1] = n*|e cap [j]| - j*k, j = 1..n-1
};

// e dominates f when the sorted vertex lists satisfy e[t] <= f[t] for all t;
// then sum_e >= sum_f pointwise on the monotone cone.
bool dominates(const Edge& e, const Edge& f) {
  for (std::size_t t = 0; t < e.verts.size(); ++t)
    if (e.verts[t] > f.verts[t]) return false;
  return true;
}

enum Sign : int { Minus = -1, Zero = 0, Plus = 1 };

struct Searcher {
  long n, k;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> dominators;  // earlier edges dominating e_t
  bool minimize_nonneg;                      // true: q-run, false: p-run

  std::vector<int> sign;     // current assignment, edges.size() entries
  std::vector<char> forced;  // sign implied by dominance; skip in LPs

  long best = 0;
  std::vector<Ratio> best_y;
  unsigned long long faces = 0, lp_calls = 0, nodes = 0;

  int sign_at(const std::vector<Ratio>& y, int t) const {
    Ratio dot(0);
    for (long j = 0; j < n - 1; ++j)
      if (sgn(y[j]) != 0 && edges[t].coef[j] != 0) dot += Ratio(edges[t].coef[j]) * y[j];
    return sgn(dot);
  }

  // Exact realizability of the prefix [0, t] with the trial sign at t:
  // maximize a common margin over the normalized cone slice.
  bool realizable(int t, int trial, std::vector<Ratio>& witness_out) {
    ++lp_calls;
    std::vector<int> rows;  // participating edges
    for (int s = 0; s <= t; ++s)
      if (!forced[s] || s == t) rows.push_back(s);
    long n_ineq = 0;
    for (int s : rows)
      if ((s == t ? trial : sign[s]) != Zero) ++n_ineq;

    const long ny = n - 1;
    const bool with_t = n_ineq > 0;
    const long nv = ny + (with_t ? 1 : 0) + n_ineq;
    const long m = 1 + static_cast<long>(rows.size());
    RatioMatrix A = RatioMatrix::Zero(m, nv);
    RatioVector b = RatioVector::Zero(m);
    RatioVector c = RatioVector::Zero(nv);
    for (long j = 0; j < ny; ++j) A(0, j) = 1;
    b[0] = 1;
    if (with_t) c[ny] = -1;  // maximize the margin t

    long row = 1, slack = ny + (with_t ? 1 : 0);
    for (int s : rows) {
      const int sg = (s == t) ? trial : sign[s];
      for (long j = 0; j < ny; ++j) A(row, j) = edges[s].coef[j];
      if (sg == Plus) {  // sum - t - slack = 0
        A(row, ny) = -1;
        A(row, slack++) = -1;
      } else if (sg == Minus) {  // sum + t + slack = 0
        A(row, ny) = 1;
        A(row, slack++) = 1;
      }
      ++row;
    }

    LpResult lp = solve_lp(A, b, c);
    if (lp.status != LpStatus::Optimal) return false;
    if (with_t && sgn(lp.objective) >= 0) return false;  // margin not positive
    witness_out.assign(ny, Ratio(0));
    for (long j = 0; j < ny; ++j) witness_out[j] = lp.x[j];
    return true;
  }

  void record_leaf(long nonneg, long pos, const std::vector<Ratio>& y) {
    ++faces;
    if (minimize_nonneg) {
      if (nonneg < best) {
        best = nonneg;
        best_y = y;
      }
    } else {
      if (pos > best) {
        best = pos;
        best_y = y;
      }
    }
  }

  void dfs(int t, long nonneg, long pos, const std::vector<Ratio>& y) {
    ++nodes;
    const long total = static_cast<long>(edges.size());
    if (minimize_nonneg) {
      if (nonneg >= best) return;
    } else {
      if (pos + (total - t) <= best) return;
    }
    if (t == total) {
      record_leaf(nonneg, pos, y);
      return;
    }

    // Dominance filter: an assigned dominator with sign - forces -, with
    // sign 0 rules out +.
    bool allow_plus = true, allow_zero = true;
    for (int s : dominators[t]) {
      if (sign[s] == Minus) {
        allow_plus = allow_zero = false;
        break;
      }
      if (sign[s] == Zero) allow_plus = false;
    }
    forced[t] = (!allow_plus && !allow_zero);

    const int witness_sign = sign_at(y, t);
    const int order_q[3] = {Minus, Zero, Plus};
    const int order_p[3] = {Plus, Minus, Zero};
    const int* order = minimize_nonneg ? order_q : order_p;

    for (int oi = 0; oi < 3; ++oi) {
      const int cand = order[oi];
      if (cand == Plus && !allow_plus) continue;
      if (cand == Zero && (!allow_zero || !minimize_nonneg)) continue;
      const long dn = (cand == Minus) ? 0 : 1;
      const long dp = (cand == Plus) ? 1 : 0;
      sign[t] = cand;
      if (cand == witness_sign) {
        dfs(t + 1, nonneg + dn, pos + dp, y);
      } else if (!forced[t]) {
        std::vector<Ratio> w;
        if (realizable(t, cand, w)) dfs(t + 1, nonneg + dn, pos + dp, w);
      }
      // forced[t] && cand != witness_sign cannot happen: a dominance-forced
      // sign holds at every feasible point, the witness included.
    }
    sign[t] = Zero;
    forced[t] = 0;
  }
};

std::vector<Ratio> step_beta(long n, long a) {
  std::vector<Ratio> beta(n);
  for (long i = 0; i < n; ++i) beta[i] = (i < a) ? Ratio(n - a) : Ratio(-a);
  return beta;
}

long count_pos(const std::vector<Ratio>& beta, long k) {
  const long n = static_cast<long>(beta.size());
  long cnt = 0;
  for (std::uint64_t e : complete_hypergraph(n, k).edges) {
    Ratio dot(0);
    for (long v = 0; v < n; ++v)
      if (e & (1ull << v)) dot += beta[v];
    if (sgn(dot) > 0) ++cnt;
  }
  return cnt;
}

BruteForceResult run(long n, long k, bool minimize_nonneg, const BruteForceOptions& opt) {
  if (n < 2 || k < 1 || k >= n) throw std::invalid_argument("brute force: need 1 <= k < n");
  if (n > opt.max_n)
    throw std::invalid_argument("brute force: n above the cap (" + std::to_string(opt.max_n) +
                                "), raise it explicitly");

  Searcher s;
  s.n = n;
  s.k = k;
  s.minimize_nonneg = minimize_nonneg;

  for (std::uint64_t mask : complete_hypergraph(n, k).edges) {
    Edge e;
    for (long v = 1; v <= n; ++v)
      if (mask & (1ull << (v - 1))) e.verts.push_back(v);
    e.coef.resize(n - 1);
    long prefix = 0;
    for (long j = 1; j <= n - 1; ++j) {
      if (mask & (1ull << (j - 1))) ++prefix;
      e.coef[j - 1] = n * prefix - j * k;
    }
    s.edges.push_back(std::move(e));
  }
  std::sort(s.edges.begin(), s.edges.end(), [](const Edge& a, const Edge& b) {
    const long sa = std::accumulate(a.verts.begin(), a.verts.end(), 0L);
    const long sb = std::accumulate(b.verts.begin(), b.verts.end(), 0L);
    if (sa != sb) return sa < sb;
    return a.verts < b.verts;
  });
  const int total = static_cast<int>(s.edges.size());
  s.dominators.resize(total);
  for (int t = 0; t < total; ++t)
    for (int u = 0; u < t; ++u)
      if (dominates(s.edges[u], s.edges[t])) s.dominators[t].push_back(u);
  s.sign.assign(total, Zero);
  s.forced.assign(total, 0);

  // Incumbents from the step vectors; the search then looks for anything
  // strictly better. Without seeds the whole face lattice is enumerated.
  std::vector<Ratio> seed_y;
  if (opt.use_seeds) {
    if (minimize_nonneg) {
      s.best = 0;
      for (long a = 1; a <= n - 1; ++a) {
        const long v = count_nonneg_edges(step_beta(n, a), k).count;
        if (a == 1 || v < s.best) {
          s.best = v;
          seed_y.assign(n - 1, Ratio(0));
          seed_y[a - 1] = make_ratio(1, n);  // beta = z_a / n; any positive scale works
        }
      }
    } else {
      s.best = 0;
      for (long a = 1; a <= n - 1; ++a) {
        const long v = count_pos(step_beta(n, a), k);
        if (a == 1 || v > s.best) {
          s.best = v;
          seed_y.assign(n - 1, Ratio(0));
          seed_y[a - 1] = make_ratio(1, n);
        }
      }
    }
  } else {
    seed_y.assign(n - 1, Ratio(0));
    seed_y[0] = 1;
    s.best = minimize_nonneg ? static_cast<long>(complete_hypergraph(n, k).edges.size()) + 1 : -1;
  }
  s.best_y = seed_y;

  std::vector<Ratio> y0(n - 1, Ratio(0));
  y0[0] = 1;  // x = z_1, interior of the top cell chain
  s.dfs(0, 0, 0, y0);

  BruteForceResult out;
  out.value = s.best;
  out.faces = s.faces;
  out.lp_calls = s.lp_calls;
  out.nodes = s.nodes;
  out.witness.assign(n, Ratio(0));
  for (long j = 1; j <= n - 1; ++j) {
    if (sgn(s.best_y[j - 1]) == 0) continue;
    const std::vector<Ratio> z = monotone_basis_vector(n, j);
    for (long i = 0; i < n; ++i) out.witness[i] += s.best_y[j - 1] * z[i];
  }
  return out;
}

}  // namespace

BruteForceResult brute_force_min_nonneg(long n, long k, const BruteForceOptions& opt) {
  return run(n, k, true, opt);
}

BruteForceResult brute_force_max_pos(long n, long k, const BruteForceOptions& opt) {
  return run(n, k, false, opt);
}

}  // namespace fracmatch
