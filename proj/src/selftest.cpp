#include "fracmatch/selftest.hpp"

#include "fracmatch/arrangement.hpp"
#include "fracmatch/binomial.hpp"
#include "fracmatch/hypergraph.hpp"
#include "fracmatch/sha256.hpp"
#include "fracmatch/smooth.hpp"
#include "fracmatch/sweep.hpp"
#include "fracmatch/tails.hpp"

#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

namespace fracmatch {

namespace {

struct Harness {
  std::ostream& out;
  int failures = 0;

  void check(const char* name, bool ok, const std::string& detail = "") {
    if (ok) {
      out << "ok   " << name << '\n';
    } else {
      ++failures;
      out << "FAIL " << name;
      if (!detail.empty()) out << " (" << detail << ")";
      out << '\n';
    }
  }
};

}  // namespace

int run_selftest(std::ostream& out, std::uint64_t seed) {
  Harness h{out};
  std::mt19937_64 rng(seed);

  {
    Binomials memo;
    const std::string detail = audit_binomials(memo, 300, 400, seed);
    h.check("binomial-memo-consistency", detail.empty(), detail);
  }

  {
    bool ok = sha256_hex("abc") ==
                  "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad" &&
              sha256_hex("") ==
                  "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855";
    h.check("sha256-vectors", ok);
  }

  {
    bool ok = true;
    for (int t = 0; t < 1000 && ok; ++t) {
      const long num = static_cast<long>(rng() % 2001) - 1000;
      const long den = static_cast<long>(rng() % 999) + 1;
      if (num == 0) continue;
      const Ratio q = make_ratio(num, den);
      ok = (q * (Ratio(1) / q) == 1);
    }
    h.check("ratio-inverse-roundtrip", ok);
  }

  {
    bool ok = true;
    std::string detail;
    for (int t = 0; t < 800 && ok; ++t) {
      const unsigned long n = 2 + rng() % 2999;
      const unsigned long k = rng() % (n + 1);
      const DirectedBound b = log2_binomial_bounds(n, k);
      const Count exact = binomial(n, k);
      const DirectedBound truth = log2_of(exact);
      if (!(b.lo <= truth.hi && truth.lo <= b.hi)) {
        ok = false;
        std::ostringstream os;
        os << "C(" << n << "," << k << ")";
        detail = os.str();
      }
    }
    h.check("log2-binomial-enclosure", ok, detail);
  }

  {
    bool ok = true;
    Binomials memo;
    for (long n = 4; n <= 40 && ok; ++n)
      for (long k = 2; k < n && ok; ++k)
        ok = (max_tail_strict(n, k).value + min_tail_weak(n, k).value == memo.at(n, k));
    h.check("tail-complement-identity", ok);
  }

  {
    bool ok = true;
    std::string detail;
    Binomials memo;
    for (int t = 0; t < 2000 && ok; ++t) {
      const long n = 8 + static_cast<long>(rng() % 593);
      const long k = 1 + static_cast<long>(rng() % (n / 4));
      const long a = 1 + static_cast<long>(rng() % (n - 1));
      const CellResult f = verify_cell_filtered(n, k, a, memo);
      const CellResult e = verify_cell(n, k, a, memo);
      if (f.ok != e.ok) {
        ok = false;
        std::ostringstream os;
        os << "(" << n << "," << k << "," << a << ")";
        detail = os.str();
      }
    }
    h.check("filter-exact-agreement", ok, detail);
  }

  {
    bool ok = true;
    std::uniform_real_distribution<double> unif(0.05, 1.0);
    for (int t = 0; t < 10 && ok; ++t) {
      Eigen::VectorXd g(4);
      for (int j = 0; j < 4; ++j) g[j] = unif(rng);
      g /= g.sum();
      const double sigma = 0.1;
      const Eigen::VectorXd grad = smoothed_count_grad(g, 4, sigma, 8, 2);
      const double eps = 1e-6;
      for (int j = 0; j < 3 && ok; ++j) {
        Eigen::VectorXd hi = g, lo = g;
        hi[j] += eps; hi[3] -= eps;
        lo[j] -= eps; lo[3] += eps;
        const double fd = (smoothed_count(hi, 4, sigma, 8, 2) -
                           smoothed_count(lo, 4, sigma, 8, 2)) / (2 * eps);
        const double denom = std::max({std::abs(fd), std::abs(grad[j]), 1e-9});
        ok = std::abs(fd - grad[j]) / denom < 1e-5;
      }
    }
    h.check("smoothed-gradient-check", ok);
  }

  {
    bool ok = true;
    std::string detail;
    for (int t = 0; t < 30 && ok; ++t) {
      const long n = 5 + static_cast<long>(rng() % 3);
      const long k = 2 + static_cast<long>(rng() % (n - 3));
      Hypergraph full = complete_hypergraph(n, k);
      Hypergraph inst{n, k, {}};
      for (std::uint64_t e : full.edges)
        if (rng() % 2) inst.edges.push_back(e);
      if (inst.edges.empty()) continue;
      const PfmResult res = solve_pfm(inst);
      bool pass = false;
      if (res.outcome == PfmOutcome::Matching)
        pass = verify_certificate(inst, *res.matching) && !res.separation;
      else if (res.outcome == PfmOutcome::Separated)
        pass = verify_certificate(inst, *res.separation) && !res.matching;
      if (!pass) {
        ok = false;
        std::ostringstream os;
        os << "n=" << n << " k=" << k << " edges=" << inst.edges.size();
        detail = os.str();
      }
    }
    h.check("lp-certificate-roundtrip", ok, detail);
  }

  {
    const BruteForceResult q = brute_force_min_nonneg(5, 2);
    const BruteForceResult p = brute_force_max_pos(5, 2);
    Binomials memo;
    bool ok = (q.value == min_tail_weak(5, 2).value) &&
              (p.value == max_tail_strict(5, 2).value) &&
              (Count(p.value) + Count(q.value) == memo.at(5, 2));
    h.check("arrangement-vs-formulas-small", ok);
  }

  out << (h.failures == 0 ? "selftest passed" : "selftest FAILED") << '\n';
  return h.failures;
}

}  // namespace fracmatch
