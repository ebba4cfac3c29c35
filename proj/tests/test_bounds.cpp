#include "fracmatch/appendix.hpp"
#include "fracmatch/binomial.hpp"
#include "fracmatch/sweep.hpp"

#include <doctest.h>

#include <random>

using namespace fracmatch;

TEST_CASE("hypergeometric sigma") {
  const SigmaResult s = hypergeometric_sigma(4, 2, 2);
  CHECK(s.variance == make_ratio(1, 4));
  CHECK(s.sigma.contains(0.5));

  const SigmaResult big = hypergeometric_sigma(120001, 30000, 60000);
  CHECK(big.variance > Ratio(3025));  // sigma > 55 in the regime
  CHECK(big.sigma.lo > 55.0);
}

TEST_CASE("sigma stays above 55 at the regime corners") {
  const long n = 120001;
  for (long k : {n / 5 + 1, (n + 3) / 4 - 1})
    for (long a : {(n + 4) / 5, n - (n + 4) / 5})
      CHECK(hypergeometric_sigma(n, k, a).variance >= Ratio(3025));
}

TEST_CASE("lattice indices at the worked example") {
  // (100, 24, 50): center 12, variance 456/100 * ... = 4.56
  const SigmaResult s = hypergeometric_sigma(100, 24, 50);
  CHECK(s.variance == make_ratio(456, 100));
  const LatticeIndices idx = lattice_indices(100, 24, 50, Ratio(1, 20));
  CHECK(idx.k0 == 12);
  CHECK(idx.k2 == 12);  // ceil(12 - 4.56/20)
  CHECK(idx.k1 == 10);  // ceil(12 - 2.135...)
}

TEST_CASE("lattice index properties on random draws") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 1000; ++t) {
    const long n = 10 + static_cast<long>(rng() % 500);
    const long k = 1 + static_cast<long>(rng() % (n - 1));
    const long a = 1 + static_cast<long>(rng() % (n - 1));
    const Ratio delta(1, 20);
    const LatticeIndices idx = lattice_indices(n, k, a, delta);
    const Ratio center = make_ratio(k * a, n);
    const Ratio sandwich = center - delta * hypergeometric_sigma(n, k, a).variance;
    // k2 - 1 < center - delta sigma^2 <= k2
    CHECK(Ratio(idx.k2 - 1) < sandwich);
    CHECK(sandwich <= Ratio(idx.k2));
    // x~(k0) <= 0 < x~(k0 + 1)
    CHECK(Ratio(idx.k0) <= center);
    CHECK(center < Ratio(idx.k0 + 1));
    // minimality of k1
    const Ratio s2 = hypergeometric_sigma(n, k, a).variance;
    const Ratio d1 = center - idx.k1;
    CHECK((sgn(d1) <= 0 || d1 * d1 <= s2));
    if (idx.k1 > 0) {
      const Ratio d0 = center - (idx.k1 - 1);
      CHECK((sgn(d0) > 0 && d0 * d0 > s2));
    }
  }
}

TEST_CASE("error-chain terms at the reference parameters") {
  const BeTerms t = be_chain_terms();
  // Printed bounds hold...
  CHECK(t.chebyshev.hi < 0.1323);
  CHECK(t.local.hi < 0.077);
  CHECK(t.tail.hi < 0.011);
  CHECK(t.total.hi < 0.2203);
  // ...at the expected magnitudes.
  CHECK(t.chebyshev.lo > 0.13223);
  CHECK(t.chebyshev.hi < 0.13224);
  CHECK(t.local.lo > 0.0753);
  CHECK(t.local.hi < 0.0755);
  CHECK(t.tail.lo > 0.0107);
  CHECK(t.tail.hi < 0.0109);
  // Enclosures are tight.
  CHECK(t.total.width() < 1e-6 * t.total.hi);
}

TEST_CASE("error-chain terms shrink as sigma grows") {
  double prev_total = 1e9;
  for (double sigma : {55.0, 70.0, 100.0, 200.0}) {
    const BeTerms t = be_chain_terms(sigma);
    CHECK(t.total.hi < prev_total);
    prev_total = t.total.hi;
  }
}

TEST_CASE("cubic moment line fails as printed") {
  const CubicMomentAudit cm = cubic_moment_audit();
  CHECK(cm.integral.contains(10000.0 / 49.0));  // 204.0816...
  CHECK(cm.integral.width() < 1e-9);
  CHECK(cm.correction.lo > 1.60);
  CHECK(cm.correction.hi < 1.62);
  CHECK(cm.total.lo > 16.0);  // the printed "< 16" cannot hold
}

TEST_CASE("stirling factor") {
  const DirectedBound st = stirling_factor_bound();
  CHECK(st.lo > 1.1191);
  CHECK(st.hi < 1.1192);
  CHECK(st.hi <= 1.1203);
}

TEST_CASE("entropy inequality samples") {
  const EntropySlack mid = entropy_inequality_slack(1000, 240, 200, 40);
  CHECK(mid.certified);

  // Exact equality at i = ka/n: the slack encloses zero tightly.
  const EntropySlack edge = entropy_inequality_slack(100, 24, 50, 12);
  CHECK_FALSE(edge.refuted);
  CHECK(std::abs(edge.slack.mid()) < 1e-9);

  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const long n = 50 + static_cast<long>(rng() % 2000);
    const long k = n / 5 + 1 + static_cast<long>(rng() % std::max(1L, n / 4 - n / 5 - 1));
    const long a = 1 + static_cast<long>(rng() % (n / 5));
    const long i = static_cast<long>(rng() % (k * a / n + 1));
    CHECK_FALSE(entropy_inequality_slack(n, k, a, i).refuted);
  }
}

TEST_CASE("bernoulli constant: boundary value and strict interior decrease") {
  const BernoulliSup s = bernoulli_be_sup();
  REQUIRE(s.boundary_is_rational);
  CHECK(s.boundary_exact == make_ratio(71, 100));
  CHECK(s.decreasing_on_grid);
  CHECK(s.sup.contains(0.71));
  // Interior sample: p = 1/4 gives about 0.6244, safely below the boundary.
  const DirectedBound quarter = bernoulli_be_value(make_ratio(1, 4));
  CHECK(quarter.lo > 0.6244);
  CHECK(quarter.hi < 0.6245);
}

TEST_CASE("bernoulli tail gaps") {
  // (20, 1/5): binomial P(X <= 3), gap about 0.0886
  const Ratio g20 = bernoulli_center_gap(20, make_ratio(1, 5));
  CHECK(bound_of(g20).mid() == doctest::Approx(0.0886).epsilon(0.01));
  CHECK(bernoulli_gap_within(20, make_ratio(1, 5)));

  // (1, 1/5): only i = 0 counts, gap 3/10
  CHECK(bernoulli_center_gap(1, make_ratio(1, 5)) == make_ratio(3, 10));
  CHECK(bernoulli_gap_within(1, make_ratio(1, 5)));

  // (100, 1/4): gap < 0.071 = 0.71/sqrt(100)
  const Ratio g100 = bernoulli_center_gap(100, make_ratio(1, 4));
  CHECK(g100 < make_ratio(71, 1000));
}

TEST_CASE("bernoulli gap bound over a of all residues") {
  for (const Ratio& p : {make_ratio(201, 1000), make_ratio(9, 40), make_ratio(1, 4)})
    for (long a = 1; a <= 400; ++a) CHECK(bernoulli_gap_within(a, p));
}

TEST_CASE("small support threshold is 18, not 14") {
  CHECK_FALSE(small_support_inequality(14));
  CHECK_FALSE(small_support_inequality(15));  // 1.1203 * 0.6833... > 0.75
  CHECK_FALSE(small_support_inequality(17));
  CHECK(small_support_inequality(18));
  CHECK(small_support_inequality(19));
  const SmallSupportThreshold th = small_support_threshold();
  CHECK(th.a_star == 18);
  CHECK(th.printed == 14);
}

TEST_CASE("tiny complement cases hold exactly") {
  const std::vector<ComplementCase> cases = small_complement_checks({100, 1000});
  for (const ComplementCase& c : cases) {
    CHECK(c.holds);
    CHECK(c.ratio < 0.75);
  }
  // b = 0 rows are trivial; b = 1 rows are the k/n ratio.
  bool saw_b0 = false;
  for (const ComplementCase& c : cases)
    if (c.b == 0) {
      saw_b0 = true;
      CHECK(c.ratio == 0.0);
    }
  CHECK(saw_b0);
}

TEST_CASE("full lower-chain spot checks at large parameters") {
  CHECK(lower_chain_spot_check(120001, 27000, 20000));
  CHECK(lower_chain_spot_check(130000, 27000, 24000));
  CHECK(lower_chain_spot_check(200000, 45000, 30000));
}

TEST_CASE("hypergeometric center gap") {
  // Small case: exact, compared against a direct rational computation.
  const DirectedBound small = hypergeometric_center_gap(100, 24, 50);
  {
    Binomials memo;
    Count sum(0);
    for (long i = 0; i <= 12; ++i) sum += memo.at(50, i) * memo.at(50, 24 - i);
    Ratio p = make_ratio(sum, memo.at(100, 24));
    Ratio gap = p - Ratio(1, 2);
    if (sgn(gap) < 0) gap = -gap;
    CHECK(small.contains(gap.get_d()));
  }
  CHECK(small.hi < 0.25);

  // Certified summation in the sigma > 55 regime.
  const DirectedBound large = hypergeometric_center_gap(66000, 16000, 33000);
  CHECK(large.hi < 0.2203);
  CHECK(large.lo >= 0.0);

  // Probability bound: gap <= 1/2 always (symmetric case with ties).
  const DirectedBound sym = hypergeometric_center_gap(12, 4, 6);
  CHECK(sym.hi <= 0.5 + 1e-12);
}

TEST_CASE("center gap below 1/4 forces the tail inequality (paired computation)") {
  Binomials memo;
  std::mt19937_64 rng(23);
  for (int t = 0; t < 60; ++t) {
    const long n = 40 + static_cast<long>(rng() % 800);
    const std::vector<long> band = [&] {
      std::vector<long> ks;
      for (long k = 1; k < n; ++k)
        if (5 * k > n && 4 * k < n) ks.push_back(k);
      return ks;
    }();
    if (band.empty()) continue;
    const long k = band[rng() % band.size()];
    const long a = 1 + static_cast<long>(rng() % (n - 1));
    const DirectedBound gap = hypergeometric_center_gap(n, k, a);
    const CellResult cell = verify_cell(n, k, a, memo);
    if (gap.hi < 0.25) CHECK(cell.ok);
    if (memo.size() > 100000) memo.clear();
  }
}

TEST_CASE("bound report statuses are fixed and reproducible") {
  const BoundReport r1 = build_bound_report();
  const BoundReport r2 = build_bound_report();
  REQUIRE(r1.items.size() == r2.items.size());
  for (std::size_t i = 0; i < r1.items.size(); ++i) {
    CHECK(r1.items[i].name == r2.items[i].name);
    CHECK(r1.items[i].status == r2.items[i].status);
    CHECK(r1.items[i].computed.lo == r2.items[i].computed.lo);
    CHECK(r1.items[i].computed.hi == r2.items[i].computed.hi);
  }

  auto find = [&](const char* name) -> const AuditItem& {
    for (const AuditItem& it : r1.items)
      if (it.name == name) return it;
    REQUIRE(false);
    return r1.items.front();
  };
  CHECK(find("chebyshev_term").status == AuditStatus::Pass);
  CHECK(find("local_clt_term").status == AuditStatus::Pass);
  CHECK(find("gaussian_tail_term").status == AuditStatus::Pass);
  CHECK(find("center_gap_total").status == AuditStatus::Pass);
  CHECK(find("cubic_moment_integral").status == AuditStatus::FailAsPrinted);
  CHECK(find("cubic_moment_with_correction").status == AuditStatus::FailAsPrinted);
  CHECK(find("stirling_factor").status == AuditStatus::Pass);
  CHECK(find("bernoulli_be_constant_sup").status == AuditStatus::Boundary);
  CHECK(find("small_support_threshold").status == AuditStatus::FailAsPrinted);
  CHECK(find("sigma_regime_floor").status == AuditStatus::Pass);
  CHECK(find("sigma1_band_infimum").status == AuditStatus::FailAsPrinted);
  CHECK(find("small_complement_cases").status == AuditStatus::Pass);
  CHECK(report_has_failures(r1));

  // Every enclosure in the report is tight (relative width < 1e-6).
  for (const AuditItem& it : r1.items) {
    const double scale = std::max(1.0, std::abs(it.computed.hi));
    CHECK(it.computed.width() < 1e-6 * scale);
  }
}
