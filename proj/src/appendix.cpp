#include "fracmatch/appendix.hpp"

#include "fracmatch/binomial.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fracmatch {

namespace {

using detail::step_down;
using detail::step_up;

Ratio ka_over_n(long n, long k, long a) { return make_ratio(Int(k) * a, Int(n)); }

DirectedBound entropy_bound(const Ratio& x) {
  if (sgn(x) == 0 || x == 1) return DirectedBound::exact(0.0);
  if (sgn(x) < 0 || x > 1) throw std::invalid_argument("entropy: argument outside [0,1]");
  const DirectedBound xb = bound_of(x);
  const DirectedBound cb = bound_of(Ratio(1) - x);
  return -(xb * log_bound(xb) + cb * log_bound(cb));
}

}  // namespace

SigmaResult hypergeometric_sigma(long n, long k, long a) {
  if (n < 2 || k < 1 || k >= n || a < 1 || a > n - 1)
    throw std::invalid_argument("hypergeometric_sigma: parameters out of range");
  SigmaResult out;
  out.variance = ka_over_n(n, k, a) * (Ratio(1) - make_ratio(a, n)) * (Ratio(1) - make_ratio(k, n));
  out.sigma = sqrt_bound(bound_of(out.variance));
  return out;
}

LatticeIndices lattice_indices(long n, long k, long a, const Ratio& delta) {
  if (sgn(delta) <= 0) throw std::invalid_argument("lattice_indices: delta must be positive");
  LatticeIndices out;
  const Ratio center = ka_over_n(n, k, a);
  const SigmaResult s = hypergeometric_sigma(n, k, a);

  out.k0 = floor_ratio(center).get_si();
  out.k2 = ceil_ratio(center - delta * s.variance).get_si();

  // k1 = min{ i >= 0 : center - i <= sigma }, decided by squaring.
  auto reaches = [&](long i) {
    const Ratio d = center - i;
    if (sgn(d) <= 0) return true;
    return d * d <= s.variance;
  };
  long guess = std::max(0L, static_cast<long>(std::floor(bound_of(center).lo - s.sigma.hi)) - 2);
  while (!reaches(guess)) ++guess;
  out.k1 = guess;
  return out;
}

BeTerms be_chain_terms(double sigma, long n, const Ratio& delta) {
  if (!(sigma > 0) || n < 3) throw std::invalid_argument("be_chain_terms: bad parameters");
  const DirectedBound s = DirectedBound::exact(sigma);
  const DirectedBound s2 = s * s;
  const DirectedBound d = bound_of(delta);

  BeTerms out;
  out.chebyshev = (DirectedBound::exact(static_cast<double>(n)) /
                   DirectedBound::exact(static_cast<double>(n - 1))) /
                  (d * d * s2);
  out.local = (60.0 / s2) * exp_bound(1.0 / s2) + (3.0 / s) * exp_bound(1.0 / s);

  const DirectedBound sqrt_pi = sqrt_bound(pi_bound());
  const DirectedBound sqrt_2pi = sqrt_bound(pi_bound() * 2.0);
  const DirectedBound bracket =
      1.0 / sqrt_pi + DirectedBound::exact(1.0) + (10.0 / sqrt_2pi) * exp_bound(-(1.0 / (8.0 * s2)));
  const DirectedBound shifted = d * s - 1.0 / (2.0 * s);
  if (shifted.lo <= 0)
    throw std::domain_error("be_chain_terms: delta sigma - 1/(2 sigma) must be positive");
  out.tail = bracket / (12.0 * s2) + 1.0 / (sqrt_2pi * s) +
             exp_bound(-(shifted * shifted) / 2.0) / (sqrt_2pi * shifted);
  out.total = out.chebyshev + out.local + out.tail;
  return out;
}

CubicMomentAudit cubic_moment_audit(double sigma) {
  if (!(sigma > 0)) throw std::invalid_argument("cubic_moment_audit: sigma must be positive");
  CubicMomentAudit out;
  const Ratio c(7, 100);
  // int |x|^3 e^{-c x^2} dx = 1/c^2 (substitute u = x^2 on each half).
  out.integral = bound_of(Ratio(1) / (c * c));
  const DirectedBound base = bound_of(Ratio(3) / (Ratio(2) * c));
  const DirectedBound pow32 = base * sqrt_bound(base);
  out.correction = 4.0 * pow32 * exp_bound(DirectedBound::exact(-1.5)) / sigma;
  out.total = out.integral + out.correction;
  return out;
}

DirectedBound stirling_factor_bound(long n_min, const Ratio& a_frac) {
  if (n_min < 20 || sgn(a_frac) <= 0 || a_frac >= Ratio(3, 4))
    throw std::invalid_argument("stirling_factor_bound: bad regime");
  // The lumped exponent 1/(12n) + 1/(12(k-i)) + 1/(12(n-a-k+i)) is largest
  // at n = n_min with k-i >= (n/5)(1 - a_frac) and n-a-k+i >= n(3/4 - a_frac).
  const Ratio n(n_min);
  const Ratio term1 = Ratio(1) / (Ratio(12) * n);
  const Ratio term2 = Ratio(1) / (Ratio(12) * (n / 5) * (Ratio(1) - a_frac));
  const Ratio term3 = Ratio(1) / (Ratio(12) * n * (Ratio(3, 4) - a_frac));
  if (term1 + term2 + term3 > Ratio(1, 1000))
    throw std::logic_error("stirling_factor_bound: lumped exponent exceeds 1/1000 in this regime");
  const DirectedBound root = sqrt_bound(1.0 / bound_of(Ratio(1) - a_frac));
  return root * exp_bound(bound_of(Ratio(1, 1000)));
}

EntropySlack entropy_inequality_slack(long n, long k, long a, long i) {
  if (n < 2 || k < 1 || k >= n || a < 1 || a > n - 1 || i < 0 || i > k)
    throw std::invalid_argument("entropy_inequality_slack: parameters out of range");
  const Ratio p = make_ratio(k, n);
  const Ratio q = make_ratio(k - i, n - a);
  const DirectedBound lhs = static_cast<double>(n - a) * entropy_bound(q) -
                            static_cast<double>(n) * entropy_bound(p);
  const DirectedBound rhs = static_cast<double>(i) * log_bound(bound_of(p)) +
                            static_cast<double>(a - i) * log_bound(bound_of(Ratio(1) - p));
  EntropySlack out;
  out.slack = rhs - lhs;
  out.certified = out.slack.lo >= 0;
  out.refuted = out.slack.hi < 0;
  return out;
}

namespace {

// (rho + 0.43 s1^3) / (3 s1^3) at p, in certified arithmetic.
DirectedBound bernoulli_expr(const Ratio& p) {
  const Ratio s1sq = p * (Ratio(1) - p);
  const Ratio rho = s1sq * (Ratio(1) - 2 * s1sq);
  const DirectedBound s1 = sqrt_bound(bound_of(s1sq));
  const DirectedBound s1cubed = bound_of(s1sq) * s1;
  return (bound_of(rho) + bound_of(Ratio(43, 100)) * s1cubed) / (3.0 * s1cubed);
}

// Exact value when s1 = sqrt(p(1-p)) is rational; nullopt otherwise.
std::optional<Ratio> bernoulli_expr_exact(const Ratio& p) {
  const Ratio s1sq = p * (Ratio(1) - p);
  if (!mpz_perfect_square_p(s1sq.get_num_mpz_t()) || !mpz_perfect_square_p(s1sq.get_den_mpz_t()))
    return std::nullopt;
  Int num_root, den_root;
  mpz_sqrt(num_root.get_mpz_t(), s1sq.get_num_mpz_t());
  mpz_sqrt(den_root.get_mpz_t(), s1sq.get_den_mpz_t());
  const Ratio s1 = make_ratio(num_root, den_root);
  const Ratio s1cubed = s1sq * s1;
  const Ratio rho = s1sq * (Ratio(1) - 2 * s1sq);
  return (rho + Ratio(43, 100) * s1cubed) / (Ratio(3) * s1cubed);
}

}  // namespace

DirectedBound bernoulli_be_value(const Ratio& p) {
  if (sgn(p) <= 0 || p >= 1) throw std::invalid_argument("bernoulli_be_value: need 0 < p < 1");
  return bernoulli_expr(p);
}

BernoulliSup bernoulli_be_sup(const Ratio& lo, const Ratio& hi, int grid) {
  if (!(lo < hi) || sgn(lo) <= 0 || hi >= 1 || grid < 2)
    throw std::invalid_argument("bernoulli_be_sup: bad band");
  BernoulliSup out;
  if (auto exact = bernoulli_expr_exact(lo)) {
    out.boundary_exact = *exact;
    out.boundary_is_rational = true;
  }
  const Ratio width = (hi - lo) / grid;
  DirectedBound prev = bernoulli_expr(lo);
  out.sup = prev;
  out.decreasing_on_grid = true;
  for (int t = 1; t <= grid; ++t) {
    const DirectedBound cur = bernoulli_expr(lo + width * t);
    if (!(cur.hi < prev.lo)) out.decreasing_on_grid = false;
    prev = cur;
  }
  return out;
}

Ratio bernoulli_center_gap(long a, const Ratio& p) {
  if (a < 1 || sgn(p) <= 0 || p >= 1)
    throw std::invalid_argument("bernoulli_center_gap: need a >= 1, 0 < p < 1");
  const Ratio pa = p * a;
  long i_max;  // largest i with i < p a
  if (is_integer(pa))
    i_max = pa.get_num().get_si() - 1;
  else
    i_max = floor_ratio(pa).get_si();

  Ratio sum(0);
  if (i_max >= 0) {
    const Ratio q = Ratio(1) - p;
    // term_0 = q^a, term_{i+1} = term_i * C-step * p/q
    Ratio term;
    mpz_pow_ui(term.get_num_mpz_t(), q.get_num_mpz_t(), a);
    mpz_pow_ui(term.get_den_mpz_t(), q.get_den_mpz_t(), a);
    term.canonicalize();
    const Ratio step = p / q;
    for (long i = 0;; ++i) {
      sum += term;
      if (i >= i_max) break;
      term *= step * make_ratio(a - i, i + 1);
    }
  }
  Ratio gap = sum - Ratio(1, 2);
  if (sgn(gap) < 0) gap = -gap;
  return gap;
}

bool bernoulli_gap_within(long a, const Ratio& p) {
  const Ratio gap = bernoulli_center_gap(a, p);
  return gap * gap * a < Ratio(5041, 10000);
}

bool small_support_inequality(long a) {
  if (a < 1) return false;
  // 1.1203 (1/2 + 0.71/sqrt(a)) < 3/4  <=>  0.71/sqrt(a) < 3/(4*1.1203) - 1/2
  const Ratio margin = make_ratio(30000, 44812) - Ratio(1, 2);
  if (sgn(margin) <= 0) return false;
  return Ratio(71, 100) * Ratio(71, 100) < margin * margin * a;
}

SmallSupportThreshold small_support_threshold() {
  SmallSupportThreshold out;
  long a = 1;
  while (!small_support_inequality(a)) ++a;
  out.a_star = a;  // 0.71/sqrt(a) decreases, so the property is upward closed
  return out;
}

std::vector<ComplementCase> small_complement_checks(const std::vector<long>& n_list, long b_max) {
  std::vector<ComplementCase> out;
  Binomials memo;
  for (long n : n_list) {
    std::vector<long> ks;
    for (long k = 1; k < n; ++k)
      if (5 * k > n && 4 * k < n) ks.push_back(k);
    if (ks.empty()) throw std::invalid_argument("small_complement_checks: empty band for n");
    for (long b = 0; b <= b_max; ++b) {
      ComplementCase c;
      c.n = n;
      c.b = b;
      c.holds = true;
      c.ratio_exact = Ratio(0);
      bool first = true;
      for (long k : ks) {
        Count lhs(0);
        if (b >= 1) {
          const long i_lo = static_cast<long>((static_cast<unsigned long long>(k) * b) / n) + 1;
          for (long i = i_lo; i <= std::min(b, k); ++i)
            lhs += memo.at(b, i) * memo.at(n - b, k - i);
        }
        const Count& total = memo.at(n, k);
        if (4 * lhs > 3 * total) c.holds = false;
        const Ratio ratio = make_ratio(lhs, total);
        if (first || ratio > c.ratio_exact) {
          c.ratio_exact = ratio;
          c.k = k;
          first = false;
        }
      }
      c.ratio = bound_of(c.ratio_exact).mid();
      out.push_back(c);
    }
    if (memo.size() > 200000) memo.clear();
  }
  return out;
}

namespace {

// Certified log2 of sum_{i=lo..hi} C(a,i) C(n-a,k-i), summed from i_start
// downward (i_start should be at or near the upper end). Uses the exact
// double term ratios and a geometric remainder once they certify decrease.
DirectedBound log2_descending_sum(long n, long k, long a, long i_hi, long i_lo) {
  if (i_hi < i_lo) throw std::invalid_argument("log2_descending_sum: empty range");
  const DirectedBound t0 = log2_binomial_bounds(a, i_hi) + log2_binomial_bounds(n - a, k - i_hi);
  const double scale = std::floor(t0.hi);
  DirectedBound u = exp2_bound(t0 - DirectedBound::exact(scale));
  double sum_lo = u.lo, sum_hi = u.hi;
  double u_lo = u.lo, u_hi = u.hi;
  for (long i = i_hi; i > i_lo; --i) {
    // t_{i-1} / t_i
    const double num = static_cast<double>(i) * static_cast<double>(n - a - k + i);
    const double den = static_cast<double>(a - i + 1) * static_cast<double>(k - i + 1);
    const double r_lo = step_down(num / den);
    const double r_hi = step_up(num / den);
    if (r_hi < 1.0) {
      const double rem_hi = step_up(step_up(u_hi * r_hi) / step_down(1.0 - r_hi));
      if (rem_hi <= std::ldexp(1.0, -40) * sum_lo) {
        sum_hi = step_up(sum_hi + rem_hi);
        break;
      }
    }
    u_lo = step_down(u_lo * r_lo);
    u_hi = step_up(u_hi * r_hi);
    sum_lo = step_down(sum_lo + u_lo);
    sum_hi = step_up(sum_hi + u_hi);
  }
  return log2_bound(DirectedBound(sum_lo, sum_hi)) + DirectedBound::exact(scale);
}

}  // namespace

bool lower_chain_spot_check(long n, long k, long a) {
  const Ratio center = ka_over_n(n, k, a);
  long i_max = is_integer(center) ? floor_ratio(center).get_si() - 1 : floor_ratio(center).get_si();
  i_max = std::min(i_max, std::min(a, k));
  const long i_lo = std::max(0L, k - (n - a));
  if (i_max < i_lo) return true;  // empty sum
  const DirectedBound lhs_log2 = log2_descending_sum(n, k, a, i_max, i_lo);
  const DirectedBound factor = bound_of(Ratio(11203, 10000)) *
                               (DirectedBound::exact(0.5) +
                                bound_of(Ratio(71, 100)) / sqrt_bound(DirectedBound::exact(a)));
  const DirectedBound rhs_log2 = log2_bound(factor) + log2_binomial_bounds(n, k);
  return lhs_log2.hi <= rhs_log2.lo;
}

DirectedBound hypergeometric_center_gap(long n, long k, long a) {
  if (n < 2 || k < 1 || k >= n || a < 1 || a > n - 1)
    throw std::invalid_argument("hypergeometric_center_gap: parameters out of range");
  const long t = floor_ratio(ka_over_n(n, k, a)).get_si();
  const long i_lo = std::max(0L, k - (n - a));
  const long i_hi = std::min(a, k);

  if (n <= 2000) {
    Binomials memo;
    Count sum(0);
    for (long i = i_lo; i <= std::min(t, i_hi); ++i) sum += memo.at(a, i) * memo.at(n - a, k - i);
    Ratio p = make_ratio(sum, memo.at(n, k));
    Ratio gap = p - Ratio(1, 2);
    if (sgn(gap) < 0) gap = -gap;
    return bound_of(gap);
  }

  if (t < i_lo) return abs_bound(DirectedBound::exact(-0.5));
  const DirectedBound log2_p =
      log2_descending_sum(n, k, a, std::min(t, i_hi), i_lo) - log2_binomial_bounds(n, k);
  DirectedBound p = exp2_bound(log2_p);
  p = DirectedBound(std::max(0.0, p.lo), std::min(1.0, p.hi));
  return abs_bound(p - 0.5);
}

namespace {

Ratio exact_from_double(double x) { return Ratio(x); }

AuditStatus audit_strictly_below(const DirectedBound& computed, const Ratio& limit) {
  if (exact_from_double(computed.hi) < limit) return AuditStatus::Pass;
  if (exact_from_double(computed.lo) >= limit) return AuditStatus::FailAsPrinted;
  return AuditStatus::Boundary;
}

AuditStatus audit_at_most(const DirectedBound& computed, const Ratio& limit) {
  if (exact_from_double(computed.hi) <= limit) return AuditStatus::Pass;
  if (exact_from_double(computed.lo) > limit) return AuditStatus::FailAsPrinted;
  return AuditStatus::Boundary;
}

AuditStatus audit_at_least(const DirectedBound& computed, const Ratio& limit) {
  if (exact_from_double(computed.lo) >= limit) return AuditStatus::Pass;
  if (exact_from_double(computed.hi) < limit) return AuditStatus::FailAsPrinted;
  return AuditStatus::Boundary;
}

const char* status_name(AuditStatus s) {
  switch (s) {
    case AuditStatus::Pass: return "pass";
    case AuditStatus::FailAsPrinted: return "fail_as_printed";
    case AuditStatus::Boundary: return "boundary";
  }
  return "?";
}

}  // namespace

BoundReport build_bound_report() {
  BoundReport r;

  const BeTerms be = be_chain_terms();
  r.items.push_back({"chebyshev_term", be.chebyshev, "< 0.1323",
                     audit_strictly_below(be.chebyshev, Ratio(1323, 10000)),
                     "(n/(n-1))/(delta^2 sigma^2) at sigma=55, n=120001, delta=1/20"});
  r.items.push_back({"local_clt_term", be.local, "< 0.077",
                     audit_strictly_below(be.local, Ratio(77, 1000)),
                     "(60/s^2)e^{1/s^2} + (3/s)e^{1/s} at s=55"});
  r.items.push_back({"gaussian_tail_term", be.tail, "< 0.011",
                     audit_strictly_below(be.tail, Ratio(11, 1000)), "three-term tail display"});
  r.items.push_back({"center_gap_total", be.total, "< 0.2203",
                     audit_strictly_below(be.total, Ratio(2203, 10000)), "sum of the three terms"});

  const CubicMomentAudit cm = cubic_moment_audit();
  r.items.push_back({"cubic_moment_integral", cm.integral, "< 16",
                     audit_strictly_below(cm.integral, Ratio(16)),
                     "closed form 1/c^2 at c = 0.07 (u = x^2 substitution)"});
  r.items.push_back({"cubic_moment_with_correction", cm.total, "< 16",
                     audit_strictly_below(cm.total, Ratio(16)),
                     "adds the lattice correction 4(3/0.14)^{3/2} e^{-3/2} / sigma"});

  const DirectedBound st = stirling_factor_bound();
  r.items.push_back({"stirling_factor", st, "<= 1.1203", audit_at_most(st, Ratio(11203, 10000)),
                     "(1 - 1/5)^{-1/2} e^{1/1000} over the regime"});

  const BernoulliSup bs = bernoulli_be_sup();
  {
    AuditItem item{"bernoulli_be_constant_sup", bs.sup, "< 0.71", AuditStatus::Boundary,
                   "supremum over the open band equals the printed constant at the p = 1/5 "
                   "boundary (exactly 71/100) and is strictly below it inside"};
    if (!(bs.boundary_is_rational && bs.boundary_exact == Ratio(71, 100) && bs.decreasing_on_grid))
      item.status = audit_strictly_below(bs.sup, Ratio(71, 100));
    r.items.push_back(item);
  }

  const SmallSupportThreshold th = small_support_threshold();
  {
    const double a_star = static_cast<double>(th.a_star);
    AuditItem item{"small_support_threshold", DirectedBound::exact(a_star), "a > 14",
                   th.a_star <= th.printed + 1 ? AuditStatus::Pass : AuditStatus::FailAsPrinted,
                   "smallest a with 1.1203(1/2 + 0.71/sqrt(a)) < 3/4; the inequality fails for "
                   "a = 15..17"};
    r.items.push_back(item);
  }

  {
    // Corner scan of sigma >= 55 over a in [n/5, n - n/5], k in (n/5, n/4),
    // n > 12e4. sigma^2 is concave in a with the minimum at the a-extremes,
    // increasing in k below n/2 and increasing in n at fixed fractions, so
    // corners of the closure dominate.
    const long n = 120001;
    const long k_lo = n / 5 + 1, k_hi = (n + 3) / 4 - 1;
    const long a_lo = (n + 4) / 5, a_hi = n - (n + 4) / 5;
    DirectedBound worst = DirectedBound::exact(1e308);
    bool exact_ok = true;
    for (long k : {k_lo, k_hi})
      for (long a : {a_lo, a_hi}) {
        const SigmaResult s = hypergeometric_sigma(n, k, a);
        if (s.variance < Ratio(3025)) exact_ok = false;
        if (s.sigma.lo < worst.lo) worst = s.sigma;
      }
    AuditItem item{"sigma_regime_floor", worst, ">= 55",
                   exact_ok ? AuditStatus::Pass : AuditStatus::FailAsPrinted,
                   "minimum corner of the (a,k) regime at n = 120001, variance compared to 55^2 "
                   "exactly"};
    r.items.push_back(item);
  }

  {
    // inf of p(1-p) over the open band (1/5, 1/4) is 4/25, below the printed
    // floor 5/25.
    const DirectedBound inf = bound_of(Ratio(4, 25));
    r.items.push_back({"sigma1_band_infimum", inf, ">= 0.2", audit_at_least(inf, Ratio(1, 5)),
                       "p(1-p) is increasing on the band, infimum at the open p = 1/5 end"});
  }

  {
    const std::vector<ComplementCase> cases = small_complement_checks({100, 1000, 5000});
    bool all = true;
    Ratio worst(0);
    long wn = 0, wk = 0, wb = 0;
    for (const ComplementCase& c : cases) {
      if (!c.holds) all = false;
      if (c.ratio_exact > worst) {
        worst = c.ratio_exact;
        wn = c.n;
        wk = c.k;
        wb = c.b;
      }
    }
    std::ostringstream note;
    note << "worst lhs/C(n,k) at (n,k,b) = (" << wn << "," << wk << "," << wb
         << "); every case compared exactly against 3/4";
    r.items.push_back({"small_complement_cases", bound_of(worst), "<= 0.75",
                       all ? AuditStatus::Pass : AuditStatus::FailAsPrinted, note.str()});
  }

  r.annotations = {
      "lattice index k2 is printed as a maximum but consumed through the sandwich "
      "k2 - 1 < ka/n - delta sigma^2 <= k2; implemented as ceil(ka/n - delta sigma^2).",
      "the final display carries an unexplained 1.026 factor; recorded here, never asserted.",
      "tiny-complement cases audited in the substituted form sum_{i > kb/n} C(b,i) C(n-b,k-i); "
      "the printed lower-index form already fails at b = 1, where the single term C(n-1,k) "
      "exceeds (3/4) C(n,k) for every k < n/4.",
  };
  return r;
}

std::string report_to_text(const BoundReport& r) {
  std::ostringstream os;
  os << "name                          lo                    hi                    claim       status\n";
  os << "-----------------------------------------------------------------------------------------------\n";
  os.setf(std::ios::left);
  for (const AuditItem& it : r.items) {
    os.width(30);
    os << it.name;
    os.width(22);
    os << it.computed.lo;
    os.width(22);
    os << it.computed.hi;
    os.width(12);
    os << it.claim;
    os << status_name(it.status) << '\n';
  }
  for (const std::string& a : r.annotations) os << "note: " << a << '\n';
  return os.str();
}

std::string report_to_json(const BoundReport& r) {
  nlohmann::ordered_json j;
  j["items"] = nlohmann::ordered_json::array();
  for (const AuditItem& it : r.items) {
    nlohmann::ordered_json e;
    e["name"] = it.name;
    e["lo"] = it.computed.lo;
    e["hi"] = it.computed.hi;
    e["claim"] = it.claim;
    e["status"] = status_name(it.status);
    e["note"] = it.note;
    j["items"].push_back(e);
  }
  j["annotations"] = r.annotations;
  return j.dump(2);
}

bool report_has_failures(const BoundReport& r) {
  for (const AuditItem& it : r.items)
    if (it.status == AuditStatus::FailAsPrinted) return true;
  return false;
}

}  // namespace fracmatch
