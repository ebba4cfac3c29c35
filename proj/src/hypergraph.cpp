#include "fracmatch/hypergraph.hpp"

#include "fracmatch/simplex.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fracmatch {

Hypergraph complete_hypergraph(long n, long k) {
  if (n < 1 || n > 64 || k < 1 || k > n)
    throw std::invalid_argument("complete_hypergraph: need 1 <= k <= n <= 64");
  Hypergraph h{n, k, {}};
  // Gosper's hack over k-bit subsets of [n].
  std::uint64_t mask = (k == 64) ? ~0ull : ((1ull << k) - 1);
  const std::uint64_t limit = (n == 64) ? ~0ull : ((1ull << n) - 1);
  while (mask <= limit) {
    h.edges.push_back(mask);
    const std::uint64_t c = mask & -mask;
    const std::uint64_t r = mask + c;
    if (r > limit) break;
    mask = (((r ^ mask) >> 2) / c) | r;
  }
  return h;
}

void validate(const Hypergraph& h) {
  if (h.n < 1 || h.n > 64) throw std::invalid_argument("hypergraph: n out of [1,64]");
  if (h.k < 1 || h.k > h.n) throw std::invalid_argument("hypergraph: k out of [1,n]");
  const std::uint64_t limit = (h.n == 64) ? ~0ull : ((1ull << h.n) - 1);
  std::set<std::uint64_t> seen;
  for (std::uint64_t e : h.edges) {
    if (e & ~limit) throw std::invalid_argument("hypergraph: vertex above n in an edge");
    if (std::popcount(e) != h.k) throw std::invalid_argument("hypergraph: edge of wrong size");
    if (!seen.insert(e).second) throw std::invalid_argument("hypergraph: duplicate edge");
  }
}

Hypergraph read_edge_list(std::istream& in) {
  Hypergraph h;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    if (!have_header) {
      if (ls >> h.n >> h.k) have_header = true;
      continue;
    }
    std::uint64_t mask = 0;
    long v;
    bool any = false;
    while (ls >> v) {
      if (v < 1 || v > h.n) throw std::invalid_argument("edge list: vertex out of range");
      mask |= 1ull << (v - 1);
      any = true;
    }
    if (any) h.edges.push_back(mask);
  }
  if (!have_header) throw std::invalid_argument("edge list: missing 'n k' header");
  validate(h);
  return h;
}

Hypergraph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list: " + path);
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Hypergraph& h) {
  out << h.n << ' ' << h.k << '\n';
  for (std::uint64_t e : h.edges) {
    bool first = true;
    for (long v = 1; v <= h.n; ++v) {
      if (e & (1ull << (v - 1))) {
        if (!first) out << ' ';
        out << v;
        first = false;
      }
    }
    out << '\n';
  }
}

PfmResult solve_pfm(const Hypergraph& h, std::size_t max_edges) {
  validate(h);
  if (h.k >= h.n) throw std::invalid_argument("solve_pfm: need k < n");
  PfmResult res;
  if (h.edges.empty()) {
    res.outcome = PfmOutcome::EmptyInstance;
    return res;
  }
  if (h.edges.size() > max_edges)
    throw std::invalid_argument("solve_pfm: instance above the edge cap (" +
                                std::to_string(max_edges) + "), raise it explicitly");

  const long m = h.n + 1;
  const long nv = static_cast<long>(h.edges.size());
  RatioMatrix A = RatioMatrix::Zero(m, nv);
  RatioVector b(m), c = RatioVector::Zero(nv);
  const Ratio kn = make_ratio(h.k, h.n);
  for (long v = 0; v < h.n; ++v) b[v] = kn;
  b[h.n] = 1;
  for (long j = 0; j < nv; ++j) {
    for (long v = 0; v < h.n; ++v)
      if (h.edges[j] & (1ull << v)) A(v, j) = 1;
    A(h.n, j) = 1;
  }

  LpResult lp = solve_lp(A, b, c);
  if (lp.status == LpStatus::Optimal) {
    PfmCertificate cert;
    for (long j = 0; j < nv; ++j) {
      if (sgn(lp.x[j]) > 0) {
        cert.support.push_back(h.edges[j]);
        cert.alpha.push_back(lp.x[j]);
      }
    }
    res.outcome = PfmOutcome::Matching;
    res.matching = std::move(cert);
    return res;
  }
  if (lp.status != LpStatus::Infeasible) throw std::logic_error("solve_pfm: unexpected LP status");

  // Farkas dual (w, t): w.e + t <= 0 on edges, w.c + t > 0. Recentering w to
  // zero sum gives the separating normal.
  SeparationCertificate sep;
  Ratio wsum(0);
  for (long v = 0; v < h.n; ++v) wsum += lp.farkas[v];
  const Ratio shift = wsum / h.n;
  sep.omega.resize(h.n);
  for (long v = 0; v < h.n; ++v) sep.omega[v] = lp.farkas[v] - shift;
  res.outcome = PfmOutcome::Separated;
  res.separation = std::move(sep);
  return res;
}

bool verify_certificate(const Hypergraph& h, const PfmCertificate& cert) {
  if (cert.support.size() != cert.alpha.size() || cert.support.empty()) return false;
  std::set<std::uint64_t> edge_set(h.edges.begin(), h.edges.end());
  Ratio total(0);
  std::vector<Ratio> load(h.n, Ratio(0));
  for (std::size_t i = 0; i < cert.support.size(); ++i) {
    if (!edge_set.count(cert.support[i])) return false;
    if (sgn(cert.alpha[i]) < 0) return false;
    total += cert.alpha[i];
    for (long v = 0; v < h.n; ++v)
      if (cert.support[i] & (1ull << v)) load[v] += cert.alpha[i];
  }
  if (total != 1) return false;
  const Ratio kn = make_ratio(h.k, h.n);
  for (long v = 0; v < h.n; ++v)
    if (load[v] != kn) return false;
  return true;
}

bool verify_certificate(const Hypergraph& h, const SeparationCertificate& cert) {
  if (static_cast<long>(cert.omega.size()) != h.n) return false;
  Ratio sum(0);
  for (const Ratio& w : cert.omega) sum += w;
  if (sgn(sum) != 0) return false;
  for (std::uint64_t e : h.edges) {
    Ratio dot(0);
    for (long v = 0; v < h.n; ++v)
      if (e & (1ull << v)) dot += cert.omega[v];
    if (sgn(dot) >= 0) return false;
  }
  return true;
}

UCount count_nonneg_edges(const std::vector<Ratio>& beta, long k) {
  const long n = static_cast<long>(beta.size());
  if (n < 1 || n > 64 || k < 1 || k > n)
    throw std::invalid_argument("count_nonneg_edges: need 1 <= k <= n <= 64");
  Ratio sum(0);
  bool nonzero = false;
  for (const Ratio& x : beta) {
    sum += x;
    if (sgn(x) != 0) nonzero = true;
  }
  if (sgn(sum) != 0 || !nonzero)
    throw std::invalid_argument("count_nonneg_edges: weights must be zero-sum and not all zero");

  UCount out;
  const Hypergraph all = complete_hypergraph(n, k);
  for (std::uint64_t e : all.edges) {
    Ratio dot(0);
    for (long v = 0; v < n; ++v)
      if (e & (1ull << v)) dot += beta[v];
    if (sgn(dot) >= 0) {
      ++out.count;
      out.family.push_back(e);
    }
  }
  return out;
}

std::vector<Ratio> monotone_basis_vector(long n, long j) {
  if (n < 2 || j < 1 || j > n - 1) throw std::invalid_argument("monotone_basis_vector: bad index");
  std::vector<Ratio> z(n);
  for (long i = 0; i < n; ++i) z[i] = (i < j) ? Ratio(n - j) : Ratio(-j);
  return z;
}

std::vector<Ratio> monotone_basis_coeffs(const std::vector<Ratio>& omega) {
  const long n = static_cast<long>(omega.size());
  if (n < 2) throw std::invalid_argument("monotone_basis_coeffs: need n >= 2");
  Ratio sum(0);
  for (const Ratio& w : omega) sum += w;
  if (sgn(sum) != 0) throw std::invalid_argument("monotone_basis_coeffs: omega must be zero-sum");
  std::vector<Ratio> y(n - 1);
  for (long j = 0; j < n - 1; ++j) {
    Ratio diff = omega[j] - omega[j + 1];
    if (sgn(diff) < 0)
      throw std::invalid_argument("monotone_basis_coeffs: omega must be nonincreasing");
    y[j] = diff / n;
  }
  return y;
}

}  // namespace fracmatch
