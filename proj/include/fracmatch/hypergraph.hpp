#pragma once

#include "fracmatch/rational.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fracmatch {

/// k-uniform hypergraph on [n], edges as bitmasks (vertex v <-> bit v-1).
struct Hypergraph {
  long n = 0;
  long k = 0;
  std::vector<std::uint64_t> edges;
};

/// All C(n,k) edges on [n].
Hypergraph complete_hypergraph(long n, long k);

/// Edge-list file: '#' comments, a header line "n k", then one edge per
/// line as k space-separated 1-based vertices.
Hypergraph read_edge_list(std::istream& in);
Hypergraph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Hypergraph& h);

/// Validates vertex range, uniformity and duplicate freedom; throws
/// std::invalid_argument describing the first offense.
void validate(const Hypergraph& h);

/// Convex-combination witness: alpha >= 0, sum alpha = 1, and the weighted
/// edge indicators add up to (k/n, ..., k/n) exactly.
struct PfmCertificate {
  std::vector<std::uint64_t> support;
  std::vector<Ratio> alpha;
};

/// Separating-hyperplane witness: sum omega = 0 and (omega, e) < 0 for every
/// edge of the instance.
struct SeparationCertificate {
  std::vector<Ratio> omega;
};

enum class PfmOutcome { Matching, Separated, EmptyInstance };

struct PfmResult {
  PfmOutcome outcome = PfmOutcome::EmptyInstance;
  std::optional<PfmCertificate> matching;
  std::optional<SeparationCertificate> separation;
};

/// Decides perfect fractional matchability by exact phase-1 simplex and
/// returns the corresponding certificate. Instances above max_edges are
/// refused (std::invalid_argument).
PfmResult solve_pfm(const Hypergraph& h, std::size_t max_edges = 200);

bool verify_certificate(const Hypergraph& h, const PfmCertificate& cert);
bool verify_certificate(const Hypergraph& h, const SeparationCertificate& cert);

struct UCount {
  long count = 0;
  std::vector<std::uint64_t> family;
};

/// Number of k-sets whose beta-sum is >= 0, ties included. beta must be
/// zero-sum and not identically zero.
UCount count_nonneg_edges(const std::vector<Ratio>& beta, long k);

/// Coefficients y >= 0 with omega = sum_j y_j z_j for nonincreasing zero-sum
/// omega, where z_j has j leading entries n-j and n-j trailing entries -j.
/// Throws std::invalid_argument if omega is not nonincreasing or not
/// zero-sum.
std::vector<Ratio> monotone_basis_coeffs(const std::vector<Ratio>& omega);

/// The z_j basis vector itself (1-based j, 1 <= j <= n-1).
std::vector<Ratio> monotone_basis_vector(long n, long j);

}  // namespace fracmatch
