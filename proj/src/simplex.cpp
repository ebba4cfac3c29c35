#include "fracmatch/simplex.hpp"

#include <stdexcept>
#include <vector>

namespace fracmatch {

namespace {

class Tableau {
 public:
  Tableau(const RatioMatrix& A, const RatioVector& b)
      : m_(static_cast<long>(A.rows())),
        nv_(static_cast<long>(A.cols())),
        cols_(nv_ + m_ + 1),
        t_(m_, nv_ + m_ + 1),
        basis_(m_),
        row_sign_(m_, 1) {
    t_.setZero();
    for (long i = 0; i < m_; ++i) {
      const int s = sgn(b[i]) < 0 ? -1 : 1;
      row_sign_[i] = s;
      for (long j = 0; j < nv_; ++j) t_(i, j) = s < 0 ? Ratio(-A(i, j)) : A(i, j);
      t_(i, nv_ + i) = 1;
      t_(i, cols_ - 1) = s < 0 ? Ratio(-b[i]) : b[i];
      basis_[i] = nv_ + i;
    }
  }

  // Runs Bland's rule on the given objective (reduced costs d over eligible
  // columns). Returns false on unboundedness.
  bool iterate(std::vector<Ratio>& d, Ratio& z, long max_col) {
    for (;;) {
      long enter = -1;
      for (long j = 0; j < max_col; ++j) {
        if (sgn(d[j]) < 0) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      long leave = -1;
      Ratio best;
      for (long i = 0; i < m_; ++i) {
        if (sgn(t_(i, enter)) <= 0) continue;
        Ratio ratio = t_(i, cols_ - 1) / t_(i, enter);
        if (leave < 0 || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      z += d[enter] * best;
      pivot(leave, enter, d);
    }
  }

  void pivot(long r, long e, std::vector<Ratio>& d) {
    const Ratio piv = t_(r, e);
    for (long j = 0; j < cols_; ++j)
      if (sgn(t_(r, j)) != 0) t_(r, j) /= piv;
    t_(r, e) = 1;
    for (long i = 0; i < m_; ++i) {
      if (i == r) continue;
      const Ratio f = t_(i, e);
      if (sgn(f) == 0) continue;
      for (long j = 0; j < cols_; ++j)
        if (sgn(t_(r, j)) != 0) t_(i, j) -= f * t_(r, j);
      t_(i, e) = 0;
    }
    const Ratio fd = d[e];
    if (sgn(fd) != 0) {
      for (long j = 0; j < nv_ + m_; ++j)
        if (sgn(t_(r, j)) != 0) d[j] -= fd * t_(r, j);
      d[e] = 0;
    }
    basis_[r] = e;
  }

  long m() const { return m_; }
  long nv() const { return nv_; }
  long cols() const { return cols_; }
  Ratio& at(long i, long j) { return t_(i, j); }
  const Ratio& at(long i, long j) const { return t_(i, j); }
  Ratio rhs(long i) const { return t_(i, cols_ - 1); }
  long basis(long i) const { return basis_[i]; }
  int row_sign(long i) const { return row_sign_[i]; }

 private:
  long m_, nv_, cols_;
  RatioMatrix t_;
  std::vector<long> basis_;
  std::vector<int> row_sign_;
};

}  // namespace

LpResult solve_lp(const RatioMatrix& A, const RatioVector& b, const RatioVector& c) {
  const long m = static_cast<long>(A.rows());
  const long nv = static_cast<long>(A.cols());
  if (b.size() != m || c.size() != nv) throw std::invalid_argument("solve_lp: shape mismatch");

  Tableau t(A, b);

  // Phase 1: minimize the artificial sum. Initial reduced costs
  // d_j = -sum_i T(i,j) for structural columns, 0 for the (basic) artificials.
  std::vector<Ratio> d(nv + m, Ratio(0));
  Ratio z(0);
  for (long i = 0; i < m; ++i) z += t.rhs(i);
  for (long j = 0; j < nv; ++j) {
    Ratio s(0);
    for (long i = 0; i < m; ++i) s += t.at(i, j);
    d[j] = -s;
  }
  if (!t.iterate(d, z, nv))  // artificials may leave but never re-enter
    throw std::logic_error("solve_lp: phase 1 unbounded");

  LpResult res;
  if (sgn(z) > 0) {
    // Infeasible. Reduced cost of artificial i is 1 - y_i in the flipped
    // system; undo the row flips to express y against the original rows.
    res.status = LpStatus::Infeasible;
    res.farkas.resize(m);
    for (long i = 0; i < m; ++i) {
      Ratio y = Ratio(1) - d[nv + i];
      res.farkas[i] = t.row_sign(i) < 0 ? Ratio(-y) : y;
    }
    return res;
  }

  // Drive basic artificials (at value zero) out of the basis where possible;
  // rows with no structural support are redundant and stay inert.
  for (long i = 0; i < m; ++i) {
    if (t.basis(i) < nv) continue;
    for (long j = 0; j < nv; ++j) {
      if (sgn(t.at(i, j)) != 0) {
        std::vector<Ratio> dummy(nv + m, Ratio(0));
        t.pivot(i, j, dummy);
        break;
      }
    }
  }

  // Phase 2 on the structural columns.
  std::vector<Ratio> d2(nv + m, Ratio(0));
  Ratio z2(0);
  {
    std::vector<Ratio> cb(m, Ratio(0));
    for (long i = 0; i < m; ++i)
      if (t.basis(i) < nv) cb[i] = c[t.basis(i)];
    for (long j = 0; j < nv; ++j) {
      Ratio s(0);
      for (long i = 0; i < m; ++i)
        if (sgn(cb[i]) != 0) s += cb[i] * t.at(i, j);
      d2[j] = c[j] - s;
    }
    for (long i = 0; i < m; ++i)
      if (sgn(cb[i]) != 0) z2 += cb[i] * t.rhs(i);
    for (long i = 0; i < m; ++i)
      if (t.basis(i) < nv) d2[t.basis(i)] = 0;
  }
  if (!t.iterate(d2, z2, nv)) {
    res.status = LpStatus::Unbounded;
    return res;
  }

  res.status = LpStatus::Optimal;
  res.objective = z2;
  res.x = RatioVector::Zero(nv);
  for (long i = 0; i < m; ++i)
    if (t.basis(i) < nv) res.x[t.basis(i)] = t.rhs(i);
  return res;
}

}  // namespace fracmatch
