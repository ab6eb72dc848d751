#include "simplex.hpp"

#include <cmath>
#include <limits>

#include "nostcap/errors.hpp"

namespace nostcap::detail {

namespace {

// Tableau layout: m rows of [original n | artificial m | rhs], plus a
// reduced-cost row at index m. basis[i] is the column basic in row i.
class Tableau {
 public:
  Tableau(const Table2<double>& A, const std::vector<double>& b, double eps)
      : m_(A.dim0()), n_(A.dim1()), eps_(eps), t_(A.dim0() + 1, A.dim1() + A.dim0() + 1, 0.0) {
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      const double sign = b[i] < 0.0 ? -1.0 : 1.0;
      for (int j = 0; j < n_; ++j) t_(i, j) = sign * A(i, j);
      t_(i, n_ + i) = 1.0;
      t_(i, cols() - 1) = sign * b[i];
      basis_[i] = n_ + i;
    }
  }

  int rows() const { return m_; }
  int cols() const { return n_ + m_ + 1; }
  int rhs_col() const { return cols() - 1; }

  // Phase-1 reduced costs: minimize the sum of artificials.
  void load_phase1_costs() {
    for (int j = 0; j < cols(); ++j) t_(m_, j) = 0.0;
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < cols(); ++j)
        if (j < n_ || j == rhs_col()) t_(m_, j) -= t_(i, j);
  }

  // Phase-2 reduced costs for the original objective c.
  void load_phase2_costs(const std::vector<double>& c) {
    for (int j = 0; j < cols(); ++j) t_(m_, j) = 0.0;
    for (int j = 0; j < n_; ++j) t_(m_, j) = c[j];
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= n_) continue;
      const double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j < cols(); ++j) t_(m_, j) -= cb * t_(i, j);
    }
  }

  // Runs pivots until optimal or unbounded. Columns >= ban_from never enter.
  LpStatus iterate(int ban_from) {
    const long max_pivots = 2000 + 200L * (m_ + n_);
    long stall = 0;
    double last_obj = objective();
    bool bland = false;
    for (long it = 0; it < max_pivots; ++it) {
      int enter = -1;
      if (bland) {
        for (int j = 0; j < ban_from; ++j)
          if (t_(m_, j) < -eps_) {
            enter = j;
            break;
          }
      } else {
        double best = -eps_;
        for (int j = 0; j < ban_from; ++j)
          if (t_(m_, j) < best) {
            best = t_(m_, j);
            enter = j;
          }
      }
      if (enter < 0) return LpStatus::Optimal;

      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        const double a = t_(i, enter);
        if (a <= eps_) continue;
        const double ratio = t_(i, rhs_col()) / a;
        if (ratio < best_ratio - 1e-15 ||
            (ratio < best_ratio + 1e-15 &&
             (leave < 0 || basis_[i] < basis_[leave]))) {
          best_ratio = ratio;
          leave = i;
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      pivot(leave, enter);

      const double obj = objective();
      if (obj < last_obj - 1e-15) {
        last_obj = obj;
        stall = 0;
      } else if (++stall > 2L * (m_ + n_) + 16) {
        bland = true;  // degenerate cycle suspected
      }
    }
    throw Error("simplex: pivot limit exceeded");
  }

  void pivot(int row, int col) {
    const double p = t_(row, col);
    for (int j = 0; j < cols(); ++j) t_(row, j) /= p;
    t_(row, col) = 1.0;
    for (int i = 0; i <= m_; ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f == 0.0) continue;
      for (int j = 0; j < cols(); ++j) t_(i, j) -= f * t_(row, j);
      t_(i, col) = 0.0;
    }
    basis_[row] = col;
  }

  // Pivot basic artificials onto original columns where possible. Rows
  // that are zero across all original columns are redundant constraints;
  // they stay with their artificial basic at level zero and are harmless
  // because phase 2 bans artificial columns from entering.
  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      int col = -1;
      for (int j = 0; j < n_; ++j)
        if (std::abs(t_(i, j)) > eps_) {
          col = j;
          break;
        }
      if (col >= 0) pivot(i, col);
    }
  }

  double objective() const { return -t_(m_, rhs_col()); }

  std::vector<double> solution() const {
    std::vector<double> x(n_, 0.0);
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = t_(i, rhs_col());
    return x;
  }

 private:
  int m_;
  int n_;
  double eps_;
  Table2<double> t_;
  std::vector<int> basis_;
};

}  // namespace

LpResult solve_lp(const Table2<double>& A, const std::vector<double>& b,
                  const std::vector<double>& c, double eps) {
  const int m = A.dim0();
  const int n = A.dim1();
  if (static_cast<int>(b.size()) != m || static_cast<int>(c.size()) != n)
    throw Error("solve_lp: dimension mismatch");

  Tableau t(A, b, eps);
  t.load_phase1_costs();
  if (t.iterate(n + m) != LpStatus::Optimal)
    throw Error("solve_lp: phase 1 cannot be unbounded");
  if (t.objective() > eps * (1.0 + static_cast<double>(m))) {
    return {LpStatus::Infeasible, {}, 0.0};
  }
  t.drive_out_artificials();

  t.load_phase2_costs(c);
  const LpStatus status = t.iterate(n);
  if (status == LpStatus::Unbounded) return {LpStatus::Unbounded, {}, 0.0};

  LpResult res;
  res.status = LpStatus::Optimal;
  res.x = t.solution();
  res.objective = 0.0;
  for (int j = 0; j < n; ++j) res.objective += c[j] * res.x[j];
  return res;
}

}  // namespace nostcap::detail
