#include "entrofuse/optim/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace entrofuse::optim {

namespace {

// Row-major tableau [m rows x (cols + 1)], last column is the rhs. Columns
// are the structural variables followed by one artificial per row.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), data_(rows * (cols + 1), 0.0) {}

  double& at(std::size_t i, std::size_t j) { return data_[i * (n_ + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * (n_ + 1) + j]; }
  double& rhs(std::size_t i) { return at(i, n_); }
  double rhs(std::size_t i) const { return at(i, n_); }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }

  void pivot(std::size_t r, std::size_t c, std::vector<double>& cost_row, double& value) {
    const double p = at(r, c);
    for (std::size_t j = 0; j <= n_; ++j) at(r, j) /= p;
    at(r, c) = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= n_; ++j) at(i, j) -= f * at(r, j);
      at(i, c) = 0.0;
    }
    const double f = cost_row[c];
    if (f != 0.0) {
      for (std::size_t j = 0; j < n_; ++j) cost_row[j] -= f * at(r, j);
      value += f * rhs(r);
      cost_row[c] = 0.0;
    }
  }

 private:
  std::size_t m_, n_;
  std::vector<double> data_;
};

struct Simplex {
  Tableau tab;
  std::vector<std::size_t> basis;
  std::size_t structural;
  const LpOptions& opt;
  std::size_t pivots = 0;

  // Reduced-cost row and objective value for cost vector c under the current basis.
  void price(const std::vector<double>& c, std::vector<double>& row, double& value) const {
    row = c;
    value = 0.0;
    for (std::size_t i = 0; i < tab.rows(); ++i) {
      const double cb = c[basis[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < tab.cols(); ++j) row[j] -= cb * tab.at(i, j);
      value += cb * tab.rhs(i);
    }
    for (auto b : basis) row[b] = 0.0;
  }

  // Maximizes with Bland's rule over columns [0, enter_limit).
  LpStatus run(std::vector<double>& row, double& value, std::size_t enter_limit) {
    while (true) {
      std::size_t enter = enter_limit;
      for (std::size_t j = 0; j < enter_limit; ++j)
        if (row[j] > opt.cost_tol) {
          enter = j;
          break;
        }
      if (enter == enter_limit) return LpStatus::Optimal;

      std::size_t leave = tab.rows();
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < tab.rows(); ++i) {
        const double a = tab.at(i, enter);
        if (a <= opt.pivot_tol) continue;
        const double ratio = std::max(tab.rhs(i), 0.0) / a;
        const bool tie = leave < tab.rows() && std::abs(ratio - best) <= 1e-14;
        if (leave == tab.rows() || ratio < best - 1e-14 || (tie && basis[i] < basis[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave == tab.rows()) return LpStatus::Unbounded;
      if (++pivots > opt.max_pivots) throw std::runtime_error("simplex pivot limit exceeded");
      tab.pivot(leave, enter, row, value);
      basis[leave] = enter;
    }
  }
};

}  // namespace

LpResult lp_solve(const LinearProgram& lp, const LpOptions& opt) {
  const std::size_t n = lp.columns();
  const std::size_t m = lp.rows();
  if (lp.equalities.size() != m) throw std::invalid_argument("equality rows and rhs differ in length");
  for (const auto& row : lp.equalities)
    if (row.size() != n) throw std::invalid_argument("equality row length differs from objective length");
  if (!lp.lower_bounds.empty() && lp.lower_bounds.size() != n)
    throw std::invalid_argument("lower_bounds length differs from objective length");
  if (!lp.fixed.empty() && lp.fixed.size() != n) throw std::invalid_argument("fixed mask length differs");
  for (double b : lp.rhs)
    if (!std::isfinite(b)) throw std::invalid_argument("rhs must be finite");

  auto lower = [&](std::size_t j) { return lp.lower_bounds.empty() ? 0.0 : lp.lower_bounds[j]; };
  auto is_fixed = [&](std::size_t j) { return !lp.fixed.empty() && lp.fixed[j]; };

  // Shift x = l + x' and drop pinned columns.
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < n; ++j)
    if (!is_fixed(j)) free_cols.push_back(j);
  const std::size_t k = free_cols.size();

  Simplex s{Tableau(m, k + m), std::vector<std::size_t>(m), k, opt};
  std::vector<double> sign(m, 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    double b = lp.rhs[i];
    for (std::size_t j = 0; j < n; ++j) b -= lp.equalities[i][j] * lower(j);
    if (b < 0.0) sign[i] = -1.0;
    for (std::size_t c = 0; c < k; ++c) s.tab.at(i, c) = sign[i] * lp.equalities[i][free_cols[c]];
    s.tab.at(i, k + i) = 1.0;
    s.tab.rhs(i) = sign[i] * b;
    s.basis[i] = k + i;
  }

  LpResult res;
  std::vector<double> row;
  double value = 0.0;

  // Phase I: maximize -sum(artificials).
  std::vector<double> c1(k + m, 0.0);
  for (std::size_t i = 0; i < m; ++i) c1[k + i] = -1.0;
  s.price(c1, row, value);
  s.run(row, value, k);
  double infeas = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    if (s.basis[i] >= k) infeas += std::max(s.tab.rhs(i), 0.0);
  res.phase1_objective = infeas;
  if (infeas > opt.feasibility_tol) {
    res.status = LpStatus::Infeasible;
    res.pivots = s.pivots;
    return res;
  }

  // Drive zero-level artificials out of the basis; rows where that is
  // impossible are redundant and keep their artificial at zero.
  for (std::size_t i = 0; i < m; ++i) {
    if (s.basis[i] < k) continue;
    std::size_t best = k;
    double mag = opt.pivot_tol;
    for (std::size_t c = 0; c < k; ++c)
      if (std::abs(s.tab.at(i, c)) > mag) {
        mag = std::abs(s.tab.at(i, c));
        best = c;
      }
    if (best == k) continue;
    std::vector<double> dummy(k + m, 0.0);
    double dv = 0.0;
    s.tab.pivot(i, best, dummy, dv);
    s.basis[i] = best;
  }

  // Phase II.
  std::vector<double> c2(k + m, 0.0);
  for (std::size_t c = 0; c < k; ++c) c2[c] = lp.objective[free_cols[c]];
  s.price(c2, row, value);
  const LpStatus st = s.run(row, value, k);
  res.pivots = s.pivots;
  if (st == LpStatus::Unbounded) {
    res.status = LpStatus::Unbounded;
    return res;
  }

  res.status = LpStatus::Optimal;
  res.point.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) res.point[j] = lower(j);
  for (std::size_t i = 0; i < m; ++i)
    if (s.basis[i] < k) res.point[free_cols[s.basis[i]]] += std::max(s.tab.rhs(i), 0.0);
  res.value = 0.0;
  for (std::size_t j = 0; j < n; ++j) res.value += lp.objective[j] * res.point[j];

  // The artificial block of the reduced-cost row is -c_B B^{-1} in the
  // sign-normalized system.
  res.duals.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) res.duals[i] = -row[k + i] * sign[i];
  return res;
}

}  // namespace entrofuse::optim
