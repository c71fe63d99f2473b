#include "entrofuse/optim/maxent.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace entrofuse::optim {

std::size_t MarginalProblem::constraint_rows() const {
  std::size_t r = 0;
  for (const auto& m : marginals) r += m.size();
  return r;
}

LinearProgram MarginalProblem::constraints() const {
  LinearProgram lp;
  const std::size_t rows = constraint_rows();
  lp.objective.assign(cells.size(), 0.0);
  lp.equalities.assign(rows, std::vector<double>(cells.size(), 0.0));
  std::size_t offset = 0;
  for (std::size_t k = 0; k < axes(); ++k) {
    for (double b : marginals[k]) lp.rhs.push_back(b);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c].size() != axes()) throw std::invalid_argument("cell arity differs from the number of axes");
      if (cells[c][k] >= marginals[k].size()) throw std::invalid_argument("cell index out of range");
      lp.equalities[offset + cells[c][k]][c] = 1.0;
    }
    offset += marginals[k].size();
  }
  return lp;
}

double MarginalProblem::max_residual(std::span<const double> f) const {
  double worst = 0.0;
  for (std::size_t k = 0; k < axes(); ++k) {
    std::vector<double> sums(marginals[k].size(), 0.0);
    for (std::size_t c = 0; c < cells.size(); ++c) sums[cells[c][k]] += f[c];
    for (std::size_t v = 0; v < sums.size(); ++v) worst = std::max(worst, std::abs(sums[v] - marginals[k][v]));
  }
  return worst;
}

double entropy(std::span<const double> f) {
  double h = 0.0;
  for (double x : f)
    if (x > 0.0) h -= x * std::log(x);
  return h;
}

namespace {

enum class Kind { Entropy, Quadratic };

struct Objective {
  Kind kind;
  double ln_floor;

  double value(std::span<const double> f) const {
    if (kind == Kind::Entropy) return entropy(f);
    double s = 0.0;
    for (double x : f) s -= x * x;
    return s;
  }

  void gradient(std::span<const double> f, std::vector<double>& g) const {
    g.resize(f.size());
    for (std::size_t j = 0; j < f.size(); ++j)
      g[j] = kind == Kind::Entropy ? -(1.0 + std::log(std::max(f[j], ln_floor))) : -2.0 * f[j];
  }

  // Diagonal of the inverse (negated) Hessian.
  double weight(double fj) const { return kind == Kind::Entropy ? fj : 0.5; }

  // Entropy keeps every cell strictly positive; the quadratic may land on the boundary.
  double boundary_fraction() const { return kind == Kind::Entropy ? 0.95 : 1.0; }
};

struct RowMap {
  std::vector<std::vector<std::size_t>> rows_of_cell;
  std::size_t rows = 0;

  explicit RowMap(const MarginalProblem& p) : rows_of_cell(p.cells.size()) {
    std::vector<std::size_t> offset;
    for (const auto& m : p.marginals) {
      offset.push_back(rows);
      rows += m.size();
    }
    for (std::size_t c = 0; c < p.cells.size(); ++c)
      for (std::size_t k = 0; k < p.axes(); ++k) rows_of_cell[c].push_back(offset[k] + p.cells[c][k]);
  }
};

// Scaled gradient projection onto {d : A d = 0, d_j = 0 where f_j = 0}
// in the metric of the objective's curvature: a projected Newton step.
std::vector<double> newton_direction(const RowMap& map, std::span<const double> f,
                                     const std::vector<double>& g, const Objective& obj) {
  const std::size_t n = f.size();
  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(map.rows),
                                                 static_cast<Eigen::Index>(map.rows));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(map.rows));
  for (std::size_t j = 0; j < n; ++j) {
    if (f[j] <= 0.0) continue;
    const double w = obj.weight(f[j]);
    for (auto r : map.rows_of_cell[j]) {
      rhs[static_cast<Eigen::Index>(r)] += w * g[j];
      for (auto s : map.rows_of_cell[j]) normal(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) += w;
    }
  }
  Eigen::VectorXd y = normal.completeOrthogonalDecomposition().solve(rhs);
  std::vector<double> d(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (f[j] <= 0.0) continue;
    double price = 0.0;
    for (auto r : map.rows_of_cell[j]) price += y[static_cast<Eigen::Index>(r)];
    d[j] = obj.weight(f[j]) * (g[j] - price);
  }
  return d;
}

struct StepResult {
  bool improved = false;
  std::vector<double> point;
  double value = 0.0;
};

// Halves t from t0 until the objective strictly increases.
StepResult halving_search(std::span<const double> f, const std::vector<double>& d, double t0, double f_value,
                          const Objective& obj, std::size_t max_halvings, std::size_t snap_index) {
  StepResult out;
  double t = t0;
  std::vector<double> cand(f.size());
  for (std::size_t h = 0; h <= max_halvings; ++h, t *= 0.5) {
    for (std::size_t j = 0; j < f.size(); ++j) cand[j] = std::max(f[j] + t * d[j], 0.0);
    if (h == 0 && snap_index < f.size()) cand[snap_index] = 0.0;
    const double v = obj.value(cand);
    if (v > f_value) {
      out.improved = true;
      out.point = cand;
      out.value = v;
      return out;
    }
  }
  return out;
}

SolverResult run(const MarginalProblem& problem, const SolverConfig& config, const Objective& obj) {
  SolverResult res;
  SolverDiagnostics& diag = res.diagnostics;

  // Step 1: a feasible starting point from phase I.
  LinearProgram lp = problem.constraints();
  LpOptions lp_opt;
  lp_opt.feasibility_tol = config.feasibility_tol;
  LpResult start = lp_solve(lp, lp_opt);
  diag.phase1_objective = start.phase1_objective;
  if (start.status != LpStatus::Optimal) return res;
  diag.feasible = true;

  const RowMap map(problem);
  std::vector<double> f = std::move(start.point);
  double value = obj.value(f);
  diag.objective_trace.push_back(value);
  diag.max_iterate_residual = problem.max_residual(f);

  std::vector<double> g;
  double last_gain = std::numeric_limits<double>::infinity();
  std::size_t stalls = 0;
  const double tight_gap = config.certificate_tol * 1e-5;

  while (true) {
    // Step 2: direction LP over the polytope, written in terms of the
    // target point f + df so that f + df >= 0 is a plain bound.
    obj.gradient(f, g);
    lp.objective = g;
    LpResult dir = lp_solve(lp, lp_opt);
    if (dir.status != LpStatus::Optimal) throw std::logic_error("direction LP failed on a feasible polytope");
    ++diag.iterations;
    double gap = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) gap += g[j] * (dir.point[j] - f[j]);
    gap = std::max(gap, 0.0);
    diag.certificate = gap;

    if (gap <= tight_gap) break;
    if (gap <= config.certificate_tol && last_gain < config.improvement_tol) break;
    if (stalls >= 3) break;
    if (diag.iterations >= config.max_iterations) break;

    // Step 3: halve the LP step until the objective increases. A scaled
    // projection step on the current support competes with it.
    std::vector<double> lp_dir(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) lp_dir[j] = dir.point[j] - f[j];
    StepResult best = halving_search(f, lp_dir, 1.0, value, obj, config.max_halvings, f.size());

    std::vector<double> nd = newton_direction(map, f, g, obj);
    double t_max = std::numeric_limits<double>::infinity();
    std::size_t blocking = f.size();
    for (std::size_t j = 0; j < f.size(); ++j)
      if (nd[j] < 0.0 && -f[j] / nd[j] < t_max) {
        t_max = -f[j] / nd[j];
        blocking = j;
      }
    double t0 = 1.0;
    std::size_t snap = f.size();
    if (t_max * obj.boundary_fraction() <= 1.0) {
      t0 = t_max * obj.boundary_fraction();
      if (obj.boundary_fraction() == 1.0) snap = blocking;
    }
    StepResult newton = halving_search(f, nd, t0, value, obj, config.max_halvings, snap);
    if (newton.improved && (!best.improved || newton.value >= best.value)) best = std::move(newton);

    if (!best.improved) break;  // no ascent left above round-off

    // Step 4.
    last_gain = best.value - value;
    stalls = last_gain < config.improvement_tol ? stalls + 1 : 0;
    f = std::move(best.point);
    value = best.value;
    diag.objective_trace.push_back(value);
    diag.max_iterate_residual = std::max(diag.max_iterate_residual, problem.max_residual(f));
  }

  diag.objective = value;
  diag.certified = diag.certificate <= config.certificate_tol;
  diag.max_marginal_residual = problem.max_residual(f);
  res.point = std::move(f);
  return res;
}

}  // namespace

SolverResult find_feasible_point(const MarginalProblem& problem, const SolverConfig& config) {
  SolverResult res;
  LpOptions lp_opt;
  lp_opt.feasibility_tol = config.feasibility_tol;
  LpResult r = lp_solve(problem.constraints(), lp_opt);
  res.diagnostics.phase1_objective = r.phase1_objective;
  if (r.status == LpStatus::Optimal) {
    res.diagnostics.feasible = true;
    res.point = std::move(r.point);
    res.diagnostics.max_marginal_residual = problem.max_residual(res.point);
  }
  return res;
}

SolverResult maxent_projected_gradient(const MarginalProblem& problem, const SolverConfig& config) {
  return run(problem, config, Objective{Kind::Entropy, config.ln_floor});
}

SolverResult quadratic_projected_gradient(const MarginalProblem& problem, const SolverConfig& config) {
  return run(problem, config, Objective{Kind::Quadratic, config.ln_floor});
}

}  // namespace entrofuse::optim
