#include "entrofuse/emr.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace entrofuse {

double JointAssignment::value(std::span<const std::size_t> tuple) const {
  for (std::size_t c = 0; c < cells.size(); ++c)
    if (std::equal(tuple.begin(), tuple.end(), cells[c].begin(), cells[c].end())) return values[c];
  return 0.0;
}

std::vector<double> JointAssignment::axis_sums(std::size_t axis) const {
  std::vector<double> sums(sources.at(axis).size(), 0.0);
  for (std::size_t c = 0; c < cells.size(); ++c) sums[cells[c][axis]] += values[c];
  return sums;
}

double JointAssignment::max_marginal_residual() const { return problem().max_residual(values); }

Proposition JointAssignment::meet_of(std::size_t cell) const {
  Proposition p = sources[0][cells[cell][0]];
  for (std::size_t k = 1; k < sources.size(); ++k) p &= sources[k][cells[cell][k]];
  return p;
}

optim::MarginalProblem JointAssignment::problem() const { return {marginals, cells}; }

JointAssignment build_joint(std::span<const Bba> sources, std::size_t max_cells) {
  if (sources.size() < 2) throw std::invalid_argument("fusion needs at least two sources");
  JointAssignment j;
  double tuples = 1.0;
  for (const auto& b : sources) {
    if (b.algebra() != sources[0].algebra()) throw AlgebraError("sources are defined over different algebras");
    std::vector<Proposition> props;
    std::vector<double> masses;
    for (const auto& f : b.focals()) {
      props.push_back(f.prop);
      masses.push_back(f.mass);
    }
    tuples *= static_cast<double>(props.size());
    j.sources.push_back(std::move(props));
    j.marginals.push_back(std::move(masses));
  }
  if (tuples > static_cast<double>(max_cells))
    throw ResourceError("joint table would have " + std::to_string(static_cast<long double>(tuples)) +
                        " cells, above the cap of " + std::to_string(max_cells));

  // Odometer over tuples, last axis fastest: lexicographic cell order.
  const std::size_t n = j.sources.size();
  std::vector<std::size_t> idx(n, 0);
  if (tuples == 0.0) return j;
  while (true) {
    Proposition p = j.sources[0][idx[0]];
    for (std::size_t k = 1; k < n; ++k) p &= j.sources[k][idx[k]];
    (p.none() ? j.forbidden : j.cells).push_back(idx);
    std::size_t k = n;
    while (k-- > 0) {
      if (++idx[k] < j.sources[k].size()) break;
      idx[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  j.values.assign(j.cells.size(), 0.0);
  return j;
}

Bba fused_masses(const AlgebraPtr& algebra, const JointAssignment& joint) {
  std::map<Proposition, double> acc;
  for (std::size_t c = 0; c < joint.cells.size(); ++c)
    if (joint.values[c] > 0.0) acc[joint.meet_of(c)] += joint.values[c];
  std::vector<Focal> focals;
  for (const auto& [p, m] : acc) focals.push_back({p, m});
  return Bba(algebra, std::move(focals), true);
}

namespace {

enum class Surrogate { Entropy, Quadratic };

void require_coherent_sources(std::span<const Bba> sources) {
  for (const auto& b : sources) {
    require_valid(b);
    if (!b.coherent())
      throw FusionError("entropy maximizing fusion needs coherent bbas; use the tbm rule for bbas with mass on bot");
  }
}

FusionOutcome fuse(std::span<const Bba> sources, const EmrOptions& options, Surrogate surrogate) {
  require_coherent_sources(sources);
  JointAssignment joint = build_joint(sources, options.max_cells);
  const auto problem = joint.problem();
  const auto solved = surrogate == Surrogate::Entropy
                          ? optim::maxent_projected_gradient(problem, options.solver)
                          : optim::quadratic_projected_gradient(problem, options.solver);
  const auto& sd = solved.diagnostics;

  FusionDiagnostics diag;
  diag.phase1_objective = sd.phase1_objective;
  if (!sd.feasible) {
    Rejection r{sd.phase1_objective, find_enhancement_violation(sources)};
    return FusionOutcome{std::move(r), diag, std::nullopt};
  }

  joint.values = solved.point;
  for (auto& v : joint.values)
    if (v < 1e-15) v = 0.0;
  diag.iterations = sd.iterations;
  diag.objective = sd.objective;
  diag.entropy = optim::entropy(joint.values);
  diag.optimality_certificate = sd.certificate;
  diag.certified = sd.certified;
  diag.max_marginal_residual = joint.max_marginal_residual();
  Bba fused = fused_masses(sources[0].algebra(), joint);
  return FusionOutcome{std::move(fused), diag, std::move(joint)};
}

}  // namespace

FusionOutcome emr_fuse(const Bba& b1, const Bba& b2, const EmrOptions& options) {
  const Bba pair[] = {b1, b2};
  return fuse(pair, options, Surrogate::Entropy);
}

FusionOutcome emr_fuse_n(std::span<const Bba> sources, const EmrOptions& options) {
  return fuse(sources, options, Surrogate::Entropy);
}

FusionOutcome emr_fuse_approx(const Bba& b1, const Bba& b2, const EmrOptions& options) {
  const Bba pair[] = {b1, b2};
  return fuse(pair, options, Surrogate::Quadratic);
}

FeasibilityReport emr_feasible(std::span<const Bba> sources, const EmrOptions& options) {
  require_coherent_sources(sources);
  const JointAssignment joint = build_joint(sources, options.max_cells);
  const auto r = optim::find_feasible_point(joint.problem(), options.solver);
  FeasibilityReport out;
  out.feasible = r.diagnostics.feasible;
  out.phase1_residual = r.diagnostics.phase1_objective;
  out.violation = find_enhancement_violation(sources);
  return out;
}

}  // namespace entrofuse
