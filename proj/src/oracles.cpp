#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "entrofuse/emr.hpp"

namespace entrofuse {

AlgebraPtr powerset_abc() {
  const std::vector<std::string> atoms{"a", "b", "c"};
  ConstraintSet gamma;
  for (const char* eq : {"a&b=bot", "b&c=bot", "a&c=bot", "a|b|c=top"}) gamma.push_back(parse_constraint(eq, atoms));
  return PreBooleanAlgebra::build(atoms, gamma);
}

namespace {

void check_range(const ZadehFamily& p) {
  for (double v : {p.alpha1, p.gamma1, p.beta2, p.gamma2})
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("family parameters must lie in [0, 1]");
  if (p.alpha1 + p.gamma1 > 1.0 + kMassTolerance || p.beta2 + p.gamma2 > 1.0 + kMassTolerance)
    throw std::invalid_argument("family masses exceed 1");
}

}  // namespace

std::pair<Bba, Bba> zadeh_family_sources(const AlgebraPtr& ps, const ZadehFamily& p) {
  check_range(p);
  const auto a = ps->parse("a"), b = ps->parse("b"), c = ps->parse("c"), top = ps->top();
  auto rest = [](double x, double y) {
    const double r = 1.0 - x - y;
    return std::abs(r) < 1e-15 ? 0.0 : r;
  };
  Bba m1(ps, {{a, p.alpha1}, {c, p.gamma1}, {top, rest(p.alpha1, p.gamma1)}});
  Bba m2(ps, {{b, p.beta2}, {c, p.gamma2}, {top, rest(p.beta2, p.gamma2)}});
  return {std::move(m1), std::move(m2)};
}

ZadehSolution zadeh_family_solution(const ZadehFamily& p) {
  check_range(p);
  ZadehSolution s;
  const double lo = std::max(0.0, p.alpha1 + p.beta2 + p.gamma1 + p.gamma2 - 1.0);
  const double hi = std::min(p.gamma1, p.gamma2);
  s.feasible = lo <= hi;
  if (!s.feasible) return s;
  const double free_mass = 1.0 - p.alpha1 - p.beta2;
  s.theta = free_mass > 0.0 ? p.gamma1 * p.gamma2 / free_mass : 0.0;
  s.a = p.alpha1;
  s.b = p.beta2;
  s.c = p.gamma1 + p.gamma2 - s.theta;
  s.top = 1.0 - p.alpha1 - p.beta2 - p.gamma1 - p.gamma2 + s.theta;
  return s;
}

FusionOutcome zadeh_family_oracle(const AlgebraPtr& ps, const ZadehFamily& p) {
  const ZadehSolution s = zadeh_family_solution(p);
  FusionDiagnostics diag;
  if (!s.feasible) return FusionOutcome{Rejection{}, diag, std::nullopt};

  const std::vector<double> cells{p.alpha1, p.beta2, s.theta, p.gamma1 - s.theta, p.gamma2 - s.theta, s.top};
  diag.entropy = optim::entropy(cells);
  diag.objective = diag.entropy;
  diag.certified = true;
  Bba fused(ps, {{ps->parse("a"), s.a}, {ps->parse("b"), s.b}, {ps->parse("c"), s.c}, {ps->top(), s.top}});
  return FusionOutcome{std::move(fused), diag, std::nullopt};
}

IpfResult ipf_oracle(std::span<const Bba> sources, double tolerance, std::size_t max_sweeps) {
  IpfResult out;
  out.joint = build_joint(sources);
  auto& j = out.joint;
  if (j.cells.empty()) return out;
  std::fill(j.values.begin(), j.values.end(), 1.0 / static_cast<double>(j.cells.size()));

  for (out.sweeps = 1; out.sweeps <= max_sweeps; ++out.sweeps) {
    for (std::size_t k = 0; k < j.sources.size(); ++k) {
      const auto sums = j.axis_sums(k);
      for (std::size_t c = 0; c < j.cells.size(); ++c) {
        const std::size_t v = j.cells[c][k];
        if (sums[v] > 0.0) j.values[c] *= j.marginals[k][v] / sums[v];
      }
    }
    out.max_residual = j.max_marginal_residual();
    if (out.max_residual < tolerance) {
      out.converged = true;
      return out;
    }
  }
  out.sweeps = max_sweeps;
  return out;
}

}  // namespace entrofuse
