#include "entrofuse/cli/report.hpp"

#include <array>

namespace entrofuse::cli {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Rule, std::string_view>, 6> kRuleNames{{
    {Rule::Conjunctive, "conjunctive"},
    {Rule::Tbm, "tbm"},
    {Rule::Free, "free"},
    {Rule::Dempster, "dempster"},
    {Rule::Emr, "emr"},
    {Rule::EmrApprox, "emr-approx"},
}};

RuleOutcome rejected(Rule rule, std::string reason) {
  RuleOutcome o{rule, std::nullopt, std::move(reason), std::nullopt, std::nullopt, 0.0};
  return o;
}

RuleOutcome from_fusion(Rule rule, FusionOutcome&& f) {
  RuleOutcome o{rule, std::nullopt, {}, std::nullopt, f.diagnostics, 0.0};
  if (f.fused()) {
    o.fused.emplace(f.bba());
  } else {
    o.rejection = f.rejection();
    o.rejection_reason = "no conflict-free joint assignment reproduces the source masses";
  }
  return o;
}

}  // namespace

std::optional<Rule> parse_rule(std::string_view name) {
  for (const auto& [r, n] : kRuleNames)
    if (n == name) return r;
  return std::nullopt;
}

std::string_view rule_name(Rule rule) {
  for (const auto& [r, n] : kRuleNames)
    if (r == rule) return n;
  return "unknown";
}

RuleOutcome apply_rule(Rule rule, std::span<const Bba> sources, const EmrOptions& options) {
  if (sources.size() < 2) throw FusionError("fusion needs at least two sources");
  if (rule == Rule::Emr) return from_fusion(rule, emr_fuse_n(sources, options));

  for (const auto& b : sources) require_valid(b);
  Bba acc = sources[0];
  double conflict = 0.0;
  for (std::size_t i = 1; i < sources.size(); ++i) {
    switch (rule) {
      case Rule::Conjunctive:
      case Rule::Tbm: {
        auto image = conjunctive(acc, sources[i]);
        acc = std::move(image.mu);
        conflict = acc.mass(acc.space().bottom());
        break;
      }
      case Rule::Free:
        acc = free_dsmt_fuse(acc, sources[i]);
        break;
      case Rule::Dempster: {
        const double k = conjunctive(acc, sources[i]).conflict;
        if (!(k < 1.0)) return rejected(rule, "total conflict: Dempster's rule is undefined");
        acc = dempster_fuse(acc, sources[i]);
        break;
      }
      case Rule::EmrApprox: {
        auto f = emr_fuse_approx(acc, sources[i], options);
        if (!f.fused()) return from_fusion(rule, std::move(f));
        if (i + 1 == sources.size()) return from_fusion(rule, std::move(f));
        acc = f.bba();
        break;
      }
      case Rule::Emr:
        break;
    }
  }
  RuleOutcome o{rule, std::move(acc), {}, std::nullopt, std::nullopt, conflict};
  return o;
}

json make_report(const RuleOutcome& outcome, const PreBooleanAlgebra& alg,
                 std::span<const std::string> source_names, const ReportOptions& options) {
  json r;
  r["rule"] = std::string(rule_name(outcome.rule));
  r["sources"] = json::array();
  for (const auto& n : source_names) r["sources"].push_back(n);

  if (outcome.diagnostics) {
    const auto& d = *outcome.diagnostics;
    json dj;
    dj["phase1_objective"] = d.phase1_objective;
    if (outcome.fused) {
      dj["entropy"] = d.entropy;
      dj["objective"] = d.objective;
      dj["iterations"] = d.iterations;
      dj["max_marginal_residual"] = d.max_marginal_residual;
      dj["optimality_certificate"] = d.optimality_certificate;
      dj["certified"] = d.certified;
    }
    r["diagnostics"] = dj;
  }

  if (outcome.rejected()) {
    r["outcome"] = "rejected";
    json rej;
    rej["reason"] = outcome.rejection_reason;
    if (outcome.rejection) {
      rej["phase1_residual"] = outcome.rejection->phase1_residual;
      if (const auto& v = outcome.rejection->violation) {
        json fam = json::array();
        for (const auto& p : v->family) fam.push_back(json{{"label", alg.label(p)}, {"key", p.hex()}});
        rej["enhancement_family"] = fam;
        rej["enhancement_sum"] = v->bound;
      }
    }
    r["rejection"] = rej;
    return r;
  }

  const Bba& b = *outcome.fused;
  r["outcome"] = "fused";
  r["coherent"] = b.coherent();
  if (outcome.rule == Rule::Conjunctive || outcome.rule == Rule::Tbm) r["conflict"] = outcome.conflict;
  json masses = json::array();
  for (const auto& f : b.focals())
    masses.push_back(json{{"label", alg.label(f.prop)}, {"key", f.prop.hex()}, {"mass", f.mass}});
  r["masses"] = masses;

  if (options.beliefs) {
    json bel = json::array();
    for (const auto& p : alg.lattice())
      bel.push_back(json{{"label", alg.label(p)}, {"key", p.hex()}, {"belief", belief(b, p)}});
    r["beliefs"] = bel;
  }
  return r;
}

Bba bba_from_report(const json& report, const AlgebraPtr& algebra) {
  std::vector<Focal> focals;
  for (const auto& m : report.at("masses"))
    focals.push_back({algebra->from_hex(m.at("key").get<std::string>()), m.at("mass").get<double>()});
  const bool coherent = report.value("coherent", true);
  return Bba(algebra, std::move(focals), coherent);
}

}  // namespace entrofuse::cli
