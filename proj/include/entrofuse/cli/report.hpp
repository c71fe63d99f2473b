#ifndef ENTROFUSE_CLI_REPORT_HPP
#define ENTROFUSE_CLI_REPORT_HPP

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "entrofuse/emr.hpp"

namespace entrofuse::cli {

enum class Rule { Conjunctive, Tbm, Free, Dempster, Emr, EmrApprox };

std::optional<Rule> parse_rule(std::string_view name);
std::string_view rule_name(Rule rule);

/// Result of one rule over an ordered list of sources. Binary rules fold
/// left, so their result depends on the source order.
struct RuleOutcome {
  Rule rule;
  std::optional<Bba> fused;
  std::string rejection_reason;  // set when `fused` is empty
  std::optional<Rejection> rejection;
  std::optional<FusionDiagnostics> diagnostics;
  double conflict = 0.0;  // conjunctive/tbm only

  bool rejected() const { return !fused.has_value(); }
};

/// Throws FusionError for rule preconditions the sources cannot meet.
RuleOutcome apply_rule(Rule rule, std::span<const Bba> sources, const EmrOptions& options = {});

struct ReportOptions {
  bool beliefs = false;
};

nlohmann::json make_report(const RuleOutcome& outcome, const PreBooleanAlgebra& algebra,
                           std::span<const std::string> source_names, const ReportOptions& options = {});

/// Rebuilds the fused bba from a report's `masses` entries using their keys.
Bba bba_from_report(const nlohmann::json& report, const AlgebraPtr& algebra);

}  // namespace entrofuse::cli

#endif  // ENTROFUSE_CLI_REPORT_HPP
