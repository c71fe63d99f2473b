#include "entrofuse/cli/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "entrofuse/cli/model.hpp"
#include "entrofuse/cli/report.hpp"

namespace entrofuse::cli {

namespace {

struct CommonArgs {
  std::string model_path;
  std::string sources;
  double tol = 0.0;
  std::size_t max_iter = 0;
  bool renormalize = false;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("model", a.model_path, "Model file (JSON)")->required();
  cmd->add_option("--sources", a.sources, "Comma-separated source names (default: all, in file order)");
  cmd->add_option("--tol", a.tol, "Optimality certificate tolerance for the entropy solver");
  cmd->add_option("--max-iter", a.max_iter, "Iteration cap for the entropy solver");
  cmd->add_flag("--renormalize", a.renormalize, "Rescale each source to total mass 1 before validation");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

struct Selection {
  std::vector<std::string> names;
  std::vector<Bba> bbas;
};

Selection select_sources(const Model& model, const std::string& list) {
  Selection s;
  if (list.empty()) {
    for (const auto& src : model.sources) s.names.push_back(src.name);
  } else {
    s.names = split_list(list);
  }
  for (const auto& n : s.names) s.bbas.push_back(model.source(n).bba);
  if (s.bbas.size() < 2) throw InputError("at least two sources are needed");
  return s;
}

EmrOptions emr_options(const CommonArgs& a) {
  EmrOptions o;
  if (a.tol > 0.0) o.solver.certificate_tol = a.tol;
  if (a.max_iter > 0) o.solver.max_iterations = a.max_iter;
  return o;
}

void print_warnings(const Model& model, std::ostream& err) {
  for (const auto& w : model.algebra->warnings()) err << "warning: " << w << "\n";
  for (const auto& s : model.sources)
    for (const auto& w : s.warnings) err << "warning: source " << s.name << ": " << w << "\n";
}

int cmd_algebra(const CommonArgs& a, bool check_insulation, std::ostream& out, std::ostream& err) {
  const Model model = load_model(a.model_path, {a.renormalize});
  print_warnings(model, err);
  const auto& alg = *model.algebra;
  out << alg.lattice().size() << " elements\n";
  if (check_insulation) out << "insulation: " << (alg.insulated() ? "true" : "false") << "\n";
  for (const auto& p : alg.lattice()) out << "  " << alg.label(p) << "\n";
  return kExitOk;
}

int cmd_fuse(const CommonArgs& a, const std::string& rule_text, const std::string& out_path, bool beliefs,
             std::ostream& out, std::ostream& err) {
  const auto rule = parse_rule(rule_text);
  if (!rule) throw InputError("unknown rule '" + rule_text + "'");
  const Model model = load_model(a.model_path, {a.renormalize});
  print_warnings(model, err);
  const Selection sel = select_sources(model, a.sources);
  const RuleOutcome outcome = apply_rule(*rule, sel.bbas, emr_options(a));
  const auto report = make_report(outcome, *model.algebra, sel.names, {beliefs});
  const std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(out_path);
    if (!f) throw InputError("cannot write '" + out_path + "'");
    f << text;
  }
  return outcome.rejected() ? kExitRejected : kExitOk;
}

std::string fixed(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << v;
  return os.str();
}

int cmd_compare(const CommonArgs& a, const std::string& rules_text, std::ostream& out, std::ostream& err) {
  const Model model = load_model(a.model_path, {a.renormalize});
  print_warnings(model, err);
  const Selection sel = select_sources(model, a.sources);
  const auto& alg = *model.algebra;

  std::vector<RuleOutcome> outcomes;
  std::vector<std::string> headers;
  for (const auto& name : split_list(rules_text)) {
    const auto rule = parse_rule(name);
    if (!rule) throw InputError("unknown rule '" + name + "'");
    outcomes.push_back(apply_rule(*rule, sel.bbas, emr_options(a)));
    headers.push_back(name);
  }
  if (outcomes.empty()) throw InputError("no rules given");

  std::map<Proposition, std::vector<std::string>> rows;
  for (std::size_t c = 0; c < outcomes.size(); ++c) {
    if (!outcomes[c].fused) continue;
    for (const auto& f : outcomes[c].fused->focals()) rows.try_emplace(f.prop, outcomes.size(), "");
  }
  for (auto& [p, cells] : rows)
    for (std::size_t c = 0; c < outcomes.size(); ++c)
      cells[c] = outcomes[c].fused ? fixed(outcomes[c].fused->mass(p)) : "REJECTED";

  std::size_t label_w = std::string("proposition").size();
  for (const auto& [p, cells] : rows) label_w = std::max(label_w, alg.label(p).size());
  std::vector<std::size_t> col_w;
  for (const auto& h : headers) col_w.push_back(std::max<std::size_t>(h.size(), 8));

  out << std::left << std::setw(static_cast<int>(label_w)) << "proposition";
  for (std::size_t c = 0; c < headers.size(); ++c)
    out << "  " << std::right << std::setw(static_cast<int>(col_w[c])) << headers[c];
  out << "\n";
  for (const auto& [p, cells] : rows) {
    out << std::left << std::setw(static_cast<int>(label_w)) << alg.label(p);
    for (std::size_t c = 0; c < cells.size(); ++c)
      out << "  " << std::right << std::setw(static_cast<int>(col_w[c])) << cells[c];
    out << "\n";
  }
  if (rows.empty()) {
    out << std::left << std::setw(static_cast<int>(label_w)) << "-";
    for (std::size_t c = 0; c < headers.size(); ++c)
      out << "  " << std::right << std::setw(static_cast<int>(col_w[c])) << "REJECTED";
    out << "\n";
  }
  return kExitOk;
}

int cmd_check(const CommonArgs& a, std::ostream& out, std::ostream& err) {
  const Model model = load_model(a.model_path, {a.renormalize});
  print_warnings(model, err);
  const Selection sel = select_sources(model, a.sources);
  const auto report = emr_feasible(sel.bbas, emr_options(a));
  const auto& alg = *model.algebra;
  out << "feasible: " << (report.feasible ? "yes" : "no") << "\n";
  out << "phase1_residual: " << report.phase1_residual << "\n";
  if (report.violation) {
    out << "enhancement_bound: violated by {";
    for (std::size_t i = 0; i < report.violation->family.size(); ++i)
      out << (i ? ", " : "") << alg.label(report.violation->family[i]);
    out << "} with sum " << report.violation->bound << " > 1\n";
  } else {
    out << "enhancement_bound: ok\n";
  }
  return report.feasible ? kExitOk : kExitRejected;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Belief fusion over constrained pre-Boolean algebras", "entrofuse"};
  app.require_subcommand(1);

  CommonArgs algebra_args, fuse_args, compare_args, check_args;
  bool check_insulation = false;
  std::string rule = "emr", out_path, rules = "dempster,emr";
  bool beliefs = false;

  auto* algebra_cmd = app.add_subcommand("algebra", "List the lattice of a model");
  add_common(algebra_cmd, algebra_args);
  algebra_cmd->add_flag("--check-insulation", check_insulation, "Report whether the insulation property holds");

  auto* fuse_cmd = app.add_subcommand("fuse", "Fuse sources with one rule and write a JSON report");
  add_common(fuse_cmd, fuse_args);
  fuse_cmd->add_option("--rule", rule, "conjunctive, tbm, free, dempster, emr or emr-approx");
  fuse_cmd->add_option("--out", out_path, "Write the report here instead of stdout");
  fuse_cmd->add_flag("--beliefs", beliefs, "Include the belief of every lattice member");

  auto* compare_cmd = app.add_subcommand("compare", "Tabulate several rules side by side");
  add_common(compare_cmd, compare_args);
  compare_cmd->add_option("--rules", rules, "Comma-separated rule names");

  auto* check_cmd = app.add_subcommand("check", "Decide whether entropy maximizing fusion is feasible");
  add_common(check_cmd, check_args);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (*algebra_cmd) return cmd_algebra(algebra_args, check_insulation, out, err);
    if (*fuse_cmd) return cmd_fuse(fuse_args, rule, out_path, beliefs, out, err);
    if (*compare_cmd) return cmd_compare(compare_args, rules, out, err);
    if (*check_cmd) return cmd_check(check_args, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const FusionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace entrofuse::cli
