#include "entrofuse/cli/model.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

namespace entrofuse::cli {

using nlohmann::json;

const NamedSource& Model::source(std::string_view name) const {
  for (const auto& s : sources)
    if (s.name == name) return s;
  throw InputError("unknown source '" + std::string(name) + "'");
}

namespace {

double parse_mass(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) throw InputError(where + ": mass must be a number or a decimal string");
  const auto s = v.get<std::string>();
  double out = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  if (ec != std::errc() || ptr != end) throw InputError(where + ": '" + s + "' is not a decimal number");
  return out;
}

std::vector<std::string> string_list(const json& doc, const char* key, bool required) {
  std::vector<std::string> out;
  if (!doc.contains(key)) {
    if (required) throw InputError(std::string("model file lacks \"") + key + "\"");
    return out;
  }
  const auto& arr = doc.at(key);
  if (!arr.is_array()) throw InputError(std::string("\"") + key + "\" must be a list of strings");
  for (const auto& item : arr) {
    if (!item.is_string()) throw InputError(std::string("\"") + key + "\" must be a list of strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

}  // namespace

Model parse_model(std::string_view text, const LoadOptions& options) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("model file must hold a JSON object");

  Model model;
  auto atoms = string_list(doc, "atoms", true);
  model.constraints = string_list(doc, "constraints", false);
  ConstraintSet gamma;
  for (std::size_t i = 0; i < model.constraints.size(); ++i) {
    try {
      gamma.push_back(parse_constraint(model.constraints[i], atoms));
    } catch (const ParseError& e) {
      throw InputError("constraints[" + std::to_string(i) + "] \"" + model.constraints[i] + "\": " + e.what());
    }
  }
  try {
    model.algebra = PreBooleanAlgebra::build(std::move(atoms), gamma);
  } catch (const AlgebraError& e) {
    throw InputError(e.what());
  }

  if (doc.contains("sources")) {
    const auto& sources = doc.at("sources");
    if (!sources.is_array()) throw InputError("\"sources\" must be a list");
    for (std::size_t i = 0; i < sources.size(); ++i) {
      const auto& src = sources[i];
      const std::string where = "sources[" + std::to_string(i) + "]";
      if (!src.is_object() || !src.contains("name") || !src.at("name").is_string())
        throw InputError(where + ": each source needs a string \"name\"");
      const auto name = src.at("name").get<std::string>();
      const std::string here = where + " (" + name + ")";
      for (const auto& other : model.sources)
        if (other.name == name) throw InputError(here + ": duplicate source name");
      bool coherent = true;
      if (src.contains("coherent")) {
        if (!src.at("coherent").is_boolean()) throw InputError(here + ": \"coherent\" must be a boolean");
        coherent = src.at("coherent").get<bool>();
      }
      if (!src.contains("masses") || !src.at("masses").is_object())
        throw InputError(here + ": \"masses\" must be an object mapping expressions to masses");

      std::vector<Focal> focals;
      for (const auto& [expr, value] : src.at("masses").items()) {
        const std::string key_where = here + " mass \"" + expr + "\"";
        Proposition p;
        try {
          p = model.algebra->parse(expr);
        } catch (const ParseError& e) {
          throw InputError(key_where + ": " + e.what());
        }
        focals.push_back({std::move(p), parse_mass(value, key_where)});
      }

      std::optional<Bba> bba;
      try {
        bba.emplace(model.algebra, std::move(focals), coherent);
      } catch (const std::invalid_argument& e) {
        throw InputError(here + ": " + e.what());
      }
      if (options.renormalize) {
        try {
          bba.emplace(renormalized(*bba));
        } catch (const std::invalid_argument& e) {
          throw InputError(here + ": " + e.what());
        }
      }
      auto diag = validate(*bba);
      if (!diag.valid()) throw InputError(here + ": " + diag.summary());
      model.sources.push_back({name, std::move(*bba), std::move(diag.warnings)});
    }
  }
  return model;
}

Model load_model(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str(), options);
}

}  // namespace entrofuse::cli
