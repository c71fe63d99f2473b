#ifndef ENTROFUSE_CLI_MODEL_HPP
#define ENTROFUSE_CLI_MODEL_HPP

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "entrofuse/belief.hpp"

namespace entrofuse::cli {

/// Malformed model file or arguments; maps to exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NamedSource {
  std::string name;
  Bba bba;
  std::vector<std::string> warnings;
};

struct Model {
  AlgebraPtr algebra;
  std::vector<std::string> constraints;
  std::vector<NamedSource> sources;

  const NamedSource& source(std::string_view name) const;
};

struct LoadOptions {
  bool renormalize = false;
};

/// Model files are JSON documents:
///
///   {
///     "atoms": ["a", "b", "c"],
///     "constraints": ["a&b = bot", "a|b|c = top"],
///     "sources": [
///       {"name": "m1", "coherent": true, "masses": {"a": "0.3", "top": "0.7"}}
///     ]
///   }
///
/// Masses may be JSON numbers or decimal strings; `coherent` defaults to true.
Model parse_model(std::string_view text, const LoadOptions& options = {});
Model load_model(const std::filesystem::path& path, const LoadOptions& options = {});

}  // namespace entrofuse::cli

#endif  // ENTROFUSE_CLI_MODEL_HPP
