#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sarfocus/causal.hpp"

namespace sarfocus {

struct FrontDoorQuery {
  std::string cause = "S";
  std::string mediator = "M";
  std::string effect = "A";
};

struct ScmSpec {
  DiscreteSCM model;
  FrontDoorQuery query;
};

class ScmFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// SCM specification file:
///
///   {
///     "variables": [{"name": "U", "cardinality": 2, "kind": "exogenous"}, ...],
///     "exogenous": {"marginals": {"U": [0.5, 0.5], ...}}   // independent U
///               or {"joint": [...]}                         // over U in declaration order
///     "functions": [{"target": "S", "parents": ["U"], "table": [0, 1]}, ...],
///     "query": {"cause": "S", "mediator": "M", "effect": "A"}  // optional
///   }
///
/// Function tables are indexed in mixed radix over the parents, first parent
/// most significant. "kind" defaults to "endogenous".
ScmSpec parse_scm_json(std::string_view text);
ScmSpec load_scm(const std::filesystem::path& path);
std::string scm_to_json(const DiscreteSCM& m, const FrontDoorQuery& query = {});

}  // namespace sarfocus
