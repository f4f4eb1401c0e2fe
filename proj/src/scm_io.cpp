#include "sarfocus/scm_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sarfocus {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ScmFormatError(where + ": missing \"" + key + "\"");
  return obj.at(key);
}

std::vector<double> product_table(const std::vector<std::vector<double>>& marginals) {
  std::vector<double> out{1.0};
  for (const auto& m : marginals) {
    std::vector<double> next;
    next.reserve(out.size() * m.size());
    for (double a : out) {
      for (double b : m) next.push_back(a * b);
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

ScmSpec parse_scm_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScmFormatError(std::string("invalid JSON: ") + e.what());
  }
  try {
    std::vector<DiscreteVariable> vars;
    const auto& jvars = require(doc, "variables", "spec");
    if (!jvars.is_array()) throw ScmFormatError("\"variables\" must be an array");
    for (std::size_t i = 0; i < jvars.size(); ++i) {
      const std::string where = "variables[" + std::to_string(i) + "]";
      const auto& jv = jvars[i];
      DiscreteVariable v;
      v.name = require(jv, "name", where).get<std::string>();
      v.cardinality = require(jv, "cardinality", where).get<int>();
      const std::string kind = jv.value("kind", std::string("endogenous"));
      if (kind == "exogenous") {
        v.kind = VariableKind::exogenous;
      } else if (kind == "endogenous") {
        v.kind = VariableKind::endogenous;
      } else {
        throw ScmFormatError(where + ": kind must be \"exogenous\" or \"endogenous\"");
      }
      vars.push_back(std::move(v));
    }

    std::vector<double> joint;
    const auto& jexo = require(doc, "exogenous", "spec");
    if (jexo.contains("joint")) {
      joint = jexo.at("joint").get<std::vector<double>>();
    } else if (jexo.contains("marginals")) {
      const auto& jm = jexo.at("marginals");
      std::vector<std::vector<double>> marginals;
      std::size_t n_exogenous = 0;
      for (const auto& v : vars) {
        if (v.kind != VariableKind::exogenous) continue;
        ++n_exogenous;
        if (!jm.contains(v.name)) throw ScmFormatError("exogenous.marginals: missing \"" + v.name + "\"");
        auto p = jm.at(v.name).get<std::vector<double>>();
        if (p.size() != static_cast<std::size_t>(v.cardinality))
          throw ScmFormatError("exogenous.marginals." + v.name + ": expected " + std::to_string(v.cardinality) +
                               " probabilities");
        marginals.push_back(std::move(p));
      }
      if (jm.size() != n_exogenous) throw ScmFormatError("exogenous.marginals lists a non-exogenous variable");
      joint = product_table(marginals);
    } else {
      throw ScmFormatError("exogenous: expected \"joint\" or \"marginals\"");
    }

    std::vector<StructuralFunction> functions;
    const auto& jf = require(doc, "functions", "spec");
    if (!jf.is_array()) throw ScmFormatError("\"functions\" must be an array");
    for (std::size_t i = 0; i < jf.size(); ++i) {
      const std::string where = "functions[" + std::to_string(i) + "]";
      StructuralFunction f;
      f.target = require(jf[i], "target", where).get<std::string>();
      f.parents = jf[i].value("parents", std::vector<std::string>{});
      f.table = require(jf[i], "table", where).get<std::vector<int>>();
      functions.push_back(std::move(f));
    }

    FrontDoorQuery query;
    if (doc.contains("query")) {
      const auto& q = doc.at("query");
      query.cause = q.value("cause", query.cause);
      query.mediator = q.value("mediator", query.mediator);
      query.effect = q.value("effect", query.effect);
    }
    ScmSpec spec{DiscreteSCM(std::move(vars), std::move(joint), std::move(functions)), std::move(query)};
    for (const auto* name : {&spec.query.cause, &spec.query.mediator, &spec.query.effect}) {
      if (spec.model.variable(*name).kind != VariableKind::endogenous)
        throw ScmFormatError("query variable '" + *name + "' must be endogenous");
    }
    return spec;
  } catch (const json::exception& e) {
    throw ScmFormatError(std::string("malformed SCM spec: ") + e.what());
  } catch (const InvalidModel& e) {
    throw ScmFormatError(e.what());
  }
}

ScmSpec load_scm(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScmFormatError(path.string() + ": cannot open file");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_scm_json(text.str());
  } catch (const ScmFormatError& e) {
    throw ScmFormatError(path.string() + ": " + e.what());
  }
}

std::string scm_to_json(const DiscreteSCM& m, const FrontDoorQuery& query) {
  json doc;
  doc["variables"] = json::array();
  for (const auto& v : m.variables()) {
    doc["variables"].push_back({{"name", v.name},
                                {"cardinality", v.cardinality},
                                {"kind", v.kind == VariableKind::exogenous ? "exogenous" : "endogenous"}});
  }
  doc["exogenous"] = {{"joint", m.exogenous_joint()}};
  doc["functions"] = json::array();
  for (const auto& f : m.functions()) {
    doc["functions"].push_back({{"target", f.target}, {"parents", f.parents}, {"table", f.table}});
  }
  doc["query"] = {{"cause", query.cause}, {"mediator", query.mediator}, {"effect", query.effect}};
  return doc.dump(2) + "\n";
}

}  // namespace sarfocus
