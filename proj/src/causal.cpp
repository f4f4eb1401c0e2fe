#include "sarfocus/causal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>

namespace sarfocus {

namespace {

std::size_t table_size(std::span<const int> cards) {
  std::size_t n = 1;
  for (int c : cards) {
    if (n > kMaxSupport * 16 / static_cast<std::size_t>(c)) return kMaxSupport * 16;  // saturate
    n *= static_cast<std::size_t>(c);
  }
  return n;
}

std::size_t mixed_radix(std::span<const int> values, std::span<const int> cards) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < values.size(); ++i) idx = idx * static_cast<std::size_t>(cards[i]) + values[i];
  return idx;
}

void decode(std::size_t idx, std::span<const int> cards, std::span<int> out) {
  for (std::size_t i = cards.size(); i-- > 0;) {
    out[i] = static_cast<int>(idx % static_cast<std::size_t>(cards[i]));
    idx /= static_cast<std::size_t>(cards[i]);
  }
}

std::string cell_name(const std::string& var, int value) { return var + "=" + std::to_string(value); }

}  // namespace

// Distribution ---------------------------------------------------------------

Distribution::Distribution(std::vector<DiscreteVariable> variables, std::vector<double> probabilities)
    : vars_(std::move(variables)), probs_(std::move(probabilities)) {
  std::vector<int> cards;
  for (const auto& v : vars_) cards.push_back(v.cardinality);
  if (probs_.size() != table_size(cards))
    throw InvalidModel("distribution table has " + std::to_string(probs_.size()) + " entries, expected " +
                       std::to_string(table_size(cards)));
  for (double p : probs_) {
    if (!(p >= 0.0)) throw InvalidModel("distribution has a negative or NaN entry");
  }
  if (std::abs(total() - 1.0) > kNormalizationTolerance) throw InvalidModel("distribution does not sum to 1");
}

std::size_t Distribution::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].name == name) return i;
  }
  throw InvalidModel("unknown variable '" + name + "'");
}

double Distribution::at(std::span<const int> values) const {
  std::vector<int> cards;
  for (const auto& v : vars_) cards.push_back(v.cardinality);
  return probs_[mixed_radix(values, cards)];
}

Distribution Distribution::marginal(std::span<const std::string> names) const {
  std::vector<std::size_t> keep;
  std::vector<DiscreteVariable> kept;
  std::vector<int> kept_cards;
  for (const auto& n : names) {
    keep.push_back(index_of(n));
    kept.push_back(vars_[keep.back()]);
    kept_cards.push_back(kept.back().cardinality);
  }
  std::vector<int> cards;
  for (const auto& v : vars_) cards.push_back(v.cardinality);
  std::vector<double> out(table_size(kept_cards), 0.0);
  std::vector<int> values(vars_.size());
  std::vector<int> sub(keep.size());
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (probs_[i] == 0.0) continue;
    decode(i, cards, values);
    for (std::size_t k = 0; k < keep.size(); ++k) sub[k] = values[keep[k]];
    out[mixed_radix(sub, kept_cards)] += probs_[i];
  }
  return Distribution(std::move(kept), std::move(out));
}

double Distribution::total() const { return std::accumulate(probs_.begin(), probs_.end(), 0.0); }

// DiscreteSCM ----------------------------------------------------------------

DiscreteSCM::DiscreteSCM(std::vector<DiscreteVariable> variables, std::vector<double> exogenous_joint,
                         std::vector<StructuralFunction> functions)
    : vars_(std::move(variables)), u_joint_(std::move(exogenous_joint)) {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    const auto& v = vars_[i];
    if (v.name.empty()) throw InvalidModel("variable name must not be empty");
    if (v.cardinality < 2) throw InvalidModel("variable '" + v.name + "' needs cardinality >= 2");
    if (!by_name_.emplace(v.name, i).second) throw InvalidModel("duplicate variable '" + v.name + "'");
  }

  std::vector<int> u_cards;
  for (auto i : exogenous()) u_cards.push_back(vars_[i].cardinality);
  if (u_joint_.size() != table_size(u_cards))
    throw InvalidModel("exogenous table has " + std::to_string(u_joint_.size()) + " entries, expected " +
                       std::to_string(table_size(u_cards)));
  double sum = 0.0;
  for (double p : u_joint_) {
    if (!(p >= 0.0)) throw InvalidModel("exogenous table has a negative or NaN entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kNormalizationTolerance) throw InvalidModel("exogenous table does not sum to 1");

  std::map<std::string, StructuralFunction> by_target;
  for (auto& f : functions) {
    auto it = by_name_.find(f.target);
    if (it == by_name_.end()) throw InvalidModel("function for unknown variable '" + f.target + "'");
    if (vars_[it->second].kind != VariableKind::endogenous)
      throw InvalidModel("exogenous variable '" + f.target + "' cannot have a function");
    std::vector<int> cards;
    std::set<std::string> seen;
    for (const auto& p : f.parents) {
      auto pit = by_name_.find(p);
      if (pit == by_name_.end()) throw InvalidModel("function '" + f.target + "' has unknown parent '" + p + "'");
      if (!seen.insert(p).second) throw InvalidModel("function '" + f.target + "' lists parent '" + p + "' twice");
      cards.push_back(vars_[pit->second].cardinality);
    }
    if (f.table.size() != table_size(cards))
      throw InvalidModel("function '" + f.target + "' has " + std::to_string(f.table.size()) +
                         " table entries, expected " + std::to_string(table_size(cards)));
    const int card = vars_[it->second].cardinality;
    for (int v : f.table) {
      if (v < 0 || v >= card) throw InvalidModel("function '" + f.target + "' maps to out-of-range value " + std::to_string(v));
    }
    const std::string target = f.target;
    if (!by_target.emplace(target, std::move(f)).second)
      throw InvalidModel("variable '" + target + "' has more than one function");
  }
  for (auto i : endogenous()) {
    auto it = by_target.find(vars_[i].name);
    if (it == by_target.end()) throw InvalidModel("endogenous variable '" + vars_[i].name + "' has no function");
    functions_.push_back(std::move(it->second));
  }

  // Kahn's algorithm over endogenous-to-endogenous edges.
  const auto endo = endogenous();
  std::map<std::size_t, std::size_t> slot;
  for (std::size_t k = 0; k < endo.size(); ++k) slot[endo[k]] = k;
  std::vector<int> indegree(endo.size(), 0);
  std::vector<std::vector<std::size_t>> children(endo.size());
  for (std::size_t k = 0; k < endo.size(); ++k) {
    for (const auto& p : functions_[k].parents) {
      const auto pi = by_name_.at(p);
      if (vars_[pi].kind != VariableKind::endogenous) continue;
      if (pi == endo[k]) throw CyclicModel("variable '" + vars_[pi].name + "' is its own parent");
      children[slot.at(pi)].push_back(k);
      ++indegree[k];
    }
  }
  std::deque<std::size_t> ready;
  for (std::size_t k = 0; k < endo.size(); ++k) {
    if (indegree[k] == 0) ready.push_back(k);
  }
  while (!ready.empty()) {
    const auto k = ready.front();
    ready.pop_front();
    topo_.push_back(endo[k]);
    for (auto c : children[k]) {
      if (--indegree[c] == 0) ready.push_back(c);
    }
  }
  if (topo_.size() != endo.size()) {
    std::string names;
    for (std::size_t k = 0; k < endo.size(); ++k) {
      if (indegree[k] > 0) names += (names.empty() ? "" : ", ") + vars_[endo[k]].name;
    }
    throw CyclicModel("functions induce a cycle through " + names);
  }
}

std::size_t DiscreteSCM::index_of(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw InvalidModel("unknown variable '" + name + "'");
  return it->second;
}

const DiscreteVariable& DiscreteSCM::variable(const std::string& name) const { return vars_[index_of(name)]; }

const StructuralFunction& DiscreteSCM::function_for(const std::string& target) const {
  for (const auto& f : functions_) {
    if (f.target == target) return f;
  }
  throw InvalidModel("no function for '" + target + "'");
}

std::vector<std::size_t> DiscreteSCM::exogenous() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].kind == VariableKind::exogenous) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> DiscreteSCM::endogenous() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].kind == VariableKind::endogenous) out.push_back(i);
  }
  return out;
}

// Dag ------------------------------------------------------------------------

Dag::Dag(std::vector<std::string> nodes, std::vector<std::pair<std::string, std::string>> edges)
    : nodes_(std::move(nodes)), parents_(nodes_.size()), children_(nodes_.size()) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!by_name_.emplace(nodes_[i], i).second) throw InvalidModel("duplicate graph node '" + nodes_[i] + "'");
  }
  for (const auto& [from, to] : edges) {
    const auto f = index_of(from);
    const auto t = index_of(to);
    if (std::find(children_[f].begin(), children_[f].end(), t) != children_[f].end()) continue;
    children_[f].push_back(t);
    parents_[t].push_back(f);
  }
}

std::vector<std::pair<std::string, std::string>> Dag::edges() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t f = 0; f < nodes_.size(); ++f) {
    for (auto t : children_[f]) out.emplace_back(nodes_[f], nodes_[t]);
  }
  return out;
}

bool Dag::has_node(const std::string& name) const { return by_name_.contains(name); }

std::size_t Dag::index_of(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw InvalidModel("unknown graph node '" + name + "'");
  return it->second;
}

bool Dag::d_separated(std::span<const std::string> x, std::span<const std::string> y,
                      std::span<const std::string> z) const {
  const std::size_t n = nodes_.size();
  std::vector<bool> in_z(n, false), in_y(n, false), anc_z(n, false);
  for (const auto& s : z) in_z[index_of(s)] = true;
  for (const auto& s : y) in_y[index_of(s)] = true;

  // Ancestors of Z, including Z: colliders in this set are opened.
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < n; ++i) {
    if (in_z[i]) stack.push_back(i);
  }
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    if (anc_z[v]) continue;
    anc_z[v] = true;
    for (auto p : parents_[v]) stack.push_back(p);
  }

  // Reachability over (node, arrived-from-child) states.
  std::vector<std::array<bool, 2>> visited(n, {false, false});
  std::vector<std::pair<std::size_t, bool>> frontier;
  for (const auto& s : x) frontier.emplace_back(index_of(s), true);
  while (!frontier.empty()) {
    const auto [v, up] = frontier.back();
    frontier.pop_back();
    if (visited[v][up]) continue;
    visited[v][up] = true;
    if (!in_z[v] && in_y[v]) return false;
    if (up) {
      if (in_z[v]) continue;
      for (auto p : parents_[v]) frontier.emplace_back(p, true);
      for (auto c : children_[v]) frontier.emplace_back(c, false);
    } else {
      if (!in_z[v]) {
        for (auto c : children_[v]) frontier.emplace_back(c, false);
      }
      if (anc_z[v]) {
        for (auto p : parents_[v]) frontier.emplace_back(p, true);
      }
    }
  }
  return true;
}

bool Dag::has_directed_path(const std::string& from, const std::string& to, std::span<const std::string> avoid) const {
  std::vector<bool> blocked(nodes_.size(), false);
  for (const auto& s : avoid) blocked[index_of(s)] = true;
  const auto target = index_of(to);
  std::vector<bool> seen(nodes_.size(), false);
  std::vector<std::size_t> stack{index_of(from)};
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    if (seen[v]) continue;
    seen[v] = true;
    for (auto c : children_[v]) {
      if (c == target) return true;
      if (!blocked[c]) stack.push_back(c);
    }
  }
  return false;
}

Dag Dag::without_outgoing(const std::string& node) const {
  const auto skip = index_of(node);
  auto all = edges();
  std::erase_if(all, [&](const auto& e) { return e.first == nodes_[skip]; });
  return Dag(nodes_, std::move(all));
}

Dag induced_graph(const DiscreteSCM& m) {
  std::vector<std::string> nodes;
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& v : m.variables()) nodes.push_back(v.name);
  for (const auto& f : m.functions()) {
    for (const auto& p : f.parents) edges.emplace_back(p, f.target);
  }

  // An exogenous variable is left alone when the table factorizes as
  // P(u_i) * P(rest); the others share one latent parent.
  const auto u = m.exogenous();
  std::vector<int> cards;
  for (auto i : u) cards.push_back(m.variables()[i].cardinality);
  const auto& joint = m.exogenous_joint();
  std::vector<std::string> coupled;
  if (u.size() >= 2) {
    std::vector<int> values(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
      const std::size_t card = static_cast<std::size_t>(cards[k]);
      std::vector<double> own(card, 0.0);
      std::vector<double> rest(joint.size() / card, 0.0);
      auto rest_index = [&](std::span<const int> vals) {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < vals.size(); ++j) {
          if (j != k) idx = idx * static_cast<std::size_t>(cards[j]) + vals[j];
        }
        return idx;
      };
      for (std::size_t i = 0; i < joint.size(); ++i) {
        decode(i, cards, values);
        own[values[k]] += joint[i];
        rest[rest_index(values)] += joint[i];
      }
      bool independent = true;
      for (std::size_t i = 0; i < joint.size() && independent; ++i) {
        decode(i, cards, values);
        independent = std::abs(joint[i] - own[values[k]] * rest[rest_index(values)]) <= kNormalizationTolerance;
      }
      if (!independent) coupled.push_back(m.variables()[u[k]].name);
    }
  }
  if (!coupled.empty()) {
    std::string latent = "latent(";
    for (std::size_t i = 0; i < coupled.size(); ++i) latent += (i ? "," : "") + coupled[i];
    latent += ")";
    nodes.push_back(latent);
    for (const auto& c : coupled) edges.emplace_back(latent, c);
  }
  return Dag(std::move(nodes), std::move(edges));
}

std::vector<std::string> FrontDoorReport::failures() const {
  std::vector<std::string> out;
  if (!intercepts_all_paths) out.emplace_back("(i) a directed path from cause to effect bypasses the mediator");
  if (!no_backdoor_cause_mediator) out.emplace_back("(ii) an unblocked backdoor path links cause and mediator");
  if (!mediator_backdoor_blocked)
    out.emplace_back("(iii) a backdoor path from mediator to effect is not blocked by the cause");
  return out;
}

FrontDoorReport check_front_door(const Dag& g, const std::string& s, const std::string& m, const std::string& a) {
  FrontDoorReport r;
  const std::string mediator[] = {m};
  const std::string cause[] = {s};
  const std::string effect[] = {a};
  r.intercepts_all_paths = !g.has_directed_path(s, a, mediator);
  r.no_backdoor_cause_mediator = g.without_outgoing(s).d_separated(cause, mediator, {});
  r.mediator_backdoor_blocked = g.without_outgoing(m).d_separated(mediator, effect, cause);
  return r;
}

// Enumeration ----------------------------------------------------------------

Distribution observational_joint(const DiscreteSCM& m) {
  const auto& vars = m.variables();
  const auto u = m.exogenous();
  const auto v = m.endogenous();
  std::vector<int> u_cards, v_cards;
  for (auto i : u) u_cards.push_back(vars[i].cardinality);
  for (auto i : v) v_cards.push_back(vars[i].cardinality);
  const std::size_t v_support = table_size(v_cards);
  if (v_support > kMaxSupport)
    throw SupportTooLarge("endogenous support exceeds " + std::to_string(kMaxSupport) + " cells");
  if (m.exogenous_joint().size() > kMaxSupport)
    throw SupportTooLarge("exogenous support exceeds " + std::to_string(kMaxSupport) + " cells");

  // Resolve every function's parent indices and radices once.
  struct Compiled {
    std::size_t target;
    std::vector<std::size_t> parents;
    std::vector<int> cards;
    const std::vector<int>* table;
  };
  std::vector<Compiled> order;
  for (auto t : m.topological_order()) {
    const auto& f = m.function_for(vars[t].name);
    Compiled c{t, {}, {}, &f.table};
    for (const auto& p : f.parents) {
      c.parents.push_back(m.index_of(p));
      c.cards.push_back(vars[c.parents.back()].cardinality);
    }
    order.push_back(std::move(c));
  }

  std::vector<double> out(v_support, 0.0);
  std::vector<int> values(vars.size(), 0);
  std::vector<int> u_values(u.size());
  std::vector<int> scratch;
  std::vector<int> v_values(v.size());
  const auto& joint = m.exogenous_joint();
  for (std::size_t ui = 0; ui < joint.size(); ++ui) {
    if (joint[ui] == 0.0) continue;
    decode(ui, u_cards, u_values);
    for (std::size_t k = 0; k < u.size(); ++k) values[u[k]] = u_values[k];
    for (const auto& c : order) {
      scratch.resize(c.parents.size());
      for (std::size_t k = 0; k < c.parents.size(); ++k) scratch[k] = values[c.parents[k]];
      values[c.target] = (*c.table)[mixed_radix(scratch, c.cards)];
    }
    for (std::size_t k = 0; k < v.size(); ++k) v_values[k] = values[v[k]];
    out[mixed_radix(v_values, v_cards)] += joint[ui];
  }
  std::vector<DiscreteVariable> v_vars;
  for (auto i : v) v_vars.push_back(vars[i]);
  return Distribution(std::move(v_vars), std::move(out));
}

DiscreteSCM intervene(const DiscreteSCM& m, std::span<const std::pair<std::string, int>> assignments) {
  std::map<std::string, int> fixed;
  for (const auto& [name, value] : assignments) {
    const auto& var = m.variable(name);
    if (var.kind != VariableKind::endogenous)
      throw CannotInterveneExogenous("cannot intervene on exogenous variable '" + name + "'");
    if (value < 0 || value >= var.cardinality)
      throw InvalidModel("do(" + cell_name(name, value) + ") is out of range");
    fixed[name] = value;
  }
  std::vector<StructuralFunction> functions = m.functions();
  for (auto& f : functions) {
    auto it = fixed.find(f.target);
    if (it == fixed.end()) continue;
    f.parents.clear();
    f.table = {it->second};
  }
  return DiscreteSCM(m.variables(), m.exogenous_joint(), std::move(functions));
}

Eigen::MatrixXd controlled_direct_effect(const DiscreteSCM& m, const std::string& cause, const std::string& effect,
                                         std::span<const std::pair<std::string, int>> held) {
  const auto& cause_var = m.variable(cause);
  const auto& effect_var = m.variable(effect);
  if (cause_var.kind != VariableKind::endogenous)
    throw CannotInterveneExogenous("cause '" + cause + "' must be endogenous");
  if (effect_var.kind != VariableKind::endogenous) throw InvalidModel("effect '" + effect + "' must be endogenous");

  const auto u = m.exogenous();
  std::vector<int> u_cards;
  for (auto i : u) u_cards.push_back(m.variables()[i].cardinality);
  std::vector<double> joint = m.exogenous_joint();
  std::vector<std::pair<std::string, int>> base;
  std::vector<int> values(u.size());
  for (const auto& [name, value] : held) {
    if (name == cause) throw InvalidModel("the cause cannot also be held");
    const auto idx = m.index_of(name);
    const auto& var = m.variables()[idx];
    if (value < 0 || value >= var.cardinality) throw InvalidModel("held value " + cell_name(name, value) + " is out of range");
    if (var.kind == VariableKind::endogenous) {
      base.emplace_back(name, value);
      continue;
    }
    const auto k = static_cast<std::size_t>(std::find(u.begin(), u.end(), idx) - u.begin());
    for (std::size_t i = 0; i < joint.size(); ++i) {
      decode(i, u_cards, values);
      if (values[k] != value) joint[i] = 0.0;
    }
  }
  const double mass = std::accumulate(joint.begin(), joint.end(), 0.0);
  if (mass <= 0.0) throw ZeroProbabilityConditioning("held exogenous configuration has probability 0");
  for (double& p : joint) p /= mass;
  const DiscreteSCM conditioned(m.variables(), std::move(joint), m.functions());

  Eigen::MatrixXd out(cause_var.cardinality, effect_var.cardinality);
  const std::string effect_name[] = {effect};
  for (int c = 0; c < cause_var.cardinality; ++c) {
    auto assignments = base;
    assignments.emplace_back(cause, c);
    const auto dist = observational_joint(intervene(conditioned, assignments)).marginal(effect_name);
    for (int e = 0; e < effect_var.cardinality; ++e) out(c, e) = dist.probabilities()[static_cast<std::size_t>(e)];
  }
  return out;
}

Eigen::MatrixXd total_effect(const DiscreteSCM& m, const std::string& cause, const std::string& effect) {
  return controlled_direct_effect(m, cause, effect, {});
}

// Front-door identification ----------------------------------------------------

std::vector<double> front_door_estimate(const Distribution& obs, const std::string& s, const std::string& m,
                                        const std::string& a, int s_val) {
  const std::string names[] = {s, m, a};
  const auto joint = obs.marginal(names);
  const int ns = joint.variables()[0].cardinality;
  const int nm = joint.variables()[1].cardinality;
  const int na = joint.variables()[2].cardinality;
  if (s_val < 0 || s_val >= ns) throw InvalidModel("do(" + cell_name(s, s_val) + ") is out of range");
  const auto& p = joint.probabilities();
  auto at = [&](int si, int mi, int ai) { return p[(static_cast<std::size_t>(si) * nm + mi) * na + ai]; };

  std::vector<double> p_s(ns, 0.0);
  std::vector<std::vector<double>> p_sm(ns, std::vector<double>(nm, 0.0));
  for (int si = 0; si < ns; ++si) {
    for (int mi = 0; mi < nm; ++mi) {
      for (int ai = 0; ai < na; ++ai) p_sm[si][mi] += at(si, mi, ai);
      p_s[si] += p_sm[si][mi];
    }
  }
  for (int si = 0; si < ns; ++si) {
    if (!(p_s[si] > 0.0)) throw PositivityViolation("P(" + cell_name(s, si) + ") = 0");
  }

  std::vector<double> out(na, 0.0);
  for (int mi = 0; mi < nm; ++mi) {
    const double p_m_given_s = p_sm[s_val][mi] / p_s[s_val];
    if (p_m_given_s == 0.0) continue;
    for (int si = 0; si < ns; ++si) {
      if (!(p_sm[si][mi] > 0.0))
        throw PositivityViolation("P(" + cell_name(m, mi) + ", " + cell_name(s, si) + ") = 0");
      for (int ai = 0; ai < na; ++ai) out[ai] += p_m_given_s * (at(si, mi, ai) / p_sm[si][mi]) * p_s[si];
    }
  }
  return out;
}

Eigen::MatrixXd front_door_table(const Distribution& obs, const std::string& s, const std::string& m,
                                 const std::string& a) {
  const int ns = obs.variables()[obs.index_of(s)].cardinality;
  const int na = obs.variables()[obs.index_of(a)].cardinality;
  Eigen::MatrixXd out(ns, na);
  for (int si = 0; si < ns; ++si) {
    const auto row = front_door_estimate(obs, s, m, a, si);
    for (int ai = 0; ai < na; ++ai) out(si, ai) = row[static_cast<std::size_t>(ai)];
  }
  return out;
}

// Built-in model ---------------------------------------------------------------

DiscreteSCM thought_experiment_scm() {
  using K = VariableKind;
  std::vector<DiscreteVariable> vars{
      {"U", 2, K::exogenous},   {"E_S", 2, K::exogenous}, {"E_M", 2, K::exogenous},
      {"E_B", 2, K::exogenous}, {"E_A", 2, K::exogenous}, {"S", 2, K::endogenous},
      {"M", 2, K::endogenous},  {"ArMe", 2, K::endogenous}, {"A", 2, K::endogenous},
  };
  const double p_one[] = {0.5, 0.2, 0.1, 0.75, 0.3};  // P(=1) for U, E_S, E_M, E_B, E_A
  std::vector<double> joint(32);
  for (std::size_t i = 0; i < joint.size(); ++i) {
    double p = 1.0;
    for (int k = 0; k < 5; ++k) {
      const bool one = (i >> (4 - k)) & 1u;
      p *= one ? p_one[k] : 1.0 - p_one[k];
    }
    joint[i] = p;
  }

  // A over (M, ArMe, U, E_A): site m1 (M=0) needs the methyl, site m2 rejects
  // it; the confounded assay flips the readout when U and E_A are both set.
  std::vector<int> a_table(16);
  for (int i = 0; i < 16; ++i) {
    const int mech = (i >> 3) & 1, arme = (i >> 2) & 1, u = (i >> 1) & 1, e = i & 1;
    const int rule = mech == 0 ? arme : 1 - arme;
    a_table[static_cast<std::size_t>(i)] = rule ^ (u & e);
  }
  std::vector<StructuralFunction> functions{
      {"S", {"U", "E_S"}, {0, 1, 1, 0}},
      {"M", {"S", "E_M"}, {0, 1, 1, 0}},
      {"ArMe", {"E_B"}, {0, 1}},
      {"A", {"M", "ArMe", "U", "E_A"}, std::move(a_table)},
  };
  return DiscreteSCM(std::move(vars), std::move(joint), std::move(functions));
}

}  // namespace sarfocus
