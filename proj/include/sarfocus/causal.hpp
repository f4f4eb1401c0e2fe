#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sarfocus {

enum class VariableKind { exogenous, endogenous };

struct DiscreteVariable {
  std::string name;
  int cardinality = 2;
  VariableKind kind = VariableKind::endogenous;
};

/// Deterministic f_i. Parent tuples index the table in mixed radix with the
/// first parent most significant.
struct StructuralFunction {
  std::string target;
  std::vector<std::string> parents;
  std::vector<int> table;
};

class CausalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class InvalidModel : public CausalError {
 public:
  using CausalError::CausalError;
};
class CyclicModel : public InvalidModel {
 public:
  using InvalidModel::InvalidModel;
};
class SupportTooLarge : public CausalError {
 public:
  using CausalError::CausalError;
};
class CannotInterveneExogenous : public CausalError {
 public:
  using CausalError::CausalError;
};
class ZeroProbabilityConditioning : public CausalError {
 public:
  using CausalError::CausalError;
};
class PositivityViolation : public CausalError {
 public:
  using CausalError::CausalError;
};

inline constexpr double kNormalizationTolerance = 1e-12;
inline constexpr std::size_t kMaxSupport = 10'000'000;

/// A probability table over named discrete variables, mixed radix with the
/// first variable most significant.
class Distribution {
 public:
  Distribution() = default;
  Distribution(std::vector<DiscreteVariable> variables, std::vector<double> probabilities);

  const std::vector<DiscreteVariable>& variables() const noexcept { return vars_; }
  const std::vector<double>& probabilities() const noexcept { return probs_; }
  std::size_t index_of(const std::string& name) const;

  /// Probability of one full assignment, values in variable order.
  double at(std::span<const int> values) const;
  Distribution marginal(std::span<const std::string> names) const;
  double total() const;

 private:
  std::vector<DiscreteVariable> vars_;
  std::vector<double> probs_;
};

/// C = <U, V, F> with a full joint table over U.
class DiscreteSCM {
 public:
  /// `exogenous_joint` is indexed over the exogenous variables in declaration
  /// order. Throws InvalidModel (or CyclicModel) on any violated invariant.
  DiscreteSCM(std::vector<DiscreteVariable> variables, std::vector<double> exogenous_joint,
              std::vector<StructuralFunction> functions);

  const std::vector<DiscreteVariable>& variables() const noexcept { return vars_; }
  const std::vector<double>& exogenous_joint() const noexcept { return u_joint_; }
  const std::vector<StructuralFunction>& functions() const noexcept { return functions_; }

  std::size_t index_of(const std::string& name) const;
  const DiscreteVariable& variable(const std::string& name) const;
  const StructuralFunction& function_for(const std::string& target) const;
  std::vector<std::size_t> exogenous() const;
  std::vector<std::size_t> endogenous() const;
  /// Endogenous variables ordered so that every parent precedes its child.
  const std::vector<std::size_t>& topological_order() const noexcept { return topo_; }

 private:
  std::vector<DiscreteVariable> vars_;
  std::vector<double> u_joint_;
  std::vector<StructuralFunction> functions_;  // parallel to endogenous(), in declaration order
  std::map<std::string, std::size_t> by_name_;
  std::vector<std::size_t> topo_;
};

/// A named DAG. Nodes are listed once; edges are (from, to) pairs.
class Dag {
 public:
  Dag() = default;
  Dag(std::vector<std::string> nodes, std::vector<std::pair<std::string, std::string>> edges);

  const std::vector<std::string>& nodes() const noexcept { return nodes_; }
  std::vector<std::pair<std::string, std::string>> edges() const;
  bool has_node(const std::string& name) const;
  std::size_t index_of(const std::string& name) const;

  /// True iff every path between a node of `x` and a node of `y` is blocked
  /// by `z`.
  bool d_separated(std::span<const std::string> x, std::span<const std::string> y,
                   std::span<const std::string> z) const;
  /// True iff a directed path from `from` to `to` avoids every node in `avoid`.
  bool has_directed_path(const std::string& from, const std::string& to,
                         std::span<const std::string> avoid = {}) const;
  /// Copy with all edges leaving `node` removed.
  Dag without_outgoing(const std::string& node) const;

 private:
  std::vector<std::string> nodes_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
  std::map<std::string, std::size_t> by_name_;
};

/// Graph of the model: one node per variable, an edge per function argument.
/// Exogenous variables that are not independent of the rest of U get a shared
/// latent parent named "latent(...)" so that d-separation sees their coupling.
Dag induced_graph(const DiscreteSCM& m);

struct FrontDoorReport {
  bool intercepts_all_paths = false;     // (i)
  bool no_backdoor_cause_mediator = false;  // (ii)
  bool mediator_backdoor_blocked = false;   // (iii)

  bool holds() const noexcept {
    return intercepts_all_paths && no_backdoor_cause_mediator && mediator_backdoor_blocked;
  }
  /// "(i) ...", "(ii) ...", "(iii) ..." for each failing condition; empty when it holds.
  std::vector<std::string> failures() const;
};

FrontDoorReport check_front_door(const Dag& g, const std::string& s, const std::string& m, const std::string& a);

Distribution observational_joint(const DiscreteSCM& m);

/// do(assignments): the listed functions become constants. Later entries for
/// the same variable win.
DiscreteSCM intervene(const DiscreteSCM& m, std::span<const std::pair<std::string, int>> assignments);

/// P(effect | do(cause)); row c holds the distribution of effect under do(cause = c).
Eigen::MatrixXd total_effect(const DiscreteSCM& m, const std::string& cause, const std::string& effect);

/// P(effect | do(cause), held): endogenous held variables are intervened on,
/// exogenous ones condition the exogenous table.
Eigen::MatrixXd controlled_direct_effect(const DiscreteSCM& m, const std::string& cause, const std::string& effect,
                                         std::span<const std::pair<std::string, int>> held);

/// P(a | do(s = s_val)) = sum_m P(m|s_val) sum_s' P(a|m,s') P(s'), evaluated on
/// the observational table.
std::vector<double> front_door_estimate(const Distribution& obs, const std::string& s, const std::string& m,
                                        const std::string& a, int s_val);
/// All rows of front_door_estimate stacked like total_effect.
Eigen::MatrixXd front_door_table(const Distribution& obs, const std::string& s, const std::string& m,
                                 const std::string& a);

/// The scaffold/mechanism/activity model behind the hypothetical data set:
/// U confounds scaffold choice and the assay readout, S picks the scaffold,
/// M the binding site (S with a small chance of switching), ArMe the methyl,
/// and A = (M = m1 and ArMe) or (M = m2 and not ArMe), flipped when the
/// confounded assay misfires.
DiscreteSCM thought_experiment_scm();

}  // namespace sarfocus
