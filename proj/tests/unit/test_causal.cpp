#include <gtest/gtest.h>

#include <cmath>

#include "causal_oracle.hpp"
#include "sarfocus/causal.hpp"
#include "sarfocus/scm_io.hpp"

using namespace sarfocus;

namespace {

using K = VariableKind;

// U -> X -> Y with Y also reading U: confounded pair.
DiscreteSCM confounded() {
  return DiscreteSCM({{"U", 2, K::exogenous}, {"N", 2, K::exogenous}, {"X", 2, K::endogenous}, {"Y", 2, K::endogenous}},
                     {0.3, 0.2, 0.1, 0.4},
                     {{"X", {"U", "N"}, {0, 1, 1, 1}}, {"Y", {"X", "U"}, {0, 1, 1, 0}}});
}

std::vector<std::pair<std::string, std::string>> fig4_edges() {
  return {{"U", "S"}, {"U", "A"}, {"S", "M"}, {"M", "A"}};
}

double max_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Causal, ConstantModelIsPointMass) {
  const DiscreteSCM m({{"U", 2, K::exogenous}, {"X", 3, K::endogenous}, {"Y", 2, K::endogenous}}, {0.5, 0.5},
                      {{"X", {}, {2}}, {"Y", {}, {1}}});
  const auto d = observational_joint(m);
  const std::vector<int> at{2, 1};
  EXPECT_EQ(d.at(at), 1.0);
  EXPECT_NEAR(d.total(), 1.0, 1e-12);
}

TEST(Causal, ObservationalMatchesEnumeration) {
  for (const auto& m : {thought_experiment_scm(), confounded()}) {
    const auto d = observational_joint(m);
    EXPECT_NEAR(d.total(), 1.0, 1e-12);
    const auto& vars = d.variables();
    std::vector<int> v(vars.size(), 0);
    for (std::size_t cell = 0; cell < d.probabilities().size(); ++cell) {
      std::size_t rest = cell;
      std::map<std::string, int> event;
      for (std::size_t k = vars.size(); k-- > 0;) {
        v[k] = static_cast<int>(rest % static_cast<std::size_t>(vars[k].cardinality));
        rest /= static_cast<std::size_t>(vars[k].cardinality);
        event[vars[k].name] = v[k];
      }
      EXPECT_NEAR(d.at(v), oracle::observational(m, event), 1e-15);
    }
  }
}

TEST(Causal, TotalEffectMatchesMutilatedEnumeration) {
  const auto m = thought_experiment_scm();
  const auto te = total_effect(m, "S", "A");
  for (int s = 0; s < 2; ++s) {
    const auto truth = oracle::interventional(m, "S", s, "A");
    for (int a = 0; a < 2; ++a) EXPECT_NEAR(te(s, a), truth[static_cast<std::size_t>(a)], 1e-15);
  }
}

TEST(Causal, InterveneGivesDoDistribution) {
  const auto m = confounded();
  const std::vector<std::pair<std::string, int>> doit{{"X", 1}};
  const auto d = observational_joint(intervene(m, doit));
  const auto y = d.marginal(std::vector<std::string>{"Y"});
  const auto truth = oracle::interventional(m, "X", 1, "Y");
  EXPECT_NEAR(y.probabilities()[1], truth[1], 1e-15);
  EXPECT_TRUE(intervene(m, doit).function_for("X").parents.empty());
}

TEST(Causal, InterveningOnSinkLeavesOthers) {
  const auto m = confounded();
  const std::vector<std::pair<std::string, int>> doit{{"Y", 0}};
  const std::vector<std::string> x{"X"};
  const auto after = observational_joint(intervene(m, doit)).marginal(x).probabilities();
  const auto before = observational_joint(m).marginal(x).probabilities();
  for (std::size_t i = 0; i < before.size(); ++i) EXPECT_NEAR(after[i], before[i], 1e-15);
}

TEST(Causal, LastInterventionWins) {
  const auto m = confounded();
  const std::vector<std::pair<std::string, int>> twice{{"X", 0}, {"X", 1}};
  const std::vector<std::pair<std::string, int>> once{{"X", 1}};
  EXPECT_EQ(observational_joint(intervene(m, twice)).probabilities(),
            observational_joint(intervene(m, once)).probabilities());
}

TEST(Causal, InterventionIsIdempotent) {
  const auto m = thought_experiment_scm();
  const std::vector<std::pair<std::string, int>> doit{{"M", 1}};
  const auto once = intervene(m, doit);
  EXPECT_EQ(observational_joint(intervene(once, doit)).probabilities(), observational_joint(once).probabilities());
}

TEST(Causal, CannotInterveneOnExogenous) {
  const std::vector<std::pair<std::string, int>> doit{{"U", 1}};
  EXPECT_THROW(intervene(confounded(), doit), CannotInterveneExogenous);
}

TEST(Causal, ModelValidation) {
  EXPECT_THROW(DiscreteSCM({{"U", 2, K::exogenous}, {"X", 2, K::endogenous}, {"Y", 2, K::endogenous}}, {0.5, 0.5},
                           {{"X", {"Y"}, {0, 1}}, {"Y", {"X"}, {0, 1}}}),
               CyclicModel);
  EXPECT_THROW(DiscreteSCM({{"U", 2, K::exogenous}, {"X", 2, K::endogenous}}, {0.5, 0.6}, {{"X", {"U"}, {0, 1}}}),
               InvalidModel);
  EXPECT_THROW(DiscreteSCM({{"U", 2, K::exogenous}, {"X", 2, K::endogenous}}, {0.5, 0.5}, {{"X", {"U"}, {0, 2}}}),
               InvalidModel);
  EXPECT_THROW(DiscreteSCM({{"U", 2, K::exogenous}, {"X", 2, K::endogenous}}, {0.5, 0.5}, {{"X", {"Q"}, {0, 1}}}),
               InvalidModel);
  EXPECT_THROW(DiscreteSCM({{"U", 2, K::exogenous}, {"X", 2, K::endogenous}}, {0.5, 0.5}, {}), InvalidModel);
}

TEST(Causal, TopologicalOrderRespectsParents) {
  const auto m = thought_experiment_scm();
  const auto& order = m.topological_order();
  std::vector<std::size_t> pos(m.variables().size());
  for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = k;
  for (const auto& f : m.functions()) {
    for (const auto& p : f.parents) {
      if (m.variable(p).kind == K::endogenous) EXPECT_LT(pos[m.index_of(p)], pos[m.index_of(f.target)]);
    }
  }
}

TEST(Causal, ControlledDirectEffect) {
  const auto m = confounded();
  const std::vector<std::pair<std::string, int>> none;
  EXPECT_LT(max_diff(controlled_direct_effect(m, "X", "Y", none), total_effect(m, "X", "Y")), 1e-15);
  // All of U held: Y is a deterministic function of X.
  for (int u = 0; u < 2; ++u) {
    for (int n = 0; n < 2; ++n) {
      const std::vector<std::pair<std::string, int>> held{{"U", u}, {"N", n}};
      const auto t = controlled_direct_effect(m, "X", "Y", held);
      for (int x = 0; x < 2; ++x) {
        const int y = (x + u) % 2;
        EXPECT_EQ(t(x, y), 1.0);
        EXPECT_EQ(t(x, 1 - y), 0.0);
      }
    }
  }
}

TEST(Causal, ControlledDirectEffectOnThoughtExperiment) {
  const auto m = thought_experiment_scm();
  const std::vector<std::pair<std::string, int>> held{{"U", 1}};
  const auto t = controlled_direct_effect(m, "S", "A", held);
  // Enumerate the model restricted to U = 1, renormalized.
  for (int s = 0; s < 2; ++s) {
    std::vector<double> num(2, 0.0);
    double den = 0.0;
    oracle::enumerate(m, {{"S", s}}, [&](const std::vector<int>& v, double p) {
      if (v[oracle::var_index(m, "U")] != 1) return;
      den += p;
      num[static_cast<std::size_t>(v[oracle::var_index(m, "A")])] += p;
    });
    for (int a = 0; a < 2; ++a) EXPECT_NEAR(t(s, a), num[static_cast<std::size_t>(a)] / den, 1e-15);
  }
}

TEST(Causal, DSeparationBasics) {
  const Dag chain({"A", "B", "C"}, {{"A", "B"}, {"B", "C"}});
  const std::vector<std::string> a{"A"}, b{"B"}, c{"C"}, none;
  EXPECT_FALSE(chain.d_separated(a, c, none));
  EXPECT_TRUE(chain.d_separated(a, c, b));
  const Dag collider({"A", "B", "C", "D"}, {{"A", "B"}, {"C", "B"}, {"B", "D"}});
  const std::vector<std::string> d{"D"};
  EXPECT_TRUE(collider.d_separated(a, c, none));
  EXPECT_FALSE(collider.d_separated(a, c, b));
  EXPECT_FALSE(collider.d_separated(a, c, d));
}

TEST(Causal, FrontDoorGraphs) {
  const std::vector<std::string> nodes{"U", "S", "M", "A"};
  EXPECT_TRUE(check_front_door(Dag(nodes, fig4_edges()), "S", "M", "A").holds());

  auto um = fig4_edges();
  um.emplace_back("U", "M");
  const auto r2 = check_front_door(Dag(nodes, um), "S", "M", "A");
  EXPECT_FALSE(r2.holds());
  EXPECT_FALSE(r2.no_backdoor_cause_mediator);
  ASSERT_FALSE(r2.failures().empty());
  EXPECT_EQ(r2.failures()[0].rfind("(ii)", 0), 0u);

  auto sa = fig4_edges();
  sa.emplace_back("S", "A");
  const auto r1 = check_front_door(Dag(nodes, sa), "S", "M", "A");
  EXPECT_FALSE(r1.intercepts_all_paths);
  EXPECT_TRUE(r1.no_backdoor_cause_mediator);
}

TEST(Causal, ThoughtExperimentSatisfiesFrontDoor) {
  const auto m = thought_experiment_scm();
  EXPECT_TRUE(check_front_door(induced_graph(m), "S", "M", "A").holds());
  const auto obs = observational_joint(m);
  EXPECT_LT(max_diff(front_door_table(obs, "S", "M", "A"), total_effect(m, "S", "A")), 1e-12);
  // Confounding is real: the naive conditional differs from the effect.
  const std::vector<std::string> sa{"S", "A"};
  const auto j = obs.marginal(sa);
  const double naive = j.probabilities()[1] / (j.probabilities()[0] + j.probabilities()[1]);
  EXPECT_GT(std::abs(naive - total_effect(m, "S", "A")(0, 1)), 1e-3);
}

TEST(Causal, FrontDoorOnRandomModels) {
  Rng rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    const auto m = oracle::random_front_door_scm(rng);
    ASSERT_TRUE(check_front_door(induced_graph(m), "S", "M", "A").holds());
    const auto obs = observational_joint(m);
    const int cs = m.variable("S").cardinality;
    for (int s = 0; s < cs; ++s) {
      const auto est = front_door_estimate(obs, "S", "M", "A", s);
      const auto truth = oracle::interventional(m, "S", s, "A");
      for (std::size_t a = 0; a < truth.size(); ++a) EXPECT_NEAR(est[a], truth[a], 1e-12);
    }
  }
}

TEST(Causal, UnconfoundedEstimateEqualsConditional) {
  // U feeds S only, so A is unconfounded.
  const DiscreteSCM m({{"U", 2, K::exogenous}, {"E", 2, K::exogenous}, {"S", 2, K::endogenous},
                       {"M", 2, K::endogenous}, {"A", 2, K::endogenous}},
                      {0.2, 0.3, 0.1, 0.4},
                      {{"S", {"U"}, {0, 1}}, {"M", {"S", "E"}, {0, 1, 1, 0}}, {"A", {"M"}, {1, 0}}});
  const auto obs = observational_joint(m);
  const std::vector<std::string> sa{"S", "A"};
  const auto j = obs.marginal(sa);
  for (int s = 0; s < 2; ++s) {
    const auto est = front_door_estimate(obs, "S", "M", "A", s);
    const double ps = j.probabilities()[static_cast<std::size_t>(2 * s)] + j.probabilities()[static_cast<std::size_t>(2 * s + 1)];
    EXPECT_NEAR(est[1], j.probabilities()[static_cast<std::size_t>(2 * s + 1)] / ps, 1e-12);
  }
}

TEST(Causal, PositivityViolation) {
  const DiscreteSCM m({{"U", 2, K::exogenous}, {"S", 2, K::endogenous}, {"M", 2, K::endogenous},
                       {"A", 2, K::endogenous}},
                      {0.5, 0.5}, {{"S", {}, {0}}, {"M", {"S"}, {0, 1}}, {"A", {"M", "U"}, {0, 1, 1, 0}}});
  EXPECT_THROW(front_door_estimate(observational_joint(m), "S", "M", "A", 1), PositivityViolation);
}

TEST(Causal, MarginalAndConditioningErrors) {
  const auto d = observational_joint(confounded());
  const std::vector<std::string> bad{"Q"};
  EXPECT_ANY_THROW(d.marginal(bad));
  const std::vector<std::pair<std::string, int>> held{{"X", 5}};
  EXPECT_ANY_THROW(controlled_direct_effect(confounded(), "X", "Y", held));
}

TEST(ScmJson, RoundTrip) {
  const auto m = thought_experiment_scm();
  const auto spec = parse_scm_json(scm_to_json(m));
  EXPECT_EQ(observational_joint(spec.model).probabilities(), observational_joint(m).probabilities());
  EXPECT_EQ(spec.query.cause, "S");
  EXPECT_EQ(spec.query.mediator, "M");
  EXPECT_EQ(spec.query.effect, "A");
}

TEST(ScmJson, MarginalsForm) {
  const auto spec = parse_scm_json(R"({
    "variables": [{"name": "U", "cardinality": 2, "kind": "exogenous"},
                  {"name": "V", "cardinality": 2, "kind": "exogenous"},
                  {"name": "S", "cardinality": 2, "kind": "endogenous"},
                  {"name": "M", "cardinality": 2, "kind": "endogenous"},
                  {"name": "A", "cardinality": 2, "kind": "endogenous"}],
    "exogenous": {"marginals": {"U": [0.25, 0.75], "V": [0.5, 0.5]}},
    "functions": [{"target": "S", "parents": ["U"], "table": [0, 1]},
                  {"target": "M", "parents": ["S", "V"], "table": [0, 0, 0, 1]},
                  {"target": "A", "parents": ["M"], "table": [0, 1]}]
  })");
  EXPECT_NEAR(spec.model.exogenous_joint()[3], 0.375, 1e-15);
  const std::vector<std::string> m{"M"};
  EXPECT_NEAR(observational_joint(spec.model).marginal(m).probabilities()[1], 0.375, 1e-15);
}

TEST(ScmJson, QueryMustNameEndogenousVariables) {
  EXPECT_THROW(parse_scm_json(R"({
    "variables": [{"name": "U", "cardinality": 2, "kind": "exogenous"},
                  {"name": "X", "cardinality": 2, "kind": "endogenous"}],
    "exogenous": {"joint": [0.5, 0.5]},
    "functions": [{"target": "X", "parents": ["U"], "table": [0, 1]}]
  })"),
               ScmFormatError);
}

TEST(ScmJson, Malformed) {
  EXPECT_THROW(parse_scm_json("{"), ScmFormatError);
  EXPECT_THROW(parse_scm_json(R"({"variables": []})"), ScmFormatError);
  EXPECT_THROW(parse_scm_json(R"({
    "variables": [{"name": "U", "cardinality": 2, "kind": "exogenous"},
                  {"name": "X", "cardinality": 2, "kind": "endogenous"}],
    "exogenous": {"joint": [0.5, 0.5]},
    "functions": [{"target": "X", "parents": ["X"], "table": [0, 1]}]
  })"),
               ScmFormatError);
}
