#pragma once

#include <cstdint>

#include "qpn/core.hpp"
#include "qpn/order.hpp"
#include "qpn/reduction.hpp"
#include "qpn/strategy.hpp"

namespace qpn {

struct SamplerConfig {
  std::uint64_t seed = 0;
  int samples = 1000;
  double epsilon = 0.01;  // requested minimum inequality margin
};

struct Cpt {
  std::vector<std::string> row_vars;  // sorted
  std::vector<double> rows;           // Pr(true-literal | row), size 2^row_vars
};

// Fully numeric model consistent with a network's qualitative constraints.
struct ConcreteModel {
  std::map<std::string, Cpt> cpts;
  std::vector<std::string> utility_vars;
  std::vector<double> utility;
  double margin = 0.0;  // guaranteed strict-inequality margin for CPT rows
};

struct DominanceCheck {
  bool holds = true;
  bool strict_somewhere = false;
  int violated_index = -1;
  double eu_dominator = 0.0;
  double eu_dominated = 0.0;
};

struct LinkCheck {
  std::string source;
  std::string target;
  std::string condition;
  char sign = '?';
  long checks = 0;
  long violations = 0;
  std::string first_violation;
  long saw_greater = 0;  // direction tallies, reported for '?' links
  long saw_less = 0;
};

struct SignVerification {
  int samples = 0;
  std::vector<LinkCheck> links;

  bool clean() const;
  std::string render(const Network& reduced) const;
};

// Per-network oracle: deterministic sampling of concrete models plus exact
// expected-utility evaluation by joint enumeration.
class OracleContext {
 public:
  explicit OracleContext(const Network& original);

  const Network& net() const { return original_; }
  std::size_t chance_count() const { return chance_.size(); }

  ConcreteModel sample(const SamplerConfig& cfg, int index) const;

  double expected_utility(const ConcreteModel& model, const Strategy& s) const;
  double expected_utility(const ConcreteModel& model, const MixedStrategy& m) const;

  // Conditional probability of an atom under the model, by enumeration over
  // the ancestral closure. Decisions mentioned in contexts must be given.
  double eval_atom(const ConcreteModel& model, const ProbAtom& atom) const;
  double eval_prob(const ConcreteModel& model, const SymbolicProb& p) const;

  // Probability of a chance-variable scenario under a strategy.
  double scenario_probability(const ConcreteModel& model, const Strategy& s,
                              const Assignment& scenario) const;

  // E[utility | assignment], where the assignment fixes some chance variables
  // and every decision that matters.
  double conditional_utility(const ConcreteModel& model, const Assignment& given) const;

  // Independent re-check of the sampler's own constraints; empty when clean.
  std::vector<std::string> check_model(const ConcreteModel& model) const;

  // Precompiled joint-enumeration tables for tight evaluation loops.
  struct EvalPlan {
    std::vector<std::uint32_t> row_index;    // [assignment * chance_count + k]
    std::vector<std::uint32_t> utility_row;  // [assignment]
  };
  struct FastModel {
    std::vector<std::vector<double>> rows;  // per chance var, context order
    std::vector<double> utility;
  };
  EvalPlan make_plan(const Strategy& s) const;
  FastModel fasten(const ConcreteModel& model) const;
  double fast_eu(const FastModel& model, const EvalPlan& plan) const;
  const std::vector<std::string>& chance_vars() const { return chance_; }

 private:
  Network original_;
  std::vector<std::string> chance_;  // causal topological order
  struct VarPlan {
    std::string id;
    std::vector<std::string> row_vars;
    PartialOrder order;     // row order (empty vars => unconstrained single rows)
    bool trivial = false;   // no row vars: single free entry
  };
  std::vector<VarPlan> plans_;
  PartialOrder utility_order_;
  std::vector<std::string> utility_vars_;

  double joint_probability(const ConcreteModel& model, const Assignment& chance,
                           const Assignment& decisions) const;
};

ConcreteModel sample_model(const Network& net, const SamplerConfig& cfg, int index);

double expected_utility(const ConcreteModel& model, const Network& net, const Strategy& s);
double expected_utility(const ConcreteModel& model, const Network& net, const MixedStrategy& m);

DominanceCheck check_dominance_numeric(const Network& net, const SamplerConfig& cfg,
                                       const Strategy& a, const Strategy& b);
DominanceCheck check_dominance_numeric(const Network& net, const SamplerConfig& cfg,
                                       const MixedStrategy& a, const Strategy& b);

// Checks every non-Unknown sign of the reduced network against sampled
// models of the original, for every admissible background context; tallies
// observed directions for Unknown links.
SignVerification verify_reduction_signs(const Network& original, const Network& reduced,
                                        const std::vector<ReductionStep>& log,
                                        const SamplerConfig& cfg);

std::string describe_model(const Network& net, const ConcreteModel& model);

}  // namespace qpn
