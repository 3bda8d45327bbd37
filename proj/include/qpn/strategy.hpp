#pragma once

#include "qpn/core.hpp"
#include "qpn/order.hpp"

namespace qpn {

// Policy for one decision: a total choice table over the observed variables
// that can actually vary under a strategy (informational predecessors minus
// decisions whose own choice is unconditional).
struct Policy {
  std::string decision;
  std::vector<std::string> domain;  // sorted
  std::vector<bool> choices;        // size 2^domain.size(); true = true-literal

  bool constant() const;
  bool depends_on(const std::string& var) const;
  // Missing observation variables are tolerated only where the table does
  // not depend on them.
  bool choice_at(const Assignment& observations) const;
  std::string render(const Network& net) const;

  bool operator==(const Policy&) const = default;
};

struct Strategy {
  std::vector<Policy> policies;  // sorted by decision id

  const Policy& policy_for(const std::string& decision) const;
  bool has_policy(const std::string& decision) const;
  // Resolves every decision's value, walking informational links in
  // topological order.
  Assignment resolve_decisions(const Network& net, const Assignment& chance) const;
  std::string render(const Network& net) const;

  bool operator==(const Strategy&) const = default;
};

// Pr(var = literal | given-literals); `positive` selects the true-literal.
struct ProbAtom {
  std::string var;
  bool positive = true;
  std::map<std::string, bool> given;

  std::string render(const Network& net) const;
  bool operator==(const ProbAtom&) const = default;
  bool operator<(const ProbAtom& o) const {
    if (var != o.var) return var < o.var;
    if (given != o.given) return given < o.given;
    return positive < o.positive;
  }
};

// Product of probability atoms with a numeric coefficient; the artifact's
// symbolic algebra stops at products, complements and cancellation.
struct SymbolicProb {
  double coefficient = 1.0;
  std::vector<ProbAtom> atoms;  // kept sorted

  void normalize();
  bool same_symbol(const SymbolicProb& other) const;
  std::string render(const Network& net) const;

  bool operator<(const SymbolicProb& o) const;
};

struct MixWeight {
  std::optional<ProbAtom> atom;  // symbolic weight when set
  double numeric = 1.0;          // used when atom is empty

  std::string render(const Network& net) const;
};

struct MixedStrategy {
  std::vector<std::pair<Strategy, MixWeight>> components;
};

struct CaseRow {
  Assignment scenario;  // over the analysis' case variables
  SymbolicProb probability;
  Assignment outcome;  // over the value node's table variables
};

struct CaseAnalysis {
  std::vector<std::string> case_vars;     // relevant chance variables, sorted
  std::vector<std::string> outcome_vars;  // value-node table variables, sorted
  std::vector<CaseRow> rows;

  std::string render(const Network& net, const std::string& title) const;
};

// The policy domains induced by a network's informational structure.
std::map<std::string, std::vector<std::string>> policy_domains(const Network& net);

// Every syntactically valid strategy, in a fixed order. No coherence
// filtering: nonsense plans are kept for admissibility analysis to remove.
std::vector<Strategy> enumerate_strategies(const Network& net);

// Case analysis of a strategy over the minimal relevant chance variables:
// those feeding the outcome (causally) or read by some policy, closed under
// causal parents and chance condition variables. Probabilities follow the
// causal factorization with minimal (zero-merged) conditioning contexts.
CaseAnalysis case_analysis(const Network& net, const Strategy& s);

// Same analysis forced over a superset of the relevant variables; used to
// refine two analyses onto a common partition.
CaseAnalysis case_analysis_over(const Network& net, const Strategy& s,
                                const std::vector<std::string>& case_vars);

// Union of the two strategies' minimal relevant variable sets.
std::vector<std::string> common_case_vars(const Network& net, const Strategy& a,
                                          const Strategy& b);

// True when the two strategies induce identical outcome-probability mappings
// after symbolic simplification.
bool realization_equivalent(const Network& net, const Strategy& a, const Strategy& b);

// Probability-weighted blend; weights must be all numeric summing to 1, or a
// complementary symbolic pair. Zero-weight components are dropped.
MixedStrategy make_mixed(std::vector<std::pair<Strategy, MixWeight>> components);

// Structural check that an analysis' row probabilities telescope to 1.
bool sums_to_one(const Network& net, const CaseAnalysis& ca);

}  // namespace qpn
