#pragma once

#include "qpn/core.hpp"

namespace qpn {

// One graph manipulation, with enough detail to replay it.
struct ReductionStep {
  enum class Op { RemoveChance, ReverseArc, RemoveDecision };

  Op op = Op::RemoveChance;
  std::vector<std::string> subjects;  // removed node, or {source, target} for a reversal
  bool barren = false;                // plain removal, no splicing
  std::string justification;
  std::vector<std::string> influence_updates;  // human-readable link changes

  // Forced-policy fragment recorded when a decision is removed.
  std::vector<std::string> policy_domain;
  std::vector<bool> policy_choice;

  std::string to_line(const Network& context) const;
};

// Splices a single-successor chance node out of the network. Extra artifact
// preconditions beyond the successor-count rule: the node may not feed an
// informational link, may not appear in conditions of influences it is not
// incident to, and no affected link may be a previously reversed arc.
std::pair<Network, ReductionStep> remove_chance_node(const Network& net, const std::string& v);

// Flips a chance-chance arc, keeping its sign and conditions, and lets each
// endpoint inherit the other's direct predecessors. Inherited and updated
// predecessor links are re-annotated Unknown; the flipped arc itself keeps
// its entries.
std::pair<Network, ReductionStep> reverse_arc(const Network& net, const std::string& a,
                                              const std::string& b);

// Removes a decision whose influence on the value node resolves to a
// non-Unknown sign in every informational context, recording the forced
// choice per context (Zero ties break to the false-literal).
std::pair<Network, ReductionStep> remove_decision_node(const Network& net, const std::string& d);

// Fixed-point reduction: barren nodes, then removable chance nodes in
// topological order, then removable decisions, with arc reversals used to
// funnel multi-successor chance nodes toward the value node. Deterministic;
// name order breaks all ties.
std::pair<Network, std::vector<ReductionStep>> reduce(const Network& net);

// Re-applies a step log to a network; used to check log fidelity.
Network replay(const Network& net, const std::vector<ReductionStep>& steps);

}  // namespace qpn
