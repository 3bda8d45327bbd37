#pragma once

#include "qpn/core.hpp"

namespace qpn {

enum class Preference { Yes, No, Equal, Incomparable };

std::string preference_name(Preference p);

// Partial order over assignments of a fixed variable set, grouped into
// equivalence classes. An edge a -> b means "a is weakly greater than /
// preferred to b"; Zero-sign influences merge classes rather than add edges.
struct PartialOrder {
  std::vector<std::string> vars;          // sorted; elements are assignments over these
  std::vector<int> class_of;              // assignment index -> class id
  int class_count = 0;
  std::vector<std::vector<bool>> above;   // above[a][b]: class a weakly >= class b (reflexive)

  std::size_t element_count() const { return class_of.size(); }
  int class_of_assignment(const Assignment& a) const;
  Preference compare(const Assignment& a, const Assignment& b) const;
  bool same_class(const Assignment& a, const Assignment& b) const;

  // Longest-chain depth per class, counted upward from the minimal elements.
  std::vector<int> depths() const;

  // One node per class, one edge per covering relation.
  std::string to_dot(const Network& net, const std::string& title) const;
};

// Raised when influence constraints force a strict preference cycle (e.g. +
// and - asserted over the same pair); such networks admit no numeric model.
struct ContradictoryConstraints : Error {
  explicit ContradictoryConstraints(const std::string& what_arg) : Error(what_arg) {}
};

// Order over conditional probabilities of v's event given its predecessors
// (the element space includes condition variables of v's in-influences).
PartialOrder induced_probability_order(const Network& net, const std::string& v);

// Order over outcome desirability: same construction applied to the value
// node's table variables.
PartialOrder induced_utility_order(const Network& net);

Preference is_preferred(const PartialOrder& po, const Assignment& a, const Assignment& b);

}  // namespace qpn
