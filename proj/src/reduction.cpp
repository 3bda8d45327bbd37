#include "qpn/reduction.hpp"

#include <algorithm>
#include <set>

#include "qpn/algebra.hpp"

namespace qpn {

namespace {

std::string op_name(ReductionStep::Op op) {
  switch (op) {
    case ReductionStep::Op::RemoveChance: return "remove-chance";
    case ReductionStep::Op::ReverseArc: return "reverse-arc";
    case ReductionStep::Op::RemoveDecision: return "remove-decision";
  }
  return "?";
}

std::string describe_influence(const Network& net, const QualitativeInfluence& inf) {
  std::string out = inf.source + " -> " + inf.target + " :";
  if (inf.entries.empty()) {
    out += " ?";
  } else {
    for (const auto& e : inf.entries) {
      out += " ";
      out += sign_char(e.sign);
      if (!e.when.always()) out += "|" + net.render_condition(e.when);
    }
  }
  if (inf.reversed) out += " (reversed)";
  return out;
}

bool is_frozen(const Network& net, const std::string& v) {
  // Chance nodes observed by a decision carry information structure and are
  // not removable until that structure is consumed.
  return !net.informational_children(v).empty();
}

}  // namespace

std::string ReductionStep::to_line(const Network& context) const {
  std::string out = op_name(op) + " ";
  for (std::size_t i = 0; i < subjects.size(); ++i) {
    if (i) out += "->";
    out += subjects[i];
  }
  out += " | " + justification;
  for (const auto& u : influence_updates) out += " | " + u;
  if (!policy_domain.empty() || !policy_choice.empty()) {
    out += " | policy:";
    if (policy_domain.empty()) {
      out += " " + context.render_literal(subjects.front(), policy_choice.at(0));
    } else {
      const std::size_t n = std::size_t{1} << policy_domain.size();
      for (std::size_t i = 0; i < n; ++i) {
        Assignment a = assignment_from_index(policy_domain, i);
        out += " [" + context.render_assignment(a) + " -> " +
               context.render_literal(subjects.front(), policy_choice.at(i)) + "]";
      }
    }
  }
  return out;
}

std::pair<Network, ReductionStep> remove_chance_node(const Network& net, const std::string& v) {
  const Variable& var = net.variable(v);
  if (var.kind != Kind::Chance) throw Error("remove_chance_node: '" + v + "' is not a chance node");
  auto children = net.influence_children(v);
  if (children.size() != 1) {
    throw Error("remove_chance_node: '" + v + "' has " + std::to_string(children.size()) +
                " direct successors, need exactly 1");
  }
  if (is_frozen(net, v)) {
    throw Error("remove_chance_node: '" + v + "' feeds an informational link");
  }
  if (net.appears_in_foreign_condition(v)) {
    throw Error("remove_chance_node: '" + v + "' appears in conditions of other influences");
  }
  const std::string s = children.front();
  const QualitativeInfluence out_inf = *net.influence_between(v, s);
  auto parents = net.influence_parents(v);
  if (parents.empty()) {
    // Removal must splice predecessors through; erasing a parentless node
    // would silently drop its dimension from the successor's table.
    throw Error("remove_chance_node: '" + v + "' has no predecessors to splice");
  }
  std::sort(parents.begin(), parents.end());
  for (const auto& p : parents) {
    if (const auto* existing = net.influence_between(p, s); existing && existing->reversed) {
      throw Error("remove_chance_node: existing link " + p + " -> " + s +
                  " is a reversed arc; refusing to merge across it");
    }
  }

  Network next = net;
  ReductionStep step;
  step.op = ReductionStep::Op::RemoveChance;
  step.subjects = {v};
  step.justification = "spliced into single successor " + s;

  for (const auto& p : parents) {
    QualitativeInfluence spliced = chain(*net.influence_between(p, v), out_inf);
    QualitativeInfluence merged;
    if (const auto* existing = net.influence_between(p, s)) {
      merged = parallel(*existing, spliced);
    } else {
      merged = spliced;
    }
    if (auto* slot = next.influence_between(p, s)) {
      slot->entries = merged.entries;
    } else {
      merged.reversed = false;
      auto pos = std::lower_bound(next.influences.begin(), next.influences.end(), merged,
                                  [](const QualitativeInfluence& a, const QualitativeInfluence& b) {
                                    return a.source != b.source ? a.source < b.source
                                                                : a.target < b.target;
                                  });
      next.influences.insert(pos, merged);
    }
    step.influence_updates.push_back(describe_influence(next, *next.influence_between(p, s)));
  }
  next.remove_variable(v);
  return {std::move(next), std::move(step)};
}

std::pair<Network, ReductionStep> reverse_arc(const Network& net, const std::string& a,
                                              const std::string& b) {
  const auto* arc = net.influence_between(a, b);
  if (!arc) throw Error("reverse_arc: no influence " + a + " -> " + b);
  if (net.variable(a).kind != Kind::Chance || net.variable(b).kind != Kind::Chance) {
    throw Error("reverse_arc: both endpoints must be chance nodes");
  }
  for (const auto& inf : net.influences) {
    if (&inf == arc) continue;
    if (inf.reversed && (inf.source == a || inf.target == a || inf.source == b || inf.target == b)) {
      throw Error("reverse_arc: another reversed arc touches " + a + " or " + b);
    }
  }
  {
    // Any remaining a ~> b route plus the new b -> a arc would close a cycle.
    Network probe = net;
    probe.influences.erase(
        std::remove_if(probe.influences.begin(), probe.influences.end(),
                       [&](const QualitativeInfluence& inf) {
                         return inf.source == a && inf.target == b;
                       }),
        probe.influences.end());
    if (probe.path_exists(a, b)) {
      throw Error("reverse_arc: reversing " + a + " -> " + b + " would create a cycle");
    }
  }

  auto parents_a = net.influence_parents(a);
  auto parents_b = net.influence_parents(b);
  parents_b.erase(std::remove(parents_b.begin(), parents_b.end(), a), parents_b.end());
  std::sort(parents_a.begin(), parents_a.end());
  std::sort(parents_b.begin(), parents_b.end());

  Network next = net;
  ReductionStep step;
  step.op = ReductionStep::Op::ReverseArc;
  step.subjects = {a, b};
  step.justification = "reversed; sign and conditions preserved";

  QualitativeInfluence flipped = *arc;
  flipped.source = b;
  flipped.target = a;
  flipped.reversed = !arc->reversed;
  next.influences.erase(std::remove_if(next.influences.begin(), next.influences.end(),
                                       [&](const QualitativeInfluence& inf) {
                                         return inf.source == a && inf.target == b;
                                       }),
                        next.influences.end());

  auto insert_influence = [&next](QualitativeInfluence inf) {
    auto pos = std::lower_bound(next.influences.begin(), next.influences.end(), inf,
                                [](const QualitativeInfluence& x, const QualitativeInfluence& y) {
                                  return x.source != y.source ? x.source < y.source
                                                              : x.target < y.target;
                                });
    next.influences.insert(pos, std::move(inf));
  };
  insert_influence(flipped);
  step.influence_updates.push_back(describe_influence(next, *next.influence_between(b, a)));

  // Each endpoint inherits the other's prior predecessors; every inherited or
  // updated predecessor link is conservatively re-annotated Unknown.
  auto inherit = [&](const std::string& node, const std::vector<std::string>& new_parents) {
    for (const auto& p : new_parents) {
      if (p == node) continue;
      if (auto* existing = next.influence_between(p, node)) {
        existing->entries.clear();
      } else {
        QualitativeInfluence blank;
        blank.source = p;
        blank.target = node;
        insert_influence(blank);
      }
      step.influence_updates.push_back(describe_influence(next, *next.influence_between(p, node)));
    }
  };
  inherit(a, parents_b);
  inherit(b, parents_a);
  return {std::move(next), std::move(step)};
}

std::pair<Network, ReductionStep> remove_decision_node(const Network& net, const std::string& d) {
  const Variable& var = net.variable(d);
  if (var.kind != Kind::Decision) throw Error("remove_decision_node: '" + d + "' is not a decision");
  auto value = net.value_node();
  if (!value) throw Error("remove_decision_node: network has no value node");
  auto children = net.influence_children(d);
  if (children.size() != 1 || children.front() != *value) {
    throw Error("remove_decision_node: '" + d + "' must influence exactly the value node");
  }
  if (!net.informational_children(d).empty()) {
    throw Error("remove_decision_node: '" + d + "' informs another decision");
  }
  if (net.appears_in_foreign_condition(d)) {
    throw Error("remove_decision_node: '" + d + "' appears in conditions of other influences");
  }

  const auto* on_value = net.influence_between(d, *value);
  std::vector<std::string> domain = net.informational_parents(d);
  std::sort(domain.begin(), domain.end());

  ReductionStep step;
  step.op = ReductionStep::Op::RemoveDecision;
  step.subjects = {d};
  step.policy_domain = domain;

  const std::size_t contexts = std::size_t{1} << domain.size();
  for (std::size_t i = 0; i < contexts; ++i) {
    Assignment ctx = assignment_from_index(domain, i);
    Sign s = on_value->sign_over(ctx);
    switch (s) {
      case Sign::Positive: step.policy_choice.push_back(true); break;
      case Sign::Negative: step.policy_choice.push_back(false); break;
      case Sign::Zero: step.policy_choice.push_back(false); break;  // logged tie-break
      case Sign::Unknown:
        throw Error("remove_decision_node: influence of '" + d +
                    "' on utility is unknown in informational context " +
                    (domain.empty() ? std::string("(empty)") : net.render_assignment(ctx)));
    }
  }
  step.justification = domain.empty() ? "unambiguous influence on utility; choice forced"
                                      : "influence on utility unambiguous per informational context";

  Network next = net;
  next.remove_variable(d);
  return {std::move(next), std::move(step)};
}

namespace {

bool barren_removable(const Network& net, const std::string& v) {
  const Variable& var = net.variable(v);
  if (var.kind == Kind::Value) return false;
  if (!net.influence_children(v).empty()) return false;
  if (!net.informational_children(v).empty()) return false;
  if (net.appears_in_foreign_condition(v)) return false;
  return true;
}

bool chance_removable(const Network& net, const std::string& v) {
  if (net.variable(v).kind != Kind::Chance) return false;
  if (net.influence_children(v).size() != 1) return false;
  if (net.influence_parents(v).empty()) return false;
  if (is_frozen(net, v)) return false;
  if (net.appears_in_foreign_condition(v)) return false;
  for (const auto& p : net.influence_parents(v)) {
    const auto* existing = net.influence_between(p, net.influence_children(v).front());
    if (existing && existing->reversed) return false;
  }
  return true;
}

bool decision_removable(const Network& net, const std::string& d) {
  if (net.variable(d).kind != Kind::Decision) return false;
  auto value = net.value_node();
  if (!value) return false;
  auto children = net.influence_children(d);
  if (children.size() != 1 || children.front() != *value) return false;
  if (!net.informational_children(d).empty()) return false;
  if (net.appears_in_foreign_condition(d)) return false;
  const auto* on_value = net.influence_between(d, *value);
  std::vector<std::string> domain = net.informational_parents(d);
  std::sort(domain.begin(), domain.end());
  const std::size_t contexts = std::size_t{1} << domain.size();
  for (std::size_t i = 0; i < contexts; ++i) {
    if (on_value->sign_over(assignment_from_index(domain, i)) == Sign::Unknown) return false;
  }
  return true;
}

}  // namespace

std::pair<Network, std::vector<ReductionStep>> reduce(const Network& net) {
  Network cur = net;
  std::vector<ReductionStep> log;
  std::set<std::pair<std::string, std::string>> attempted_reversals;

  bool changed = true;
  while (changed) {
    changed = false;

    // Barren nodes first.
    for (const auto& var : cur.variables) {
      if (!barren_removable(cur, var.id)) continue;
      ReductionStep step;
      step.subjects = {var.id};
      step.barren = true;
      step.justification = "barren (no successors)";
      if (var.kind == Kind::Decision) {
        step.op = ReductionStep::Op::RemoveDecision;
        step.policy_choice.push_back(false);  // choice immaterial; logged tie-break
        step.justification += "; choice immaterial";
      } else {
        step.op = ReductionStep::Op::RemoveChance;
      }
      std::string id = var.id;
      cur.remove_variable(id);
      log.push_back(std::move(step));
      changed = true;
      break;
    }
    if (changed) continue;

    // Removable chance nodes in topological order (name-tie-broken).
    for (const auto& id : cur.topological_order()) {
      if (!cur.has_variable(id) || cur.variable(id).kind != Kind::Chance) continue;
      if (!chance_removable(cur, id)) continue;
      auto [next, step] = remove_chance_node(cur, id);
      cur = std::move(next);
      log.push_back(std::move(step));
      changed = true;
      break;
    }
    if (changed) continue;

    // Removable decisions.
    for (const auto& var : cur.variables) {
      if (var.kind != Kind::Decision || !decision_removable(cur, var.id)) continue;
      auto [next, step] = remove_decision_node(cur, var.id);
      cur = std::move(next);
      log.push_back(std::move(step));
      changed = true;
      break;
    }
    if (changed) continue;

    // Arc reversals that funnel a multi-successor chance node toward the
    // value node, enabling a removal attempt.
    auto value = cur.value_node();
    if (!value) break;
    for (const auto& var : cur.variables) {
      if (var.kind != Kind::Chance || is_frozen(cur, var.id)) continue;
      auto children = cur.influence_children(var.id);
      if (children.size() < 2) continue;
      if (std::find(children.begin(), children.end(), *value) == children.end()) continue;
      std::sort(children.begin(), children.end());
      for (const auto& w : children) {
        if (w == *value) continue;
        if (cur.variable(w).kind != Kind::Chance) continue;
        if (attempted_reversals.count({var.id, w})) continue;
        attempted_reversals.insert({var.id, w});
        try {
          auto [next, step] = reverse_arc(cur, var.id, w);
          cur = std::move(next);
          log.push_back(std::move(step));
          changed = true;
        } catch (const Error&) {
          // Not reversible here; try the next candidate.
        }
        if (changed) break;
      }
      if (changed) break;
    }
  }
  return {std::move(cur), std::move(log)};
}

Network replay(const Network& net, const std::vector<ReductionStep>& steps) {
  Network cur = net;
  for (const auto& step : steps) {
    if (step.barren) {
      cur.remove_variable(step.subjects.front());
      continue;
    }
    switch (step.op) {
      case ReductionStep::Op::RemoveChance:
        cur = remove_chance_node(cur, step.subjects.front()).first;
        break;
      case ReductionStep::Op::ReverseArc:
        cur = reverse_arc(cur, step.subjects[0], step.subjects[1]).first;
        break;
      case ReductionStep::Op::RemoveDecision:
        cur = remove_decision_node(cur, step.subjects.front()).first;
        break;
    }
  }
  return cur;
}

}  // namespace qpn
