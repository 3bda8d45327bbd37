#include "qpn/strategy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace qpn {

bool Policy::constant() const {
  return std::adjacent_find(choices.begin(), choices.end(), std::not_equal_to<>()) == choices.end();
}

bool Policy::depends_on(const std::string& var) const {
  auto it = std::find(domain.begin(), domain.end(), var);
  if (it == domain.end()) return false;
  const std::size_t bit = std::size_t{1} << (it - domain.begin());
  for (std::size_t i = 0; i < choices.size(); ++i) {
    if ((i & bit) == 0 && choices[i] != choices[i | bit]) return true;
  }
  return false;
}

bool Policy::choice_at(const Assignment& observations) const {
  Assignment full;
  for (const auto& v : domain) {
    auto it = observations.find(v);
    if (it != observations.end()) {
      full[v] = it->second;
    } else if (!depends_on(v)) {
      full[v] = false;
    } else {
      throw Error("policy for '" + decision + "' needs an observation of '" + v + "'");
    }
  }
  return choices[assignment_index(domain, full)];
}

std::string Policy::render(const Network& net) const {
  if (domain.empty() || constant()) {
    return decision + "=" + net.render_literal(decision, choices.at(0));
  }
  std::string out = decision + ":";
  for (std::size_t i = 0; i < choices.size(); ++i) {
    Assignment a = assignment_from_index(domain, i);
    out += " [" + net.render_assignment(a) + " -> " + net.render_literal(decision, choices[i]) + "]";
  }
  return out;
}

const Policy& Strategy::policy_for(const std::string& decision) const {
  for (const auto& p : policies) {
    if (p.decision == decision) return p;
  }
  throw Error("strategy has no policy for decision '" + decision + "'");
}

bool Strategy::has_policy(const std::string& decision) const {
  return std::any_of(policies.begin(), policies.end(),
                     [&](const Policy& p) { return p.decision == decision; });
}

Assignment Strategy::resolve_decisions(const Network& net, const Assignment& chance) const {
  Assignment resolved;
  for (const auto& id : net.topological_order()) {
    if (!net.has_variable(id) || net.variable(id).kind != Kind::Decision) continue;
    Assignment obs = chance;
    obs.insert(resolved.begin(), resolved.end());
    resolved[id] = policy_for(id).choice_at(obs);
  }
  return resolved;
}

std::string Strategy::render(const Network& net) const {
  std::string out;
  for (const auto& p : policies) {
    if (!out.empty()) out += ", ";
    out += p.render(net);
  }
  return out.empty() ? "(no decisions)" : out;
}

std::string ProbAtom::render(const Network& net) const {
  std::string out = "Pr(" + net.render_literal(var, positive);
  if (!given.empty()) {
    out += "|";
    bool first = true;
    for (const auto& [v, val] : given) {
      if (!first) out += ",";
      out += net.render_literal(v, val);
      first = false;
    }
  }
  out += ")";
  return out;
}

void SymbolicProb::normalize() { std::sort(atoms.begin(), atoms.end()); }

bool SymbolicProb::same_symbol(const SymbolicProb& other) const {
  return std::abs(coefficient - other.coefficient) <= 1e-12 && atoms == other.atoms;
}

bool SymbolicProb::operator<(const SymbolicProb& o) const {
  if (atoms != o.atoms) return atoms < o.atoms;
  return coefficient < o.coefficient;
}

std::string SymbolicProb::render(const Network& net) const {
  std::ostringstream out;
  bool need_sep = false;
  if (coefficient != 1.0 || atoms.empty()) {
    out << coefficient;
    need_sep = true;
  }
  for (const auto& a : atoms) {
    if (need_sep) out << "*";
    out << a.render(net);
    need_sep = true;
  }
  return out.str();
}

std::string MixWeight::render(const Network& net) const {
  if (atom) return atom->render(net);
  std::ostringstream out;
  out << numeric;
  return out.str();
}

std::string CaseAnalysis::render(const Network& net, const std::string& title) const {
  std::vector<std::array<std::string, 3>> cells;
  for (const auto& row : rows) {
    cells.push_back({net.render_assignment(row.scenario), row.probability.render(net),
                     net.render_assignment(row.outcome)});
  }
  std::array<std::size_t, 3> width = {4, 4, 7};
  for (const auto& c : cells) {
    for (int k = 0; k < 3; ++k) width[k] = std::max(width[k], c[k].size());
  }
  auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w - s.size(), ' '); };
  std::string out = "Strategy: " + title + "\n";
  out += "  " + pad("Case", width[0]) + "  " + pad("Prob", width[1]) + "  Outcome\n";
  for (const auto& c : cells) {
    out += "  " + pad(c[0], width[0]) + "  " + pad(c[1], width[1]) + "  " + c[2] + "\n";
  }
  return out;
}

std::map<std::string, std::vector<std::string>> policy_domains(const Network& net) {
  std::map<std::string, std::vector<std::string>> domains;
  for (const auto& id : net.topological_order()) {
    if (!net.has_variable(id) || net.variable(id).kind != Kind::Decision) continue;
    std::vector<std::string> domain;
    for (const auto& p : net.informational_parents(id)) {
      if (net.variable(p).kind == Kind::Decision) {
        // A decision whose choice is unconditional within the strategy is a
        // known constant; observing it cannot split the policy.
        auto it = domains.find(p);
        if (it == domains.end() || it->second.empty()) continue;
      }
      domain.push_back(p);
    }
    std::sort(domain.begin(), domain.end());
    domains[id] = std::move(domain);
  }
  return domains;
}

std::vector<Strategy> enumerate_strategies(const Network& net) {
  std::vector<std::string> decisions;
  for (const auto& v : net.variables) {
    if (v.kind == Kind::Decision) decisions.push_back(v.id);
  }
  if (decisions.empty()) throw Error("enumerate_strategies: network has no decisions");

  auto domains = policy_domains(net);
  std::vector<std::size_t> table_sizes;
  std::size_t total = 1;
  for (const auto& d : decisions) {
    const std::size_t entries = std::size_t{1} << domains[d].size();
    if (entries > 16) throw Error("enumerate_strategies: policy table for '" + d + "' too large");
    const std::size_t policies = std::size_t{1} << entries;
    table_sizes.push_back(entries);
    if (total > 4096 / policies) throw Error("enumerate_strategies: strategy space exceeds 4096");
    total *= policies;
  }

  std::vector<Strategy> out;
  out.reserve(total);
  std::vector<std::size_t> counter(decisions.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    Strategy s;
    for (std::size_t k = 0; k < decisions.size(); ++k) {
      Policy p;
      p.decision = decisions[k];
      p.domain = domains[decisions[k]];
      for (std::size_t bit = 0; bit < table_sizes[k]; ++bit) {
        p.choices.push_back(((counter[k] >> bit) & 1u) != 0);
      }
      s.policies.push_back(std::move(p));
    }
    out.push_back(std::move(s));
    // Odometer, last decision fastest.
    for (std::size_t k = decisions.size(); k-- > 0;) {
      if (++counter[k] < (std::size_t{1} << table_sizes[k])) break;
      counter[k] = 0;
    }
  }
  return out;
}

namespace {

struct RowOrderCache {
  const Network* net;
  std::map<std::string, PartialOrder> orders;

  const PartialOrder& row_order(const std::string& var) {
    auto it = orders.find(var);
    if (it == orders.end()) {
      it = orders.emplace(var, induced_probability_order(*net, var)).first;
    }
    return it->second;
  }
};

// Minimal conditioning context: drops row variables whose value provably
// cannot change the conditional (the flip stays inside one equivalence class
// of the row order, for every completion of already-dropped variables).
ProbAtom make_atom(const Network& net, RowOrderCache& cache, const std::string& var, bool value,
                   const Assignment& full_context) {
  ProbAtom atom;
  atom.var = var;
  atom.positive = value;
  std::vector<std::string> row_vars = net.row_vars(var);
  if (row_vars.empty()) return atom;

  const PartialOrder& order = cache.row_order(var);
  std::vector<std::string> dropped;
  for (const auto& w : row_vars) {
    std::vector<std::string> candidate = dropped;
    candidate.push_back(w);
    const std::size_t cells = std::size_t{1} << candidate.size();
    int cls = -1;
    bool uniform = true;
    for (std::size_t i = 0; i < cells && uniform; ++i) {
      Assignment ctx = full_context;
      Assignment free = assignment_from_index(candidate, i);
      for (const auto& [k, v] : free) ctx[k] = v;
      int c = order.class_of_assignment(ctx);
      if (cls == -1) cls = c;
      uniform = (c == cls);
    }
    if (uniform) dropped = std::move(candidate);
  }
  for (const auto& w : row_vars) {
    if (std::find(dropped.begin(), dropped.end(), w) == dropped.end()) {
      atom.given[w] = full_context.at(w);
    }
  }
  return atom;
}

std::vector<std::string> relevant_chance_vars(const Network& net, const Strategy& s) {
  auto value = net.value_node();
  if (!value) throw Error("case analysis requires a value node");
  std::set<std::string> relevant;
  for (const auto& v : net.row_vars(*value)) {
    if (net.variable(v).kind == Kind::Chance) relevant.insert(v);
  }
  for (const auto& p : s.policies) {
    for (const auto& w : p.domain) {
      if (net.variable(w).kind == Kind::Chance && p.depends_on(w)) relevant.insert(w);
    }
  }
  // Close under causal parents and chance condition variables.
  bool grew = true;
  while (grew) {
    grew = false;
    std::set<std::string> next = relevant;
    for (const auto& v : relevant) {
      for (const auto& p : net.causal_parents(v)) {
        if (net.variable(p).kind == Kind::Chance) next.insert(p);
      }
      for (const auto& inf : net.influences) {
        if (net.causal_target(inf) != v) continue;
        for (const auto& c : inf.condition_vars()) {
          if (net.variable(c).kind == Kind::Chance) next.insert(c);
        }
      }
    }
    if (next.size() != relevant.size()) {
      relevant = std::move(next);
      grew = true;
    }
  }
  return {relevant.begin(), relevant.end()};
}

}  // namespace

std::vector<std::string> common_case_vars(const Network& net, const Strategy& a,
                                          const Strategy& b) {
  auto va = relevant_chance_vars(net, a);
  auto vb = relevant_chance_vars(net, b);
  std::set<std::string> u(va.begin(), va.end());
  u.insert(vb.begin(), vb.end());
  return {u.begin(), u.end()};
}

CaseAnalysis case_analysis_over(const Network& net, const Strategy& s,
                                const std::vector<std::string>& case_vars) {
  auto value = net.value_node();
  if (!value) throw Error("case analysis requires a value node");
  if (case_vars.size() > 16) throw Error("case analysis over too many chance variables");

  RowOrderCache cache{&net, {}};
  CaseAnalysis ca;
  ca.case_vars = case_vars;
  ca.outcome_vars = net.row_vars(*value);

  // Causal topological order restricted to the case variables.
  std::vector<std::string> factor_order;
  for (const auto& id : net.causal_topological_order()) {
    if (std::find(case_vars.begin(), case_vars.end(), id) != case_vars.end()) {
      factor_order.push_back(id);
    }
  }
  if (factor_order.size() != case_vars.size()) {
    throw Error("case variables are not all present in the network");
  }

  const std::size_t n = std::size_t{1} << case_vars.size();
  for (std::size_t i = 0; i < n; ++i) {
    CaseRow row;
    row.scenario = assignment_from_index(case_vars, i);
    Assignment decisions = s.resolve_decisions(net, row.scenario);

    Assignment world = row.scenario;
    world.insert(decisions.begin(), decisions.end());

    for (const auto& v : factor_order) {
      Assignment ctx;
      for (const auto& w : net.row_vars(v)) {
        auto it = world.find(w);
        if (it == world.end()) {
          throw Error("case analysis: factor for '" + v + "' needs unresolved variable '" + w + "'");
        }
        ctx[w] = it->second;
      }
      row.probability.atoms.push_back(make_atom(net, cache, v, row.scenario.at(v), ctx));
    }
    row.probability.normalize();

    for (const auto& v : ca.outcome_vars) {
      auto it = world.find(v);
      if (it == world.end()) throw Error("case analysis: outcome variable '" + v + "' unresolved");
      row.outcome[v] = it->second;
    }
    ca.rows.push_back(std::move(row));
  }
  return ca;
}

CaseAnalysis case_analysis(const Network& net, const Strategy& s) {
  return case_analysis_over(net, s, relevant_chance_vars(net, s));
}

bool realization_equivalent(const Network& net, const Strategy& a, const Strategy& b) {
  auto vars = common_case_vars(net, a, b);
  CaseAnalysis ca = case_analysis_over(net, a, vars);
  CaseAnalysis cb = case_analysis_over(net, b, vars);

  auto outcome_map = [](const CaseAnalysis& ca_) {
    std::map<Assignment, std::vector<SymbolicProb>> m;
    for (const auto& row : ca_.rows) m[row.outcome].push_back(row.probability);
    for (auto& [k, v] : m) std::sort(v.begin(), v.end());
    return m;
  };
  auto ma = outcome_map(ca);
  auto mb = outcome_map(cb);
  if (ma.size() != mb.size()) return false;
  for (auto ita = ma.begin(), itb = mb.begin(); ita != ma.end(); ++ita, ++itb) {
    if (ita->first != itb->first) return false;
    if (ita->second.size() != itb->second.size()) return false;
    for (std::size_t i = 0; i < ita->second.size(); ++i) {
      if (!ita->second[i].same_symbol(itb->second[i])) return false;
    }
  }
  return true;
}

MixedStrategy make_mixed(std::vector<std::pair<Strategy, MixWeight>> components) {
  if (components.empty()) throw Error("make_mixed: no components");
  bool symbolic = std::any_of(components.begin(), components.end(),
                              [](const auto& c) { return c.second.atom.has_value(); });
  if (symbolic) {
    if (components.size() != 2 || !components[0].second.atom || !components[1].second.atom) {
      throw Error("make_mixed: symbolic weights must form a complementary pair");
    }
    const ProbAtom& w0 = *components[0].second.atom;
    const ProbAtom& w1 = *components[1].second.atom;
    if (w0.var != w1.var || w0.given != w1.given || w0.positive == w1.positive) {
      throw Error("make_mixed: symbolic weights do not sum to 1");
    }
  } else {
    double sum = 0;
    for (const auto& [s, w] : components) {
      if (w.numeric < 0.0 || w.numeric > 1.0) throw Error("make_mixed: weight outside [0,1]");
      sum += w.numeric;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw Error("make_mixed: weights do not sum to 1");
    components.erase(std::remove_if(components.begin(), components.end(),
                                    [](const auto& c) { return c.second.numeric == 0.0; }),
                     components.end());
  }
  MixedStrategy m;
  m.components = std::move(components);
  return m;
}

bool sums_to_one(const Network& net, const CaseAnalysis& ca) {
  // The rows form a complete binary tree over the case variables in causal
  // order; telescope from the last factor inward.
  (void)net;
  std::vector<std::string> vars = ca.case_vars;
  // Peel one variable at a time: group rows pairwise by dropping the atom
  // whose variable is the one peeled; the pair must carry complementary
  // atoms and otherwise identical products.
  struct Item {
    Assignment scenario;
    SymbolicProb prob;
  };
  std::vector<Item> items;
  for (const auto& row : ca.rows) items.push_back({row.scenario, row.probability});

  // Peel in reverse causal order = reverse of atom emission order; identify
  // each variable by presence in the scenario.
  while (!vars.empty()) {
    // Choose a variable that is never a conditioning variable of the other
    // remaining atoms (a causal leaf among the remaining set).
    std::string leaf;
    for (const auto& cand : vars) {
      bool conditions_other = false;
      for (const auto& item : items) {
        for (const auto& atom : item.prob.atoms) {
          if (atom.var != cand && atom.given.count(cand)) conditions_other = true;
        }
      }
      if (!conditions_other) {
        leaf = cand;
        break;
      }
    }
    if (leaf.empty()) return false;

    std::map<Assignment, std::vector<Item>> groups;
    for (auto& item : items) {
      Assignment key = item.scenario;
      key.erase(leaf);
      groups[key].push_back(item);
    }
    std::vector<Item> next;
    for (auto& [key, pair] : groups) {
      if (pair.size() != 2) return false;
      auto strip = [&](Item& it) {
        SymbolicProb p;
        p.coefficient = it.prob.coefficient;
        bool found = false;
        for (const auto& a : it.prob.atoms) {
          if (a.var == leaf && !found) {
            found = true;
            continue;
          }
          p.atoms.push_back(a);
        }
        if (!found) return false;
        it.prob = p;
        return true;
      };
      if (!strip(pair[0]) || !strip(pair[1])) return false;
      if (!pair[0].prob.same_symbol(pair[1].prob)) return false;
      next.push_back({key, pair[0].prob});
    }
    items = std::move(next);
    vars.erase(std::remove(vars.begin(), vars.end(), leaf), vars.end());
  }
  if (items.size() != 1) return false;
  return items[0].prob.atoms.empty() && std::abs(items[0].prob.coefficient - 1.0) <= 1e-12;
}

}  // namespace qpn
