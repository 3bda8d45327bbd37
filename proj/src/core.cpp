#include "qpn/core.hpp"

#include <algorithm>
#include <cctype>

namespace qpn {

char sign_char(Sign s) {
  switch (s) {
    case Sign::Positive: return '+';
    case Sign::Negative: return '-';
    case Sign::Zero: return '0';
    case Sign::Unknown: return '?';
  }
  return '?';
}

std::optional<Sign> sign_from_char(char c) {
  switch (c) {
    case '+': return Sign::Positive;
    case '-': return Sign::Negative;
    case '0': return Sign::Zero;
    case '?': return Sign::Unknown;
  }
  return std::nullopt;
}

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::Chance: return "chance";
    case Kind::Decision: return "decision";
    case Kind::Value: return "value";
  }
  return "chance";
}

bool Condition::satisfied_by(const Assignment& a) const {
  for (const auto& [var, val] : literals) {
    auto it = a.find(var);
    if (it == a.end() || it->second != val) return false;
  }
  return true;
}

bool Condition::consistent_with(const Condition& other) const {
  for (const auto& [var, val] : literals) {
    auto it = other.literals.find(var);
    if (it != other.literals.end() && it->second != val) return false;
  }
  return true;
}

std::optional<Condition> Condition::conjoin(const Condition& other) const {
  if (!consistent_with(other)) return std::nullopt;
  Condition out = *this;
  out.literals.insert(other.literals.begin(), other.literals.end());
  return out;
}

Sign QualitativeInfluence::sign_at(const Assignment& context) const {
  for (const auto& e : entries) {
    if (e.when.satisfied_by(context)) return e.sign;
  }
  return Sign::Unknown;
}

Sign QualitativeInfluence::sign_over(const Assignment& partial_context) const {
  std::vector<std::string> free_vars;
  for (const auto& v : condition_vars()) {
    if (!partial_context.count(v)) free_vars.push_back(v);
  }
  std::optional<Sign> folded;
  const std::size_t cells = std::size_t{1} << free_vars.size();
  for (std::size_t i = 0; i < cells; ++i) {
    Assignment ctx = partial_context;
    Assignment extra = assignment_from_index(free_vars, i);
    ctx.insert(extra.begin(), extra.end());
    Sign s = sign_at(ctx);
    if (!folded) {
      folded = s;
    } else if (*folded != s) {
      return Sign::Unknown;
    }
  }
  return folded.value_or(Sign::Unknown);
}

std::set<std::string> QualitativeInfluence::condition_vars() const {
  std::set<std::string> out;
  for (const auto& e : entries) {
    for (const auto& [var, val] : e.when.literals) out.insert(var);
  }
  return out;
}

void Network::add_variable(Variable v) {
  if (v.true_literal.empty()) {
    std::string base = v.id;
    std::transform(base.begin(), base.end(), base.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    v.true_literal = base;
    v.false_literal = base + "~";
  }
  auto pos = std::lower_bound(variables.begin(), variables.end(), v.id,
                              [](const Variable& a, const std::string& id) { return a.id < id; });
  if (pos != variables.end() && pos->id == v.id) throw Error("duplicate variable '" + v.id + "'");
  variables.insert(pos, std::move(v));
}

void Network::add_influence_entry(const std::string& src, const std::string& dst, InfluenceEntry entry) {
  if (auto* inf = influence_between(src, dst)) {
    inf->entries.push_back(std::move(entry));
    std::sort(inf->entries.begin(), inf->entries.end(),
              [](const InfluenceEntry& a, const InfluenceEntry& b) { return a.when < b.when; });
    return;
  }
  QualitativeInfluence inf;
  inf.source = src;
  inf.target = dst;
  inf.entries.push_back(std::move(entry));
  auto pos = std::lower_bound(influences.begin(), influences.end(), inf,
                              [](const QualitativeInfluence& a, const QualitativeInfluence& b) {
                                return a.source != b.source ? a.source < b.source : a.target < b.target;
                              });
  influences.insert(pos, std::move(inf));
}

void Network::add_informational(const std::string& src, const std::string& dst) {
  InformationalLink link{src, dst};
  auto pos = std::lower_bound(informational.begin(), informational.end(), link);
  if (pos != informational.end() && *pos == link) return;
  informational.insert(pos, link);
}

void Network::add_dependence(const std::string& a, const std::string& b) {
  DependenceAnnotation dep{std::min(a, b), std::max(a, b)};
  auto pos = std::lower_bound(dependencies.begin(), dependencies.end(), dep);
  if (pos != dependencies.end() && *pos == dep) return;
  dependencies.insert(pos, dep);
}

bool Network::has_variable(const std::string& id) const {
  auto pos = std::lower_bound(variables.begin(), variables.end(), id,
                              [](const Variable& a, const std::string& s) { return a.id < s; });
  return pos != variables.end() && pos->id == id;
}

const Variable& Network::variable(const std::string& id) const {
  auto pos = std::lower_bound(variables.begin(), variables.end(), id,
                              [](const Variable& a, const std::string& s) { return a.id < s; });
  if (pos == variables.end() || pos->id != id) throw Error("unknown variable '" + id + "'");
  return *pos;
}

const QualitativeInfluence* Network::influence_between(const std::string& src, const std::string& dst) const {
  for (const auto& inf : influences) {
    if (inf.source == src && inf.target == dst) return &inf;
  }
  return nullptr;
}

QualitativeInfluence* Network::influence_between(const std::string& src, const std::string& dst) {
  for (auto& inf : influences) {
    if (inf.source == src && inf.target == dst) return &inf;
  }
  return nullptr;
}

std::optional<std::string> Network::value_node() const {
  for (const auto& v : variables) {
    if (v.kind == Kind::Value) return v.id;
  }
  return std::nullopt;
}

std::vector<std::string> Network::influence_parents(const std::string& id) const {
  std::vector<std::string> out;
  for (const auto& inf : influences) {
    if (inf.target == id) out.push_back(inf.source);
  }
  return out;
}

std::vector<std::string> Network::influence_children(const std::string& id) const {
  std::vector<std::string> out;
  for (const auto& inf : influences) {
    if (inf.source == id) out.push_back(inf.target);
  }
  return out;
}

std::vector<std::string> Network::informational_parents(const std::string& id) const {
  std::vector<std::string> out;
  for (const auto& link : informational) {
    if (link.target == id) out.push_back(link.source);
  }
  return out;
}

std::vector<std::string> Network::informational_children(const std::string& id) const {
  std::vector<std::string> out;
  for (const auto& link : informational) {
    if (link.source == id) out.push_back(link.target);
  }
  return out;
}

std::vector<std::string> Network::causal_parents(const std::string& id) const {
  std::vector<std::string> out;
  for (const auto& inf : influences) {
    if (causal_target(inf) == id) out.push_back(causal_source(inf));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> Network::row_vars(const std::string& id) const {
  std::set<std::string> vars;
  for (const auto& inf : influences) {
    if (causal_target(inf) != id) continue;
    vars.insert(causal_source(inf));
    for (const auto& c : inf.condition_vars()) vars.insert(c);
  }
  return {vars.begin(), vars.end()};
}

namespace {

template <typename NextFn>
bool reachable(const std::string& from, const std::string& to, NextFn next) {
  if (from == to) return true;
  std::vector<std::string> stack{from};
  std::set<std::string> seen{from};
  while (!stack.empty()) {
    std::string cur = stack.back();
    stack.pop_back();
    for (const auto& n : next(cur)) {
      if (n == to) return true;
      if (seen.insert(n).second) stack.push_back(n);
    }
  }
  return false;
}

}  // namespace

bool Network::path_exists(const std::string& from, const std::string& to) const {
  return reachable(from, to, [this](const std::string& v) {
    std::vector<std::string> out = influence_children(v);
    auto info = informational_children(v);
    out.insert(out.end(), info.begin(), info.end());
    return out;
  });
}

bool Network::influence_path_exists(const std::string& from, const std::string& to) const {
  return reachable(from, to, [this](const std::string& v) { return influence_children(v); });
}

namespace {

std::vector<std::string> topo_sort(const Network& net, bool causal) {
  std::map<std::string, int> indegree;
  std::map<std::string, std::vector<std::string>> succ;
  for (const auto& v : net.variables) indegree[v.id] = 0;
  auto add_edge = [&](const std::string& a, const std::string& b) {
    succ[a].push_back(b);
    ++indegree[b];
  };
  for (const auto& inf : net.influences) {
    if (causal) {
      add_edge(net.causal_source(inf), net.causal_target(inf));
    } else {
      add_edge(inf.source, inf.target);
    }
  }
  for (const auto& link : net.informational) add_edge(link.source, link.target);

  std::set<std::string> ready;
  for (const auto& [id, deg] : indegree) {
    if (deg == 0) ready.insert(id);
  }
  std::vector<std::string> order;
  while (!ready.empty()) {
    std::string id = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(id);
    for (const auto& n : succ[id]) {
      if (--indegree[n] == 0) ready.insert(n);
    }
  }
  if (order.size() != net.variables.size()) throw Error("network graph has a cycle");
  return order;
}

}  // namespace

std::vector<std::string> Network::topological_order() const { return topo_sort(*this, false); }

std::vector<std::string> Network::causal_topological_order() const { return topo_sort(*this, true); }

bool Network::appears_in_foreign_condition(const std::string& id) const {
  for (const auto& inf : influences) {
    if (inf.source == id || inf.target == id) continue;
    for (const auto& e : inf.entries) {
      if (e.when.mentions(id)) return true;
    }
  }
  return false;
}

void Network::remove_variable(const std::string& id) {
  variables.erase(std::remove_if(variables.begin(), variables.end(),
                                 [&](const Variable& v) { return v.id == id; }),
                  variables.end());
  influences.erase(std::remove_if(influences.begin(), influences.end(),
                                  [&](const QualitativeInfluence& inf) {
                                    return inf.source == id || inf.target == id;
                                  }),
                   influences.end());
  informational.erase(std::remove_if(informational.begin(), informational.end(),
                                     [&](const InformationalLink& l) {
                                       return l.source == id || l.target == id;
                                     }),
                      informational.end());
  dependencies.erase(std::remove_if(dependencies.begin(), dependencies.end(),
                                    [&](const DependenceAnnotation& d) {
                                      return d.a == id || d.b == id;
                                    }),
                     dependencies.end());
}

std::string Network::render_literal(const std::string& var, bool value) const {
  return variable(var).literal(value);
}

std::string Network::render_condition(const Condition& c) const {
  if (c.always()) return "true";
  std::string out;
  for (const auto& [var, val] : c.literals) {
    if (!out.empty()) out += ", ";
    out += var + "=" + render_literal(var, val);
  }
  return out;
}

std::string Network::render_assignment(const Assignment& a) const {
  std::string out;
  for (const auto& [var, val] : a) {
    if (!out.empty()) out += " ";
    out += render_literal(var, val);
  }
  return out.empty() ? "(empty)" : out;
}

std::vector<Violation> validate(const Network& net) {
  std::vector<Violation> out;
  auto report = [&](const std::string& element, const std::string& message) {
    out.push_back({element, message});
  };

  std::vector<std::string> values;
  for (const auto& v : net.variables) {
    if (v.kind == Kind::Value) values.push_back(v.id);
    if (v.true_literal == v.false_literal) {
      report(v.id, "true and false literals must differ");
    }
  }
  if (values.empty()) report("(network)", "no value node");
  if (values.size() > 1) report("(network)", "multiple value nodes");

  for (const auto& inf : net.influences) {
    std::string element = inf.source + " -> " + inf.target;
    if (!net.has_variable(inf.source) || !net.has_variable(inf.target)) {
      report(element, "influence endpoint is not a declared variable");
      continue;
    }
    if (inf.source == inf.target) report(element, "self influence");
    if (net.variable(inf.source).kind == Kind::Value) {
      report(element, "influence source is the value node");
    }
    if (net.variable(inf.target).kind == Kind::Decision) {
      report(element, "decision variables cannot be influence targets");
    }
    for (const auto& e : inf.entries) {
      for (const auto& [var, val] : e.when.literals) {
        if (!net.has_variable(var)) {
          report(element, "condition mentions unknown variable '" + var + "'");
        } else if (var == inf.source || var == inf.target) {
          report(element, "condition mentions the influence's own " +
                              std::string(var == inf.source ? "source" : "target"));
        }
      }
    }
    for (std::size_t i = 0; i < inf.entries.size(); ++i) {
      for (std::size_t j = i + 1; j < inf.entries.size(); ++j) {
        if (inf.entries[i].when.consistent_with(inf.entries[j].when)) {
          report(element, "conditions not mutually exclusive: (" +
                              net.render_condition(inf.entries[i].when) + ") overlaps (" +
                              net.render_condition(inf.entries[j].when) + ")");
        }
      }
    }
  }
  for (std::size_t i = 0; i + 1 < net.influences.size(); ++i) {
    const auto& a = net.influences[i];
    const auto& b = net.influences[i + 1];
    if (a.source == b.source && a.target == b.target) {
      report(a.source + " -> " + a.target, "duplicate influence object for one link");
    }
  }

  for (const auto& link : net.informational) {
    std::string element = link.source + " ~> " + link.target;
    if (!net.has_variable(link.source) || !net.has_variable(link.target)) {
      report(element, "informational link endpoint is not a declared variable");
      continue;
    }
    if (net.variable(link.target).kind != Kind::Decision) {
      report(element, "informational links must target decision variables");
    }
    if (net.variable(link.source).kind == Kind::Value) {
      report(element, "the value node cannot inform a decision");
    }
    if (link.source == link.target) report(element, "self informational link");
  }

  for (const auto& dep : net.dependencies) {
    std::string element = dep.a + " -- " + dep.b;
    if (!net.has_variable(dep.a) || !net.has_variable(dep.b)) {
      report(element, "dependence annotation endpoint is not a declared variable");
    } else if (dep.a == dep.b) {
      report(element, "self dependence annotation");
    }
  }

  if (!values.empty()) {
    for (const auto& id : values) {
      if (!net.influence_children(id).empty() || !net.informational_children(id).empty()) {
        report(id, "value node has outgoing links");
      }
    }
  }

  try {
    net.topological_order();
  } catch (const Error&) {
    report("(network)", "directed graph over influences and informational links has a cycle");
  }

  return out;
}

Assignment assignment_from_index(const std::vector<std::string>& vars, std::size_t index) {
  Assignment out;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    out[vars[k]] = ((index >> k) & 1u) != 0;
  }
  return out;
}

std::size_t assignment_index(const std::vector<std::string>& vars, const Assignment& a) {
  std::size_t index = 0;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    auto it = a.find(vars[k]);
    if (it == a.end()) throw Error("assignment missing variable '" + vars[k] + "'");
    if (it->second) index |= (std::size_t{1} << k);
  }
  return index;
}

}  // namespace qpn
