#include "qpn/order.hpp"

#include <algorithm>
#include <numeric>

namespace qpn {

std::string preference_name(Preference p) {
  switch (p) {
    case Preference::Yes: return "yes";
    case Preference::No: return "no";
    case Preference::Equal: return "equal";
    case Preference::Incomparable: return "incomparable";
  }
  return "incomparable";
}

int PartialOrder::class_of_assignment(const Assignment& a) const {
  return class_of[assignment_index(vars, a)];
}

Preference PartialOrder::compare(const Assignment& a, const Assignment& b) const {
  int ca = class_of_assignment(a);
  int cb = class_of_assignment(b);
  if (ca == cb) return Preference::Equal;
  if (above[ca][cb]) return Preference::Yes;
  if (above[cb][ca]) return Preference::No;
  return Preference::Incomparable;
}

bool PartialOrder::same_class(const Assignment& a, const Assignment& b) const {
  return class_of_assignment(a) == class_of_assignment(b);
}

std::vector<int> PartialOrder::depths() const {
  // depth(c) = length of the longest strict chain below c.
  std::vector<int> depth(class_count, -1);
  std::vector<int> order(class_count);
  std::iota(order.begin(), order.end(), 0);
  // Count how many classes each class is above; process from the bottom up.
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    std::size_t na = 0, nb = 0;
    for (int c = 0; c < class_count; ++c) {
      na += (above[a][c] && a != c);
      nb += (above[b][c] && b != c);
    }
    return na != nb ? na < nb : a < b;
  });
  for (int c : order) {
    int d = 0;
    for (int lower = 0; lower < class_count; ++lower) {
      if (lower != c && above[c][lower]) d = std::max(d, depth[lower] + 1);
    }
    depth[c] = d;
  }
  return depth;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

struct RawEdge {
  std::size_t hi;   // preferred assignment index
  std::size_t lo;   // dispreferred assignment index
  std::string via;  // influence source responsible for the edge
};

PartialOrder build_order(const Network& net, const std::string& target) {
  std::vector<std::string> vars = net.row_vars(target);
  if (vars.empty()) {
    PartialOrder po;
    po.class_of = {0};
    po.class_count = 1;
    po.above = {{true}};
    return po;
  }
  if (vars.size() > 12) {
    throw Error("order over '" + target + "' would need 2^" + std::to_string(vars.size()) +
                " elements; refusing beyond 2^12");
  }
  const std::size_t n = std::size_t{1} << vars.size();

  UnionFind uf(n);
  std::vector<RawEdge> edges;

  for (const auto& inf : net.influences) {
    if (net.causal_target(inf) != target) continue;
    const std::string& p = net.causal_source(inf);
    auto pit = std::find(vars.begin(), vars.end(), p);
    const std::size_t pbit = std::size_t{1} << (pit - vars.begin());
    for (const auto& entry : inf.entries) {
      if (entry.sign == Sign::Unknown) continue;
      for (std::size_t i = 0; i < n; ++i) {
        if ((i & pbit) == 0) continue;  // visit each pair once, from the p=true side
        Assignment hi = assignment_from_index(vars, i);
        if (!entry.when.satisfied_by(hi)) continue;
        const std::size_t j = i & ~pbit;
        switch (entry.sign) {
          case Sign::Zero:
            uf.unite(static_cast<int>(i), static_cast<int>(j));
            break;
          case Sign::Positive:
            edges.push_back({i, j, p});
            break;
          case Sign::Negative:
            edges.push_back({j, i, p});
            break;
          default:
            break;
        }
      }
    }
  }

  // Compress classes.
  std::map<int, int> class_ids;
  PartialOrder po;
  po.vars = vars;
  po.class_of.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    int root = uf.find(static_cast<int>(i));
    auto [it, inserted] = class_ids.try_emplace(root, static_cast<int>(class_ids.size()));
    po.class_of[i] = it->second;
  }
  po.class_count = static_cast<int>(class_ids.size());

  std::vector<std::vector<bool>> adj(po.class_count, std::vector<bool>(po.class_count, false));
  for (const auto& e : edges) {
    int a = po.class_of[e.hi];
    int b = po.class_of[e.lo];
    if (a != b) adj[a][b] = true;
  }

  // Transitive closure (Floyd-Warshall over the class DAG).
  po.above = adj;
  for (int c = 0; c < po.class_count; ++c) po.above[c][c] = true;
  for (int k = 0; k < po.class_count; ++k) {
    for (int a = 0; a < po.class_count; ++a) {
      if (!po.above[a][k]) continue;
      for (int b = 0; b < po.class_count; ++b) {
        if (po.above[k][b]) po.above[a][b] = true;
      }
    }
  }

  // A strict cycle between distinct classes means the signed constraints are
  // jointly unsatisfiable.
  for (int a = 0; a < po.class_count; ++a) {
    for (int b = a + 1; b < po.class_count; ++b) {
      if (po.above[a][b] && po.above[b][a]) {
        std::set<std::string> involved;
        for (const auto& e : edges) involved.insert(e.via + " -> " + target);
        std::string msg = "contradictory influence constraints on '" + target + "' (strict preference cycle via";
        for (const auto& s : involved) msg += " " + s + ";";
        msg += ")";
        throw ContradictoryConstraints(msg);
      }
    }
  }
  return po;
}

}  // namespace

PartialOrder induced_probability_order(const Network& net, const std::string& v) {
  if (net.variable(v).kind != Kind::Chance) {
    throw Error("probability order requested for non-chance variable '" + v + "'");
  }
  if (net.row_vars(v).empty()) throw Error("'" + v + "' has no predecessors to order over");
  return build_order(net, v);
}

PartialOrder induced_utility_order(const Network& net) {
  auto value = net.value_node();
  if (!value) throw Error("network has no value node");
  return build_order(net, *value);
}

Preference is_preferred(const PartialOrder& po, const Assignment& a, const Assignment& b) {
  return po.compare(a, b);
}

std::string PartialOrder::to_dot(const Network& net, const std::string& title) const {
  const std::size_t n = element_count();
  std::vector<std::vector<std::string>> members(class_count);
  for (std::size_t i = 0; i < n; ++i) {
    members[class_of[i]].push_back(net.render_assignment(assignment_from_index(vars, i)));
  }
  std::string out = "digraph \"" + title + "\" {\n  rankdir=TB;\n  node [shape=box];\n";
  for (int c = 0; c < class_count; ++c) {
    std::string label;
    for (const auto& m : members[c]) {
      if (!label.empty()) label += "\\n";
      label += m;
    }
    out += "  c" + std::to_string(c) + " [label=\"" + label + "\"];\n";
  }
  for (int a = 0; a < class_count; ++a) {
    for (int b = 0; b < class_count; ++b) {
      if (a == b || !above[a][b]) continue;
      bool covering = true;
      for (int k = 0; k < class_count && covering; ++k) {
        if (k != a && k != b && above[a][k] && above[k][b]) covering = false;
      }
      if (covering) out += "  c" + std::to_string(a) + " -> c" + std::to_string(b) + ";\n";
    }
  }
  out += "}\n";
  return out;
}

}  // namespace qpn
