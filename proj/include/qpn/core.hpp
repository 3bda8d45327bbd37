#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpn {

struct Error : std::runtime_error {
  explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

// Qualitative influence direction.
enum class Sign : std::uint8_t { Positive, Negative, Zero, Unknown };

char sign_char(Sign s);
std::optional<Sign> sign_from_char(char c);

enum class Kind : std::uint8_t { Chance, Decision, Value };

std::string kind_name(Kind k);

struct Variable {
  std::string id;
  Kind kind = Kind::Chance;
  std::string true_literal;
  std::string false_literal;

  const std::string& literal(bool value) const { return value ? true_literal : false_literal; }
};

// Truth assignment; true means the variable's true-literal holds.
using Assignment = std::map<std::string, bool>;

// Conjunction of literals over distinct variables. Empty set means "true".
struct Condition {
  std::map<std::string, bool> literals;

  bool always() const { return literals.empty(); }
  bool mentions(const std::string& var) const { return literals.count(var) != 0; }
  bool satisfied_by(const Assignment& a) const;
  bool consistent_with(const Condition& other) const;
  // Conjunction; nullopt when the two force a variable both ways.
  std::optional<Condition> conjoin(const Condition& other) const;

  bool operator==(const Condition&) const = default;
  bool operator<(const Condition& other) const { return literals < other.literals; }
};

struct InfluenceEntry {
  Condition when;
  Sign sign = Sign::Unknown;

  bool operator==(const InfluenceEntry&) const = default;
};

// Signed conditional influence on one link. Entry conditions must be pairwise
// mutually exclusive; condition regions covered by no entry read as Unknown.
// `reversed` marks an arc flipped during reduction: the probabilistic
// (causal) orientation of such an arc is target -> source.
struct QualitativeInfluence {
  std::string source;
  std::string target;
  std::vector<InfluenceEntry> entries;
  bool reversed = false;

  // Sign at a context that fixes every condition variable.
  Sign sign_at(const Assignment& context) const;
  // Sign over a partial context: folds the per-completion signs, yielding
  // Unknown as soon as two completions disagree or some region is uncovered.
  Sign sign_over(const Assignment& partial_context) const;
  std::set<std::string> condition_vars() const;
};

struct InformationalLink {
  std::string source;
  std::string target;

  bool operator==(const InformationalLink&) const = default;
  bool operator<(const InformationalLink& o) const {
    return source != o.source ? source < o.source : target < o.target;
  }
};

// Undirected documentation-only dependence note (dashed line). Ignored by all
// inference; kept so models round-trip.
struct DependenceAnnotation {
  std::string a;
  std::string b;

  bool operator==(const DependenceAnnotation&) const = default;
  bool operator<(const DependenceAnnotation& o) const {
    return a != o.a ? a < o.a : b < o.b;
  }
};

struct Violation {
  std::string element;
  std::string message;
};

class Network {
 public:
  std::vector<Variable> variables;                  // kept sorted by id
  std::vector<QualitativeInfluence> influences;     // kept sorted by (source, target)
  std::vector<InformationalLink> informational;     // kept sorted
  std::vector<DependenceAnnotation> dependencies;   // kept sorted

  void add_variable(Variable v);
  // Appends one entry to the influence on (src, dst), creating the link if
  // needed. Mutual exclusivity is checked by validate(), not here.
  void add_influence_entry(const std::string& src, const std::string& dst, InfluenceEntry entry);
  void add_informational(const std::string& src, const std::string& dst);
  void add_dependence(const std::string& a, const std::string& b);

  bool has_variable(const std::string& id) const;
  const Variable& variable(const std::string& id) const;
  const QualitativeInfluence* influence_between(const std::string& src, const std::string& dst) const;
  QualitativeInfluence* influence_between(const std::string& src, const std::string& dst);

  std::optional<std::string> value_node() const;

  // Stored-orientation graph queries (influences only).
  std::vector<std::string> influence_parents(const std::string& id) const;
  std::vector<std::string> influence_children(const std::string& id) const;
  // Informational predecessors of a decision.
  std::vector<std::string> informational_parents(const std::string& id) const;
  std::vector<std::string> informational_children(const std::string& id) const;

  // Causal (de-reversed) orientation; this is the factorization used for all
  // probabilistic semantics.
  std::string causal_source(const QualitativeInfluence& inf) const {
    return inf.reversed ? inf.target : inf.source;
  }
  std::string causal_target(const QualitativeInfluence& inf) const {
    return inf.reversed ? inf.source : inf.target;
  }
  std::vector<std::string> causal_parents(const std::string& id) const;
  // CPT row variables of a chance node (or table variables of the value
  // node): causal parents plus condition variables of causal in-influences.
  std::vector<std::string> row_vars(const std::string& id) const;

  bool path_exists(const std::string& from, const std::string& to) const;  // stored orientation, influences + informational
  bool influence_path_exists(const std::string& from, const std::string& to) const;
  std::vector<std::string> topological_order() const;  // throws Error on a cycle
  std::vector<std::string> causal_topological_order() const;

  bool appears_in_foreign_condition(const std::string& id) const;

  void remove_variable(const std::string& id);  // drops the node and every incident link

  std::string render_literal(const std::string& var, bool value) const;
  std::string render_condition(const Condition& c) const;
  std::string render_assignment(const Assignment& a) const;
};

// Structural invariant check; violations are data, not failures, and the
// report is empty exactly when the network is well formed.
std::vector<Violation> validate(const Network& net);

// Enumerates assignments over `vars` (sorted); index bit k corresponds to
// vars[k], with 1 = true-literal.
Assignment assignment_from_index(const std::vector<std::string>& vars, std::size_t index);
std::size_t assignment_index(const std::vector<std::string>& vars, const Assignment& a);

}  // namespace qpn
