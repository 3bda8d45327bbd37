#include "qpn/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qpn {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct Rng {
  std::uint64_t state;
  Rng(std::uint64_t seed, std::uint64_t index) {
    state = seed ^ 0xD1B54A32D192ED03ULL;
    state = state * 0x9E3779B97F4A7C15ULL + index;
    splitmix64(state);
    splitmix64(state);
  }
  double unit() { return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53; }
};

}  // namespace

bool SignVerification::clean() const {
  return std::all_of(links.begin(), links.end(),
                     [](const LinkCheck& l) { return l.violations == 0; });
}

std::string SignVerification::render(const Network& reduced) const {
  (void)reduced;
  std::ostringstream out;
  out << "sign verification over " << samples << " sampled models\n";
  for (const auto& l : links) {
    out << "  " << l.source << " -> " << l.target << " : " << l.sign;
    if (!l.condition.empty() && l.condition != "true") out << " | " << l.condition;
    if (l.sign == '?') {
      out << "  [unconstrained; saw " << l.saw_greater << " greater, " << l.saw_less
          << " less across " << l.checks << " comparisons]";
    } else {
      out << "  [" << (l.violations == 0 ? "confirmed" : "VIOLATED") << " in " << l.checks
          << " comparisons";
      if (l.violations) out << "; " << l.violations << " violations; first: " << l.first_violation;
      out << "]";
    }
    out << "\n";
  }
  return out.str();
}

OracleContext::OracleContext(const Network& original) : original_(original) {
  if (auto issues = validate(original_); !issues.empty()) {
    throw Error("oracle: network invalid: " + issues.front().element + ": " +
                issues.front().message);
  }
  // The causal factorization is only a joint distribution if condition
  // variables precede the influences they gate.
  {
    std::map<std::string, std::set<std::string>> extra;
    for (const auto& inf : original_.influences) {
      for (const auto& c : inf.condition_vars()) {
        extra[original_.causal_target(inf)].insert(c);
      }
    }
    std::set<std::string> placed;
    bool progress = true;
    std::size_t placed_count = 0;
    while (progress) {
      progress = false;
      for (const auto& v : original_.variables) {
        if (placed.count(v.id)) continue;
        bool ready = true;
        for (const auto& p : original_.causal_parents(v.id)) ready &= placed.count(p) > 0;
        for (const auto& c : extra[v.id]) ready &= placed.count(c) > 0;
        if (ready) {
          placed.insert(v.id);
          ++placed_count;
          progress = true;
        }
      }
    }
    if (placed_count != original_.variables.size()) {
      throw Error("oracle: a condition variable depends on its influence's target; "
                  "the factorization is circular");
    }
  }

  for (const auto& id : original_.causal_topological_order()) {
    if (original_.variable(id).kind == Kind::Chance) chance_.push_back(id);
  }
  if (chance_.size() > 20) throw Error("oracle: more than 20 chance variables");

  for (const auto& id : chance_) {
    VarPlan plan;
    plan.id = id;
    plan.row_vars = original_.row_vars(id);
    if (plan.row_vars.empty()) {
      plan.trivial = true;
    } else {
      plan.order = induced_probability_order(original_, id);  // throws on contradiction
    }
    plans_.push_back(std::move(plan));
  }
  auto value = original_.value_node();
  utility_vars_ = original_.row_vars(*value);
  if (!utility_vars_.empty()) {
    utility_order_ = induced_utility_order(original_);
  }
}

ConcreteModel OracleContext::sample(const SamplerConfig& cfg, int index) const {
  Rng rng(cfg.seed, static_cast<std::uint64_t>(index));
  ConcreteModel model;
  model.margin = cfg.epsilon;

  for (const auto& plan : plans_) {
    Cpt cpt;
    cpt.row_vars = plan.row_vars;
    if (plan.trivial) {
      cpt.rows = {0.05 + 0.9 * rng.unit()};
    } else {
      const auto depths = plan.order.depths();
      const int max_depth = *std::max_element(depths.begin(), depths.end());
      const double slots = max_depth + 1;
      std::vector<double> class_value(plan.order.class_count);
      for (int c = 0; c < plan.order.class_count; ++c) {
        class_value[c] = (depths[c] + 0.05 + 0.9 * rng.unit()) / slots;
      }
      model.margin = std::min(model.margin, 0.1 / slots);
      const std::size_t n = std::size_t{1} << plan.row_vars.size();
      cpt.rows.resize(n);
      for (std::size_t i = 0; i < n; ++i) cpt.rows[i] = class_value[plan.order.class_of[i]];
    }
    model.cpts[plan.id] = std::move(cpt);
  }

  model.utility_vars = utility_vars_;
  if (utility_vars_.empty()) {
    model.utility = {rng.unit()};
  } else {
    const auto depths = utility_order_.depths();
    std::vector<double> class_value(utility_order_.class_count);
    for (int c = 0; c < utility_order_.class_count; ++c) {
      class_value[c] = depths[c] + 0.05 + 0.9 * rng.unit();
    }
    const std::size_t n = std::size_t{1} << utility_vars_.size();
    model.utility.resize(n);
    for (std::size_t i = 0; i < n; ++i) model.utility[i] = class_value[utility_order_.class_of[i]];
  }
  return model;
}

double OracleContext::joint_probability(const ConcreteModel& model, const Assignment& chance,
                                        const Assignment& decisions) const {
  double p = 1.0;
  for (const auto& [var, value] : chance) {
    const Cpt& cpt = model.cpts.at(var);
    Assignment ctx;
    for (const auto& w : cpt.row_vars) {
      if (auto it = chance.find(w); it != chance.end()) {
        ctx[w] = it->second;
      } else if (auto dt = decisions.find(w); dt != decisions.end()) {
        ctx[w] = dt->second;
      } else {
        throw Error("oracle: context variable '" + w + "' unresolved");
      }
    }
    double row = cpt.rows[cpt.row_vars.empty() ? 0 : assignment_index(cpt.row_vars, ctx)];
    p *= value ? row : 1.0 - row;
  }
  return p;
}

double OracleContext::expected_utility(const ConcreteModel& model, const Strategy& s) const {
  const std::size_t n = std::size_t{1} << chance_.size();
  double eu = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Assignment chance = assignment_from_index(chance_, i);
    Assignment decisions = s.resolve_decisions(original_, chance);
    double p = joint_probability(model, chance, decisions);
    Assignment world = chance;
    world.insert(decisions.begin(), decisions.end());
    Assignment uctx;
    for (const auto& v : model.utility_vars) uctx[v] = world.at(v);
    eu += p * model.utility[model.utility_vars.empty() ? 0
                                                       : assignment_index(model.utility_vars, uctx)];
  }
  return eu;
}

double OracleContext::expected_utility(const ConcreteModel& model, const MixedStrategy& m) const {
  double eu = 0.0;
  for (const auto& [s, w] : m.components) {
    double weight = w.atom ? eval_atom(model, *w.atom) : w.numeric;
    eu += weight * expected_utility(model, s);
  }
  return eu;
}

double OracleContext::eval_atom(const ConcreteModel& model, const ProbAtom& atom) const {
  // Ancestral closure of the atom's chance variables.
  std::set<std::string> needed{atom.var};
  Assignment decisions;
  for (const auto& [v, val] : atom.given) {
    if (original_.variable(v).kind == Kind::Decision) {
      decisions[v] = val;
    } else {
      needed.insert(v);
    }
  }
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& v : std::set<std::string>(needed)) {
      for (const auto& p : original_.causal_parents(v)) {
        if (original_.variable(p).kind == Kind::Chance && needed.insert(p).second) grew = true;
      }
      for (const auto& w : original_.row_vars(v)) {
        if (original_.variable(w).kind == Kind::Chance) {
          if (needed.insert(w).second) grew = true;
        } else if (!decisions.count(w)) {
          throw Error("atom " + atom.var + ": decision '" + w + "' not given; weight unresolvable");
        }
      }
    }
  }
  std::vector<std::string> vars(needed.begin(), needed.end());
  const std::size_t n = std::size_t{1} << vars.size();
  double matching = 0.0, conditioning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Assignment chance = assignment_from_index(vars, i);
    bool given_ok = true;
    for (const auto& [v, val] : atom.given) {
      if (!decisions.count(v) && chance.at(v) != val) given_ok = false;
    }
    if (!given_ok) continue;
    double p = joint_probability(model, chance, decisions);
    conditioning += p;
    if (chance.at(atom.var) == atom.positive) matching += p;
  }
  if (conditioning <= 0.0) throw Error("atom " + atom.var + ": conditioning event has probability 0");
  return matching / conditioning;
}

double OracleContext::eval_prob(const ConcreteModel& model, const SymbolicProb& p) const {
  double out = p.coefficient;
  for (const auto& a : p.atoms) out *= eval_atom(model, a);
  return out;
}

double OracleContext::scenario_probability(const ConcreteModel& model, const Strategy& s,
                                           const Assignment& scenario) const {
  const std::size_t n = std::size_t{1} << chance_.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Assignment chance = assignment_from_index(chance_, i);
    bool match = true;
    for (const auto& [v, val] : scenario) {
      if (chance.at(v) != val) match = false;
    }
    if (!match) continue;
    Assignment decisions = s.resolve_decisions(original_, chance);
    total += joint_probability(model, chance, decisions);
  }
  return total;
}

double OracleContext::conditional_utility(const ConcreteModel& model, const Assignment& given) const {
  Assignment decisions;
  Assignment fixed_chance;
  for (const auto& [v, val] : given) {
    if (original_.variable(v).kind == Kind::Decision) {
      decisions[v] = val;
    } else {
      fixed_chance[v] = val;
    }
  }
  std::vector<std::string> free_vars;
  for (const auto& v : chance_) {
    if (!fixed_chance.count(v)) free_vars.push_back(v);
  }
  const std::size_t n = std::size_t{1} << free_vars.size();
  double weight_sum = 0.0, value_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Assignment chance = fixed_chance;
    Assignment free = assignment_from_index(free_vars, i);
    chance.insert(free.begin(), free.end());
    double p = joint_probability(model, chance, decisions);
    Assignment world = chance;
    world.insert(decisions.begin(), decisions.end());
    Assignment uctx;
    for (const auto& v : model.utility_vars) {
      auto it = world.find(v);
      if (it == world.end()) throw Error("conditional_utility: '" + v + "' unresolved");
      uctx[v] = it->second;
    }
    weight_sum += p;
    value_sum += p * model.utility[model.utility_vars.empty()
                                       ? 0
                                       : assignment_index(model.utility_vars, uctx)];
  }
  if (weight_sum <= 0.0) throw Error("conditional_utility: conditioning event has probability 0");
  return value_sum / weight_sum;
}

std::vector<std::string> OracleContext::check_model(const ConcreteModel& model) const {
  std::vector<std::string> issues;
  for (const auto& plan : plans_) {
    const Cpt& cpt = model.cpts.at(plan.id);
    for (double r : cpt.rows) {
      if (!(r > 0.0 && r < 1.0)) issues.push_back(plan.id + ": CPT row outside (0,1)");
    }
    if (plan.trivial) continue;
    const std::size_t n = std::size_t{1} << plan.row_vars.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        int ci = plan.order.class_of[i];
        int cj = plan.order.class_of[j];
        if (ci == cj) {
          if (cpt.rows[i] != cpt.rows[j]) issues.push_back(plan.id + ": zero-merged rows differ");
        } else if (plan.order.above[ci][cj] && cpt.rows[i] < cpt.rows[j] + model.margin) {
          issues.push_back(plan.id + ": ordered CPT rows violate margin");
        }
      }
    }
  }
  if (!model.utility_vars.empty()) {
    const std::size_t n = std::size_t{1} << model.utility_vars.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        int ci = utility_order_.class_of[i];
        int cj = utility_order_.class_of[j];
        if (ci == cj) {
          if (model.utility[i] != model.utility[j]) {
            issues.push_back("utility: merged outcomes differ");
          }
        } else if (utility_order_.above[ci][cj] && model.utility[i] < model.utility[j] + 0.05) {
          issues.push_back("utility: ordered outcomes violate margin");
        }
      }
    }
  }
  return issues;
}

OracleContext::EvalPlan OracleContext::make_plan(const Strategy& s) const {
  EvalPlan plan;
  const std::size_t n = std::size_t{1} << chance_.size();
  plan.row_index.resize(n * chance_.size());
  plan.utility_row.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Assignment chance = assignment_from_index(chance_, i);
    Assignment decisions = s.resolve_decisions(original_, chance);
    Assignment world = chance;
    world.insert(decisions.begin(), decisions.end());
    for (std::size_t k = 0; k < chance_.size(); ++k) {
      const auto& plan_k = plans_[k];
      Assignment ctx;
      for (const auto& w : plan_k.row_vars) ctx[w] = world.at(w);
      plan.row_index[i * chance_.size() + k] =
          plan_k.row_vars.empty() ? 0u
                                  : static_cast<std::uint32_t>(assignment_index(plan_k.row_vars, ctx));
    }
    if (utility_vars_.empty()) {
      plan.utility_row[i] = 0;
    } else {
      Assignment uctx;
      for (const auto& v : utility_vars_) uctx[v] = world.at(v);
      plan.utility_row[i] = static_cast<std::uint32_t>(assignment_index(utility_vars_, uctx));
    }
  }
  return plan;
}

OracleContext::FastModel OracleContext::fasten(const ConcreteModel& model) const {
  FastModel fast;
  for (const auto& id : chance_) fast.rows.push_back(model.cpts.at(id).rows);
  fast.utility = model.utility;
  return fast;
}

double OracleContext::fast_eu(const FastModel& model, const EvalPlan& plan) const {
  const std::size_t nc = chance_.size();
  const std::size_t n = std::size_t{1} << nc;
  double eu = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double p = 1.0;
    for (std::size_t k = 0; k < nc; ++k) {
      double row = model.rows[k][plan.row_index[i * nc + k]];
      p *= ((i >> k) & 1u) ? row : 1.0 - row;
    }
    eu += p * model.utility[plan.utility_row[i]];
  }
  return eu;
}

ConcreteModel sample_model(const Network& net, const SamplerConfig& cfg, int index) {
  return OracleContext(net).sample(cfg, index);
}

double expected_utility(const ConcreteModel& model, const Network& net, const Strategy& s) {
  return OracleContext(net).expected_utility(model, s);
}

double expected_utility(const ConcreteModel& model, const Network& net, const MixedStrategy& m) {
  return OracleContext(net).expected_utility(model, m);
}

namespace {

template <typename A, typename B>
DominanceCheck run_dominance_check(const Network& net, const SamplerConfig& cfg, const A& a,
                                   const B& b) {
  OracleContext ctx(net);
  DominanceCheck out;
  for (int i = 0; i < cfg.samples; ++i) {
    ConcreteModel model = ctx.sample(cfg, i);
    double ea = ctx.expected_utility(model, a);
    double eb = ctx.expected_utility(model, b);
    if (ea < eb - 1e-12) {
      out.holds = false;
      out.violated_index = i;
      out.eu_dominator = ea;
      out.eu_dominated = eb;
      return out;
    }
    if (ea > eb + 1e-12) out.strict_somewhere = true;
  }
  return out;
}

}  // namespace

DominanceCheck check_dominance_numeric(const Network& net, const SamplerConfig& cfg,
                                       const Strategy& a, const Strategy& b) {
  return run_dominance_check(net, cfg, a, b);
}

DominanceCheck check_dominance_numeric(const Network& net, const SamplerConfig& cfg,
                                       const MixedStrategy& a, const Strategy& b) {
  return run_dominance_check(net, cfg, a, b);
}

SignVerification verify_reduction_signs(const Network& original, const Network& reduced,
                                        const std::vector<ReductionStep>& log,
                                        const SamplerConfig& cfg) {
  (void)log;
  OracleContext ctx(original);
  SignVerification report;
  report.samples = cfg.samples;

  struct Probe {
    LinkCheck check;
    Condition condition;
    std::vector<std::string> background;  // chance + decisions to enumerate
    bool value_target = false;
  };
  std::vector<Probe> probes;

  auto descendants = [&](const std::string& v) {
    std::set<std::string> out;
    std::vector<std::string> stack{v};
    while (!stack.empty()) {
      std::string cur = stack.back();
      stack.pop_back();
      for (const auto& inf : original.influences) {
        if (original.causal_source(inf) == cur && out.insert(original.causal_target(inf)).second) {
          stack.push_back(original.causal_target(inf));
        }
      }
    }
    return out;
  };

  for (const auto& inf : reduced.influences) {
    bool value_target = reduced.variable(inf.target).kind == Kind::Value;
    auto desc_src = descendants(inf.source);
    std::set<std::string> excluded = desc_src;
    if (!value_target) {
      for (const auto& d : descendants(inf.target)) excluded.insert(d);
    }
    excluded.insert(inf.source);
    excluded.insert(inf.target);

    std::vector<InfluenceEntry> entries = inf.entries;
    if (entries.empty()) entries.push_back({Condition{}, Sign::Unknown});
    for (const auto& entry : entries) {
      Probe probe;
      probe.value_target = value_target;
      probe.condition = entry.when;
      probe.check.source = inf.source;
      probe.check.target = inf.target;
      probe.check.sign = sign_char(entry.sign);
      probe.check.condition = reduced.render_condition(entry.when);
      for (const auto& v : original.variables) {
        if (v.kind == Kind::Value) continue;
        if (excluded.count(v.id)) continue;
        if (entry.when.mentions(v.id)) continue;
        probe.background.push_back(v.id);
      }
      probes.push_back(std::move(probe));
    }
  }

  for (int i = 0; i < cfg.samples; ++i) {
    ConcreteModel model = ctx.sample(cfg, i);
    for (auto& probe : probes) {
      const std::size_t n = std::size_t{1} << probe.background.size();
      for (std::size_t bg = 0; bg < n; ++bg) {
        Assignment context = assignment_from_index(probe.background, bg);
        for (const auto& [v, val] : probe.condition.literals) context[v] = val;

        double hi, lo;
        Assignment with_src = context;
        with_src[probe.check.source] = true;
        Assignment without_src = context;
        without_src[probe.check.source] = false;
        if (probe.value_target) {
          hi = ctx.conditional_utility(model, with_src);
          lo = ctx.conditional_utility(model, without_src);
        } else {
          ProbAtom atom;
          atom.var = probe.check.target;
          atom.positive = true;
          atom.given = with_src;
          hi = ctx.eval_atom(model, atom);
          atom.given = without_src;
          lo = ctx.eval_atom(model, atom);
        }
        probe.check.checks++;
        double diff = hi - lo;
        bool bad = false;
        switch (probe.check.sign) {
          case '+': bad = diff < -1e-12; break;
          case '-': bad = diff > 1e-12; break;
          case '0': bad = std::abs(diff) > 1e-12; break;
          default:
            if (diff > 1e-12) probe.check.saw_greater++;
            if (diff < -1e-12) probe.check.saw_less++;
            break;
        }
        if (bad) {
          probe.check.violations++;
          if (probe.check.first_violation.empty()) {
            std::ostringstream w;
            w << "model " << i << ", context " << original.render_assignment(context) << ": "
              << hi << " vs " << lo;
            probe.check.first_violation = w.str();
          }
        }
      }
    }
  }
  for (auto& probe : probes) report.links.push_back(std::move(probe.check));
  return report;
}

std::string describe_model(const Network& net, const ConcreteModel& model) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& [var, cpt] : model.cpts) {
    const std::size_t n = std::size_t{1} << cpt.row_vars.size();
    for (std::size_t i = 0; i < n; ++i) {
      Assignment ctx = assignment_from_index(cpt.row_vars, i);
      out << "cpt " << net.variable(var).true_literal;
      if (!cpt.row_vars.empty()) out << " | " << net.render_assignment(ctx);
      out << " = " << cpt.rows[i] << "\n";
    }
  }
  const std::size_t n = model.utility_vars.empty() ? 1 : (std::size_t{1} << model.utility_vars.size());
  for (std::size_t i = 0; i < n; ++i) {
    out << "utility";
    if (!model.utility_vars.empty()) {
      out << " " << net.render_assignment(assignment_from_index(model.utility_vars, i));
    }
    out << " = " << model.utility[i] << "\n";
  }
  return out.str();
}

}  // namespace qpn
