#include "qpn/dominance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qpn {

std::string kind_name(DominanceProof::Kind k) {
  switch (k) {
    case DominanceProof::Kind::Pairwise: return "pairwise";
    case DominanceProof::Kind::KWay: return "kway";
    case DominanceProof::Kind::Mixed: return "mixed";
    case DominanceProof::Kind::InfoPrune: return "info-prune";
  }
  return "?";
}

std::string DominanceProof::render(const Network& net) const {
  std::string out = kind_name(kind);
  if (!rule.empty()) out += " (" + rule + ")";
  out += route == Route::Symbolic ? " [symbolic]" : " [sampled evidence]";
  if (strict) out += " [strict]";
  out += "\n  dominated: " + dominated.render(net) + "\n";
  if (mixed_dominator) {
    out += "  dominator: mixture of";
    for (const auto& [s, w] : mixed_dominator->components) {
      out += "\n    (" + s.render(net) + ") @ " + w.render(net);
    }
    out += "\n";
  } else {
    for (const auto& d : dominators) out += "  dominator: " + d.render(net) + "\n";
  }
  for (const auto& e : evidence) out += "  " + e + "\n";
  return out;
}

std::optional<DominanceProof> pairwise_dominates(const Network& net, const Strategy& a,
                                                 const Strategy& b, const PartialOrder& po,
                                                 std::string* why_not) {
  auto fail = [&](const std::string& why) {
    if (why_not) *why_not = why;
    return std::nullopt;
  };
  auto vars = common_case_vars(net, a, b);
  CaseAnalysis ca = case_analysis_over(net, a, vars);
  CaseAnalysis cb = case_analysis_over(net, b, vars);

  DominanceProof proof;
  proof.kind = DominanceProof::Kind::Pairwise;
  proof.route = DominanceProof::Route::Symbolic;
  proof.dominated = b;
  proof.dominators = {a};

  bool any_strict = false;
  for (std::size_t i = 0; i < ca.rows.size(); ++i) {
    const CaseRow& ra = ca.rows[i];
    const CaseRow& rb = cb.rows[i];
    if (!ra.probability.same_symbol(rb.probability)) {
      return fail("case " + net.render_assignment(ra.scenario) +
                  ": probabilities differ symbolically (" + ra.probability.render(net) + " vs " +
                  rb.probability.render(net) + ")");
    }
    Preference pref = po.compare(ra.outcome, rb.outcome);
    if (pref == Preference::No || pref == Preference::Incomparable) {
      return fail("case " + net.render_assignment(ra.scenario) + ": outcome " +
                  net.render_assignment(ra.outcome) + " vs " + net.render_assignment(rb.outcome) +
                  " is " + preference_name(pref) + " in the utility order");
    }
    bool strict = pref == Preference::Yes;
    any_strict |= strict;
    proof.evidence.push_back("case " + net.render_assignment(ra.scenario) + " @ " +
                             ra.probability.render(net) + ": " + net.render_assignment(ra.outcome) +
                             (strict ? " > " : " = ") + net.render_assignment(rb.outcome));
  }
  if (!any_strict) return fail("no case with a strict improvement");
  proof.strict = true;
  return proof;
}

std::optional<DominanceProof> kway_dominated(const Network& net, const Strategy& s,
                                             const std::vector<Strategy>& dominators,
                                             const PartialOrder& po, const OracleContext* oracle,
                                             const SamplerConfig* cfg) {
  std::vector<Strategy> others;
  for (const auto& d : dominators) {
    if (!(d == s)) others.push_back(d);
  }
  if (others.empty()) return std::nullopt;

  // Degenerate split: one member already covers every case.
  for (const auto& d : others) {
    if (auto p = pairwise_dominates(net, d, s, po)) {
      DominanceProof proof = *p;
      proof.kind = DominanceProof::Kind::KWay;
      proof.dominators = dominators;
      proof.evidence.insert(proof.evidence.begin(),
                            "degenerate region split: " + d.render(net) + " covers all cases");
      return proof;
    }
  }

  if (!oracle || !cfg) return std::nullopt;

  // Sampled covering check: max of the dominators' expected utilities.
  std::vector<OracleContext::EvalPlan> plans;
  for (const auto& d : others) plans.push_back(oracle->make_plan(d));
  auto plan_s = oracle->make_plan(s);
  bool strict = false;
  for (int i = 0; i < cfg->samples; ++i) {
    ConcreteModel model = oracle->sample(*cfg, i);
    auto fast = oracle->fasten(model);
    double eu_s = oracle->fast_eu(fast, plan_s);
    double best = -1e300;
    for (const auto& plan : plans) best = std::max(best, oracle->fast_eu(fast, plan));
    if (best < eu_s - 1e-12) return std::nullopt;
    if (best > eu_s + 1e-12) strict = true;
  }
  if (!strict) return std::nullopt;
  DominanceProof proof;
  proof.kind = DominanceProof::Kind::KWay;
  proof.route = DominanceProof::Route::SampledEvidence;
  proof.dominated = s;
  proof.dominators = dominators;
  proof.strict = true;
  proof.evidence.push_back("covering max EU of dominators never below the strategy in " +
                           std::to_string(cfg->samples) + " sampled models, strictly above in some");
  return proof;
}

std::optional<DominanceProof> mixed_dominates(const Network& net, const MixedStrategy& m,
                                              const Strategy& s, const PartialOrder& po,
                                              const OracleContext* oracle,
                                              const SamplerConfig* cfg) {
  // Symbolic route: every component's case analysis matches s's partition
  // with identical probabilities; weights then blend out of the comparison.
  {
    std::vector<std::string> vars = common_case_vars(net, s, s);
    for (const auto& [comp, w] : m.components) {
      auto u = common_case_vars(net, comp, s);
      std::set<std::string> uni(vars.begin(), vars.end());
      uni.insert(u.begin(), u.end());
      vars.assign(uni.begin(), uni.end());
    }
    CaseAnalysis cs = case_analysis_over(net, s, vars);
    bool ok = true;
    bool any_strict = false;
    DominanceProof proof;
    proof.kind = DominanceProof::Kind::Mixed;
    proof.route = DominanceProof::Route::Symbolic;
    proof.dominated = s;
    proof.mixed_dominator = m;
    for (const auto& [comp, w] : m.components) {
      if (!ok) break;
      CaseAnalysis cc = case_analysis_over(net, comp, vars);
      for (std::size_t i = 0; i < cs.rows.size(); ++i) {
        if (!cc.rows[i].probability.same_symbol(cs.rows[i].probability)) {
          ok = false;
          break;
        }
        Preference pref = po.compare(cc.rows[i].outcome, cs.rows[i].outcome);
        if (pref == Preference::No || pref == Preference::Incomparable) {
          ok = false;
          break;
        }
        if (pref == Preference::Yes) {
          any_strict = true;
          proof.evidence.push_back(
              "case " + net.render_assignment(cs.rows[i].scenario) + ": component outcome " +
              net.render_assignment(cc.rows[i].outcome) + " > " +
              net.render_assignment(cs.rows[i].outcome));
        }
      }
    }
    if (ok && any_strict) {
      proof.strict = true;
      proof.evidence.insert(proof.evidence.begin(),
                            "matched cases with identical probabilities across all components");
      return proof;
    }
  }

  if (!oracle || !cfg) return std::nullopt;

  std::vector<std::pair<OracleContext::EvalPlan, const MixWeight*>> comp_plans;
  for (const auto& [comp, w] : m.components) comp_plans.emplace_back(oracle->make_plan(comp), &w);
  auto plan_s = oracle->make_plan(s);
  bool strict = false;
  for (int i = 0; i < cfg->samples; ++i) {
    ConcreteModel model = oracle->sample(*cfg, i);
    auto fast = oracle->fasten(model);
    double eu_m = 0.0;
    for (const auto& [plan, w] : comp_plans) {
      double weight = (*w).atom ? oracle->eval_atom(model, *(*w).atom) : (*w).numeric;
      eu_m += weight * oracle->fast_eu(fast, plan);
    }
    double eu_s = oracle->fast_eu(fast, plan_s);
    if (eu_m < eu_s - 1e-12) return std::nullopt;
    if (eu_m > eu_s + 1e-12) strict = true;
  }
  if (!strict) return std::nullopt;
  DominanceProof proof;
  proof.kind = DominanceProof::Kind::Mixed;
  proof.route = DominanceProof::Route::SampledEvidence;
  proof.dominated = s;
  proof.mixed_dominator = m;
  proof.strict = true;
  proof.evidence.push_back("mixture EU never below the strategy in " +
                           std::to_string(cfg->samples) + " sampled models, strictly above in some");
  return proof;
}

namespace {

// Constant-choice decisions of a strategy, as a context assignment.
Assignment constant_decisions(const Strategy& s) {
  Assignment ctx;
  for (const auto& p : s.policies) {
    if (p.constant()) ctx[p.decision] = p.choices.at(0);
  }
  return ctx;
}

Strategy fix_variable(const Strategy& s, const std::string& w, bool value) {
  Strategy out = s;
  for (auto& p : out.policies) {
    auto it = std::find(p.domain.begin(), p.domain.end(), w);
    if (it == p.domain.end()) continue;
    const std::size_t bit = std::size_t{1} << (it - p.domain.begin());
    for (std::size_t i = 0; i < p.choices.size(); ++i) {
      const std::size_t src = value ? (i | bit) : (i & ~bit);
      p.choices[i] = p.choices[src];
    }
  }
  return out;
}

// Chance variables that only ever feed informational links (causal leaves).
bool causal_leaf(const Network& net, const std::string& v) {
  for (const auto& inf : net.influences) {
    if (net.causal_source(inf) == v) return false;
  }
  return true;
}

}  // namespace

PruneResult hypothetical_prune(const Network& net, const std::vector<Strategy>& strategies) {
  PruneResult result;
  auto value = net.value_node();
  if (!value) return result;
  std::set<std::size_t> dead;

  auto prune = [&](std::size_t idx, DominanceProof proof) {
    if (dead.count(idx)) return;
    dead.insert(idx);
    result.pruned.push_back(idx);
    result.proofs.push_back(std::move(proof));
  };

  // --- R1: costly information left unread ---------------------------------
  for (const auto& var : net.variables) {
    if (var.kind != Kind::Decision) continue;
    const std::string& q = var.id;
    const auto* on_value = net.influence_between(q, *value);
    if (!on_value) continue;
    Sign direct = on_value->sign_over({});
    if (direct != Sign::Positive && direct != Sign::Negative) continue;
    if (net.influence_children(q).size() != 1) continue;

    // q's only other role may be gating signal variables (causal leaves that
    // inform downstream decisions) through entry conditions.
    std::vector<std::string> signals;
    bool clean = true;
    for (const auto& inf : net.influences) {
      bool mentions_q = false;
      for (const auto& e : inf.entries) mentions_q |= e.when.mentions(q);
      if (!mentions_q) continue;
      std::string w = net.causal_target(inf);
      if (net.variable(w).kind != Kind::Chance || !causal_leaf(net, w)) {
        clean = false;
        break;
      }
      signals.push_back(w);
    }
    if (!clean) continue;

    const bool costly_value = (direct == Sign::Negative);  // the true-literal hurts
    for (std::size_t i = 0; i < strategies.size(); ++i) {
      const Strategy& s = strategies[i];
      const Policy& pq = s.policy_for(q);
      if (!pq.constant() || pq.choices.at(0) != costly_value) continue;
      bool reads_signal = false;
      for (const auto& p : s.policies) {
        for (const auto& w : signals) {
          if (p.depends_on(w)) reads_signal = true;
        }
      }
      if (reads_signal) continue;

      Strategy flipped = s;
      for (auto& p : flipped.policies) {
        if (p.decision == q) std::fill(p.choices.begin(), p.choices.end(), !costly_value);
      }
      DominanceProof proof;
      proof.kind = DominanceProof::Kind::InfoPrune;
      proof.rule = "R1";
      proof.dominated = s;
      proof.dominators = {flipped};
      proof.strict = true;
      proof.evidence.push_back(
          "decision " + q + " has a strictly " +
          std::string(direct == Sign::Negative ? "negative" : "positive") +
          " influence on utility and no downstream policy reads its information channel");
      prune(i, std::move(proof));
    }
  }

  // --- R2: policy varies on a variable carrying no influence ---------------
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    if (dead.count(i)) continue;
    const Strategy& s = strategies[i];
    Assignment context = constant_decisions(s);
    for (const auto& p : s.policies) {
      for (const auto& w : p.domain) {
        if (net.variable(w).kind != Kind::Chance || !p.depends_on(w)) continue;
        if (!causal_leaf(net, w)) continue;
        bool inert = true;
        for (const auto& inf : net.influences) {
          if (net.causal_target(inf) != w) continue;
          Assignment ctx;
          for (const auto& c : inf.condition_vars()) {
            if (auto it = context.find(c); it != context.end()) ctx[c] = it->second;
          }
          if (inf.sign_over(ctx) != Sign::Zero) inert = false;
        }
        if (!inert) continue;

        Strategy hi = fix_variable(s, w, true);
        Strategy lo = fix_variable(s, w, false);
        DominanceProof proof;
        proof.kind = DominanceProof::Kind::InfoPrune;
        proof.rule = "R2";
        proof.dominated = s;
        proof.dominators = {hi, lo};
        proof.strict = false;
        proof.evidence.push_back("policy for " + p.decision + " varies on " + w +
                                 ", which carries no influence in this context; the strategy is "
                                 "realization-equivalent to a mixture of the two " +
                                 w + "-fixed strategies");
        prune(i, std::move(proof));
        break;
      }
      if (dead.count(i)) break;
    }
  }

  // --- R3: anti-monotone policy under a positive reversed signal ----------
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    if (dead.count(i)) continue;
    const Strategy& s = strategies[i];
    Assignment context = constant_decisions(s);

    // Exactly one non-constant policy, reading exactly one variable.
    const Policy* active = nullptr;
    bool shape_ok = true;
    for (const auto& p : s.policies) {
      if (p.constant()) continue;
      if (active) shape_ok = false;
      active = &p;
    }
    if (!shape_ok || !active) continue;
    std::string w;
    for (const auto& v : active->domain) {
      if (!active->depends_on(v)) continue;
      if (!w.empty()) shape_ok = false;
      w = v;
    }
    if (!shape_ok || w.empty() || net.variable(w).kind != Kind::Chance) continue;

    // The signal's single incident influence must be a reversed arc w -> m
    // whose sign resolves under this strategy's context.
    const QualitativeInfluence* reversed_arc = nullptr;
    int incident = 0;
    for (const auto& inf : net.influences) {
      if (inf.source == w || inf.target == w) {
        ++incident;
        if (inf.reversed && inf.source == w) reversed_arc = &inf;
      }
    }
    if (!reversed_arc || incident != 1) continue;
    const std::string m = reversed_arc->target;
    if (net.variable(m).kind != Kind::Chance) continue;
    Assignment cond_ctx;
    for (const auto& c : reversed_arc->condition_vars()) {
      if (auto it = context.find(c); it != context.end()) cond_ctx[c] = it->second;
    }
    Sign signal_sign = reversed_arc->sign_over(cond_ctx);
    if (signal_sign != Sign::Positive && signal_sign != Sign::Negative) continue;
    const bool indicator = (signal_sign == Sign::Positive);  // w-literal that raises Pr(m)

    // Outcome chance variables must be exactly the mediator.
    bool mediator_only = true;
    for (const auto& v : net.row_vars(*value)) {
      if (net.variable(v).kind == Kind::Chance && v != m) mediator_only = false;
    }
    if (!mediator_only) continue;

    // The active decision's utility influence, conditioned exactly on m.
    const auto* on_value = net.influence_between(active->decision, *value);
    if (!on_value) continue;
    if (auto cv = on_value->condition_vars(); cv != std::set<std::string>{m}) continue;
    Assignment at_m{{m, true}}, at_not_m{{m, false}};
    Sign s_m = on_value->sign_at(at_m);
    Sign s_not_m = on_value->sign_at(at_not_m);

    bool act_when_m;  // the choice favored in state m
    if (s_not_m == Sign::Negative && (s_m == Sign::Positive || s_m == Sign::Unknown)) {
      act_when_m = true;  // acting hurts outside m
    } else if (s_not_m == Sign::Positive && (s_m == Sign::Negative || s_m == Sign::Unknown)) {
      act_when_m = false;
    } else {
      continue;
    }

    // Anti-monotone: acts exactly on the signal value indicating not-m.
    bool at_w = active->choice_at({{w, indicator}});
    bool at_not_w = active->choice_at({{w, !indicator}});
    if (!(at_w == !act_when_m && at_not_w == act_when_m)) continue;

    ProbAtom alpha;
    alpha.var = w;
    alpha.positive = indicator;
    alpha.given[m] = true;
    for (const auto& [c, v] : cond_ctx) alpha.given[c] = v;
    MixWeight w_hi{alpha, 0.0};
    ProbAtom beta = alpha;
    beta.positive = !alpha.positive;
    MixWeight w_lo{beta, 0.0};
    MixedStrategy mix = make_mixed(
        {{fix_variable(s, w, indicator), w_hi}, {fix_variable(s, w, !indicator), w_lo}});

    DominanceProof proof;
    proof.kind = DominanceProof::Kind::InfoPrune;
    proof.rule = "R3";
    proof.dominated = s;
    proof.dominators = {fix_variable(s, w, indicator), fix_variable(s, w, !indicator)};
    proof.mixed_dominator = mix;
    proof.strict = true;
    proof.evidence.push_back(
        "signal " + w + " positively indicates " + m + " while the policy for " + active->decision +
        " acts against it; dominated by the simulated-signal mixture with weight " +
        alpha.render(net));
    prune(i, std::move(proof));
  }

  return result;
}

namespace {

std::size_t index_of(const std::vector<Strategy>& all, const Strategy& s) {
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i] == s) return i;
  }
  throw Error("strategy not found in enumeration");
}

// Decisions removed during reduction carry forced policies in the log; those
// must be reattached before a reduced-net strategy can drive the original
// network.
Strategy extend_with_forced(const Strategy& s, const std::vector<ReductionStep>& log) {
  Strategy out = s;
  for (const auto& step : log) {
    if (step.op != ReductionStep::Op::RemoveDecision) continue;
    Policy p;
    p.decision = step.subjects.front();
    p.domain = step.policy_domain;
    p.choices = step.policy_choice;
    if (p.choices.empty()) p.choices.push_back(false);
    out.policies.push_back(std::move(p));
  }
  std::sort(out.policies.begin(), out.policies.end(),
            [](const Policy& a, const Policy& b) { return a.decision < b.decision; });
  return out;
}

// Symbolic mixture-weight candidates: the atoms of the victim's own case
// analysis (the paper's alpha = Pr(R~|D) is of this form).
std::vector<ProbAtom> alpha_candidates(const Network& net, const Strategy& s) {
  std::set<ProbAtom> seen;
  std::vector<ProbAtom> out;
  CaseAnalysis ca = case_analysis(net, s);
  for (const auto& row : ca.rows) {
    for (const auto& atom : row.probability.atoms) {
      if (seen.insert(atom).second) out.push_back(atom);
    }
  }
  return out;
}

}  // namespace

AdmissibleReport admissible_set(const Network& original, const AdmissibleOptions& options) {
  if (auto issues = validate(original); !issues.empty()) {
    throw Error("invalid network: " + issues.front().element + ": " + issues.front().message);
  }
  AdmissibleReport report;
  auto [reduced, log] = reduce(original);
  report.reduced = reduced;
  report.reduction_log = log;
  bool reduced_has_decision = false;
  for (const auto& v : reduced.variables) reduced_has_decision |= v.kind == Kind::Decision;
  if (reduced_has_decision) {
    report.strategies = enumerate_strategies(reduced);
  } else {
    // Every decision was resolved during reduction; the only strategy left
    // is the empty one plus the forced policies in the log.
    report.strategies = {Strategy{}};
    report.notes.push_back("all decisions resolved during reduction; see the step log\n");
  }
  report.utility_order = induced_utility_order(reduced);
  const std::size_t n = report.strategies.size();

  OracleContext oracle(original);
  const SamplerConfig& cfg = options.oracle_cfg;

  // Expected-utility table over the verification samples; also drives the
  // numeric (sampled evidence) routes.
  std::vector<OracleContext::EvalPlan> plans;
  plans.reserve(n);
  for (const auto& s : report.strategies) plans.push_back(oracle.make_plan(extend_with_forced(s, log)));
  std::vector<ConcreteModel> models;
  std::vector<std::vector<double>> eu(cfg.samples, std::vector<double>(n));
  std::vector<double> best_eu(cfg.samples, -1e300);
  for (int i = 0; i < cfg.samples; ++i) {
    models.push_back(oracle.sample(cfg, i));
    auto fast = oracle.fasten(models.back());
    for (std::size_t k = 0; k < n; ++k) {
      eu[i][k] = oracle.fast_eu(fast, plans[k]);
      best_eu[i] = std::max(best_eu[i], eu[i][k]);
    }
  }
  report.samples_checked = cfg.samples;
  // A strategy that tops some sampled model is never pruned on sampled
  // evidence alone.
  std::vector<bool> ever_best(n, false);
  for (int i = 0; i < cfg.samples; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (eu[i][k] >= best_eu[i] - 1e-9) ever_best[k] = true;
    }
  }

  std::vector<bool> alive(n, true);
  std::vector<std::string> survivor_notes(n);

  if (options.prune) {
    PruneResult pr = hypothetical_prune(reduced, report.strategies);
    for (std::size_t k = 0; k < pr.pruned.size(); ++k) {
      alive[pr.pruned[k]] = false;
      report.proofs.push_back(pr.proofs[k]);
    }
  }

  if (options.pairwise) {
    for (std::size_t b = 0; b < n; ++b) {
      std::string reasons;
      bool found = false;
      for (std::size_t a = 0; a < n && !found; ++a) {
        if (a == b) continue;
        std::string why;
        if (auto p = pairwise_dominates(reduced, report.strategies[a], report.strategies[b],
                                        report.utility_order, &why)) {
          if (alive[b]) {
            alive[b] = false;
            report.proofs.push_back(*p);
          }
          found = true;
        } else if (alive[b]) {
          reasons += "    vs #" + std::to_string(a) + ": " + why + "\n";
        }
      }
      if (!found && alive[b]) {
        survivor_notes[b] += "  pairwise: no dominator among pure strategies\n" + reasons;
      }
    }
  }

  if (options.kway) {
    for (std::size_t b = 0; b < n; ++b) {
      if (!alive[b] || ever_best[b]) continue;
      bool found = false;
      for (std::size_t a1 = 0; a1 < n && !found; ++a1) {
        if (a1 == b) continue;
        for (std::size_t a2 = a1 + 1; a2 < n && !found; ++a2) {
          if (a2 == b) continue;
          // The degenerate split repeats pairwise; only the covering check
          // can add information here.
          bool strict = false, covered = true;
          for (int i = 0; i < cfg.samples && covered; ++i) {
            double best = std::max(eu[i][a1], eu[i][a2]);
            if (best < eu[i][b] - 1e-12) covered = false;
            if (best > eu[i][b] + 1e-12) strict = true;
          }
          if (!covered || !strict) continue;
          DominanceProof proof;
          proof.kind = DominanceProof::Kind::KWay;
          proof.route = DominanceProof::Route::SampledEvidence;
          proof.dominated = report.strategies[b];
          proof.dominators = {report.strategies[a1], report.strategies[a2]};
          proof.strict = true;
          proof.evidence.push_back("covering max EU of {#" + std::to_string(a1) + ", #" +
                                   std::to_string(a2) + "} never below #" + std::to_string(b) +
                                   " in " + std::to_string(cfg.samples) + " sampled models");
          report.proofs.push_back(std::move(proof));
          alive[b] = false;
          found = true;
        }
      }
      if (!found && alive[b]) survivor_notes[b] += "  kway: no covering pair over the samples\n";
    }
  }

  if (options.mixed) {
    // Memoized symbolic-weight evaluations per (atom, model).
    std::map<ProbAtom, std::vector<double>> weight_cache;
    auto weights_for = [&](const ProbAtom& atom) -> const std::vector<double>& {
      auto it = weight_cache.find(atom);
      if (it == weight_cache.end()) {
        std::vector<double> w(cfg.samples);
        for (int i = 0; i < cfg.samples; ++i) w[i] = oracle.eval_atom(models[i], atom);
        it = weight_cache.emplace(atom, std::move(w)).first;
      }
      return it->second;
    };

    for (std::size_t b = 0; b < n; ++b) {
      if (!alive[b] || ever_best[b]) continue;
      auto alphas = alpha_candidates(reduced, report.strategies[b]);
      bool found = false;
      for (std::size_t a1 = 0; a1 < n && !found; ++a1) {
        if (a1 == b) continue;
        for (std::size_t a2 = 0; a2 < n && !found; ++a2) {
          if (a2 == b || a2 == a1) continue;
          for (const auto& alpha : alphas) {
            const auto& w = weights_for(alpha);
            bool strict = false, covered = true;
            for (int i = 0; i < cfg.samples && covered; ++i) {
              double eu_m = w[i] * eu[i][a1] + (1.0 - w[i]) * eu[i][a2];
              if (eu_m < eu[i][b] - 1e-12) covered = false;
              if (eu_m > eu[i][b] + 1e-12) strict = true;
            }
            if (!covered || !strict) continue;
            ProbAtom beta = alpha;
            beta.positive = !alpha.positive;
            MixedStrategy mix = make_mixed({{report.strategies[a1], MixWeight{alpha, 0.0}},
                                            {report.strategies[a2], MixWeight{beta, 0.0}}});
            DominanceProof proof;
            proof.kind = DominanceProof::Kind::Mixed;
            proof.route = DominanceProof::Route::SampledEvidence;
            proof.dominated = report.strategies[b];
            proof.mixed_dominator = mix;
            proof.dominators = {report.strategies[a1], report.strategies[a2]};
            proof.strict = true;
            proof.evidence.push_back("mixture {#" + std::to_string(a1) + " @ " +
                                     alpha.render(reduced) + ", #" + std::to_string(a2) +
                                     " @ complement} never below #" + std::to_string(b) + " in " +
                                     std::to_string(cfg.samples) + " sampled models");
            report.proofs.push_back(std::move(proof));
            alive[b] = false;
            found = true;
            break;
          }
        }
      }
      if (!found && alive[b]) {
        survivor_notes[b] += "  mixed: no dominating symbolic-weight mixture over the samples\n";
      }
    }
  }

  // --- Oracle cross-check of every emitted proof ---------------------------
  for (const auto& proof : report.proofs) {
    std::size_t victim = index_of(report.strategies, proof.dominated);
    std::vector<std::size_t> dom;
    for (const auto& d : proof.dominators) dom.push_back(index_of(report.strategies, d));
    for (int i = 0; i < cfg.samples; ++i) {
      double dominator_eu;
      if (proof.mixed_dominator) {
        dominator_eu = 0.0;
        for (const auto& [comp, w] : proof.mixed_dominator->components) {
          double weight = w.atom ? oracle.eval_atom(models[i], *w.atom) : w.numeric;
          dominator_eu += weight * eu[i][index_of(report.strategies, comp)];
        }
      } else if (proof.kind == DominanceProof::Kind::KWay ||
                 (proof.kind == DominanceProof::Kind::InfoPrune && proof.rule == "R2")) {
        dominator_eu = -1e300;
        for (auto d : dom) dominator_eu = std::max(dominator_eu, eu[i][d]);
      } else {
        dominator_eu = eu[i][dom.front()];
      }
      if (dominator_eu < eu[i][victim] - 1e-12) {
        throw OracleContradiction(
            "proof " + kind_name(proof.kind) + (proof.rule.empty() ? "" : "/" + proof.rule) +
            " for strategy #" + std::to_string(victim) + " violated by sampled model " +
            std::to_string(i) + " (EU " + std::to_string(dominator_eu) + " < " +
            std::to_string(eu[i][victim]) + "); this is an implementation bug\n" +
            describe_model(original, models[i]));
      }
    }
  }

  for (std::size_t k = 0; k < n; ++k) {
    if (alive[k]) report.admissible.push_back(k);
  }

  // Per-model optimality must be achieved inside the admissible set.
  for (int i = 0; i < cfg.samples; ++i) {
    double best_alive = -1e300;
    for (auto k : report.admissible) best_alive = std::max(best_alive, eu[i][k]);
    if (best_alive < best_eu[i] - 1e-9) {
      throw OracleContradiction("sampled model " + std::to_string(i) +
                                ": optimal strategy excluded from the admissible set; this is an "
                                "implementation bug");
    }
  }

  for (std::size_t k = 0; k < n; ++k) {
    if (alive[k] && !survivor_notes[k].empty()) {
      report.notes.push_back("strategy #" + std::to_string(k) + " (" +
                             report.strategies[k].render(reduced) + ") survived:\n" +
                             survivor_notes[k]);
    }
  }
  return report;
}

std::string AdmissibleReport::render(const Network& original) const {
  (void)original;
  std::ostringstream out;
  out << "== reduction ==\n";
  for (const auto& step : reduction_log) out << "  " << step.to_line(reduced) << "\n";
  out << "== strategies (" << strategies.size() << ") ==\n";
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    out << "  #" << i << "  " << strategies[i].render(reduced) << "\n";
  }
  out << "== proofs (" << proofs.size() << ") ==\n";
  for (const auto& p : proofs) {
    std::istringstream lines(p.render(reduced));
    std::string line;
    while (std::getline(lines, line)) out << "  " << line << "\n";
  }
  out << "== admissible strategies (" << admissible.size() << " of " << strategies.size()
      << ") ==\n";
  for (auto k : admissible) out << "  #" << k << "  " << strategies[k].render(reduced) << "\n";
  if (!notes.empty()) {
    out << "== unresolved notes ==\n";
    for (const auto& nte : notes) out << "  " << nte;
  }
  out << "verified against " << samples_checked << " sampled models\n";
  return out.str();
}

}  // namespace qpn
