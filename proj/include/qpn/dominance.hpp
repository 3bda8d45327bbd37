#pragma once

#include "qpn/core.hpp"
#include "qpn/oracle.hpp"
#include "qpn/order.hpp"
#include "qpn/reduction.hpp"
#include "qpn/strategy.hpp"

namespace qpn {

// Raised when a sampled model contradicts a symbolically derived proof; this
// always signals an implementation bug, never a property of the model.
struct OracleContradiction : Error {
  explicit OracleContradiction(const std::string& what_arg) : Error(what_arg) {}
};

struct DominanceProof {
  enum class Kind { Pairwise, KWay, Mixed, InfoPrune };
  enum class Route { Symbolic, SampledEvidence };

  Kind kind = Kind::Pairwise;
  Route route = Route::Symbolic;
  std::string rule;  // R1/R2/R3 for info-prune proofs
  Strategy dominated;
  std::vector<Strategy> dominators;           // pure dominators / mixture components
  std::optional<MixedStrategy> mixed_dominator;
  bool strict = false;
  std::vector<std::string> evidence;

  std::string render(const Network& net) const;
};

std::string kind_name(DominanceProof::Kind k);

// Matched-case first-order dominance generalized to the outcome partial
// order: the two case analyses are refined onto a common partition, every
// scenario must carry symbolically identical probability, every outcome of
// `a` must weakly dominate the matching outcome of `b`, and at least one
// must do so strictly. A nullopt result claims nothing.
std::optional<DominanceProof> pairwise_dominates(const Network& net, const Strategy& a,
                                                 const Strategy& b, const PartialOrder& po,
                                                 std::string* why_not = nullptr);

// Dominance with respect to a set: either some member pairwise-dominates s
// (degenerate split), or, when an oracle is supplied, the sampled covering
// max of the dominators' expected utilities never falls below s with at
// least one strict sample (reported as sampled evidence, not a theorem).
std::optional<DominanceProof> kway_dominated(const Network& net, const Strategy& s,
                                             const std::vector<Strategy>& dominators,
                                             const PartialOrder& po,
                                             const OracleContext* oracle = nullptr,
                                             const SamplerConfig* cfg = nullptr);

// Mixed-strategy dominance: symbolic route blends the component analyses and
// applies the matched-case criterion; numeric route checks expected utility
// across sampled models. A strategy dominated by a mixture is inadmissible
// because a mixture never beats its best pure component.
std::optional<DominanceProof> mixed_dominates(const Network& net, const MixedStrategy& m,
                                              const Strategy& s, const PartialOrder& po,
                                              const OracleContext* oracle = nullptr,
                                              const SamplerConfig* cfg = nullptr);

struct PruneResult {
  std::vector<std::size_t> pruned;  // indices into the input strategy list
  std::vector<DominanceProof> proofs;
};

// Hypothetical-optimality pruning over a reduced network:
//   R1  an unambiguously costly decision whose information channels go
//       unread is flipped to its beneficial value;
//   R2  a policy varying on a variable that carries no influence in the
//       strategy's context is realization-equivalent to a mixture of the
//       variable-fixed strategies;
//   R3  an anti-monotone policy under a positively reversed signal->state
//       influence is dominated by a simulated-signal mixture.
PruneResult hypothetical_prune(const Network& net, const std::vector<Strategy>& strategies);

struct AdmissibleOptions {
  bool pairwise = true;
  bool kway = false;
  bool mixed = false;
  bool prune = true;
  SamplerConfig oracle_cfg{42, 1000, 0.01};
};

struct AdmissibleReport {
  Network reduced;
  std::vector<ReductionStep> reduction_log;
  PartialOrder utility_order;
  std::vector<Strategy> strategies;
  std::vector<std::size_t> admissible;  // surviving indices, ascending
  std::vector<DominanceProof> proofs;
  std::vector<std::string> notes;  // per-survivor failure reasons, plus run notes
  int samples_checked = 0;

  std::string render(const Network& original) const;
};

// Enumerates strategies over the reduced network, applies the enabled
// techniques to a fixed point, and cross-checks every proof (and the
// admissible set's per-model optimality coverage) against sampled models of
// the original network. Throws OracleContradiction if any check fails.
AdmissibleReport admissible_set(const Network& original, const AdmissibleOptions& options);

}  // namespace qpn
