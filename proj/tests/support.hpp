#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpn/core.hpp"
#include "qpn/oracle.hpp"
#include "qpn/strategy.hpp"

namespace testing_support {

inline std::uint64_t mix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct TestRng {
  std::uint64_t state;
  explicit TestRng(std::uint64_t seed) : state(seed ^ 0xA5A5A5A5DEADBEEFULL) {
    mix64(state);
    mix64(state);
  }
  std::uint64_t next() { return mix64(state); }
  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
  bool chance_pct(int pct) { return below(100) < pct; }
};

// Random valid network over at most 6 binary variables: one value node, a
// few decisions, random signed (sometimes conditional) influences, random
// informational links, and occasionally a dependence annotation. Retries
// internally until the constraints admit numeric models and the strategy
// space stays small.
inline qpn::Network random_network(std::uint64_t seed, bool need_decision) {
  static const std::vector<std::string> names = {"a", "b", "c", "d", "e", "f"};
  for (std::uint64_t attempt = 0;; ++attempt) {
    TestRng rng(seed * 1315423911ULL + attempt);
    const int n = 3 + rng.below(4);

    // Generation order doubles as the topological order.
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);

    std::vector<qpn::Kind> kind(n, qpn::Kind::Chance);
    kind[perm[n - 1]] = qpn::Kind::Value;
    int decisions = need_decision ? 1 + rng.below(2) : rng.below(3);
    for (int k = 0; k < decisions; ++k) {
      int pos = rng.below(n - 1);
      if (kind[perm[pos]] == qpn::Kind::Chance) kind[perm[pos]] = qpn::Kind::Decision;
    }

    qpn::Network net;
    for (int i = 0; i < n; ++i) {
      qpn::Variable v;
      v.id = names[i];
      v.kind = kind[i];
      net.add_variable(v);
    }

    auto random_sign = [&rng]() {
      int roll = rng.below(100);
      if (roll < 35) return qpn::Sign::Positive;
      if (roll < 70) return qpn::Sign::Negative;
      if (roll < 85) return qpn::Sign::Zero;
      return qpn::Sign::Unknown;
    };

    bool value_fed = false;
    for (int j = 1; j < n; ++j) {
      for (int i = 0; i < j; ++i) {
        const std::string& src = names[perm[i]];
        const std::string& dst = names[perm[j]];
        if (net.variable(dst).kind == qpn::Kind::Decision) continue;
        if (net.variable(src).kind == qpn::Kind::Value) continue;
        if (!rng.chance_pct(45)) continue;
        if (rng.chance_pct(20) && j >= 2) {
          // Conditional pair over an earlier third variable.
          int wpos = rng.below(j);
          const std::string& w = names[perm[wpos]];
          if (w != src && w != dst && net.variable(w).kind != qpn::Kind::Value) {
            qpn::InfluenceEntry hi, lo;
            hi.when.literals[w] = true;
            hi.sign = random_sign();
            lo.when.literals[w] = false;
            lo.sign = random_sign();
            net.add_influence_entry(src, dst, hi);
            net.add_influence_entry(src, dst, lo);
            value_fed |= net.variable(dst).kind == qpn::Kind::Value;
            continue;
          }
        }
        qpn::InfluenceEntry e;
        e.sign = random_sign();
        net.add_influence_entry(src, dst, e);
        value_fed |= net.variable(dst).kind == qpn::Kind::Value;
      }
    }
    if (!value_fed) {
      qpn::InfluenceEntry e;
      e.sign = qpn::Sign::Positive;
      net.add_influence_entry(names[perm[0]], names[perm[n - 1]], e);
    }

    for (int j = 1; j < n; ++j) {
      if (net.variable(names[perm[j]]).kind != qpn::Kind::Decision) continue;
      for (int i = 0; i < j; ++i) {
        if (net.variable(names[perm[i]]).kind == qpn::Kind::Value) continue;
        if (rng.chance_pct(40)) net.add_informational(names[perm[i]], names[perm[j]]);
      }
    }
    if (n >= 2 && rng.chance_pct(25)) {
      net.add_dependence(names[perm[0]], names[perm[1]]);
    }

    if (!qpn::validate(net).empty()) continue;

    // Keep the strategy space desk sized.
    std::size_t strategy_count = 1;
    bool too_big = false;
    for (const auto& [d, domain] : qpn::policy_domains(net)) {
      if (domain.size() > 2) too_big = true;
      if (!too_big) strategy_count *= std::size_t{1} << (std::size_t{1} << domain.size());
      if (strategy_count > 16) too_big = true;
    }
    if (too_big) continue;

    try {
      qpn::OracleContext probe(net);
    } catch (const qpn::Error&) {
      continue;  // contradictory constraints or circular conditioning
    }
    return net;
  }
}

}  // namespace testing_support
