#include "qpn/algebra.hpp"

#include <algorithm>

namespace qpn {

Sign multiply(Sign a, Sign b) {
  if (a == Sign::Zero || b == Sign::Zero) return Sign::Zero;
  if (a == Sign::Unknown || b == Sign::Unknown) return Sign::Unknown;
  if (a == b) return Sign::Positive;
  return Sign::Negative;
}

Sign add(Sign a, Sign b) {
  if (a == Sign::Zero) return b;
  if (b == Sign::Zero) return a;
  if (a == Sign::Unknown || b == Sign::Unknown) return Sign::Unknown;
  if (a == b) return a;
  return Sign::Unknown;  // + against -
}

namespace {

void normalize_entries(QualitativeInfluence& inf) {
  std::sort(inf.entries.begin(), inf.entries.end(),
            [](const InfluenceEntry& a, const InfluenceEntry& b) { return a.when < b.when; });
}

}  // namespace

QualitativeInfluence chain(const QualitativeInfluence& i1, const QualitativeInfluence& i2) {
  if (i1.target != i2.source) {
    throw Error("chain: endpoint mismatch, " + i1.source + "->" + i1.target + " then " +
                i2.source + "->" + i2.target);
  }
  QualitativeInfluence out;
  out.source = i1.source;
  out.target = i2.target;
  for (const auto& e1 : i1.entries) {
    for (const auto& e2 : i2.entries) {
      auto joint = e1.when.conjoin(e2.when);
      if (!joint) continue;
      Sign s = multiply(e1.sign, e2.sign);
      if (s == Sign::Unknown) continue;
      if (joint->mentions(out.source) || joint->mentions(out.target)) continue;
      out.entries.push_back({*joint, s});
    }
  }
  normalize_entries(out);
  return out;
}

QualitativeInfluence parallel(const QualitativeInfluence& i1, const QualitativeInfluence& i2) {
  if (i1.source != i2.source || i1.target != i2.target) {
    throw Error("parallel: influences must share endpoints");
  }
  std::set<std::string> vocab_set = i1.condition_vars();
  for (const auto& v : i2.condition_vars()) vocab_set.insert(v);
  std::vector<std::string> vocab(vocab_set.begin(), vocab_set.end());

  const std::size_t cells = std::size_t{1} << vocab.size();
  std::vector<Sign> combined(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    Assignment cell = assignment_from_index(vocab, i);
    combined[i] = add(i1.sign_at(cell), i2.sign_at(cell));
  }

  // Keep only the variables the combined sign depends on.
  std::vector<std::string> support;
  for (std::size_t k = 0; k < vocab.size(); ++k) {
    bool depends = false;
    for (std::size_t i = 0; i < cells && !depends; ++i) {
      if ((i >> k) & 1u) continue;
      if (combined[i] != combined[i | (std::size_t{1} << k)]) depends = true;
    }
    if (depends) support.push_back(vocab[k]);
  }

  QualitativeInfluence out;
  out.source = i1.source;
  out.target = i1.target;
  const std::size_t support_cells = std::size_t{1} << support.size();
  for (std::size_t i = 0; i < support_cells; ++i) {
    Assignment cell = assignment_from_index(support, i);
    // Extend to a full vocabulary cell; the sign is support-determined.
    Assignment full = cell;
    for (const auto& v : vocab) {
      if (!full.count(v)) full[v] = false;
    }
    Sign s = combined[assignment_index(vocab, full)];
    if (s == Sign::Unknown) continue;
    Condition when;
    when.literals = cell;
    out.entries.push_back({when, s});
  }
  normalize_entries(out);
  return out;
}

}  // namespace qpn
