#include "doctest.h"
#include "qpn/algebra.hpp"

using namespace qpn;

namespace {

const Sign kAll[] = {Sign::Positive, Sign::Negative, Sign::Zero, Sign::Unknown};

// The published operator tables, row-major over (+, -, 0, ?).
const Sign kChainTable[4][4] = {
    {Sign::Positive, Sign::Negative, Sign::Zero, Sign::Unknown},
    {Sign::Negative, Sign::Positive, Sign::Zero, Sign::Unknown},
    {Sign::Zero, Sign::Zero, Sign::Zero, Sign::Zero},
    {Sign::Unknown, Sign::Unknown, Sign::Zero, Sign::Unknown},
};
const Sign kParallelTable[4][4] = {
    {Sign::Positive, Sign::Unknown, Sign::Positive, Sign::Unknown},
    {Sign::Unknown, Sign::Negative, Sign::Negative, Sign::Unknown},
    {Sign::Positive, Sign::Negative, Sign::Zero, Sign::Unknown},
    {Sign::Unknown, Sign::Unknown, Sign::Unknown, Sign::Unknown},
};

QualitativeInfluence make_influence(const std::string& src, const std::string& dst,
                                    std::vector<InfluenceEntry> entries) {
  QualitativeInfluence inf;
  inf.source = src;
  inf.target = dst;
  inf.entries = std::move(entries);
  return inf;
}

InfluenceEntry entry(Sign s) { return {Condition{}, s}; }

InfluenceEntry entry(Sign s, const std::string& var, bool val) {
  InfluenceEntry e;
  e.sign = s;
  e.when.literals[var] = val;
  return e;
}

}  // namespace

TEST_CASE("chain operator matches its table on all 16 pairs") {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CHECK(multiply(kAll[i], kAll[j]) == kChainTable[i][j]);
    }
  }
  // Spot values called out in the text.
  CHECK(multiply(Sign::Positive, Sign::Positive) == Sign::Positive);
  CHECK(multiply(Sign::Zero, Sign::Unknown) == Sign::Zero);
  CHECK(multiply(Sign::Unknown, Sign::Unknown) == Sign::Unknown);
}

TEST_CASE("parallel operator matches its table on all 16 pairs") {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CHECK(add(kAll[i], kAll[j]) == kParallelTable[i][j]);
    }
  }
  CHECK(add(Sign::Positive, Sign::Negative) == Sign::Unknown);
  CHECK(add(Sign::Positive, Sign::Zero) == Sign::Positive);
  CHECK(add(Sign::Zero, Sign::Zero) == Sign::Zero);
}

TEST_CASE("both operators are commutative and associative") {
  for (Sign a : kAll) {
    for (Sign b : kAll) {
      CHECK(multiply(a, b) == multiply(b, a));
      CHECK(add(a, b) == add(b, a));
      for (Sign c : kAll) {
        CHECK(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
        CHECK(add(add(a, b), c) == add(a, add(b, c)));
      }
    }
  }
}

TEST_CASE("absorption and identity laws") {
  for (Sign a : kAll) {
    CHECK(multiply(Sign::Zero, a) == Sign::Zero);
    CHECK(add(Sign::Zero, a) == a);
    if (a != Sign::Zero) {
      CHECK(add(Sign::Unknown, a) == Sign::Unknown);
      CHECK(multiply(Sign::Unknown, a) == Sign::Unknown);
    }
  }
}

TEST_CASE("chaining influences conjoins conditions") {
  auto plus = make_influence("a", "b", {entry(Sign::Positive)});
  auto plus2 = make_influence("b", "c", {entry(Sign::Positive)});
  auto chained = chain(plus, plus2);
  REQUIRE(chained.entries.size() == 1);
  CHECK(chained.entries[0].sign == Sign::Positive);
  CHECK(chained.entries[0].when.always());

  auto pz = make_influence("a", "b", {entry(Sign::Positive, "z", true)});
  auto my = make_influence("b", "c", {entry(Sign::Negative, "y", true)});
  auto mixed = chain(pz, my);
  REQUIRE(mixed.entries.size() == 1);
  CHECK(mixed.entries[0].sign == Sign::Negative);
  CHECK(mixed.entries[0].when.literals ==
        std::map<std::string, bool>{{"y", true}, {"z", true}});

  // Inconsistent condition pairs emit nothing.
  auto d_true = make_influence("a", "b", {entry(Sign::Positive, "d", true)});
  auto d_false = make_influence("b", "c", {entry(Sign::Positive, "d", false)});
  CHECK(chain(d_true, d_false).entries.empty());

  CHECK_THROWS_AS(chain(plus, d_true), Error);  // endpoint mismatch
}

TEST_CASE("parallel combination refines condition partitions") {
  auto plus = make_influence("a", "c", {entry(Sign::Positive)});
  auto minus = make_influence("a", "c", {entry(Sign::Negative)});
  auto ambiguous = parallel(plus, minus);
  CHECK(ambiguous.entries.empty());
  CHECK(ambiguous.sign_over({}) == Sign::Unknown);

  auto zero = make_influence("a", "c", {entry(Sign::Zero)});
  auto kept = parallel(plus, zero);
  REQUIRE(kept.entries.size() == 1);
  CHECK(kept.entries[0].sign == Sign::Positive);

  // Uncovered regions act as Unknown: derived by enumerating the two cells
  // of y and applying the parallel table per cell.
  auto cond = make_influence("a", "c", {entry(Sign::Positive, "y", true)});
  Sign cell_y = add(Sign::Positive, Sign::Positive);
  Sign cell_not_y = add(Sign::Unknown, Sign::Positive);
  CHECK(cell_y == Sign::Positive);
  CHECK(cell_not_y == Sign::Unknown);
  auto merged = parallel(cond, plus);
  Assignment y_true{{"y", true}}, y_false{{"y", false}};
  CHECK(merged.sign_at(y_true) == cell_y);
  CHECK(merged.sign_at(y_false) == cell_not_y);

  CHECK_THROWS_AS(parallel(plus, make_influence("a", "b", {entry(Sign::Zero)})), Error);
}
