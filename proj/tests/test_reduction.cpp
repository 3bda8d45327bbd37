#include "doctest.h"
#include "qpn/format.hpp"
#include "qpn/reduction.hpp"

using namespace qpn;

namespace {

Network chain3(Sign first, Sign second) {
  Network net;
  net.add_variable({"a", Kind::Chance, "", ""});
  net.add_variable({"b", Kind::Chance, "", ""});
  net.add_variable({"c", Kind::Chance, "", ""});
  net.add_variable({"u", Kind::Value, "", ""});
  net.add_influence_entry("a", "b", {Condition{}, first});
  net.add_influence_entry("b", "c", {Condition{}, second});
  net.add_influence_entry("c", "u", {Condition{}, Sign::Positive});
  return net;
}

bool same_network(const Network& a, const Network& b) {
  if (serialize_model(a) != serialize_model(b)) return false;
  for (std::size_t i = 0; i < a.influences.size(); ++i) {
    if (a.influences[i].reversed != b.influences[i].reversed) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("splicing a chain multiplies signs") {
  Network net = chain3(Sign::Positive, Sign::Positive);
  auto [next, step] = remove_chance_node(net, "b");
  CHECK(!next.has_variable("b"));
  const auto* spliced = next.influence_between("a", "c");
  REQUIRE(spliced);
  CHECK(spliced->sign_over({}) == Sign::Positive);
  CHECK(step.op == ReductionStep::Op::RemoveChance);
}

TEST_CASE("splicing onto an existing parallel link can turn ambiguous") {
  Network net = chain3(Sign::Positive, Sign::Negative);
  net.add_influence_entry("a", "c", {Condition{}, Sign::Positive});
  auto [next, step] = remove_chance_node(net, "b");
  const auto* merged = next.influence_between("a", "c");
  REQUIRE(merged);
  CHECK(merged->sign_over({}) == Sign::Unknown);
}

TEST_CASE("zero absorbs through a splice") {
  Network net = chain3(Sign::Zero, Sign::Positive);
  auto [next, step] = remove_chance_node(net, "b");
  CHECK(next.influence_between("a", "c")->sign_over({}) == Sign::Zero);
}

TEST_CASE("removal preconditions are enforced") {
  Network net = chain3(Sign::Positive, Sign::Positive);
  SUBCASE("two successors") {
    net.add_influence_entry("b", "u", {Condition{}, Sign::Positive});
    CHECK_THROWS_WITH_AS(remove_chance_node(net, "b"), doctest::Contains("direct successors"),
                         Error);
  }
  SUBCASE("informational successor") {
    net.add_variable({"q", Kind::Decision, "", ""});
    net.add_informational("b", "q");
    CHECK_THROWS_WITH_AS(remove_chance_node(net, "b"), doctest::Contains("informational"), Error);
  }
  SUBCASE("referenced in a foreign condition") {
    InfluenceEntry e;
    e.sign = Sign::Positive;
    e.when.literals["b"] = true;
    Network withcond = chain3(Sign::Positive, Sign::Positive);
    withcond.add_variable({"w", Kind::Chance, "", ""});
    withcond.add_influence_entry("w", "u", e);
    CHECK_THROWS_WITH_AS(remove_chance_node(withcond, "b"), doctest::Contains("conditions"),
                         Error);
  }
  SUBCASE("no predecessors to splice") {
    CHECK_THROWS_WITH_AS(remove_chance_node(net, "a"), doctest::Contains("no predecessors"),
                         Error);
  }
}

TEST_CASE("arc reversal keeps sign and conditions") {
  Network net = test_treat_network();
  auto [next, step] = reverse_arc(net, "d", "r");
  CHECK(!next.influence_between("d", "r"));
  const auto* flipped = next.influence_between("r", "d");
  REQUIRE(flipped);
  CHECK(flipped->reversed);
  REQUIRE(flipped->entries.size() == 2);
  Assignment at_t{{"t", true}}, at_not_t{{"t", false}};
  CHECK(flipped->sign_at(at_t) == Sign::Positive);
  CHECK(flipped->sign_at(at_not_t) == Sign::Zero);
  CHECK(step.op == ReductionStep::Op::ReverseArc);
}

TEST_CASE("reversing a standalone zero arc") {
  Network net;
  net.add_variable({"a", Kind::Chance, "", ""});
  net.add_variable({"b", Kind::Chance, "", ""});
  net.add_variable({"u", Kind::Value, "", ""});
  net.add_influence_entry("a", "b", {Condition{}, Sign::Zero});
  net.add_influence_entry("a", "u", {Condition{}, Sign::Positive});
  auto [next, step] = reverse_arc(net, "a", "b");
  const auto* flipped = next.influence_between("b", "a");
  REQUIRE(flipped);
  CHECK(flipped->sign_over({}) == Sign::Zero);
}

TEST_CASE("reversal refuses to create a cycle") {
  Network net;
  net.add_variable({"a", Kind::Chance, "", ""});
  net.add_variable({"b", Kind::Chance, "", ""});
  net.add_variable({"c", Kind::Chance, "", ""});
  net.add_variable({"u", Kind::Value, "", ""});
  net.add_influence_entry("a", "b", {Condition{}, Sign::Positive});
  net.add_influence_entry("a", "c", {Condition{}, Sign::Positive});
  net.add_influence_entry("c", "b", {Condition{}, Sign::Positive});
  net.add_influence_entry("b", "u", {Condition{}, Sign::Positive});
  CHECK_THROWS_WITH_AS(reverse_arc(net, "a", "b"), doctest::Contains("cycle"), Error);
  CHECK_THROWS_WITH_AS(reverse_arc(net, "b", "c"), doctest::Contains("no influence"), Error);
}

TEST_CASE("reversal inherits predecessors as Unknown links") {
  Network net;
  net.add_variable({"a", Kind::Chance, "", ""});
  net.add_variable({"b", Kind::Chance, "", ""});
  net.add_variable({"p", Kind::Chance, "", ""});
  net.add_variable({"q", Kind::Chance, "", ""});
  net.add_variable({"u", Kind::Value, "", ""});
  net.add_influence_entry("p", "a", {Condition{}, Sign::Positive});
  net.add_influence_entry("q", "b", {Condition{}, Sign::Negative});
  net.add_influence_entry("a", "b", {Condition{}, Sign::Positive});
  net.add_influence_entry("b", "u", {Condition{}, Sign::Positive});
  net.add_influence_entry("a", "u", {Condition{}, Sign::Positive});
  auto [next, step] = reverse_arc(net, "a", "b");
  // a gains b's predecessor q, b gains a's predecessor p; both and the
  // existing in-links are re-annotated Unknown.
  CHECK(next.influence_between("q", "a"));
  CHECK(next.influence_between("p", "b"));
  CHECK(next.influence_between("q", "a")->sign_over({}) == Sign::Unknown);
  CHECK(next.influence_between("p", "a")->sign_over({}) == Sign::Unknown);
  CHECK(next.influence_between("q", "b")->sign_over({}) == Sign::Unknown);
  // The flipped arc keeps its sign; untouched links keep theirs.
  CHECK(next.influence_between("b", "a")->sign_over({}) == Sign::Positive);
  CHECK(next.influence_between("a", "u")->sign_over({}) == Sign::Positive);
}

TEST_CASE("forced decisions are removed with their policy") {
  Network net;
  net.add_variable({"d", Kind::Decision, "", ""});
  net.add_variable({"u", Kind::Value, "", ""});

  SUBCASE("unconditional positive influence forces the true literal") {
    net.add_influence_entry("d", "u", {Condition{}, Sign::Positive});
    auto [next, step] = remove_decision_node(net, "d");
    CHECK(!next.has_variable("d"));
    REQUIRE(step.policy_choice.size() == 1);
    CHECK(step.policy_choice[0] == true);
  }
  SUBCASE("unknown influence blocks removal") {
    net.add_influence_entry("d", "u", {Condition{}, Sign::Unknown});
    CHECK_THROWS_WITH_AS(remove_decision_node(net, "d"), doctest::Contains("unknown"), Error);
  }
  SUBCASE("zero influence ties break to the false literal") {
    net.add_influence_entry("d", "u", {Condition{}, Sign::Zero});
    auto [next, step] = remove_decision_node(net, "d");
    CHECK(step.policy_choice[0] == false);
  }
}

TEST_CASE("contextual decision removal records a full policy") {
  Network net;
  net.add_variable({"r", Kind::Chance, "", ""});
  net.add_variable({"t", Kind::Chance, "", ""});
  net.add_variable({"x", Kind::Decision, "", ""});
  net.add_variable({"u", Kind::Value, "", ""});
  net.add_informational("r", "x");
  net.add_informational("t", "x");
  InfluenceEntry pos, neg, off;
  pos.sign = Sign::Positive;
  pos.when.literals = {{"t", true}, {"r", true}};
  neg.sign = Sign::Negative;
  neg.when.literals = {{"t", true}, {"r", false}};
  off.sign = Sign::Negative;
  off.when.literals = {{"t", false}};
  net.add_influence_entry("x", "u", pos);
  net.add_influence_entry("x", "u", neg);

  SUBCASE("uncovered informational context blocks removal") {
    CHECK_THROWS_WITH_AS(remove_decision_node(net, "x"),
                         doctest::Contains("unknown in informational context"), Error);
  }
  SUBCASE("fully covered contexts yield the forced policy") {
    net.add_influence_entry("x", "u", off);
    auto [next, step] = remove_decision_node(net, "x");
    CHECK(!next.has_variable("x"));
    REQUIRE(step.policy_domain == std::vector<std::string>{"r", "t"});
    // Domain order (r, t): choose X only when both the test was done and the
    // result is positive.
    REQUIRE(step.policy_choice.size() == 4);
    CHECK(step.policy_choice[assignment_index({"r", "t"}, {{"r", true}, {"t", true}})] == true);
    CHECK(step.policy_choice[assignment_index({"r", "t"}, {{"r", false}, {"t", true}})] == false);
    CHECK(step.policy_choice[assignment_index({"r", "t"}, {{"r", true}, {"t", false}})] == false);
    CHECK(step.policy_choice[assignment_index({"r", "t"}, {{"r", false}, {"t", false}})] == false);
  }
}

TEST_CASE("reduce on the test/treat model reproduces the reduced diagram") {
  Network net = test_treat_network();
  auto [reduced, log] = reduce(net);

  std::vector<std::string> ids;
  for (const auto& v : reduced.variables) ids.push_back(v.id);
  CHECK(ids == std::vector<std::string>{"d", "r", "t", "u", "x"});

  // Removed exactly c, y, z; reversed d -> r.
  std::vector<std::string> removed;
  int reversals = 0;
  for (const auto& step : log) {
    if (step.op == ReductionStep::Op::RemoveChance) removed.push_back(step.subjects.front());
    if (step.op == ReductionStep::Op::ReverseArc) {
      ++reversals;
      CHECK(step.subjects == std::vector<std::string>{"d", "r"});
    }
  }
  CHECK(removed == std::vector<std::string>{"c", "y", "z"});
  CHECK(reversals == 1);

  // Both informational links intact.
  CHECK(reduced.informational ==
        std::vector<InformationalLink>{{"r", "x"}, {"t", "x"}});

  // The reversed arc keeps its entries.
  const auto* rd = reduced.influence_between("r", "d");
  REQUIRE(rd);
  CHECK(rd->reversed);
  Assignment at_t{{"t", true}}, at_not_t{{"t", false}};
  CHECK(rd->sign_at(at_t) == Sign::Positive);
  CHECK(rd->sign_at(at_not_t) == Sign::Zero);

  // Derived value influences.
  Assignment diseased{{"d", true}}, healthy{{"d", false}};
  CHECK(reduced.influence_between("d", "u")->sign_over({}) == Sign::Negative);
  CHECK(reduced.influence_between("t", "u")->sign_over({}) == Sign::Negative);
  CHECK(reduced.influence_between("x", "u")->sign_at(diseased) == Sign::Unknown);
  CHECK(reduced.influence_between("x", "u")->sign_at(healthy) == Sign::Negative);

  // Replaying the log reproduces the reduced network exactly.
  CHECK(same_network(replay(net, log), reduced));
}

TEST_CASE("reduce collapses a simple chain into the value node's parent") {
  Network net;
  net.add_variable({"a", Kind::Chance, "", ""});
  net.add_variable({"b", Kind::Chance, "", ""});
  net.add_variable({"u", Kind::Value, "", ""});
  net.add_influence_entry("a", "b", {Condition{}, Sign::Positive});
  net.add_influence_entry("b", "u", {Condition{}, Sign::Negative});
  auto [reduced, log] = reduce(net);
  std::vector<std::string> ids;
  for (const auto& v : reduced.variables) ids.push_back(v.id);
  CHECK(ids == std::vector<std::string>{"a", "u"});
  CHECK(reduced.influence_between("a", "u")->sign_over({}) == Sign::Negative);
}

TEST_CASE("reduce keeps the predecessor behind an all-Unknown link") {
  Network net;
  net.add_variable({"a", Kind::Chance, "", ""});
  net.add_variable({"b", Kind::Chance, "", ""});
  net.add_variable({"u", Kind::Value, "", ""});
  net.add_influence_entry("a", "b", {Condition{}, Sign::Positive});
  net.add_influence_entry("b", "u", {Condition{}, Sign::Unknown});
  auto [reduced, log] = reduce(net);
  CHECK(reduced.has_variable("a"));
  REQUIRE(reduced.influence_between("a", "u"));
  CHECK(reduced.influence_between("a", "u")->sign_over({}) == Sign::Unknown);
}

TEST_CASE("barren nodes are removed first") {
  Network net;
  net.add_variable({"a", Kind::Chance, "", ""});
  net.add_variable({"b", Kind::Chance, "", ""});
  net.add_variable({"q", Kind::Decision, "", ""});
  net.add_variable({"u", Kind::Value, "", ""});
  net.add_influence_entry("a", "u", {Condition{}, Sign::Positive});
  net.add_influence_entry("a", "b", {Condition{}, Sign::Positive});  // b is barren
  // q has no successors at all: barren decision.
  auto [reduced, log] = reduce(net);
  CHECK(!reduced.has_variable("b"));
  CHECK(!reduced.has_variable("q"));
  CHECK(reduced.has_variable("a"));
  REQUIRE(log.size() >= 2);
  CHECK(log[0].barren);
}
