#include "doctest.h"
#include "qpn/format.hpp"
#include "qpn/order.hpp"
#include "qpn/reduction.hpp"
#include "support.hpp"

using namespace qpn;

namespace {

Network fan_in_network(Sign sa, Sign sb, Sign sc) {
  Network net;
  net.add_variable({"a", Kind::Chance, "", ""});
  net.add_variable({"b", Kind::Chance, "", ""});
  net.add_variable({"c", Kind::Chance, "", ""});
  net.add_variable({"d", Kind::Chance, "", ""});
  net.add_variable({"u", Kind::Value, "", ""});
  net.add_influence_entry("a", "d", {Condition{}, sa});
  net.add_influence_entry("b", "d", {Condition{}, sb});
  net.add_influence_entry("c", "d", {Condition{}, sc});
  net.add_influence_entry("d", "u", {Condition{}, Sign::Positive});
  return net;
}

Assignment abc(bool a, bool b, bool c) { return {{"a", a}, {"b", b}, {"c", c}}; }

}  // namespace

TEST_CASE("three positive influences order the predecessor cube") {
  Network net = fan_in_network(Sign::Positive, Sign::Positive, Sign::Positive);
  PartialOrder po = induced_probability_order(net, "d");
  CHECK(po.element_count() == 8);
  CHECK(po.class_count == 8);
  // ABC is above the assignment with a flipped.
  CHECK(po.compare(abc(true, true, true), abc(false, true, true)) == Preference::Yes);
  CHECK(is_preferred(po, abc(true, true, true), abc(false, true, true)) == Preference::Yes);
  // Top and bottom of the cube.
  for (int i = 0; i < 8; ++i) {
    Assignment o = assignment_from_index(po.vars, i);
    CHECK(po.compare(abc(true, true, true), o) != Preference::No);
    CHECK(po.compare(abc(false, false, false), o) != Preference::Yes);
  }
}

TEST_CASE("zero influences merge assignments into one class") {
  Network net;
  net.add_variable({"a", Kind::Chance, "", ""});
  net.add_variable({"d", Kind::Chance, "", ""});
  net.add_variable({"u", Kind::Value, "", ""});
  net.add_influence_entry("a", "d", {Condition{}, Sign::Zero});
  net.add_influence_entry("d", "u", {Condition{}, Sign::Positive});
  PartialOrder po = induced_probability_order(net, "d");
  CHECK(po.element_count() == 2);
  CHECK(po.class_count == 1);
  Assignment at_a{{"a", true}}, at_not_a{{"a", false}};
  CHECK(po.compare(at_a, at_not_a) == Preference::Equal);
}

TEST_CASE("two positive influences leave diagonal assignments incomparable") {
  // Independent oracle: on the 2-cube the only constraints are
  // (A,b) >= (A~,b) and (a,B) >= (a,B~); freeze the full compare matrix.
  Network net;
  net.add_variable({"a", Kind::Chance, "", ""});
  net.add_variable({"b", Kind::Chance, "", ""});
  net.add_variable({"d", Kind::Chance, "", ""});
  net.add_variable({"u", Kind::Value, "", ""});
  net.add_influence_entry("a", "d", {Condition{}, Sign::Positive});
  net.add_influence_entry("b", "d", {Condition{}, Sign::Positive});
  net.add_influence_entry("d", "u", {Condition{}, Sign::Positive});
  PartialOrder po = induced_probability_order(net, "d");

  auto ab = [](bool a, bool b) { return Assignment{{"a", a}, {"b", b}}; };
  CHECK(po.compare(ab(true, false), ab(false, true)) == Preference::Incomparable);
  CHECK(po.compare(ab(false, true), ab(true, false)) == Preference::Incomparable);
  CHECK(po.compare(ab(true, true), ab(false, false)) == Preference::Yes);
  CHECK(po.compare(ab(false, false), ab(true, true)) == Preference::No);
  CHECK(po.compare(ab(true, false), ab(true, false)) == Preference::Equal);
}

TEST_CASE("probability order requires predecessors") {
  Network net;
  net.add_variable({"a", Kind::Chance, "", ""});
  net.add_variable({"u", Kind::Value, "", ""});
  net.add_influence_entry("a", "u", {Condition{}, Sign::Positive});
  CHECK_THROWS_AS(induced_probability_order(net, "a"), Error);
}

TEST_CASE("utility order of the original test/treat model merges cure outside disease") {
  Network net = test_treat_network();
  PartialOrder po = induced_utility_order(net);
  CHECK(po.vars == std::vector<std::string>{"c", "d", "y", "z"});
  CHECK(po.element_count() == 16);
  // Outcomes differing only in c with the disease absent coincide.
  for (bool y : {false, true}) {
    for (bool z : {false, true}) {
      Assignment with_c{{"c", true}, {"d", false}, {"y", y}, {"z", z}};
      Assignment without_c{{"c", false}, {"d", false}, {"y", y}, {"z", z}};
      CHECK(po.compare(with_c, without_c) == Preference::Equal);
    }
  }
  // Four merges drop 16 classes to 12.
  CHECK(po.class_count == 12);
}

TEST_CASE("utility order of the reduced test/treat model matches the outcome graph") {
  auto [reduced, log] = reduce(test_treat_network());
  PartialOrder po = induced_utility_order(reduced);
  CHECK(po.vars == std::vector<std::string>{"d", "t", "x"});
  CHECK(po.class_count == 8);

  auto outcome = [](bool d, bool x, bool t) {
    return Assignment{{"d", d}, {"x", x}, {"t", t}};
  };
  Assignment best = outcome(false, false, false);  // healthy, untreated, untested
  for (std::size_t i = 0; i < po.element_count(); ++i) {
    Assignment o = assignment_from_index(po.vars, i);
    if (o == best) {
      CHECK(po.compare(best, o) == Preference::Equal);
    } else {
      CHECK(po.compare(best, o) == Preference::Yes);
    }
  }
  // Disease makes the untreated, tested outcome strictly worse.
  CHECK(po.compare(outcome(false, false, true), outcome(true, false, true)) == Preference::Yes);
  // Treatment under disease is incomparable to no treatment.
  CHECK(po.compare(outcome(true, true, false), outcome(true, false, false)) ==
        Preference::Incomparable);
  // Reflexivity.
  CHECK(po.compare(best, best) == Preference::Equal);
}

TEST_CASE("contradictory strict constraints are rejected") {
  Network net;
  net.add_variable({"a", Kind::Chance, "", ""});
  net.add_variable({"b", Kind::Chance, "", ""});
  net.add_variable({"d", Kind::Chance, "", ""});
  net.add_variable({"u", Kind::Value, "", ""});
  // a's influence flips sign with b and b's flips with a: a strict 4-cycle.
  InfluenceEntry a_hi{Condition{{{"b", true}}}, Sign::Positive};
  InfluenceEntry a_lo{Condition{{{"b", false}}}, Sign::Negative};
  InfluenceEntry b_hi{Condition{{{"a", true}}}, Sign::Negative};
  InfluenceEntry b_lo{Condition{{{"a", false}}}, Sign::Positive};
  net.add_influence_entry("a", "d", a_hi);
  net.add_influence_entry("a", "d", a_lo);
  net.add_influence_entry("b", "d", b_hi);
  net.add_influence_entry("b", "d", b_lo);
  net.add_influence_entry("d", "u", {Condition{}, Sign::Positive});
  CHECK_THROWS_AS(induced_probability_order(net, "d"), ContradictoryConstraints);
}

TEST_CASE("order export emits one node per class and covering edges only") {
  Network net = fan_in_network(Sign::Positive, Sign::Zero, Sign::Zero);
  PartialOrder po = induced_probability_order(net, "d");
  CHECK(po.class_count == 2);
  std::string dot = po.to_dot(net, "order");
  CHECK(dot.find("c0") != std::string::npos);
  CHECK(dot.find("->") != std::string::npos);
}

TEST_CASE("element count is two to the predecessors before merging") {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    Network net = testing_support::random_network(seed, false);
    for (const auto& v : net.variables) {
      if (v.kind != Kind::Chance) continue;
      auto rows = net.row_vars(v.id);
      if (rows.empty() || rows.size() > 12) continue;
      PartialOrder po = induced_probability_order(net, v.id);
      CHECK(po.element_count() == (std::size_t{1} << rows.size()));
      CHECK(po.class_count <= static_cast<int>(po.element_count()));
    }
  }
}
