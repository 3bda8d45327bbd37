#include "doctest.h"
#include "qpn/core.hpp"
#include "qpn/format.hpp"

using namespace qpn;

namespace {

bool has_violation(const std::vector<Violation>& vs, const std::string& fragment) {
  for (const auto& v : vs) {
    if (v.message.find(fragment) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("conditions conjoin and detect inconsistency") {
  Condition a, b;
  a.literals["x"] = true;
  b.literals["x"] = false;
  CHECK(!a.consistent_with(b));
  CHECK(!a.conjoin(b));
  b.literals["x"] = true;
  b.literals["y"] = false;
  auto joint = a.conjoin(b);
  REQUIRE(joint);
  CHECK(joint->literals.size() == 2);
  CHECK(Condition{}.satisfied_by({}));
}

TEST_CASE("sign queries fall back to Unknown on uncovered regions") {
  QualitativeInfluence inf;
  inf.source = "a";
  inf.target = "b";
  InfluenceEntry e;
  e.sign = Sign::Positive;
  e.when.literals["t"] = true;
  inf.entries.push_back(e);

  Assignment at_t{{"t", true}}, at_not_t{{"t", false}};
  CHECK(inf.sign_at(at_t) == Sign::Positive);
  CHECK(inf.sign_at(at_not_t) == Sign::Unknown);
  CHECK(inf.sign_over({}) == Sign::Unknown);
  CHECK(inf.sign_over(at_t) == Sign::Positive);
}

TEST_CASE("the built-in test/treat model validates cleanly") {
  Network net = test_treat_network();
  CHECK(validate(net).empty());
  CHECK(net.value_node() == "u");
  CHECK(net.variables.size() == 8);
  CHECK(net.row_vars("u") == std::vector<std::string>{"c", "d", "y", "z"});
  CHECK(net.row_vars("r") == std::vector<std::string>{"d", "t"});
}

TEST_CASE("overlapping entry conditions are flagged") {
  Network net;
  net.add_variable({"a", Kind::Chance, "", ""});
  net.add_variable({"b", Kind::Chance, "", ""});
  net.add_variable({"d", Kind::Decision, "", ""});
  net.add_variable({"u", Kind::Value, "", ""});
  InfluenceEntry conditional;
  conditional.sign = Sign::Positive;
  conditional.when.literals["d"] = true;
  net.add_influence_entry("a", "b", conditional);
  net.add_influence_entry("a", "b", {Condition{}, Sign::Negative});
  net.add_influence_entry("b", "u", {Condition{}, Sign::Positive});

  auto issues = validate(net);
  CHECK(has_violation(issues, "not mutually exclusive"));
}

TEST_CASE("structural violations are reported individually") {
  Network net;
  net.add_variable({"a", Kind::Chance, "", ""});
  net.add_variable({"d", Kind::Decision, "", ""});
  net.add_variable({"u", Kind::Value, "", ""});

  SUBCASE("value node as influence source") {
    net.add_influence_entry("u", "a", {Condition{}, Sign::Positive});
    CHECK(has_violation(validate(net), "source is the value node"));
  }
  SUBCASE("decisions cannot be influence targets") {
    net.add_influence_entry("a", "d", {Condition{}, Sign::Positive});
    CHECK(has_violation(validate(net), "cannot be influence targets"));
  }
  SUBCASE("informational links target decisions only") {
    net.add_informational("a", "u");
    CHECK(has_violation(validate(net), "must target decision"));
  }
  SUBCASE("cycles are rejected") {
    net.add_variable({"b", Kind::Chance, "", ""});
    net.add_influence_entry("a", "b", {Condition{}, Sign::Positive});
    net.add_influence_entry("b", "u", {Condition{}, Sign::Positive});
    net.add_informational("b", "d");
    // No cycle yet.
    CHECK(validate(net).empty());
    Network cyclic = net;
    cyclic.add_influence_entry("b", "a", {Condition{}, Sign::Positive});
    CHECK(has_violation(validate(cyclic), "cycle"));
  }
  SUBCASE("missing value node") {
    Network bare;
    bare.add_variable({"a", Kind::Chance, "", ""});
    CHECK(has_violation(validate(bare), "no value node"));
  }
}

TEST_CASE("validate is idempotent and side-effect free") {
  Network net = test_treat_network();
  std::string before = serialize_model(net);
  auto first = validate(net);
  auto second = validate(net);
  CHECK(first.size() == second.size());
  CHECK(serialize_model(net) == before);
}

TEST_CASE("default literals derive from the variable name") {
  Network net;
  net.add_variable({"foo", Kind::Chance, "", ""});
  CHECK(net.variable("foo").true_literal == "FOO");
  CHECK(net.variable("foo").false_literal == "FOO~");
  CHECK_THROWS_AS(net.add_variable({"foo", Kind::Chance, "", ""}), Error);
}
