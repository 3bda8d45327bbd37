#pragma once

#include "qpn/core.hpp"

namespace qpn {

struct ParseError : Error {
  int line;
  ParseError(int line_no, const std::string& what_arg)
      : Error("line " + std::to_string(line_no) + ": " + what_arg), line(line_no) {}
};

// Line-oriented model grammar ('#' starts a comment, identifiers are
// case-sensitive):
//   var NAME : chance|decision|value [literals TRUE_LABEL FALSE_LABEL]
//   influence SRC -> DST : SIGN [| VAR=LITERAL {, VAR=LITERAL}]
//   inform SRC -> DST
//   depend A -- B
// Variables must be declared before they are referenced.
Network parse_model(const std::string& text);

// Canonical serialization; parse(serialize(net)) == net up to canonical
// ordering, and serialize is a fixed point on its own output.
std::string serialize_model(const Network& net);

// Graphviz export: chance nodes as ellipses, decisions as boxes, the value
// node as a hexagon, informational links dashed, dependence notes dotted.
std::string network_dot(const Network& net, const std::string& title);

// The built-in generic test/treat model.
std::string test_treat_text();
Network test_treat_network();

}  // namespace qpn
