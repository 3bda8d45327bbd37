#include "qpn/format.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace qpn {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  };
  for (char c : line) {
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else if (c == ',' || c == '|' || c == '=' || c == ':') {
      flush();
      out.push_back(std::string(1, c));
    } else {
      cur += c;
    }
  }
  flush();
  return out;
}

struct Cursor {
  const std::vector<std::string>& toks;
  std::size_t pos = 0;
  int line;

  bool done() const { return pos >= toks.size(); }
  const std::string& peek() const {
    static const std::string empty;
    return done() ? empty : toks[pos];
  }
  std::string next(const std::string& what) {
    if (done()) throw ParseError(line, "expected " + what);
    return toks[pos++];
  }
  void expect(const std::string& tok) {
    if (next("'" + tok + "'") != tok) throw ParseError(line, "expected '" + tok + "'");
  }
};

bool resolve_literal(const Variable& v, const std::string& label, int line) {
  if (label == v.true_literal) return true;
  if (label == v.false_literal) return false;
  throw ParseError(line, "'" + label + "' is not a literal of variable '" + v.id + "'");
}

}  // namespace

Network parse_model(const std::string& text) {
  Network net;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    Cursor cur{toks, 0, line_no};
    std::string head = cur.next("directive");

    if (head == "var") {
      Variable v;
      v.id = cur.next("variable name");
      cur.expect(":");
      std::string kind = cur.next("kind");
      if (kind == "chance") {
        v.kind = Kind::Chance;
      } else if (kind == "decision") {
        v.kind = Kind::Decision;
      } else if (kind == "value") {
        v.kind = Kind::Value;
      } else {
        throw ParseError(line_no, "unknown kind '" + kind + "'");
      }
      if (!cur.done()) {
        cur.expect("literals");
        v.true_literal = cur.next("true literal");
        v.false_literal = cur.next("false literal");
        if (!cur.done()) {
          throw ParseError(line_no, "binary variables only: at most two literals");
        }
      }
      try {
        net.add_variable(std::move(v));
      } catch (const Error& e) {
        throw ParseError(line_no, e.what());
      }
    } else if (head == "influence") {
      std::string src = cur.next("source");
      cur.expect("->");
      std::string dst = cur.next("target");
      cur.expect(":");
      std::string sign_tok = cur.next("sign");
      if (sign_tok.size() != 1 || !sign_from_char(sign_tok[0])) {
        throw ParseError(line_no, "sign must be one of + - 0 ?");
      }
      if (!net.has_variable(src)) throw ParseError(line_no, "unknown variable '" + src + "'");
      if (!net.has_variable(dst)) throw ParseError(line_no, "unknown variable '" + dst + "'");
      InfluenceEntry entry;
      entry.sign = *sign_from_char(sign_tok[0]);
      if (!cur.done()) {
        cur.expect("|");
        while (true) {
          std::string var = cur.next("condition variable");
          cur.expect("=");
          std::string label = cur.next("literal");
          if (!net.has_variable(var)) throw ParseError(line_no, "unknown variable '" + var + "'");
          bool val = resolve_literal(net.variable(var), label, line_no);
          if (entry.when.mentions(var)) {
            throw ParseError(line_no, "condition mentions '" + var + "' twice");
          }
          entry.when.literals[var] = val;
          if (cur.done()) break;
          cur.expect(",");
        }
      }
      net.add_influence_entry(src, dst, std::move(entry));
    } else if (head == "inform") {
      std::string src = cur.next("source");
      cur.expect("->");
      std::string dst = cur.next("target");
      if (!net.has_variable(src)) throw ParseError(line_no, "unknown variable '" + src + "'");
      if (!net.has_variable(dst)) throw ParseError(line_no, "unknown variable '" + dst + "'");
      if (cur.done()) {
        net.add_informational(src, dst);
      } else {
        throw ParseError(line_no, "unexpected token '" + cur.peek() + "'");
      }
    } else if (head == "depend") {
      std::string a = cur.next("variable");
      cur.expect("--");
      std::string b = cur.next("variable");
      if (!net.has_variable(a)) throw ParseError(line_no, "unknown variable '" + a + "'");
      if (!net.has_variable(b)) throw ParseError(line_no, "unknown variable '" + b + "'");
      if (cur.done()) {
        net.add_dependence(a, b);
      } else {
        throw ParseError(line_no, "unexpected token '" + cur.peek() + "'");
      }
    } else {
      throw ParseError(line_no, "unknown directive '" + head + "'");
    }
    if (!cur.done()) throw ParseError(line_no, "unexpected trailing token '" + cur.peek() + "'");
  }
  return net;
}

std::string serialize_model(const Network& net) {
  std::ostringstream out;
  for (const auto& v : net.variables) {
    out << "var " << v.id << " : " << kind_name(v.kind) << " literals " << v.true_literal << " "
        << v.false_literal << "\n";
  }
  for (const auto& inf : net.influences) {
    if (inf.entries.empty()) {
      out << "influence " << inf.source << " -> " << inf.target << " : ?\n";
      continue;
    }
    for (const auto& e : inf.entries) {
      out << "influence " << inf.source << " -> " << inf.target << " : " << sign_char(e.sign);
      if (!e.when.always()) {
        out << " | ";
        bool first = true;
        for (const auto& [var, val] : e.when.literals) {
          if (!first) out << ", ";
          out << var << "=" << net.render_literal(var, val);
          first = false;
        }
      }
      out << "\n";
    }
  }
  for (const auto& link : net.informational) {
    out << "inform " << link.source << " -> " << link.target << "\n";
  }
  for (const auto& dep : net.dependencies) {
    out << "depend " << dep.a << " -- " << dep.b << "\n";
  }
  return out.str();
}

std::string network_dot(const Network& net, const std::string& title) {
  std::ostringstream out;
  out << "digraph \"" << title << "\" {\n  rankdir=LR;\n";
  for (const auto& v : net.variables) {
    out << "  " << v.id << " [shape=";
    switch (v.kind) {
      case Kind::Chance: out << "ellipse"; break;
      case Kind::Decision: out << "box"; break;
      case Kind::Value: out << "hexagon"; break;
    }
    out << "];\n";
  }
  for (const auto& inf : net.influences) {
    std::string label;
    if (inf.entries.empty()) {
      label = "?";
    } else {
      for (const auto& e : inf.entries) {
        if (!label.empty()) label += "\\n";
        label += sign_char(e.sign);
        if (!e.when.always()) label += " | " + net.render_condition(e.when);
      }
    }
    out << "  " << inf.source << " -> " << inf.target << " [label=\"" << label << "\"";
    if (inf.reversed) out << ", color=gray40";
    out << "];\n";
  }
  for (const auto& link : net.informational) {
    out << "  " << link.source << " -> " << link.target << " [style=dashed];\n";
  }
  for (const auto& dep : net.dependencies) {
    out << "  " << dep.a << " -> " << dep.b << " [style=dotted, dir=none];\n";
  }
  out << "}\n";
  return out.str();
}

std::string test_treat_text() {
  return
      "# Generic test/treat decision.\n"
      "#   d disease, t perform-test, r test result, x treat,\n"
      "#   c cure, y treatment side-effects, z test complications.\n"
      "var c : chance literals C C~\n"
      "var d : chance literals D D~\n"
      "var r : chance literals R R~\n"
      "var t : decision literals T T~\n"
      "var u : value literals U U~\n"
      "var x : decision literals X X~\n"
      "var y : chance literals Y Y~\n"
      "var z : chance literals Z Z~\n"
      "\n"
      "# Cure matters only in the presence of disease.\n"
      "influence c -> u : + | d=D\n"
      "influence c -> u : 0 | d=D~\n"
      "# The result tracks the disease only if the test is performed.\n"
      "influence d -> r : + | t=T\n"
      "influence d -> r : 0 | t=T~\n"
      "influence d -> u : -\n"
      "influence t -> z : +\n"
      "influence x -> c : +\n"
      "influence x -> y : +\n"
      "influence y -> u : -\n"
      "influence z -> u : -\n"
      "\n"
      "inform r -> x\n"
      "inform t -> x\n"
      "\n"
      "depend d -- t\n";
}

Network test_treat_network() { return parse_model(test_treat_text()); }

}  // namespace qpn
