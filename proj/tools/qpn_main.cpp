#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qpn/dominance.hpp"
#include "qpn/format.hpp"
#include "qpn/oracle.hpp"
#include "qpn/order.hpp"
#include "qpn/reduction.hpp"
#include "qpn/strategy.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidModel = 1;
constexpr int kExitOracleContradiction = 2;
constexpr int kExitUsage = 3;

int usage() {
  std::cerr <<
      "usage: qpn <command> [args]\n"
      "  validate FILE                     check structural invariants\n"
      "  reduce FILE [--dot OUT]           reduce the diagram, print the step log\n"
      "  order FILE [--node V] [--dot OUT] print the utility (or per-node) partial order\n"
      "  strategies FILE                   enumerate strategies of the reduced diagram\n"
      "  admissible FILE [--pairwise-only|--kway|--mixed|--no-prune]\n"
      "             [--samples N] [--seed S]\n"
      "                                    compute the admissible strategy set\n"
      "  verify FILE [--samples N] [--seed S]\n"
      "                                    check reduced signs against sampled models\n"
      "  example test-treat                print the built-in test/treat model\n";
  return kExitUsage;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qpn::Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qpn::Error("cannot write '" + path + "'");
  out << text;
}

qpn::Network load_valid(const std::string& path) {
  qpn::Network net = qpn::parse_model(read_file(path));
  auto issues = qpn::validate(net);
  if (!issues.empty()) {
    for (const auto& v : issues) std::cerr << "invalid: " << v.element << ": " << v.message << "\n";
    throw qpn::ParseError(0, "model failed validation");
  }
  return net;
}

struct Flags {
  std::string file;
  std::string dot;
  std::string node;
  bool pairwise_only = false;
  bool kway = false;
  bool mixed = false;
  bool no_prune = false;
  int samples = 1000;
  std::uint64_t seed = 42;
};

bool parse_flags(const std::vector<std::string>& args, Flags& f) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    auto value = [&](const char* name) -> std::string {
      if (i + 1 >= args.size()) throw qpn::Error(std::string(name) + " needs a value");
      return args[++i];
    };
    if (a == "--dot") {
      f.dot = value("--dot");
    } else if (a == "--node") {
      f.node = value("--node");
    } else if (a == "--samples") {
      f.samples = std::stoi(value("--samples"));
    } else if (a == "--seed") {
      f.seed = std::stoull(value("--seed"));
    } else if (a == "--pairwise-only") {
      f.pairwise_only = true;
    } else if (a == "--kway") {
      f.kway = true;
    } else if (a == "--mixed") {
      f.mixed = true;
    } else if (a == "--no-prune") {
      f.no_prune = true;
    } else if (!a.empty() && a[0] == '-') {
      std::cerr << "unknown flag '" << a << "'\n";
      return false;
    } else if (f.file.empty()) {
      f.file = a;
    } else {
      std::cerr << "unexpected argument '" << a << "'\n";
      return false;
    }
  }
  if (f.file.empty()) {
    std::cerr << "missing model file\n";
    return false;
  }
  return true;
}

int cmd_validate(const Flags& f) {
  qpn::Network net = qpn::parse_model(read_file(f.file));
  auto issues = qpn::validate(net);
  if (issues.empty()) {
    std::cout << "valid: " << net.variables.size() << " variables, " << net.influences.size()
              << " influences, " << net.informational.size() << " informational links\n";
    return kExitOk;
  }
  for (const auto& v : issues) std::cout << "violation: " << v.element << ": " << v.message << "\n";
  return kExitInvalidModel;
}

int cmd_reduce(const Flags& f) {
  qpn::Network net = load_valid(f.file);
  auto [reduced, log] = qpn::reduce(net);
  std::cout << "== reduction steps (" << log.size() << ") ==\n";
  for (const auto& step : log) std::cout << "  " << step.to_line(reduced) << "\n";
  std::cout << "== reduced model ==\n" << qpn::serialize_model(reduced);
  bool any_reversed = false;
  for (const auto& inf : reduced.influences) any_reversed |= inf.reversed;
  if (any_reversed) {
    std::cout << "# note: reversed arcs keep their sign; see the step log\n";
  }
  if (!f.dot.empty()) write_file(f.dot, qpn::network_dot(reduced, "reduced"));
  return kExitOk;
}

int cmd_order(const Flags& f) {
  qpn::Network net = load_valid(f.file);
  qpn::PartialOrder po =
      f.node.empty() ? qpn::induced_utility_order(net) : qpn::induced_probability_order(net, f.node);
  std::cout << "partial order over:";
  for (const auto& v : po.vars) std::cout << " " << v;
  std::cout << "\n" << po.element_count() << " assignments in " << po.class_count << " classes\n";
  std::vector<std::vector<std::string>> members(po.class_count);
  for (std::size_t i = 0; i < po.element_count(); ++i) {
    members[po.class_of[i]].push_back(
        net.render_assignment(qpn::assignment_from_index(po.vars, i)));
  }
  for (int c = 0; c < po.class_count; ++c) {
    std::cout << "  class " << c << ": {";
    for (std::size_t k = 0; k < members[c].size(); ++k) {
      std::cout << (k ? "; " : "") << members[c][k];
    }
    std::cout << "}\n";
  }
  for (int a = 0; a < po.class_count; ++a) {
    for (int b = 0; b < po.class_count; ++b) {
      if (a == b || !po.above[a][b]) continue;
      bool covering = true;
      for (int k = 0; k < po.class_count && covering; ++k) {
        if (k != a && k != b && po.above[a][k] && po.above[k][b]) covering = false;
      }
      if (covering) std::cout << "  class " << a << " > class " << b << "\n";
    }
  }
  if (!f.dot.empty()) {
    write_file(f.dot, po.to_dot(net, f.node.empty() ? "utility order" : f.node + " order"));
  }
  return kExitOk;
}

int cmd_strategies(const Flags& f) {
  qpn::Network net = load_valid(f.file);
  auto [reduced, log] = qpn::reduce(net);
  auto strategies = qpn::enumerate_strategies(reduced);
  std::cout << strategies.size() << " strategies\n";
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    std::cout << "  #" << i << "  " << strategies[i].render(reduced) << "\n";
  }
  return kExitOk;
}

int cmd_admissible(const Flags& f) {
  qpn::Network net = load_valid(f.file);
  qpn::AdmissibleOptions options;
  options.oracle_cfg.samples = f.samples;
  options.oracle_cfg.seed = f.seed;
  if (f.pairwise_only) {
    options.prune = false;
  } else {
    options.kway = f.kway;
    options.mixed = f.mixed;
    options.prune = !f.no_prune;
  }
  qpn::AdmissibleReport report = qpn::admissible_set(net, options);
  std::cout << report.render(net);
  return kExitOk;
}

int cmd_verify(const Flags& f) {
  qpn::Network net = load_valid(f.file);
  auto [reduced, log] = qpn::reduce(net);
  qpn::SamplerConfig cfg{f.seed, f.samples, 0.01};
  qpn::OracleContext oracle(net);
  int self_checks = std::min(f.samples, 50);
  for (int i = 0; i < self_checks; ++i) {
    auto issues = oracle.check_model(oracle.sample(cfg, i));
    if (!issues.empty()) {
      std::cerr << "sampler self-check failed on model " << i << ": " << issues.front() << "\n";
      return kExitOracleContradiction;
    }
  }
  std::cout << "sampler self-check passed on " << self_checks << " models\n";
  qpn::SignVerification report = qpn::verify_reduction_signs(net, reduced, log, cfg);
  std::cout << report.render(reduced);
  if (!report.clean()) {
    std::cerr << "reduced sign contradicted by a sampled model\n";
    return kExitOracleContradiction;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty()) return usage();
  std::string cmd = args.front();
  std::vector<std::string> rest(args.begin() + 1, args.end());

  try {
    if (cmd == "example") {
      if (rest.size() != 1 || rest[0] != "test-treat") {
        std::cerr << "unknown example; available: test-treat\n";
        return kExitUsage;
      }
      std::cout << qpn::test_treat_text();
      return kExitOk;
    }
    Flags f;
    if (!parse_flags(rest, f)) return kExitUsage;
    if (cmd == "validate") return cmd_validate(f);
    if (cmd == "reduce") return cmd_reduce(f);
    if (cmd == "order") return cmd_order(f);
    if (cmd == "strategies") return cmd_strategies(f);
    if (cmd == "admissible") return cmd_admissible(f);
    if (cmd == "verify") return cmd_verify(f);
    std::cerr << "unknown command '" << cmd << "'\n";
    return usage();
  } catch (const qpn::OracleContradiction& e) {
    std::cerr << "oracle contradiction: " << e.what() << "\n";
    return kExitOracleContradiction;
  } catch (const qpn::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitInvalidModel;
  } catch (const qpn::ContradictoryConstraints& e) {
    std::cerr << "infeasible model: " << e.what() << "\n";
    return kExitInvalidModel;
  } catch (const qpn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
