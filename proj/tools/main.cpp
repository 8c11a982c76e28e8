#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "rsm/error.hpp"
#include "rsm/model.hpp"
#include "rsm/sim.hpp"

namespace {

// Exit codes, scriptable: 0 ok, 1 validation failed, 2 parse failed,
// 3 the command itself failed on a valid model.
constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kParse = 2;
constexpr int kRuntime = 3;

bool color_enabled() {
  const char* v = std::getenv("RSM_COLOR");
  if (v != nullptr && std::string_view(v) == "0") return false;
  return isatty(fileno(stderr)) != 0;
}

void diag(const std::string& line) {
  static const bool color = color_enabled();
  if (color)
    std::cerr << "\x1b[31merror:\x1b[0m " << line << '\n';
  else
    std::cerr << "error: " << line << '\n';
}

// Accepts "name=value" pieces, comma-separated within one flag occurrence.
bool parse_assignments(const std::vector<std::string>& specs,
                       std::map<std::string, double>& out, std::string& err) {
  for (const auto& spec : specs) {
    std::stringstream ss(spec);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
      auto eq = piece.find('=');
      if (eq == std::string::npos || eq == 0) {
        err = "bad assignment '" + piece + "', expected name=value";
        return false;
      }
      try {
        std::size_t used = 0;
        double x = std::stod(piece.substr(eq + 1), &used);
        if (used != piece.size() - eq - 1) throw std::invalid_argument(piece);
        out[piece.substr(0, eq)] = x;
      } catch (const std::exception&) {
        err = "bad value in '" + piece + "'";
        return false;
      }
    }
  }
  return true;
}

template <typename Body>
int with_output(const std::string& path, Body&& body) {
  if (path.empty()) return body(std::cout);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    diag("cannot write '" + path + "'");
    return kRuntime;
  }
  int rc = body(out);
  out.close();
  if (out.fail()) {
    diag("failed writing '" + path + "'");
    return kRuntime;
  }
  return rc;
}

// Shared front half of every command: load, parse, check, compose. The body
// runs only on a model that passed all checks.
template <typename Body>
int run_checked(const std::string& path, Body&& body) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    diag("cannot open '" + path + "'");
    return kParse;
  }
  std::stringstream text;
  text << in.rdbuf();

  rsm::Model m;
  try {
    m = rsm::parse_model(text.str());
  } catch (const rsm::Error& e) {
    diag(e.what());
    return kParse;
  }

  auto problems = rsm::check_model(m);
  if (!problems.empty()) {
    for (const auto& p : problems) diag(p);
    return kInvalid;
  }

  try {
    return body(m, rsm::compose_model(m));
  } catch (const rsm::Error& e) {
    diag(e.what());
    return kRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compose, simulate, and analyze open dynamical systems"};
  app.require_subcommand(1);

  std::string path, out_path, csv_path, dot_path, method = "rk4";
  std::vector<std::string> x0_specs, param_specs;
  double t_end = 1.0, dt = 1e-3;

  auto* check = app.add_subcommand("check", "parse and validate a model file");
  check->add_option("path", path, "model file")->required();

  auto* compose =
      app.add_subcommand("compose", "run the composition, print the result");
  compose->add_option("path", path, "model file")->required();
  compose->add_option("--out", out_path, "output file (default stdout)");

  auto* simulate =
      app.add_subcommand("simulate", "compose an ode model and integrate it");
  simulate->add_option("path", path, "model file")->required();
  simulate->add_option("--x0", x0_specs,
                       "initial values, name=value[,name=value...]");
  simulate->add_option("--params", param_specs,
                       "parameter values, name=value[,name=value...]");
  simulate->add_option("--t", t_end, "end time")->capture_default_str();
  simulate->add_option("--dt", dt, "step size")->capture_default_str();
  simulate->add_option("--method", method, "integration method")
      ->check(CLI::IsMember({"euler", "rk4"}))
      ->capture_default_str();
  simulate->add_option("--csv", csv_path, "output file (default stdout)");

  auto* graph_cmd = app.add_subcommand(
      "graph", "compose an automata model, analyze its transition graph");
  graph_cmd->add_option("path", path, "model file")->required();
  graph_cmd->add_option("--dot", dot_path, "also write the graph as dot");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kParse;
  }

  if (check->parsed()) {
    return run_checked(
        path, [](const rsm::Model&, const rsm::FilledBox&) { return kOk; });
  }

  if (compose->parsed()) {
    return run_checked(path,
                       [&](const rsm::Model& m, const rsm::FilledBox& box) {
                         rsm::Model wrapped = rsm::composed_model(m, box);
                         return with_output(out_path, [&](std::ostream& os) {
                           os << rsm::print_model(wrapped);
                           return kOk;
                         });
                       });
  }

  if (simulate->parsed()) {
    std::map<std::string, double> x0, params;
    std::string err;
    if (!parse_assignments(x0_specs, x0, err) ||
        !parse_assignments(param_specs, params, err)) {
      diag(err);
      return kParse;
    }
    return run_checked(
        path, [&](const rsm::Model& m, const rsm::FilledBox& box) {
          if (m.doctrine != rsm::Doctrine::ode) {
            diag("simulate needs an ode model");
            return kInvalid;
          }
          auto mm =
              method == "euler" ? rsm::Method::euler : rsm::Method::rk4;
          rsm::Trajectory tr =
              rsm::integrate(box.ode(), x0, params, t_end, dt, mm);
          return with_output(csv_path, [&](std::ostream& os) {
            rsm::write_csv(tr, os);
            return kOk;
          });
        });
  }

  // graph
  return run_checked(path, [&](const rsm::Model& m,
                               const rsm::FilledBox& box) {
    if (m.doctrine != rsm::Doctrine::automata) {
      diag("graph needs an automata model");
      return kInvalid;
    }
    const rsm::Automaton& aut = box.aut();
    rsm::TransitionGraph g = rsm::graph(aut);
    std::string dead;
    for (const auto& name : rsm::dead_states(aut)) {
      if (!dead.empty()) dead += ',';
      dead += name;
    }
    std::cout << "states=" << g.nodes.size() << " edges=" << g.edges.size()
              << " dead=[" << dead << "] components=" << rsm::components(g).size()
              << '\n';
    if (dot_path.empty()) return kOk;
    return with_output(dot_path, [&](std::ostream& os) {
      rsm::write_dot(g, os);
      return kOk;
    });
  });
}
