// command line front end; all work happens behind the C API

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "multiiso.h"

namespace {

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open " << path << "\n";
    std::exit(2);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct GlobalFlags {
  double tol_eq = 0, tol_rank = 0;
  long long trunc = 0;
  unsigned long seed = 0;
  bool seed_set = false;
  bool pretty = false;
  bool json_compact = false;
};

int run(const std::string& command, const std::string& instance_json,
        nlohmann::json options, const GlobalFlags& g,
        const std::string& out_path, bool emit_instance) {
  if (g.tol_eq > 0) options["tol_eq"] = g.tol_eq;
  if (g.tol_rank > 0) options["tol_rank"] = g.tol_rank;
  if (g.trunc > 0) options["trunc"] = g.trunc;
  if (g.seed_set) options["seed"] = g.seed;
  if (g.pretty && !g.json_compact) options["pretty"] = true;

  miso_result* result = nullptr;
  const int code = miso_run(command.c_str(), instance_json.c_str(),
                            options.dump().c_str(), &result);
  std::string text = result ? miso_result_json(result) : "";
  miso_result_free(result);

  nlohmann::json report;
  bool parsed = false;
  try {
    report = nlohmann::json::parse(text);
    parsed = true;
  } catch (...) {
  }

  if (code == 2) {
    std::cerr << text << "\n";
    return 2;
  }
  if (!out_path.empty() && parsed && report.contains("artifacts") &&
      report["artifacts"].contains("instance")) {
    std::ofstream out(out_path);
    out << report["artifacts"]["instance"].dump(g.pretty ? 2 : -1) << "\n";
  }
  if (emit_instance && parsed && report.contains("artifacts") &&
      report["artifacts"].contains("instance"))
    std::cout << report["artifacts"]["instance"].dump(g.pretty ? 2 : -1)
              << "\n";
  else
    std::cout << text << "\n";
  return code;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"model multi-isometry toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(miso_version()));

  GlobalFlags g;
  app.add_option("--tol-eq", g.tol_eq, "equality tolerance override");
  app.add_option("--tol-rank", g.tol_rank, "rank cutoff override");
  app.add_option("--trunc", g.trunc, "truncation window (blocks)");
  auto* seed_opt = app.add_option("--seed", g.seed, "seed for randomized steps");
  app.add_flag("--pretty", g.pretty, "indent report output");
  app.add_flag("--json", g.json_compact, "compact single-line output");

  struct Sub {
    CLI::App* cmd = nullptr;
    std::string file = "-";
    std::string out_path;
    bool emit_instance = false;
    std::string params;
  };

  auto add_common = [&](Sub& s, bool with_instance, bool with_params) {
    if (with_instance)
      s.cmd->add_option("file", s.file, "instance file, or - for stdin");
    if (with_params)
      s.cmd->add_option("--params", s.params, "inline params JSON");
    s.cmd->add_option("-o,--out", s.out_path, "write output instance here");
    s.cmd->add_flag("--emit-instance", s.emit_instance,
                    "print the output instance instead of the report");
  };

  Sub validate, compose, complete, pivotal, build3, structure, classify;
  Sub canonical, blaschke, nonblaschke;
  validate.cmd = app.add_subcommand("validate", "check the model conditions");
  compose.cmd = app.add_subcommand("compose", "compose the first two pairs");
  complete.cmd = app.add_subcommand("complete", "complete a valid prefix");
  pivotal.cmd = app.add_subcommand(
      "pivotal", "pivotal operator, Q bounds, existence, lattice");
  build3.cmd = app.add_subcommand(
      "build3", "build a 3-isometry from params.q1 (min|max|basis)");
  structure.cmd = app.add_subcommand(
      "structure", "T/Z extraction, canonical parts, reduction checks");
  classify.cmd =
      app.add_subcommand("classify", "multiplicities and canonical forms");
  canonical.cmd = app.add_subcommand(
      "canonical", "build a canonical 2- or 3-isometry from parameters");
  blaschke.cmd = app.add_subcommand(
      "blaschke", "build the model of (S, phi_2(S), ...) from zero lists");
  nonblaschke.cmd = app.add_subcommand(
      "nonblaschke", "verify the multiplicity-4 zero-divisor pair");
  for (Sub* s : {&validate, &compose, &complete, &pivotal, &build3, &structure,
                 &classify})
    add_common(*s, true, s == &build3);
  add_common(canonical, false, true);
  add_common(blaschke, false, true);
  canonical.cmd->add_option("file", canonical.file,
                            "optional params document ({\"params\": ...})");
  blaschke.cmd->add_option("file", blaschke.file, "optional params document");
  nonblaschke.cmd->add_option("-o,--out", nonblaschke.out_path,
                              "unused, accepted for symmetry");

  Sub equiv;
  std::string equiv_b;
  equiv.cmd = app.add_subcommand("equiv", "decide unitary equivalence");
  equiv.cmd->add_option("fileA", equiv.file, "first instance")->required();
  equiv.cmd->add_option("fileB", equiv_b, "second instance")->required();

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  g.seed_set = seed_opt->count() > 0;

  auto params_doc = [](const Sub& s) -> std::string {
    if (!s.params.empty()) {
      nlohmann::json doc;
      try {
        doc["params"] = nlohmann::json::parse(s.params);
      } catch (const std::exception& e) {
        std::cerr << "bad --params JSON: " << e.what() << "\n";
        std::exit(2);
      }
      return doc.dump();
    }
    return s.file == "-" ? std::string() : read_input(s.file);
  };

  nlohmann::json options = nlohmann::json::object();
  if (validate.cmd->parsed())
    return run("validate", read_input(validate.file), options, g,
               validate.out_path, validate.emit_instance);
  if (compose.cmd->parsed())
    return run("compose", read_input(compose.file), options, g,
               compose.out_path, compose.emit_instance);
  if (complete.cmd->parsed())
    return run("complete", read_input(complete.file), options, g,
               complete.out_path, complete.emit_instance);
  if (pivotal.cmd->parsed())
    return run("pivotal", read_input(pivotal.file), options, g,
               pivotal.out_path, pivotal.emit_instance);
  if (build3.cmd->parsed()) {
    std::string doc = read_input(build3.file);
    if (!build3.params.empty()) {
      try {
        auto j = nlohmann::json::parse(doc);
        j["params"] = nlohmann::json::parse(build3.params);
        doc = j.dump();
      } catch (const std::exception& e) {
        std::cerr << "bad instance or --params JSON: " << e.what() << "\n";
        return 2;
      }
    }
    return run("build3", doc, options, g, build3.out_path,
               build3.emit_instance);
  }
  if (structure.cmd->parsed())
    return run("structure", read_input(structure.file), options, g,
               structure.out_path, structure.emit_instance);
  if (classify.cmd->parsed())
    return run("classify", read_input(classify.file), options, g,
               classify.out_path, classify.emit_instance);
  if (equiv.cmd->parsed()) {
    try {
      options["instance_b"] = nlohmann::json::parse(read_input(equiv_b));
    } catch (const std::exception& e) {
      std::cerr << "bad second instance: " << e.what() << "\n";
      return 2;
    }
    return run("equiv", read_input(equiv.file), options, g, "", false);
  }
  if (canonical.cmd->parsed())
    return run("canonical", params_doc(canonical), options, g,
               canonical.out_path, canonical.emit_instance);
  if (blaschke.cmd->parsed())
    return run("blaschke", params_doc(blaschke), options, g, blaschke.out_path,
               blaschke.emit_instance);
  if (nonblaschke.cmd->parsed())
    return run("nonblaschke", "", options, g, "", false);
  return 2;
}
