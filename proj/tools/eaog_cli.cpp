#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "eaog/benchmarks.hpp"
#include "eaog/planner_loop.hpp"
#include "eaog/report.hpp"
#include "eaog/scenario_dsl.hpp"

namespace fs = std::filesystem;
using namespace eaog;

namespace {

struct Options {
  std::vector<std::string> scenario{"hanoi"};
  std::string file;  // positional alternative to --scenario file <path>
  int disks = 3;
  int samples = 2;
  int glassware = 1;
  bool omnipotent = false;
  std::uint64_t seed = 0;
  std::size_t depth_cap = 512;
  int retries = 5;
  std::string out;
  std::string trace;
  std::string dot_dir;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

Scenario load(const Options& o) {
  std::string path = o.file;
  const std::string& kind = o.scenario.front();
  if (path.empty() && kind == "file") {
    if (o.scenario.size() < 2) throw UsageError("--scenario file needs a path");
    path = o.scenario[1];
  }
  if (!path.empty()) return parse_scenario(read_file(path));
  if (kind == "hanoi") return gen_hanoi(o.disks, default_hanoi_layout(o.omnipotent));
  if (kind == "habitat") {
    HabitatConfig config;
    config.samples = o.samples;
    config.glassware = o.glassware;
    return gen_habitat(config);
  }
  throw UsageError("unknown scenario '" + kind + "' (expected hanoi, habitat or file <path>)");
}

void write_dots(const std::string& dir, const std::vector<AugmentedGraph>& graphs,
                const std::vector<std::string>& names) {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    std::ostringstream name;
    name << "graph_" << std::setw(3) << std::setfill('0') << i << "_" << names[i] << ".dot";
    write_file((fs::path(dir) / name.str()).string(), to_dot(graphs[i]));
  }
}

int cmd_run(const Options& o) {
  const Scenario s = load(o);
  RunConfig config;
  config.seed = o.seed;
  config.depth_cap = o.depth_cap;
  config.retries = o.retries;
  std::vector<AugmentedGraph> graphs;
  const PlanTrace trace = run(s, config, o.dot_dir.empty() ? nullptr : &graphs);
  const std::string doc = metrics_document(trace).dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << doc;
  } else {
    write_file(o.out, doc);
  }
  if (!o.trace.empty()) write_file(o.trace, trace_jsonl(trace));
  if (!o.dot_dir.empty()) write_dots(o.dot_dir, graphs, trace.graph_templates);
  std::cerr << s.name << ": " << to_string(trace.final_status) << " d=" << trace.metrics.depth
            << " actions=" << trace.metrics.executed_actions << "\n";
  return trace.final_status == FinalStatus::GoalAchieved ? 0 : 2;
}

int cmd_validate(const Options& o) {
  const Scenario s = load(o);
  (void)augment(build_graph(s.graph));
  std::cout << s.name << ": ok (" << s.objects.size() << " objects, " << s.agents.size() << " agents, "
            << s.graph.nodes.size() << " nodes, " << s.stages.size() << " stages)\n";
  return 0;
}

int cmd_gen(const Options& o) {
  const std::string text = serialize(load(o));
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_file(o.out, text);
  }
  return 0;
}

int cmd_dot(const Options& o) {
  const Scenario s = load(o);
  const std::string dot = to_dot(augment(build_graph(s.graph)));
  if (!o.dot_dir.empty()) {
    fs::create_directories(o.dot_dir);
    write_file((fs::path(o.dot_dir) / (s.graph.name + ".dot")).string(), dot);
  } else if (!o.out.empty()) {
    write_file(o.out, dot);
  } else {
    std::cout << dot;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Task-motion planner over expanding AND/OR graph networks"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", o.scenario, "hanoi | habitat | file <path>")->expected(1, 2);
    sub->add_option("path", o.file, "scenario file");
    sub->add_option("--disks", o.disks, "Hanoi disk count (3..8)");
    sub->add_flag("--omnipotent", o.omnipotent, "single unrestricted Hanoi agent");
    sub->add_option("--samples", o.samples, "Habitat sample count (1..4)");
    sub->add_option("--glassware", o.glassware, "Habitat glassware count (1..3)");
    sub->add_option("--out", o.out, "output path");
  };
  auto* run_cmd = app.add_subcommand("run", "plan and execute a scenario");
  add_common(run_cmd);
  run_cmd->add_option("--seed", o.seed, "sampling seed");
  run_cmd->add_option("--depth-cap", o.depth_cap, "maximum number of network expansions");
  run_cmd->add_option("--retries", o.retries, "extra goal samples per motion query");
  run_cmd->add_option("--trace", o.trace, "line-delimited trace records");
  run_cmd->add_option("--dot", o.dot_dir, "directory for one DOT file per network graph");
  auto* validate_cmd = app.add_subcommand("validate", "parse and check a scenario");
  add_common(validate_cmd);
  auto* gen_cmd = app.add_subcommand("gen", "write a benchmark scenario file");
  add_common(gen_cmd);
  auto* dot_cmd = app.add_subcommand("dot", "export the scenario's main graph");
  add_common(dot_cmd);
  dot_cmd->add_option("--dot", o.dot_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  try {
    if (run_cmd->parsed()) return cmd_run(o);
    if (validate_cmd->parsed()) return cmd_validate(o);
    if (gen_cmd->parsed()) return cmd_gen(o);
    return cmd_dot(o);
  } catch (const DslError& e) {
    std::cerr << e.diagnostic() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 1;
}
