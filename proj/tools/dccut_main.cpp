// dccut: command-line driver.
//
//   dccut solve [options] INSTANCE
//   dccut sweep [options] INSTANCE
//
// INSTANCE is a .mblp or .mps file; a bare name is also looked up as
// NAME.mblp in the current directory and in the bundled data directory.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dccut/dccut.hpp"
#include "dccut/report.hpp"

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string instance;
  std::string algo = "dccut";
  int workers = 1;
  int nlap = 1;
  double t = 500.0;
  double eps = 0.01;
  double time_limit = 3600.0;
  std::uint64_t seed = 0;
  std::optional<double> fbest;
  std::string format = "text";
  std::string output;
  std::string trace;
  // sweep only
  std::vector<int> nlaps{1, 3, 5};
  std::vector<std::string> algos{"lapcut", "dccut", "dccut-v1"};
  double budget = 30.0;
};

std::string resolve_path(const std::string& arg) {
  std::vector<fs::path> candidates{arg, arg + ".mblp"};
#ifdef DCCUT_DEFAULT_DATA_DIR
  candidates.emplace_back(fs::path(DCCUT_DEFAULT_DATA_DIR) / arg);
  candidates.emplace_back(fs::path(DCCUT_DEFAULT_DATA_DIR) / (arg + ".mblp"));
#endif
  for (const auto& p : candidates)
    if (fs::is_regular_file(p)) return p.string();
  throw std::runtime_error("cannot open instance '" + arg + "'");
}

dccut::MblpInstance load(const std::string& arg) {
  const std::string path = resolve_path(arg);
  const std::string text = dccut::read_text_file(path);
  dccut::MblpInstance inst = fs::path(path).extension() == ".mps" ? dccut::read_mps(text) : dccut::parse_instance(text);
  if (inst.name().empty()) inst.set_name(fs::path(path).stem().string());
  return inst;
}

dccut::SolverConfig make_config(const Options& o, const std::string& algo) {
  dccut::SolverConfig cfg;
  const auto a = dccut::parse_algorithm(algo);
  if (!a) throw CLI::ValidationError("--algo", "unknown algorithm '" + algo + "'");
  cfg.algo = *a;
  cfg.workers = o.workers;
  cfg.nlap = o.nlap;
  cfg.t = o.t;
  cfg.eps = o.eps;
  cfg.time_limit = o.time_limit;
  cfg.seed = o.seed;
  cfg.fbest = o.fbest;
  cfg.validate();
  return cfg;
}

void emit(const Options& o, const std::string& content) {
  if (o.output.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(o.output);
  if (!out) throw std::runtime_error("cannot write '" + o.output + "'");
  out << content;
}

int run_solve(const Options& o) {
  const dccut::MblpInstance inst = load(o.instance);
  const dccut::SolverConfig cfg = make_config(o, o.algo);
  dccut::RunRecord run{inst.name(), cfg, dccut::dccut_solve(inst, cfg)};
  std::string content;
  if (o.format == "json") content = to_json(run).dump(2) + "\n";
  else if (o.format == "csv") content = dccut::trace_csv(run.report);
  else content = dccut::to_text(run);
  emit(o, content);
  if (!o.trace.empty()) {
    std::ofstream tr(o.trace);
    if (!tr) throw std::runtime_error("cannot write '" + o.trace + "'");
    tr << dccut::trace_csv(run.report);
  }
  return dccut::exit_code(run.report.status);
}

int run_sweep(const Options& o) {
  const dccut::MblpInstance inst = load(o.instance);
  std::ostringstream csv;
  csv << dccut::kSweepHeader << "\n";
  std::vector<dccut::Algorithm> algos;
  for (const std::string& name : o.algos) {
    const auto a = dccut::parse_algorithm(name);
    if (!a) throw std::runtime_error("unknown algorithm '" + name + "'");
    algos.push_back(*a);
  }
  for (dccut::Algorithm algo : algos) {
    for (int nlap : o.nlaps) {
      dccut::SweepRow row{nlap, algo, std::nullopt};
      try {
        Options cell = o;
        cell.nlap = nlap;
        cell.time_limit = o.budget;
        row.report = dccut::dccut_solve(inst, make_config(cell, dccut::to_string(algo)));
      } catch (const std::exception& e) {
        std::cerr << "sweep cell " << dccut::to_string(algo) << "/" << nlap << " failed: " << e.what() << "\n";
      }
      csv << dccut::sweep_row_csv(row) << "\n";
    }
  }
  emit(o, csv.str());
  return 0;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("instance", o.instance, "instance file (.mblp or .mps)")->required();
  cmd->add_option("--workers", o.workers, "parallel workers")->check(CLI::PositiveNumber);
  cmd->add_option("--t", o.t, "penalty parameter")->check(CLI::NonNegativeNumber);
  cmd->add_option("--eps", o.eps, "absolute gap tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--fbest", o.fbest, "best known objective value (enables clgap)");
  cmd->add_option("-o,--output", o.output, "write the report here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cutting-plane solver for mixed-binary linear programs"};
  app.require_subcommand(1);
  Options o;

  CLI::App* solve = app.add_subcommand("solve", "solve one instance");
  add_common(solve, o);
  solve->add_option("--algo", o.algo, "lapcut | dccut | dccut-v1")
      ->check(CLI::IsMember({"lapcut", "dccut", "dccut-v1"}));
  solve->add_option("--nlap", o.nlap, "L&P cuts per fractional point")->check(CLI::NonNegativeNumber);
  solve->add_option("--time-limit", o.time_limit, "seconds")->check(CLI::PositiveNumber);
  solve->add_option("--format", o.format, "text | json | csv")->check(CLI::IsMember({"text", "json", "csv"}));
  solve->add_option("--trace", o.trace, "also write the per-iteration trace as CSV");

  CLI::App* sweep = app.add_subcommand("sweep", "clgap/gap/UB over algorithms and nlap values (CSV)");
  add_common(sweep, o);
  sweep->add_option("--nlap", o.nlaps, "nlap values")->delimiter(',');
  sweep->add_option("--algo", o.algos, "algorithms")->delimiter(',');
  sweep->add_option("--budget", o.budget, "seconds per cell")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*solve) return run_solve(o);
    return run_sweep(o);
  } catch (const dccut::ParseError& e) {
    std::cerr << "dccut: " << o.instance << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "dccut: " << e.what() << "\n";
  }
  return 1;
}
