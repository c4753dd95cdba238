// Batch driver: run one configuration, verify a directory of configurations,
// or sweep one configuration over parameter values.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gmcf/runner.hpp"

namespace {

using Overrides = std::vector<std::pair<std::string, std::string>>;

Overrides parse_sets(const std::vector<std::string>& sets) {
  Overrides out;
  for (const auto& s : sets) {
    auto [key, values] = gmcf::parse_sweep_param(s);
    if (values.size() != 1) gmcf::fail(gmcf::ErrorCode::ConfigInvalid, key + ": --set takes one value");
    out.emplace_back(key, values.front());
  }
  return out;
}

void print(const gmcf::ExperimentResult& r) {
  std::cout << "run " << r.name << " -> " << r.directory.string() << '\n';
  for (const auto& [k, v] : r.summary) std::cout << "  " << k << " = " << v << '\n';
  if (r.error) std::cout << "  error: " << *r.error << '\n';
  for (const auto& c : r.criteria) {
    std::cout << "  criterion " << c.id << ' ' << c.name << ": " << (c.pass ? "PASS" : "FAIL") << " (" << c.detail
              << ")\n";
  }
}

int cmd_run(const std::string& path, const std::string& output, const std::vector<std::string>& sets) {
  gmcf::RunConfig cfg = gmcf::load_config(path, parse_sets(sets));
  const auto r = output.empty() ? gmcf::run_experiment(cfg) : gmcf::run_experiment(cfg, output);
  print(r);
  return r.exit_code;
}

int cmd_verify(const std::string& dir, unsigned jobs) {
  const auto suite = gmcf::verify_suite(dir, jobs);
  for (const auto& line : suite.report) std::cout << line << '\n';
  if (suite.criteria_checked == 0) std::cerr << "warning: 0 criteria checked\n";
  std::cout << suite.criteria_checked << " criteria checked, exit " << suite.exit_code << '\n';
  return suite.exit_code;
}

int cmd_sweep(const std::string& path, const std::vector<std::string>& params) {
  // Cartesian product over every --param.
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  for (const auto& p : params) axes.push_back(gmcf::parse_sweep_param(p));
  const auto base = gmcf::load_config(path);
  std::vector<Overrides> points{{}};
  for (const auto& [key, values] : axes) {
    std::vector<Overrides> next;
    for (const auto& pt : points) {
      for (const auto& v : values) {
        auto p = pt;
        p.emplace_back(key, v);
        next.push_back(std::move(p));
      }
    }
    points = std::move(next);
  }
  int code = gmcf::ExitSuccess;
  for (const auto& point : points) {
    std::string label;
    for (const auto& [k, v] : point) label += (label.empty() ? "" : "_") + k + "=" + v;
    gmcf::RunConfig cfg = gmcf::load_config(path, point);
    const auto r = gmcf::run_experiment(cfg, gmcf::output_root() / base.output.directory / label);
    print(r);
    code = gmcf::combine_exit(code, r.exit_code);
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graphical mean curvature flow with transport: batch runs and checks"};
  app.require_subcommand(1);

  std::string config, output, dir;
  std::vector<std::string> sets, params;
  unsigned jobs = 0;

  auto* run = app.add_subcommand("run", "Run one configuration");
  run->add_option("config", config, "Configuration file (INI)")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--output", output, "Output directory (default: $GMCF_OUTPUT_ROOT/<output.directory>)");
  run->add_option("--set", sets, "Override a key: section.key=value");

  auto* verify = app.add_subcommand("verify", "Run every configuration in a directory and aggregate the criteria");
  verify->add_option("dir", dir, "Directory of *.ini files")->required();
  verify->add_option("-j,--jobs", jobs, "Concurrent runs (default: hardware threads)");

  auto* sweep = app.add_subcommand("sweep", "Run one configuration over parameter values");
  sweep->add_option("config", config, "Configuration file (INI)")->required()->check(CLI::ExistingFile);
  sweep->add_option("--param", params, "section.key=v1,v2,... (repeatable; Cartesian product)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gmcf::ExitConfigError;
  }

  try {
    if (*run) return cmd_run(config, output, sets);
    if (*verify) return cmd_verify(dir, jobs);
    if (*sweep) return cmd_sweep(config, params);
  } catch (const gmcf::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == gmcf::ErrorCode::ConfigInvalid ? gmcf::ExitConfigError : gmcf::ExitRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return gmcf::ExitRuntimeError;
  }
  return gmcf::ExitSuccess;
}
