// Command-line front end: run, validate, sanity, table1.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "orqc/errors.hpp"
#include "orqc/oracles.hpp"
#include "orqc/runner.hpp"

namespace {

using namespace orqc;

void print_summary(const ExperimentResult& result, std::ostream& os) {
  os << "wall clock " << format_double(result.manifest.wall_clock_seconds) << " s, width "
     << result.manifest.parallel_width << "\n";
  for (const auto& [label, value] : result.manifest.saturation) {
    os << "saturation " << label << " = " << format_double(value) << "\n";
  }
  if (result.krylov) {
    const auto& dims = result.krylov->dimensions;
    os << "krylov dimension min " << *std::min_element(dims.begin(), dims.end()) << " max "
       << *std::max_element(dims.begin(), dims.end()) << "\n";
  }
}

int cmd_run(const std::string& path) {
  const ExperimentConfig cfg = load_config(path);
  const ExperimentResult result = run_experiment(cfg);
  if (!cfg.output_path.empty()) {
    for (const auto& p : emit(result, cfg.output_path, cfg.output_format)) {
      std::cerr << "wrote " << p.string() << "\n";
    }
  } else {
    std::cout << result_to_json(result);
  }
  print_summary(result, std::cerr);
  return exit_code::kOk;
}

int cmd_validate(const std::string& path) {
  const ExperimentConfig cfg = load_config(path);
  std::cout << config_to_json(cfg) << "\n";
  return exit_code::kOk;
}

int cmd_sanity() {
  const auto reports = oracle::run_all_oracles();
  std::cout << oracle::format_report(reports);
  const bool ok = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.passed; });
  return ok ? exit_code::kOk : exit_code::kNumerical;
}

struct TableOptions {
  std::string out;
  std::vector<int> sizes{4, 6};
  int realizations = 200;
  int steps = 30;
  std::uint64_t seed = 2024;
  int width = 1;
};

int cmd_table1(const TableOptions& opt) {
  std::filesystem::create_directories(opt.out);
  std::ofstream table(std::filesystem::path(opt.out) / "table1.csv", std::ios::binary);
  if (!table) throw std::runtime_error("cannot write table1.csv under " + opt.out);
  table << "n_system,circuit,observable,saturation,realizations\n";
  for (Observable obs : {Observable::LogNeg, Observable::Sre}) {
    for (int n : opt.sizes) {
      for (CircuitClass c : {CircuitClass::RUC, CircuitClass::MLORC, CircuitClass::MFORC}) {
        ExperimentConfig cfg;
        cfg.circuit.circuit = c;
        cfg.circuit.n_system = n;
        cfg.circuit.exposure = c == CircuitClass::MLORC ? n / 2 : 0;
        cfg.observable = obs;
        cfg.steps = opt.steps;
        cfg.realizations = opt.realizations;
        cfg.master_seed = opt.seed;
        cfg.parallel_width = opt.width;
        const std::string name = std::string(to_string(obs)) + "_" + std::string(to_string(c)) +
                                 "_n" + std::to_string(n);
        cfg.output_path = std::filesystem::path(opt.out) / name;
        std::cerr << "running " << name << "\n";
        const ExperimentResult result = run_experiment(cfg);
        emit(result, cfg.output_path, OutputFormat::Csv);
        const double sat = result.manifest.saturation.front().second;
        table << n << ',' << to_string(c) << ',' << to_string(obs) << ',' << format_double(sat)
              << ',' << opt.realizations << '\n';
        table.flush();
        std::cerr << "  saturation " << format_double(sat) << " ("
                  << format_double(result.manifest.wall_clock_seconds) << " s)\n";
      }
    }
  }
  return exit_code::kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Density-matrix simulator for open random quantum circuits"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Execute an experiment");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();

  auto* validate = app.add_subcommand("validate", "Check a config without running it");
  validate->add_option("--config", config_path, "Experiment config (JSON)")->required();

  app.add_subcommand("sanity", "Run the reference-oracle smoke suite");

  TableOptions table;
  auto* table1 = app.add_subcommand("table1", "Run the saturation grid (log-negativity, SRE)");
  table1->add_option("--out", table.out, "Output directory")->required();
  table1->add_option("--sizes", table.sizes, "System sizes")->delimiter(',');
  table1->add_option("--realizations", table.realizations)->check(CLI::PositiveNumber);
  table1->add_option("--steps", table.steps)->check(CLI::PositiveNumber);
  table1->add_option("--seed", table.seed);
  table1->add_option("--width", table.width, "Parallel width")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : exit_code::kConfig;
  }

  try {
    if (*run) return cmd_run(config_path);
    if (*validate) return cmd_validate(config_path);
    if (app.got_subcommand("sanity")) return cmd_sanity();
    if (*table1) return cmd_table1(table);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_code::kConfig;
  } catch (const ResourceError& e) {
    std::cerr << "resource budget exceeded: " << e.what() << "\n";
    return exit_code::kResource;
  } catch (const NumericalError& e) {
    std::cerr << "numerical invariant violated: " << e.what() << "\n";
    return exit_code::kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
