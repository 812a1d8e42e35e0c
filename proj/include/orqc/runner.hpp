#pragma once

// Config-driven experiment orchestration and result serialization.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orqc/circuits.hpp"
#include "orqc/krylov.hpp"
#include "orqc/linalg.hpp"
#include "orqc/random.hpp"
#include "orqc/resources.hpp"

namespace orqc {

inline constexpr std::string_view kArtifactVersion = "1.0.0";
inline constexpr std::string_view kParallelWidthEnv = "ORQC_PARALLEL_WIDTH";

enum class Observable : std::uint8_t { LogNeg, MutualInfo, Sre, Krylov, KDesign, BipartitionProbe };

std::string_view to_string(Observable o);
std::optional<Observable> parse_observable(std::string_view s);

enum class InitialRecipe : std::uint8_t {
  Default,          ///< chosen by the observable
  HsPairs,          ///< product of Hilbert-Schmidt random pair states
  MagicFreePairs,   ///< product of Clifford-rotated diagonal pair states
  ZeroState,        ///< |0...0><0...0|
};

enum class OutputFormat : std::uint8_t { Csv, Json };

enum class KDesignAveraging : std::uint8_t {
  PerRealization,  ///< mean over realizations of Delta^(k)
  PooledMoment,    ///< Delta^(k) of the realization-averaged moment
};

struct ExperimentConfig {
  CircuitSpec circuit;
  Observable observable = Observable::LogNeg;
  int steps = 30;
  int realizations = 1;
  std::uint64_t master_seed = 0;

  /// Part A of the bipartition for logneg / mutual_info; empty = default cut.
  std::vector<int> bipartition;
  /// Unmeasured subsystem of the projected ensemble; empty = first two qubits.
  std::vector<int> subsystem_a;
  int k_max = 3;
  KDesignAveraging kdesign_averaging = KDesignAveraging::PerRealization;

  InitialRecipe initial_state = InitialRecipe::Default;
  WeightSampling initial_weights = WeightSampling::Vertex;
  /// Evaluate the observable on the full register, auxiliaries included.
  bool joint_state = false;

  LogBase log_base = LogBase::Two;
  NegativityConvention negativity = NegativityConvention::Plain;

  double krylov_tolerance = 1e-10;
  int krylov_stall_window = 64;
  bool krylov_fixed_steps = false;

  std::filesystem::path output_path;
  OutputFormat output_format = OutputFormat::Csv;
  int parallel_width = 1;
  std::uint64_t memory_budget_mb = 4096;
  double tail_fraction = 0.25;

  /// Throws ConfigError.
  void validate() const;

  QubitSubset bipartition_part_a() const;
  QubitSubset ensemble_part_a() const;
  InitialRecipe effective_initial_state() const;
};

/// Parses a JSON document; unknown keys and type mismatches raise ConfigError.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Canonical JSON form, re-parseable by parse_config.
std::string config_to_json(const ExperimentConfig& config);

/// Parallel width after applying the environment override.
int effective_parallel_width(const ExperimentConfig& config);

struct TimeSeriesRecord {
  int t = 0;
  double mean = 0.0;
  double variance = 0.0;
  int n_realizations = 0;

  bool operator==(const TimeSeriesRecord&) const = default;
};

struct NamedSeries {
  std::string label;
  std::vector<TimeSeriesRecord> records;
};

/// Per-step projected-ensemble distances (kdesign only).
struct KDesignRow {
  int t = 0;
  int k = 0;
  double delta = 0.0;
  double standard_error = 0.0;
  int realizations = 0;
};

struct KrylovSummary {
  std::vector<int> dimensions;
  std::vector<double> final_complexity;
  /// Mean basis size after each step; the series ends with the shortest run.
  std::vector<double> mean_dimension;
  double max_gram_deviation = 0.0;
};

struct RunManifest {
  std::string config_json;
  std::uint64_t master_seed = 0;
  /// Gate-stream seed of each realization; the other streams hang off the
  /// same (master, realization) pair.
  std::vector<std::uint64_t> realization_seeds;
  std::string version{kArtifactVersion};
  double wall_clock_seconds = 0.0;
  int parallel_width = 1;
  double tail_fraction = 0.25;
  /// Saturation value of every series, in series order.
  std::vector<std::pair<std::string, double>> saturation;
};

struct ExperimentResult {
  std::vector<NamedSeries> series;
  std::vector<KDesignRow> kdesign;
  std::optional<KrylovSummary> krylov;
  RunManifest manifest;

  const NamedSeries& find(std::string_view label) const;
};

/// Runs every realization and aggregates per step. Raises ConfigError,
/// ResourceError or NumericalError.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Mean of the per-step means over the final tail_fraction of steps
/// (t = 0 excluded unless it is the only record).
double saturation_value(const std::vector<TimeSeriesRecord>& series,
                        double tail_fraction = 0.25);

/// Labels of the six probe series, bipartitions first.
inline constexpr std::array<std::string_view, 6> kProbeLabels = {"1:2a", "2:1a", "a:12",
                                                                "1:2",  "1:a",  "2:a"};

/// Log-negativities of the six cuts of a three-qubit state ordered (1, 2, a).
std::array<double, 6> probe_cuts(const DensityMatrix& three_qubit,
                                 NegativityConvention convention = NegativityConvention::Plain);

/// Shortest round-trip decimal form of x.
std::string format_double(double x);

std::string records_to_csv(const std::vector<TimeSeriesRecord>& records);
/// Throws std::runtime_error on malformed input.
std::vector<TimeSeriesRecord> records_from_csv(std::string_view text);

std::string manifest_to_json(const RunManifest& manifest);
std::string result_to_json(const ExperimentResult& result);

/// Writes the result under `dir` in the requested format; returns the paths.
std::vector<std::filesystem::path> emit(const ExperimentResult& result,
                                        const std::filesystem::path& dir, OutputFormat format);

} // namespace orqc
