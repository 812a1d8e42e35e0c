#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "helpers.hpp"
#include "orqc/errors.hpp"
#include "orqc/runner.hpp"

using namespace orqc;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small(CircuitClass c, Observable obs, int n = 4) {
  ExperimentConfig cfg;
  cfg.circuit.circuit = c;
  cfg.circuit.n_system = n;
  cfg.circuit.exposure = c == CircuitClass::MLORC ? n / 2 : 0;
  cfg.observable = obs;
  cfg.steps = 6;
  cfg.realizations = 5;
  cfg.master_seed = 99;
  return cfg;
}

class EnvGuard {
public:
  explicit EnvGuard(const char* value) {
    if (const char* old = std::getenv(kParallelWidthEnv.data())) saved_ = old;
    if (value) {
      setenv(kParallelWidthEnv.data(), value, 1);
    } else {
      unsetenv(kParallelWidthEnv.data());
    }
  }
  ~EnvGuard() {
    if (saved_) {
      setenv(kParallelWidthEnv.data(), saved_->c_str(), 1);
    } else {
      unsetenv(kParallelWidthEnv.data());
    }
  }

private:
  std::optional<std::string> saved_;
};

} // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig cfg = parse_config(R"({
    "circuit": {"class": "MLORC", "n_system": 6, "exposure": 2, "auxiliary": "pure"},
    "observable": "logneg", "steps": 12, "realizations": 3, "master_seed": 5,
    "bipartition": [0, 1], "output": {"path": "out", "format": "json"}
  })");
  CHECK(cfg.circuit.circuit == CircuitClass::MLORC);
  CHECK(cfg.circuit.exposure == 2);
  CHECK(cfg.circuit.auxiliary == AuxiliaryKind::Pure);
  CHECK(cfg.steps == 12);
  CHECK(cfg.output_format == OutputFormat::Json);
  CHECK(cfg.bipartition_part_a().size() == 2);

  const ExperimentConfig again = parse_config(config_to_json(cfg));
  CHECK(config_to_json(again) == config_to_json(cfg));
}

TEST_CASE("config errors") {
  const char* bad[] = {
      R"({"circuit": {"class": "RUC", "n_system": 4}, "observable": "logneg", "colour": 1})",
      R"({"circuit": {"class": "RUC", "n_system": 4, "extra": 1}, "observable": "logneg"})",
      R"({"circuit": {"class": "XYZ", "n_system": 4}, "observable": "logneg"})",
      R"({"circuit": {"class": "RUC", "n_system": 5}, "observable": "logneg"})",
      R"({"circuit": {"class": "RUC", "n_system": 4}, "observable": "entropy"})",
      R"({"circuit": {"class": "RUC", "n_system": 4}, "observable": "logneg", "steps": 0})",
      R"({"circuit": {"class": "RUC", "n_system": 4}, "observable": "logneg", "steps": "ten"})",
      R"({"circuit": {"class": "RUC", "n_system": 4}, "observable": "sre", "bipartition": [0]})",
      R"({"circuit": {"class": "RUC", "n_system": 4}, "observable": "logneg", "bipartition": [0, 1, 2, 3]})",
      R"({"circuit": {"class": "RUC", "n_system": 4}, "observable": "bipartition_probe"})",
      R"({"circuit": {"class": "MLORC", "n_system": 4, "exposure": 1}, "observable": "bipartition_probe"})",
      R"({"circuit": {"class": "RUC", "n_system": 4}, "observable": "krylov", "krylov": {"tolerance": 0.1}})",
      R"({"circuit": {"class": "RUC", "n_system": 4, "same_unitary": true}, "observable": "logneg"})",
      R"({"circuit": {"class": "RUC", "n_system": 14}, "observable": "sre"})",
      R"({"circuit": {"class": "RUC", "n_system": 4}, "observable": "kdesign", "k_max": 9})",
      R"({"circuit": {"class": "RUC", "n_system": 4}})",
      R"(not json)",
  };
  for (const std::string text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_config(text), ConfigError);
  }
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("parallel width environment override") {
  ExperimentConfig cfg = small(CircuitClass::RUC, Observable::LogNeg);
  cfg.parallel_width = 3;
  {
    EnvGuard env(nullptr);
    CHECK(effective_parallel_width(cfg) == 3);
  }
  {
    EnvGuard env("5");
    CHECK(effective_parallel_width(cfg) == 5);
  }
  for (const char* bad : {"0", "-2", "many", "3x"}) {
    EnvGuard env(bad);
    CHECK_THROWS_AS(effective_parallel_width(cfg), ConfigError);
  }
}

TEST_CASE("defaults") {
  ExperimentConfig cfg = small(CircuitClass::RUC, Observable::LogNeg, 6);
  CHECK(cfg.bipartition_part_a().size() == 2);
  cfg.circuit.n_system = 8;
  CHECK(cfg.bipartition_part_a().size() == 4);
  cfg.observable = Observable::Sre;
  CHECK(cfg.effective_initial_state() == InitialRecipe::MagicFreePairs);
  cfg.observable = Observable::LogNeg;
  CHECK(cfg.effective_initial_state() == InitialRecipe::HsPairs);
}

TEST_CASE("saturation_value") {
  std::vector<TimeSeriesRecord> flat;
  for (int t = 0; t <= 8; ++t) flat.push_back({t, 0.375, 0.0, 1});
  CHECK(saturation_value(flat) == 0.375);

  std::vector<TimeSeriesRecord> ramp;
  for (int t = 0; t <= 8; ++t) ramp.push_back({t, static_cast<double>(t), 0.0, 1});
  CHECK(saturation_value(ramp, 0.25) == doctest::Approx(7.5));
  CHECK(saturation_value(ramp, 1.0) == doctest::Approx(4.5));
  CHECK_THROWS(saturation_value({}, 0.25));
  CHECK_THROWS(saturation_value(ramp, 0.0));
}

TEST_CASE("runs are deterministic and independent of the parallel width") {
  EnvGuard env(nullptr);
  for (auto c : {CircuitClass::RUC, CircuitClass::MLORC, CircuitClass::MFORC}) {
    CAPTURE(to_string(c));
    ExperimentConfig cfg = small(c, Observable::LogNeg);
    cfg.realizations = 9;
    const ExperimentResult a = run_experiment(cfg);
    const ExperimentResult b = run_experiment(cfg);
    cfg.parallel_width = 8;
    const ExperimentResult w = run_experiment(cfg);
    CHECK(w.manifest.parallel_width == 8);
    REQUIRE(a.series.size() == 1);
    CHECK(a.series[0].records == b.series[0].records);
    for (std::size_t t = 0; t < a.series[0].records.size(); ++t) {
      CHECK(std::abs(a.series[0].records[t].mean - w.series[0].records[t].mean) <= 1e-12);
      CHECK(std::abs(a.series[0].records[t].variance - w.series[0].records[t].variance) <= 1e-12);
    }
  }
}

TEST_CASE("series shape and manifest") {
  ExperimentConfig cfg = small(CircuitClass::MFORC, Observable::Sre);
  const ExperimentResult r = run_experiment(cfg);
  const auto& rec = r.find("sre").records;
  REQUIRE(rec.size() == 7);
  CHECK(rec.front().t == 0);
  CHECK(std::abs(rec.front().mean) < 1e-8);
  CHECK(rec.back().n_realizations == 5);
  CHECK(r.manifest.realization_seeds.size() == 5);
  CHECK(r.manifest.master_seed == 99);
  CHECK(r.manifest.version == kArtifactVersion);
  CHECK_THROWS(r.find("logneg"));

  const auto manifest = nlohmann::json::parse(manifest_to_json(r.manifest));
  CHECK(manifest["realization_seeds"].size() == 5);
  CHECK(manifest["config"]["observable"] == "sre");
}

TEST_CASE("every observable runs") {
  EnvGuard env(nullptr);
  SUBCASE("mutual information") {
    const auto r = run_experiment(small(CircuitClass::RUC, Observable::MutualInfo));
    CHECK(r.series[0].records.back().mean > 0.0);
  }
  SUBCASE("kdesign") {
    ExperimentConfig cfg = small(CircuitClass::RUC, Observable::KDesign);
    cfg.k_max = 2;
    const auto r = run_experiment(cfg);
    CHECK(r.series.size() == 2);
    CHECK(r.kdesign.size() == 2 * 7);
    for (const auto& row : r.kdesign) {
      CHECK(row.delta >= 0.0);
      CHECK(row.delta <= 1.0);
    }
    cfg.kdesign_averaging = KDesignAveraging::PooledMoment;
    const auto pooled = run_experiment(cfg);
    for (std::size_t i = 0; i < r.kdesign.size(); ++i) {
      CHECK(pooled.kdesign[i].delta <= r.kdesign[i].delta + 1e-12);
    }
  }
  SUBCASE("krylov") {
    ExperimentConfig cfg = small(CircuitClass::RUC, Observable::Krylov, 2);
    cfg.steps = 30;
    cfg.realizations = 2;
    const auto r = run_experiment(cfg);
    REQUIRE(r.krylov);
    CHECK(r.krylov->dimensions.size() == 2);
    CHECK(r.krylov->dimensions[0] == 15);
    CHECK(r.find("complexity").records.front().mean == 0.0);
  }
  SUBCASE("probe") {
    for (auto c : {CircuitClass::MLORC, CircuitClass::MFORC}) {
      ExperimentConfig cfg = small(c, Observable::BipartitionProbe);
      cfg.initial_state = InitialRecipe::ZeroState;
      const auto r = run_experiment(cfg);
      REQUIRE(r.series.size() == 6);
      for (const auto& s : r.series) CHECK(s.records.front().mean == 0.0);
    }
  }
}

TEST_CASE("probe cuts of GHZ and W states") {
  const auto ghz = probe_cuts(test::ghz_state(3));
  for (int i = 0; i < 3; ++i) CHECK(ghz[static_cast<std::size_t>(i)] == doctest::Approx(std::log2(1.5)));
  for (int i = 3; i < 6; ++i) CHECK(ghz[static_cast<std::size_t>(i)] == 0.0);

  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(8);
  w(1) = w(2) = w(4) = 1.0 / std::sqrt(3.0);
  const auto wc = probe_cuts(DensityMatrix::from_pure(w));
  for (int i = 3; i < 6; ++i) {
    CHECK(wc[static_cast<std::size_t>(i)] > 1e-2);
    CHECK(wc[static_cast<std::size_t>(i)] < wc[0]);
  }
}

TEST_CASE("resource budget") {
  ExperimentConfig cfg = small(CircuitClass::MFORC, Observable::LogNeg, 8);
  cfg.memory_budget_mb = 1;
  CHECK_THROWS_AS(run_experiment(cfg), ResourceError);
}

TEST_CASE("CSV formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);

  const std::vector<TimeSeriesRecord> recs{{0, 0.0, 0.0, 3}, {1, 1.0 / 3.0, 2e-17, 3}, {2, 0.1, 0.25, 3}};
  const std::string csv = records_to_csv(recs);
  CHECK(csv.rfind("t,mean,variance,n_realizations\n", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(records_from_csv(csv) == recs);
  CHECK_THROWS(records_from_csv("t,mean\n0,1\n"));
  CHECK_THROWS(records_from_csv("t,mean,variance,n_realizations\n0,x,0,1\n"));
}

TEST_CASE("emit writes CSV and JSON") {
  const auto dir = std::filesystem::temp_directory_path() / "orqc_emit_test";
  std::filesystem::remove_all(dir);
  ExperimentConfig cfg = small(CircuitClass::RUC, Observable::LogNeg);
  const ExperimentResult r = run_experiment(cfg);

  emit(r, dir / "csv", OutputFormat::Csv);
  const std::string csv = read_file(dir / "csv" / "series.csv");
  CHECK(records_from_csv(csv) == r.series[0].records);
  const auto manifest = nlohmann::json::parse(read_file(dir / "csv" / "manifest.json"));
  CHECK(manifest["realization_seeds"].size() == static_cast<std::size_t>(cfg.realizations));

  emit(r, dir / "json", OutputFormat::Json);
  const auto doc = nlohmann::json::parse(read_file(dir / "json" / "result.json"));
  CHECK(doc["series"][0]["records"].size() == r.series[0].records.size());
  CHECK(doc["manifest"]["master_seed"] == 99);
  std::filesystem::remove_all(dir);
}

TEST_CASE("golden smoke run") {
  EnvGuard env(nullptr);
  const ExperimentConfig cfg = load_config(std::filesystem::path(ORQC_TEST_DATA) / "golden_config.json");
  const ExperimentResult r = run_experiment(cfg);
  const std::string expected = read_file(std::filesystem::path(ORQC_TEST_DATA) / "golden_series.csv");
  const auto golden = records_from_csv(expected);
  const auto& got = r.series[0].records;
  REQUIRE(golden.size() == got.size());
  for (std::size_t t = 0; t < got.size(); ++t) {
    CHECK(got[t].t == golden[t].t);
    CHECK(got[t].n_realizations == golden[t].n_realizations);
    CHECK(std::abs(got[t].mean - golden[t].mean) <= 1e-12);
    CHECK(std::abs(got[t].variance - golden[t].variance) <= 1e-12);
  }
}
