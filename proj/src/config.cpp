#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "orqc/errors.hpp"
#include "orqc/runner.hpp"

namespace orqc {

using nlohmann::json;

namespace {

template <typename Enum, std::size_t N>
struct NameTable {
  std::array<std::pair<std::string_view, Enum>, N> entries;

  Enum parse(const std::string& key, const std::string& value) const {
    for (const auto& [name, e] : entries) {
      if (name == value) return e;
    }
    std::string allowed;
    for (const auto& [name, e] : entries) {
      allowed += allowed.empty() ? "" : ", ";
      allowed += name;
    }
    throw ConfigError("'" + key + "': unknown value '" + value + "' (expected one of " +
                      allowed + ")");
  }

  std::string_view name(Enum e) const {
    for (const auto& [name, v] : entries) {
      if (v == e) return name;
    }
    return "?";
  }
};

constexpr NameTable<Observable, 6> kObservables{{{{"logneg", Observable::LogNeg},
                                                  {"mutual_info", Observable::MutualInfo},
                                                  {"sre", Observable::Sre},
                                                  {"krylov", Observable::Krylov},
                                                  {"kdesign", Observable::KDesign},
                                                  {"bipartition_probe",
                                                   Observable::BipartitionProbe}}}};
constexpr NameTable<ExposureSelection, 2> kSelections{
    {{{"fixed_prefix", ExposureSelection::FixedPrefix},
      {"random_per_step", ExposureSelection::RandomPerStep}}}};
constexpr NameTable<AuxiliaryKind, 2> kAuxKinds{
    {{{"mixed", AuxiliaryKind::Mixed}, {"pure", AuxiliaryKind::Pure}}}};
constexpr NameTable<InitialRecipe, 4> kRecipes{{{{"default", InitialRecipe::Default},
                                                 {"hs_pairs", InitialRecipe::HsPairs},
                                                 {"magic_free_pairs",
                                                  InitialRecipe::MagicFreePairs},
                                                 {"zero", InitialRecipe::ZeroState}}}};
constexpr NameTable<WeightSampling, 2> kWeights{
    {{{"vertex", WeightSampling::Vertex}, {"simplex", WeightSampling::Simplex}}}};
constexpr NameTable<LogBase, 2> kLogBases{{{{"2", LogBase::Two}, {"e", LogBase::Natural}}}};
constexpr NameTable<NegativityConvention, 2> kConventions{
    {{{"plain", NegativityConvention::Plain}, {"standard", NegativityConvention::Standard}}}};
constexpr NameTable<KDesignAveraging, 2> kAveraging{
    {{{"per_realization", KDesignAveraging::PerRealization},
      {"pooled_moment", KDesignAveraging::PooledMoment}}}};
constexpr NameTable<OutputFormat, 2> kFormats{
    {{{"csv", OutputFormat::Csv}, {"json", OutputFormat::Json}}}};

// Wraps one JSON object, remembering which keys were read so that leftovers
// can be reported as unknown.
class Section {
public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(where() + "expected an object");
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  const json* raw(const std::string& key) {
    seen_.insert(key);
    auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  Section child(const std::string& key) {
    const json* v = raw(key);
    if (v == nullptr) throw ConfigError(where() + "missing section '" + key + "'");
    return Section(*v, path_ + key + ".");
  }

  void read(const std::string& key, int& out, long long lo, long long hi) {
    const json* v = raw(key);
    if (v == nullptr) return;
    if (!v->is_number_integer()) throw ConfigError(where(key) + "expected an integer");
    const auto x = v->get<long long>();
    if (v->is_number_unsigned() && v->get<unsigned long long>() > static_cast<unsigned long long>(hi)) {
      throw ConfigError(where(key) + "out of range");
    }
    if (x < lo || x > hi) {
      throw ConfigError(where(key) + "must lie in [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "]");
    }
    out = static_cast<int>(x);
  }

  void read(const std::string& key, std::uint64_t& out) {
    const json* v = raw(key);
    if (v == nullptr) return;
    if (!v->is_number_integer() || (!v->is_number_unsigned() && v->get<long long>() < 0)) {
      throw ConfigError(where(key) + "expected a non-negative integer");
    }
    out = v->get<std::uint64_t>();
  }

  void read(const std::string& key, double& out) {
    const json* v = raw(key);
    if (v == nullptr) return;
    if (!v->is_number()) throw ConfigError(where(key) + "expected a number");
    out = v->get<double>();
  }

  void read(const std::string& key, bool& out) {
    const json* v = raw(key);
    if (v == nullptr) return;
    if (!v->is_boolean()) throw ConfigError(where(key) + "expected true or false");
    out = v->get<bool>();
  }

  void read(const std::string& key, std::string& out) {
    const json* v = raw(key);
    if (v == nullptr) return;
    if (!v->is_string()) throw ConfigError(where(key) + "expected a string");
    out = v->get<std::string>();
  }

  void read(const std::string& key, std::vector<int>& out) {
    const json* v = raw(key);
    if (v == nullptr) return;
    if (!v->is_array()) throw ConfigError(where(key) + "expected an array of qubit indices");
    out.clear();
    for (const auto& e : *v) {
      if (!e.is_number_integer()) throw ConfigError(where(key) + "expected integer entries");
      out.push_back(e.get<int>());
    }
  }

  template <typename Enum, std::size_t N>
  void read(const std::string& key, Enum& out, const NameTable<Enum, N>& table) {
    std::string s;
    if (!has(key)) {
      raw(key);
      return;
    }
    read(key, s);
    out = table.parse(path_ + key, s);
  }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!seen_.contains(it.key())) throw ConfigError("unknown key '" + path_ + it.key() + "'");
    }
  }

private:
  std::string where(const std::string& key = "") const {
    if (key.empty()) return path_.empty() ? "config: " : "'" + path_ + "': ";
    return "'" + path_ + key + "': ";
  }

  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

void check_subset(const std::vector<int>& q, int n, const std::string& what) {
  try {
    const QubitSubset s(q, n);
    if (s.empty() || s.size() >= static_cast<std::size_t>(n)) {
      throw ConfigError("'" + what + "' must be a non-empty proper subset of the system qubits");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError("'" + what + "': " + e.what());
  }
}

} // namespace

std::string_view to_string(Observable o) { return kObservables.name(o); }

std::optional<Observable> parse_observable(std::string_view s) {
  for (const auto& [name, e] : kObservables.entries) {
    if (name == s) return e;
  }
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  try {
    circuit.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("circuit: ") + e.what());
  }
  if (steps < 1) throw ConfigError("'steps' must be >= 1");
  if (realizations < 1) throw ConfigError("'realizations' must be >= 1");
  if (parallel_width < 1) throw ConfigError("'parallel_width' must be >= 1");
  if (memory_budget_mb < 1) throw ConfigError("'memory_budget_mb' must be >= 1");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw ConfigError("'tail_fraction' must lie in (0, 1]");
  }
  const int n = circuit.n_system;
  if (!bipartition.empty()) {
    if (observable != Observable::LogNeg && observable != Observable::MutualInfo) {
      throw ConfigError("'bipartition' applies to logneg and mutual_info only");
    }
    check_subset(bipartition, n, "bipartition");
  }
  if (!subsystem_a.empty()) {
    if (observable != Observable::KDesign) {
      throw ConfigError("'subsystem_a' applies to kdesign only");
    }
    check_subset(subsystem_a, n, "subsystem_a");
  }
  if (observable == Observable::KDesign) {
    if (n < 3 && subsystem_a.empty()) {
      throw ConfigError("kdesign needs at least three system qubits for the default subsystem");
    }
    if (k_max < 1 || k_max > 8) throw ConfigError("'k_max' must lie in [1, 8]");
  }
  if (joint_state && observable != Observable::Sre) {
    throw ConfigError("'joint_state' applies to the sre observable only");
  }
  if (observable == Observable::Sre) {
    const int width = joint_state ? n + circuit.n_aux() : n;
    if (width > 12) throw ConfigError("sre is limited to registers of at most 12 qubits");
  }
  if (observable == Observable::Krylov) {
    if (!(krylov_tolerance > 0.0 && krylov_tolerance <= 1e-6)) {
      throw ConfigError("'krylov.tolerance' must lie in (0, 1e-6]");
    }
    if (krylov_stall_window < 1) throw ConfigError("'krylov.stall_window' must be >= 1");
  } else if (circuit.krylov_same_unitary_mode && observable != Observable::Krylov) {
    throw ConfigError("'circuit.same_unitary' applies to the krylov observable only");
  }
  if (observable == Observable::BipartitionProbe) {
    if (circuit.circuit == CircuitClass::RUC) {
      throw ConfigError("bipartition_probe needs MLORC or MFORC; RUC has no auxiliary");
    }
    if (circuit.circuit == CircuitClass::MLORC &&
        (circuit.exposure != circuit.n_pairs() ||
         circuit.exposure_selection != ExposureSelection::FixedPrefix)) {
      throw ConfigError("bipartition_probe on MLORC needs full exposure (E = n_system / 2)");
    }
  }
}

QubitSubset ExperimentConfig::bipartition_part_a() const {
  const int n = circuit.n_system;
  if (!bipartition.empty()) return QubitSubset(bipartition, n);
  // Largest even cut not exceeding n/2 keeps the initial pair product intact.
  int a = 2 * (n / 4);
  if (a == 0) a = 1;
  std::vector<int> q(static_cast<std::size_t>(a));
  for (int i = 0; i < a; ++i) q[static_cast<std::size_t>(i)] = i;
  return QubitSubset(q, n);
}

QubitSubset ExperimentConfig::ensemble_part_a() const {
  if (!subsystem_a.empty()) return QubitSubset(subsystem_a, circuit.n_system);
  return QubitSubset({0, 1}, circuit.n_system);
}

InitialRecipe ExperimentConfig::effective_initial_state() const {
  if (initial_state != InitialRecipe::Default) return initial_state;
  return observable == Observable::Sre ? InitialRecipe::MagicFreePairs : InitialRecipe::HsPairs;
}

ExperimentConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  ExperimentConfig cfg;
  Section root(doc, "");

  {
    Section c = root.child("circuit");
    std::string cls;
    if (!c.has("class")) throw ConfigError("'circuit.class' is required");
    c.read("class", cls);
    const auto parsed = parse_circuit_class(cls);
    if (!parsed) throw ConfigError("'circuit.class': unknown circuit '" + cls + "'");
    cfg.circuit.circuit = *parsed;
    if (!c.has("n_system")) throw ConfigError("'circuit.n_system' is required");
    c.read("n_system", cfg.circuit.n_system, 2, 16);
    c.read("exposure", cfg.circuit.exposure, 0, 8);
    c.read("exposure_selection", cfg.circuit.exposure_selection, kSelections);
    c.read("auxiliary", cfg.circuit.auxiliary, kAuxKinds);
    c.read("same_unitary", cfg.circuit.krylov_same_unitary_mode);
    c.finish();
  }

  if (!root.has("observable")) throw ConfigError("'observable' is required");
  root.read("observable", cfg.observable, kObservables);
  root.read("steps", cfg.steps, 1, 1'000'000);
  root.read("realizations", cfg.realizations, 1, 100'000'000);
  root.read("master_seed", cfg.master_seed);
  root.read("bipartition", cfg.bipartition);
  root.read("subsystem_a", cfg.subsystem_a);
  root.read("k_max", cfg.k_max, 1, 8);
  root.read("kdesign_averaging", cfg.kdesign_averaging, kAveraging);
  root.read("initial_state", cfg.initial_state, kRecipes);
  root.read("initial_weights", cfg.initial_weights, kWeights);
  root.read("joint_state", cfg.joint_state);
  root.read("log_base", cfg.log_base, kLogBases);
  root.read("negativity", cfg.negativity, kConventions);
  if (root.has("krylov")) {
    Section k = root.child("krylov");
    k.read("tolerance", cfg.krylov_tolerance);
    k.read("stall_window", cfg.krylov_stall_window, 1, 1'000'000);
    k.read("fixed_steps", cfg.krylov_fixed_steps);
    k.finish();
  } else {
    root.raw("krylov");
  }
  if (root.has("output")) {
    Section o = root.child("output");
    std::string path;
    o.read("path", path);
    cfg.output_path = path;
    o.read("format", cfg.output_format, kFormats);
    o.finish();
  } else {
    root.raw("output");
  }
  root.read("parallel_width", cfg.parallel_width, 1, 4096);
  root.read("memory_budget_mb", cfg.memory_budget_mb);
  root.read("tail_fraction", cfg.tail_fraction);
  root.finish();

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["circuit"] = {
      {"class", std::string(to_string(cfg.circuit.circuit))},
      {"n_system", cfg.circuit.n_system},
      {"exposure", cfg.circuit.exposure},
      {"exposure_selection", std::string(kSelections.name(cfg.circuit.exposure_selection))},
      {"auxiliary", std::string(kAuxKinds.name(cfg.circuit.auxiliary))},
      {"same_unitary", cfg.circuit.krylov_same_unitary_mode},
  };
  j["observable"] = std::string(to_string(cfg.observable));
  j["steps"] = cfg.steps;
  j["realizations"] = cfg.realizations;
  j["master_seed"] = cfg.master_seed;
  if (!cfg.bipartition.empty()) j["bipartition"] = cfg.bipartition;
  if (!cfg.subsystem_a.empty()) j["subsystem_a"] = cfg.subsystem_a;
  j["k_max"] = cfg.k_max;
  j["kdesign_averaging"] = std::string(kAveraging.name(cfg.kdesign_averaging));
  j["initial_state"] = std::string(kRecipes.name(cfg.initial_state));
  j["initial_weights"] = std::string(kWeights.name(cfg.initial_weights));
  j["joint_state"] = cfg.joint_state;
  j["log_base"] = std::string(kLogBases.name(cfg.log_base));
  j["negativity"] = std::string(kConventions.name(cfg.negativity));
  j["krylov"] = {{"tolerance", cfg.krylov_tolerance},
                 {"stall_window", cfg.krylov_stall_window},
                 {"fixed_steps", cfg.krylov_fixed_steps}};
  j["output"] = {{"path", cfg.output_path.generic_string()},
                 {"format", std::string(kFormats.name(cfg.output_format))}};
  j["parallel_width"] = cfg.parallel_width;
  j["memory_budget_mb"] = cfg.memory_budget_mb;
  j["tail_fraction"] = cfg.tail_fraction;
  return j.dump(2);
}

int effective_parallel_width(const ExperimentConfig& config) {
  const char* env = std::getenv(std::string(kParallelWidthEnv).c_str());
  if (env == nullptr || *env == '\0') return config.parallel_width;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1 || v > 4096) {
    throw ConfigError(std::string(kParallelWidthEnv) + " must be a positive integer, got '" +
                      env + "'");
  }
  return static_cast<int>(v);
}

} // namespace orqc
