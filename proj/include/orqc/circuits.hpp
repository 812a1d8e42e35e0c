#pragma once

// Brickwork random circuits on a ring of n_system qubits.
//
// Qubits are 0-based here; the pair (2i-1, 2i) of the usual 1-based
// description is (2i-2, 2i-1). Odd steps (t = 1, 3, ...) pair {0,1},{2,3},...;
// even steps pair {1,2},{3,4},...,{n-1,0}, the last slot being the periodic
// wrap. MFORC auxiliary j sits on register qubit n_system + j and starts
// attached to odd pair j.

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "orqc/linalg.hpp"
#include "orqc/random.hpp"

namespace orqc {

enum class CircuitClass : std::uint8_t { RUC, MLORC, MFORC };

std::string_view to_string(CircuitClass c);
std::optional<CircuitClass> parse_circuit_class(std::string_view s);

enum class ExposureSelection : std::uint8_t { FixedPrefix, RandomPerStep };

/// State handed to each fresh (MLORC) or persistent (MFORC) auxiliary qubit.
enum class AuxiliaryKind : std::uint8_t { Mixed, Pure };

struct CircuitSpec {
  CircuitClass circuit = CircuitClass::RUC;
  int n_system = 2;
  /// MLORC only: number of slots per layer coupled to a fresh auxiliary.
  int exposure = 0;
  ExposureSelection exposure_selection = ExposureSelection::FixedPrefix;
  AuxiliaryKind auxiliary = AuxiliaryKind::Mixed;
  /// Sample each layer once and reuse it at every recurrence of its parity.
  bool krylov_same_unitary_mode = false;

  int n_aux() const { return circuit == CircuitClass::MFORC ? n_system / 2 : 0; }
  int n_pairs() const { return n_system / 2; }
  /// Throws std::invalid_argument on inconsistent fields.
  void validate() const;
};

enum class AuxDirective : std::uint8_t {
  None,
  Fresh,
  PersistentLeft,   ///< auxiliary of the odd pair on the left (own pair on odd steps)
  PersistentRight,  ///< auxiliary of the odd pair on the right
  PersistentCoin,   ///< left or right, decided by a coin toss at run time
};

struct GateSlot {
  std::array<int, 2> pair{};
  AuxDirective aux = AuxDirective::None;
  int left_aux = -1;
  int right_aux = -1;
};

struct LayerPlan {
  int t = 1;
  bool odd = true;
  std::vector<GateSlot> slots;
};

LayerPlan layer_plan(const CircuitSpec& spec, int t);

/// System register (all classes) plus the persistent auxiliaries (MFORC).
struct FullState {
  DensityMatrix rho;
  int n_system = 0;
  int n_aux = 0;

  int system_qubit(int i) const { return i; }
  int aux_qubit(int j) const { return n_system + j; }
  int n_qubits() const { return n_system + n_aux; }
};

/// Random streams used by one realization's circuit, plus the layer cache
/// for same-unitary mode.
class CircuitStreams {
public:
  CircuitStreams(std::uint64_t master_seed, std::uint64_t realization);

  RandomStream& gates() { return gates_; }
  RandomStream& auxiliaries() { return auxiliaries_; }
  RandomStream& coin() { return coin_; }

  ComplexMatrix gate(const CircuitSpec& spec, bool odd, std::size_t slot, std::size_t dim);
  DensityMatrix auxiliary_state(const CircuitSpec& spec, bool odd, std::size_t slot);
  Coin toss(const CircuitSpec& spec, bool odd, std::size_t slot);

private:
  using Key = std::tuple<bool, std::size_t, std::size_t>;
  RandomStream gates_;
  RandomStream auxiliaries_;
  RandomStream coin_;
  std::map<Key, ComplexMatrix> gate_cache_;
  std::map<Key, DensityMatrix> aux_cache_;
  std::map<Key, Coin> coin_cache_;
};

DensityMatrix draw_auxiliary(AuxiliaryKind kind, RandomStream& stream);

/// Appends the MFORC auxiliaries (drawn from the auxiliaries stream) to a
/// system state; other classes get the system state unchanged.
FullState make_full_state(const CircuitSpec& spec, const DensityMatrix& system,
                          CircuitStreams& streams);

/// Called by mlorc_step for every fresh slot after its gate and before the
/// auxiliary is discarded. The extended register has n_system + 1 qubits,
/// the auxiliary being the last.
using FreshSlotObserver =
    std::function<void(const ComplexMatrix& extended, const GateSlot& slot)>;

void ruc_step(FullState& state, const CircuitSpec& spec, int t, CircuitStreams& streams);
void mlorc_step(FullState& state, const CircuitSpec& spec, int t, CircuitStreams& streams,
                const FreshSlotObserver& observer = {});
void mforc_step(FullState& state, const CircuitSpec& spec, int t, CircuitStreams& streams);

/// Dispatches on spec.circuit.
void circuit_step(FullState& state, const CircuitSpec& spec, int t, CircuitStreams& streams);

DensityMatrix reduced_system_state(const FullState& state);

} // namespace orqc
