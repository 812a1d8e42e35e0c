#include "orqc/circuits.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "kernels.hpp"

namespace orqc {

std::string_view to_string(CircuitClass c) {
  switch (c) {
    case CircuitClass::RUC: return "RUC";
    case CircuitClass::MLORC: return "MLORC";
    case CircuitClass::MFORC: return "MFORC";
  }
  return "unknown";
}

std::optional<CircuitClass> parse_circuit_class(std::string_view s) {
  if (s == "RUC" || s == "ruc") return CircuitClass::RUC;
  if (s == "MLORC" || s == "mlorc") return CircuitClass::MLORC;
  if (s == "MFORC" || s == "mforc") return CircuitClass::MFORC;
  return std::nullopt;
}

void CircuitSpec::validate() const {
  if (n_system < 2 || n_system % 2 != 0) {
    throw std::invalid_argument("n_system must be an even integer >= 2, got " +
                                std::to_string(n_system));
  }
  if (exposure < 0 || exposure > n_pairs()) {
    throw std::invalid_argument("exposure must lie in [0, n_system/2], got " +
                                std::to_string(exposure));
  }
  if (circuit != CircuitClass::MLORC && exposure != 0) {
    throw std::invalid_argument("exposure is only meaningful for MLORC");
  }
}

LayerPlan layer_plan(const CircuitSpec& spec, int t) {
  if (t < 1) throw std::invalid_argument("time step must be >= 1");
  const int n = spec.n_system;
  const int pairs = spec.n_pairs();
  LayerPlan plan;
  plan.t = t;
  plan.odd = (t % 2) == 1;
  plan.slots.reserve(static_cast<std::size_t>(pairs));
  for (int i = 0; i < pairs; ++i) {
    GateSlot slot;
    if (plan.odd) {
      slot.pair = {2 * i, 2 * i + 1};
    } else {
      slot.pair = {2 * i + 1, (2 * i + 2) % n};
    }
    switch (spec.circuit) {
      case CircuitClass::RUC: break;
      case CircuitClass::MLORC:
        slot.aux = i < spec.exposure ? AuxDirective::Fresh : AuxDirective::None;
        break;
      case CircuitClass::MFORC:
        slot.left_aux = i;
        slot.right_aux = (i + 1) % spec.n_aux();
        slot.aux = plan.odd ? AuxDirective::PersistentLeft : AuxDirective::PersistentCoin;
        break;
    }
    plan.slots.push_back(slot);
  }
  return plan;
}

CircuitStreams::CircuitStreams(std::uint64_t master_seed, std::uint64_t realization)
    : gates_({master_seed, realization, StreamLabel::Gates}),
      auxiliaries_({master_seed, realization, StreamLabel::Auxiliaries}),
      coin_({master_seed, realization, StreamLabel::Coin}) {}

ComplexMatrix CircuitStreams::gate(const CircuitSpec& spec, bool odd, std::size_t slot,
                                   std::size_t dim) {
  if (!spec.krylov_same_unitary_mode) return haar_unitary(dim, gates_);
  const Key key{odd, slot, dim};
  auto it = gate_cache_.find(key);
  if (it == gate_cache_.end()) it = gate_cache_.emplace(key, haar_unitary(dim, gates_)).first;
  return it->second;
}

DensityMatrix draw_auxiliary(AuxiliaryKind kind, RandomStream& stream) {
  return kind == AuxiliaryKind::Pure ? haar_pure_state(1, stream)
                                     : hs_random_density(1, stream);
}

DensityMatrix CircuitStreams::auxiliary_state(const CircuitSpec& spec, bool odd,
                                              std::size_t slot) {
  if (!spec.krylov_same_unitary_mode) return draw_auxiliary(spec.auxiliary, auxiliaries_);
  const Key key{odd, slot, 2};
  auto it = aux_cache_.find(key);
  if (it == aux_cache_.end()) {
    it = aux_cache_.emplace(key, draw_auxiliary(spec.auxiliary, auxiliaries_)).first;
  }
  return it->second;
}

Coin CircuitStreams::toss(const CircuitSpec& spec, bool odd, std::size_t slot) {
  if (!spec.krylov_same_unitary_mode) return coin_toss(coin_);
  const Key key{odd, slot, 0};
  auto it = coin_cache_.find(key);
  if (it == coin_cache_.end()) it = coin_cache_.emplace(key, coin_toss(coin_)).first;
  return it->second;
}

FullState make_full_state(const CircuitSpec& spec, const DensityMatrix& system,
                          CircuitStreams& streams) {
  spec.validate();
  if (system.n_qubits() != spec.n_system) {
    throw std::invalid_argument("initial state size does not match n_system");
  }
  FullState out{system, spec.n_system, spec.n_aux()};
  for (int j = 0; j < spec.n_aux(); ++j) {
    out.rho = kron(out.rho, draw_auxiliary(spec.auxiliary, streams.auxiliaries()));
  }
  return out;
}

namespace {

void require_class(const CircuitSpec& spec, CircuitClass c, const FullState& state) {
  if (spec.circuit != c) {
    throw std::invalid_argument(std::string("step function for ") +
                                std::string(to_string(c)) + " called with a " +
                                std::string(to_string(spec.circuit)) + " spec");
  }
  if (state.n_system != spec.n_system || state.n_aux != spec.n_aux()) {
    throw std::invalid_argument("state layout does not match circuit spec");
  }
}

void apply(FullState& state, const ComplexMatrix& gate, std::initializer_list<int> targets) {
  const std::vector<int> t(targets);
  ComplexMatrix& m = state.rho.mutable_matrix();
  kernels::apply_gate_rows(m.data(), state.n_qubits(), gate, t);
  kernels::apply_gate_cols_conj(m.data(), state.n_qubits(), gate, t);
}

} // namespace

void ruc_step(FullState& state, const CircuitSpec& spec, int t, CircuitStreams& streams) {
  require_class(spec, CircuitClass::RUC, state);
  const LayerPlan plan = layer_plan(spec, t);
  for (std::size_t s = 0; s < plan.slots.size(); ++s) {
    const auto& slot = plan.slots[s];
    apply(state, streams.gate(spec, plan.odd, s, 4), {slot.pair[0], slot.pair[1]});
  }
}

void mlorc_step(FullState& state, const CircuitSpec& spec, int t, CircuitStreams& streams,
                const FreshSlotObserver& observer) {
  require_class(spec, CircuitClass::MLORC, state);
  LayerPlan plan = layer_plan(spec, t);
  if (spec.exposure_selection == ExposureSelection::RandomPerStep) {
    std::vector<std::size_t> order(plan.slots.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[streams.auxiliaries().below(i)]);
    }
    for (auto& slot : plan.slots) slot.aux = AuxDirective::None;
    for (int e = 0; e < spec.exposure; ++e) {
      plan.slots[order[static_cast<std::size_t>(e)]].aux = AuxDirective::Fresh;
    }
  }
  const int n = spec.n_system;
  std::vector<int> system(static_cast<std::size_t>(n));
  std::iota(system.begin(), system.end(), 0);
  for (std::size_t s = 0; s < plan.slots.size(); ++s) {
    const auto& slot = plan.slots[s];
    if (slot.aux != AuxDirective::Fresh) {
      apply(state, streams.gate(spec, plan.odd, s, 4), {slot.pair[0], slot.pair[1]});
      continue;
    }
    const DensityMatrix aux = streams.auxiliary_state(spec, plan.odd, s);
    const ComplexMatrix gate = streams.gate(spec, plan.odd, s, 8);
    ComplexMatrix ext = kron(state.rho.matrix(), aux.matrix());
    const std::vector<int> targets{slot.pair[0], slot.pair[1], n};
    kernels::apply_gate_rows(ext.data(), n + 1, gate, targets);
    kernels::apply_gate_cols_conj(ext.data(), n + 1, gate, targets);
    if (observer) observer(ext, slot);
    state.rho = DensityMatrix::from_trusted(kernels::partial_trace(ext.data(), n + 1, system));
  }
}

void mforc_step(FullState& state, const CircuitSpec& spec, int t, CircuitStreams& streams) {
  require_class(spec, CircuitClass::MFORC, state);
  const LayerPlan plan = layer_plan(spec, t);
  for (std::size_t s = 0; s < plan.slots.size(); ++s) {
    const auto& slot = plan.slots[s];
    int aux = slot.left_aux;
    if (slot.aux == AuxDirective::PersistentCoin) {
      aux = streams.toss(spec, plan.odd, s) == Coin::Heads ? slot.left_aux : slot.right_aux;
    } else if (slot.aux == AuxDirective::PersistentRight) {
      aux = slot.right_aux;
    }
    apply(state, streams.gate(spec, plan.odd, s, 8),
          {slot.pair[0], slot.pair[1], state.aux_qubit(aux)});
  }
}

void circuit_step(FullState& state, const CircuitSpec& spec, int t, CircuitStreams& streams) {
  switch (spec.circuit) {
    case CircuitClass::RUC: ruc_step(state, spec, t, streams); break;
    case CircuitClass::MLORC: mlorc_step(state, spec, t, streams); break;
    case CircuitClass::MFORC: mforc_step(state, spec, t, streams); break;
  }
}

DensityMatrix reduced_system_state(const FullState& state) {
  if (state.n_aux == 0) return state.rho;
  std::vector<int> keep(static_cast<std::size_t>(state.n_system));
  std::iota(keep.begin(), keep.end(), 0);
  return DensityMatrix::from_trusted(
      kernels::partial_trace(state.rho.matrix().data(), state.n_qubits(), keep));
}

} // namespace orqc
