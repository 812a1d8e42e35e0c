#include <doctest.h>

#include <numeric>

#include "helpers.hpp"
#include "orqc/circuits.hpp"
#include "orqc/oracles.hpp"

using namespace orqc;

namespace {

CircuitSpec make_spec(CircuitClass c, int n, int exposure = 0) {
  CircuitSpec spec;
  spec.circuit = c;
  spec.n_system = n;
  spec.exposure = exposure;
  return spec;
}

DensityMatrix pure_pairs(int n, std::uint64_t seed) {
  auto s = test::stream(seed, 0, StreamLabel::InitialState);
  DensityMatrix rho = haar_pure_state(2, s);
  for (int p = 1; p < n / 2; ++p) rho = kron(rho, haar_pure_state(2, s));
  return rho;
}

std::vector<std::array<int, 2>> pairs_of(const LayerPlan& plan) {
  std::vector<std::array<int, 2>> out;
  for (const auto& slot : plan.slots) out.push_back(slot.pair);
  return out;
}

} // namespace

TEST_CASE("spec validation") {
  CHECK_THROWS(make_spec(CircuitClass::RUC, 3).validate());
  CHECK_THROWS(make_spec(CircuitClass::RUC, 4, 1).validate());
  CHECK_THROWS(make_spec(CircuitClass::MLORC, 4, 3).validate());
  CHECK_NOTHROW(make_spec(CircuitClass::MLORC, 4, 2).validate());
  CHECK(make_spec(CircuitClass::MFORC, 8).n_aux() == 4);
}

TEST_CASE("brickwork layer plans") {
  const CircuitSpec spec = make_spec(CircuitClass::RUC, 8);
  using P = std::vector<std::array<int, 2>>;
  CHECK(pairs_of(layer_plan(spec, 1)) == P{{0, 1}, {2, 3}, {4, 5}, {6, 7}});
  CHECK(pairs_of(layer_plan(spec, 2)) == P{{1, 2}, {3, 4}, {5, 6}, {7, 0}});
  const CircuitSpec small = make_spec(CircuitClass::RUC, 4);
  CHECK(pairs_of(layer_plan(small, 3)) == pairs_of(layer_plan(small, 1)));
  CHECK_THROWS(layer_plan(spec, 0));

  const LayerPlan ml = layer_plan(make_spec(CircuitClass::MLORC, 8, 3), 2);
  CHECK(ml.slots[2].aux == AuxDirective::Fresh);
  CHECK(ml.slots[3].aux == AuxDirective::None);

  const LayerPlan mf_odd = layer_plan(make_spec(CircuitClass::MFORC, 8), 1);
  const LayerPlan mf_even = layer_plan(make_spec(CircuitClass::MFORC, 8), 2);
  CHECK(mf_odd.slots[1].aux == AuxDirective::PersistentLeft);
  CHECK(mf_odd.slots[1].left_aux == 1);
  CHECK(mf_even.slots[3].aux == AuxDirective::PersistentCoin);
  CHECK(mf_even.slots[3].left_aux == 3);
  CHECK(mf_even.slots[3].right_aux == 0);

  const LayerPlan degenerate = layer_plan(make_spec(CircuitClass::MFORC, 2), 2);
  REQUIRE(degenerate.slots.size() == 1);
  CHECK(degenerate.slots[0].pair == std::array<int, 2>{1, 0});
  CHECK(degenerate.slots[0].left_aux == degenerate.slots[0].right_aux);
}

TEST_CASE("RUC steps are unitary and twirl single-qubit marginals") {
  const CircuitSpec spec = make_spec(CircuitClass::RUC, 4);
  CircuitStreams streams(1, 0);
  FullState state = make_full_state(spec, pure_pairs(4, 1), streams);
  for (int t = 1; t <= 5; ++t) {
    ruc_step(state, spec, t, streams);
    CHECK(state.rho.purity() == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(test::max_abs(reduced_system_state(state).matrix() - state.rho.matrix()) == 0.0);

  ComplexMatrix acc = ComplexMatrix::Zero(2, 2);
  const int runs = 400;
  for (int r = 0; r < runs; ++r) {
    CircuitStreams s(2, static_cast<std::uint64_t>(r));
    FullState st = make_full_state(spec, DensityMatrix::basis_state(4, 0), s);
    for (int t = 1; t <= 4; ++t) ruc_step(st, spec, t, s);
    acc += partial_trace(st.rho, QubitSubset({2}, 4)).matrix();
  }
  acc /= runs;
  CHECK(test::max_abs(acc - ComplexMatrix::Identity(2, 2) / 2.0) < 0.05);
}

TEST_CASE("MLORC with zero exposure is RUC") {
  const CircuitSpec ruc = make_spec(CircuitClass::RUC, 6);
  const CircuitSpec ml = make_spec(CircuitClass::MLORC, 6, 0);
  CircuitStreams sa(3, 1), sb(3, 1);
  FullState a = make_full_state(ruc, pure_pairs(6, 3), sa);
  FullState b = make_full_state(ml, pure_pairs(6, 3), sb);
  for (int t = 1; t <= 6; ++t) {
    ruc_step(a, ruc, t, sa);
    mlorc_step(b, ml, t, sb);
  }
  CHECK(test::max_abs(a.rho.matrix() - b.rho.matrix()) == 0.0);
}

TEST_CASE("MLORC slot-by-slot dilation equals the whole-layer dilation") {
  const int n = 4;
  const CircuitSpec spec = make_spec(CircuitClass::MLORC, n, 2);
  const DensityMatrix initial = pure_pairs(n, 4);

  CircuitStreams streams(4, 0);
  FullState state = make_full_state(spec, initial, streams);
  mlorc_step(state, spec, 1, streams);

  CircuitStreams ref(4, 0);
  const DensityMatrix a0 = ref.auxiliary_state(spec, true, 0);
  const ComplexMatrix g0 = ref.gate(spec, true, 0, 8);
  const DensityMatrix a1 = ref.auxiliary_state(spec, true, 1);
  const ComplexMatrix g1 = ref.gate(spec, true, 1, 8);
  ComplexMatrix big = kron(kron(initial, a0), a1).matrix();
  big = oracle::conjugate_dense(big, g0, std::vector<int>{0, 1, 4}, n + 2);
  big = oracle::conjugate_dense(big, g1, std::vector<int>{2, 3, 5}, n + 2);
  const ComplexMatrix expected = oracle::partial_trace_dense(big, n + 2, std::vector<int>{0, 1, 2, 3});
  CHECK(test::max_abs(state.rho.matrix() - expected) < 1e-12);
  CHECK(state.rho.trace() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(state.rho.purity() < 1.0 - 1e-6);
}

TEST_CASE("MLORC observer sees the extended register before the discard") {
  const CircuitSpec spec = make_spec(CircuitClass::MLORC, 4, 1);
  CircuitStreams streams(5, 0);
  FullState state = make_full_state(spec, pure_pairs(4, 5), streams);
  int calls = 0;
  mlorc_step(state, spec, 1, streams, [&](const ComplexMatrix& ext, const GateSlot& slot) {
    ++calls;
    CHECK(ext.rows() == 32);
    CHECK(slot.pair == std::array<int, 2>{0, 1});
  });
  CHECK(calls == 1);
}

TEST_CASE("random exposure selection couples exactly E slots") {
  CircuitSpec spec = make_spec(CircuitClass::MLORC, 8, 2);
  spec.exposure_selection = ExposureSelection::RandomPerStep;
  CircuitStreams streams(6, 0);
  FullState state = make_full_state(spec, DensityMatrix::basis_state(8, 0), streams);
  int calls = 0;
  mlorc_step(state, spec, 1, streams, [&](const ComplexMatrix&, const GateSlot&) { ++calls; });
  CHECK(calls == 2);
}

TEST_CASE("MFORC keeps the joint state pure and the auxiliaries attached") {
  CircuitSpec spec = make_spec(CircuitClass::MFORC, 4);
  spec.auxiliary = AuxiliaryKind::Pure;
  CircuitStreams streams(7, 0);
  FullState state = make_full_state(spec, pure_pairs(4, 7), streams);
  CHECK(state.n_qubits() == 6);
  CHECK(state.aux_qubit(1) == 5);
  for (int t = 1; t <= 8; ++t) {
    mforc_step(state, spec, t, streams);
    CHECK(state.rho.purity() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(state.rho.trace() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(reduced_system_state(state).n_qubits() == 4);
}

TEST_CASE("reduced state of a product with auxiliaries is the system factor") {
  const CircuitSpec spec = make_spec(CircuitClass::MFORC, 2);
  CircuitStreams streams(8, 0);
  const DensityMatrix sys = pure_pairs(2, 8);
  const FullState state = make_full_state(spec, sys, streams);
  CHECK(test::max_abs(reduced_system_state(state).matrix() - sys.matrix()) < 1e-15);
}

TEST_CASE("first-step marginals of MLORC and MFORC share a distribution at n = 2") {
  const int runs = 3000;
  double purity_ml = 0.0, purity_mf = 0.0;
  for (auto kind : {AuxiliaryKind::Mixed, AuxiliaryKind::Pure}) {
    purity_ml = purity_mf = 0.0;
    for (int r = 0; r < runs; ++r) {
      CircuitSpec ml = make_spec(CircuitClass::MLORC, 2, 1);
      CircuitSpec mf = make_spec(CircuitClass::MFORC, 2);
      ml.auxiliary = mf.auxiliary = kind;
      CircuitStreams a(9, static_cast<std::uint64_t>(r));
      CircuitStreams b(10, static_cast<std::uint64_t>(r));
      FullState sa = make_full_state(ml, DensityMatrix::basis_state(2, 0), a);
      FullState sb = make_full_state(mf, DensityMatrix::basis_state(2, 0), b);
      mlorc_step(sa, ml, 1, a);
      mforc_step(sb, mf, 1, b);
      purity_ml += sa.rho.purity();
      purity_mf += reduced_system_state(sb).purity();
    }
    CHECK(std::abs(purity_ml - purity_mf) / runs < 0.015);
  }
}

TEST_CASE("step functions reject mismatched specs") {
  const CircuitSpec ruc = make_spec(CircuitClass::RUC, 4);
  const CircuitSpec mf = make_spec(CircuitClass::MFORC, 4);
  CircuitStreams streams(11, 0);
  FullState state = make_full_state(ruc, DensityMatrix::basis_state(4, 0), streams);
  CHECK_THROWS(mforc_step(state, mf, 1, streams));
  CHECK_THROWS(mlorc_step(state, ruc, 1, streams));
}

TEST_CASE("same-unitary mode replays cached gates") {
  CircuitSpec spec = make_spec(CircuitClass::RUC, 4);
  spec.krylov_same_unitary_mode = true;
  CircuitStreams streams(12, 0);
  const ComplexMatrix a = streams.gate(spec, true, 1, 4);
  const ComplexMatrix b = streams.gate(spec, false, 1, 4);
  CHECK(test::max_abs(a - streams.gate(spec, true, 1, 4)) == 0.0);
  CHECK(test::max_abs(a - b) > 1e-3);
}
