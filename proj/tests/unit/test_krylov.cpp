#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "orqc/krylov.hpp"
#include "orqc/oracles.hpp"

using namespace orqc;

namespace {

CircuitSpec make_spec(CircuitClass c, int n) {
  CircuitSpec spec;
  spec.circuit = c;
  spec.n_system = n;
  spec.exposure = c == CircuitClass::MLORC ? n / 2 : 0;
  return spec;
}

} // namespace

TEST_CASE("Hilbert-Schmidt inner product") {
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  ComplexMatrix y(2, 2);
  y << 0, Complex(0, -1), Complex(0, 1), 0;
  CHECK(std::abs(hs_inner(id, id) - Complex(1.0)) < 1e-15);
  CHECK(std::abs(hs_inner(test::pauli_x(), y)) < 1e-15);

  auto s = test::stream(1);
  const ComplexMatrix a = ginibre(4, 4, s);
  const ComplexMatrix b = ginibre(4, 4, s);
  Complex direct = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) direct += std::conj(a(j, i)) * b(j, i);
  }
  CHECK(std::abs(hs_inner(a, b) - direct / 4.0) < 1e-14);
  CHECK(std::abs(hs_inner(a, b) - std::conj(hs_inner(b, a))) < 1e-14);
  CHECK(hs_norm(a) == doctest::Approx(std::sqrt(hs_inner(a, a).real())));
}

TEST_CASE("prepare_initial") {
  CHECK_THROWS_AS(prepare_initial(DensityMatrix::maximally_mixed(2)), DegenerateInitialState);
  const ComplexMatrix v = prepare_initial(DensityMatrix::basis_state(1, 0));
  ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  z.diagonal() << 1, -1;
  CHECK(test::max_abs(v - z) < 1e-15);
  CHECK(hs_norm(v) == doctest::Approx(1.0));
}

TEST_CASE("basis orthogonalization") {
  KrylovBasis basis(4);
  auto s = test::stream(2);
  for (int i = 0; i < 10; ++i) {
    ComplexMatrix v = ginibre(4, 4, s);
    const double r = basis.orthogonalize(v);
    CHECK(r > 0.0);
    basis.append(v);
  }
  CHECK(basis.size() == 10);
  CHECK(basis.gram_deviation() < 5e-9);
  const auto coeffs = basis.coefficients(basis.vector(3));
  CHECK(std::abs(coeffs[3] - Complex(1.0)) < 1e-12);
  CHECK(std::abs(coeffs[4]) < 1e-12);
}

TEST_CASE("krylov_run basic properties") {
  for (auto c : {CircuitClass::RUC, CircuitClass::MLORC, CircuitClass::MFORC}) {
    CAPTURE(to_string(c));
    const CircuitSpec spec = make_spec(c, 2);
    KrylovOptions opt;
    opt.max_steps = 40;
    opt.check_gram = true;
    CircuitStreams streams(3, 0);
    auto s = test::stream(3, 0, StreamLabel::InitialState);
    const KrylovResult r = krylov_run(spec, hs_random_density(2, s), opt, streams);

    CHECK(r.complexity.size() == r.dimension_history.size());
    CHECK(r.complexity[0] == 0.0);
    CHECK(r.complexity[1] <= 1.0 + 1e-12);
    CHECK(r.dimension <= 15);
    CHECK(r.gram_deviation >= 0.0);
    CHECK(r.gram_deviation < 5e-9);
    for (double norm : r.coefficient_norms) CHECK(norm == doctest::Approx(1.0).epsilon(1e-8));

    const auto series = complexity_series(r);
    CHECK(series.front() == std::pair<int, double>{0, 0.0});
  }
}

TEST_CASE("RUC Krylov dimension matches the Gram-matrix rank") {
  const CircuitSpec spec = make_spec(CircuitClass::RUC, 2);
  KrylovOptions opt;
  opt.max_steps = 40;
  opt.fixed_steps = true;
  const DensityMatrix init = DensityMatrix::basis_state(2, 1);

  CircuitStreams a(4, 0);
  const KrylovResult r = krylov_run(spec, init, opt, a);
  CircuitStreams b(4, 0);
  const auto traj = oracle::ruc_trajectory_dense(spec, init, opt.max_steps, b);
  const oracle::GramKrylov ref = oracle::krylov_from_gram(traj);
  CHECK(r.dimension == ref.dimension);
  CHECK(r.dimension == 15);
  REQUIRE(ref.complexity.size() == r.complexity.size());
  for (std::size_t t = 0; t < r.complexity.size(); ++t) {
    CHECK(r.complexity[t] == doctest::Approx(ref.complexity[t]).epsilon(1e-6));
  }
}

TEST_CASE("same-unitary mode stays below D^2 - D + 1 at n = 2") {
  CircuitSpec spec = make_spec(CircuitClass::RUC, 2);
  spec.krylov_same_unitary_mode = true;
  KrylovOptions opt;
  opt.max_steps = 60;
  CircuitStreams streams(5, 0);
  auto s = test::stream(5, 0, StreamLabel::InitialState);
  const KrylovResult r = krylov_run(spec, hs_random_density(2, s), opt, streams);
  CHECK(r.dimension <= 13);
}

TEST_CASE("open-class runs hold the trace part fixed") {
  const CircuitSpec spec = make_spec(CircuitClass::MLORC, 2);
  for (auto order : {RenormalizationOrder::RemoveTraceThenNormalize,
                     RenormalizationOrder::NormalizeThenRemoveTrace}) {
    KrylovOptions opt;
    opt.max_steps = 20;
    opt.order = order;
    CircuitStreams streams(6, 0);
    const KrylovResult r = krylov_run(spec, DensityMatrix::basis_state(2, 0), opt, streams);
    CHECK(r.raw_norms.front() == doctest::Approx(1.0));
    CHECK(r.raw_norms.back() < 1.0);
  }
}

TEST_CASE("option validation") {
  KrylovOptions opt;
  opt.tolerance = 0.0;
  CHECK_THROWS(opt.validate());
  opt.tolerance = 1e-10;
  opt.max_steps = 0;
  CHECK_THROWS(opt.validate());
  CHECK(krylov_memory_bytes(4) == 255u * 256u * sizeof(Complex));
}
