#include <doctest.h>

#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "orqc/magic.hpp"
#include "orqc/oracles.hpp"

using namespace orqc;

TEST_CASE("Pauli spectrum of simple states") {
  const PauliSpectrum zero = pauli_spectrum(DensityMatrix::basis_state(1, 0));
  CHECK(zero.coefficients == std::vector<double>{1.0, 0.0, 0.0, 1.0});

  const PauliSpectrum mixed = pauli_spectrum(DensityMatrix::maximally_mixed(3));
  CHECK(mixed.coefficients[0] == doctest::Approx(1.0));
  for (std::size_t p = 1; p < mixed.coefficients.size(); ++p) CHECK(mixed.coefficients[p] == 0.0);

  const std::vector<int> letters{3, 1, 0};
  CHECK(PauliSpectrum::index_of(letters) == 3 * 16 + 1 * 4);
}

TEST_CASE("Pauli spectrum matches explicit enumeration") {
  auto s = test::stream(1);
  const DensityMatrix rho = hs_random_density(3, s);
  const auto fast = pauli_spectrum(rho).coefficients;
  const auto slow = oracle::pauli_spectrum_dense(rho.matrix(), 3);
  double dev = 0.0;
  for (std::size_t p = 0; p < fast.size(); ++p) dev = std::max(dev, std::abs(fast[p] - slow[p]));
  CHECK(dev < 1e-10);
}

TEST_CASE("Pauli Parseval identity") {
  auto s = test::stream(2);
  for (int n = 1; n <= 5; ++n) {
    const DensityMatrix rho = hs_random_density(n, s);
    const auto x = pauli_spectrum(rho).coefficients;
    const double sum = std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
    CHECK(sum / static_cast<double>(dim_of(n)) == doctest::Approx(rho.purity()).epsilon(1e-12));
  }
}

TEST_CASE("Pauli spectrum size cap") {
  CHECK_THROWS_AS(pauli_spectrum(DensityMatrix::basis_state(3, 0), 2), std::invalid_argument);
}

TEST_CASE("stabilizer Renyi entropy") {
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(std::abs(sre2(DensityMatrix::basis_state(3, i)).magic) < 1e-9);
  }
  const SreValue mixed = sre2(DensityMatrix::maximally_mixed(3));
  CHECK(std::abs(mixed.magic) < 1e-9);
  CHECK(mixed.m_tilde == doctest::Approx(3.0));
  CHECK(mixed.s2 == doctest::Approx(3.0));

  Eigen::VectorXcd t(2);
  t << 1.0 / std::sqrt(2.0), std::polar(1.0 / std::sqrt(2.0), M_PI / 4);
  CHECK(std::abs(sre2(DensityMatrix::from_pure(t)).magic - std::log2(4.0 / 3.0)) < 1e-9);
  CHECK(sre2(DensityMatrix::from_pure(t), LogBase::Natural).magic ==
        doctest::Approx(std::log(4.0 / 3.0)).epsilon(1e-12));

  auto s = test::stream(3);
  const DensityMatrix rho = hs_random_density(4, s);
  CHECK(sre2(rho).magic == doctest::Approx(oracle::sre2_dense(rho.matrix(), 4)).epsilon(1e-10));
}
