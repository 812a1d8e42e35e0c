#pragma once

#include <cmath>

#include "orqc/linalg.hpp"
#include "orqc/random.hpp"

namespace orqc::test {

inline RandomStream stream(std::uint64_t seed, std::uint64_t index = 0,
                           StreamLabel label = StreamLabel::Measurement) {
  return RandomStream(SeedHierarchy{seed, index, label});
}

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

inline DensityMatrix bell_state() {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
  return DensityMatrix::from_pure(psi);
}

inline DensityMatrix ghz_state(int n) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim_of(n)));
  psi(0) = psi(psi.size() - 1) = 1.0 / std::sqrt(2.0);
  return DensityMatrix::from_pure(psi);
}

inline ComplexMatrix pauli_x() {
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

} // namespace orqc::test
