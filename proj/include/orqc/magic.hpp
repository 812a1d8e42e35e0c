#pragma once

#include <vector>

#include "orqc/linalg.hpp"

namespace orqc {

inline constexpr int kDefaultPauliQubitCap = 12;

/// Tr(P rho) for all 4^n Pauli strings. Index p is read in base 4 with qubit
/// 0 as the most significant digit; digits are 0 = I, 1 = X, 2 = Y, 3 = Z.
struct PauliSpectrum {
  int n_qubits = 0;
  std::vector<double> coefficients;

  static std::size_t index_of(std::span<const int> letters);
};

/// Computed with one in-place 4-point transform per qubit, O(d^2 log d).
/// Throws std::invalid_argument above `max_qubits`.
PauliSpectrum pauli_spectrum(const DensityMatrix& state,
                             int max_qubits = kDefaultPauliQubitCap);

struct SreValue {
  double m_tilde = 0.0;  ///< -log(sum_p x_p^4 / d)
  double s2 = 0.0;       ///< -log Tr(rho^2)
  double magic = 0.0;    ///< m_tilde - s2
};

/// Mixed-state stabilizer Renyi-2 entropy.
SreValue sre2(const DensityMatrix& state, LogBase base = LogBase::Two,
              int max_qubits = kDefaultPauliQubitCap);

} // namespace orqc
