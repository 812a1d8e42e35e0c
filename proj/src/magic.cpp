#include "orqc/magic.hpp"

#include <stdexcept>
#include <string>

#include "kernels.hpp"

namespace orqc {

std::size_t PauliSpectrum::index_of(std::span<const int> letters) {
  std::size_t p = 0;
  for (int l : letters) p = 4 * p + static_cast<std::size_t>(l);
  return p;
}

PauliSpectrum pauli_spectrum(const DensityMatrix& state, int max_qubits) {
  const int n = state.n_qubits();
  if (n > max_qubits) {
    throw std::invalid_argument("pauli_spectrum: " + std::to_string(n) +
                                " qubits exceeds the cap of " + std::to_string(max_qubits));
  }
  ComplexMatrix work = state.matrix();
  kernels::pauli_transform(work.data(), n);

  const auto d = dim_of(n);
  PauliSpectrum out{n, std::vector<double>(d * d)};
  // Interleave row and column bits: qubit q contributes digit 2*r_q + c_q.
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      std::size_t p = 0;
      for (int q = 0; q < n; ++q) {
        const int shift = n - 1 - q;
        p = 4 * p + 2 * ((r >> shift) & 1U) + ((c >> shift) & 1U);
      }
      out.coefficients[p] = work(r, c).real();
    }
  }
  return out;
}

SreValue sre2(const DensityMatrix& state, LogBase base, int max_qubits) {
  const PauliSpectrum spec = pauli_spectrum(state, max_qubits);
  double fourth = 0.0;
  for (double x : spec.coefficients) {
    const double x2 = x * x;
    fourth += x2 * x2;
  }
  const auto d = static_cast<double>(state.dim());
  SreValue v;
  v.m_tilde = -log_in(fourth / d, base);
  v.s2 = -log_in(state.purity(), base);
  v.magic = v.m_tilde - v.s2;
  return v;
}

} // namespace orqc
