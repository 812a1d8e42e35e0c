#pragma once

// OpenMP-parallel inner kernels. Callers validate shapes and indices.

#include <span>
#include <vector>

#include "orqc/linalg.hpp"

namespace orqc::kernels {

/// rho <- G rho, where G is `gate` embedded on `targets` (row index transform).
void apply_gate_rows(Complex* rho, int n, const ComplexMatrix& gate,
                     std::span<const int> targets);

/// rho <- rho G^dagger (column index transform, applied row by row).
void apply_gate_cols_conj(Complex* rho, int n, const ComplexMatrix& gate,
                          std::span<const int> targets);

ComplexMatrix partial_trace(const Complex* rho, int n, std::span<const int> keep);

/// In place: after return, entry (r, c) holds Tr(P rho) for the Pauli string
/// whose per-qubit letter is determined by the bit pair (r_q, c_q):
/// (0,0) -> I, (0,1) -> X, (1,0) -> Y, (1,1) -> Z.
void pauli_transform(Complex* rho, int n);

/// Basis offsets of the 2^k gate-local indices for `targets` in an n-qubit
/// register (targets[0] most significant).
std::vector<std::size_t> local_offsets(int n, std::span<const int> targets);

/// Every index in [0, 2^n) whose target bits are all zero, ascending.
std::vector<std::size_t> group_bases(int n, std::span<const int> targets);

} // namespace orqc::kernels

// Straightforward single-threaded versions of the kernels above, kept as a
// correctness reference for tests and as the baseline for the benchmark.
namespace orqc::kernels::serial {

void apply_gate_rows(Complex* rho, int n, const ComplexMatrix& gate,
                     std::span<const int> targets);
void apply_gate_cols_conj(Complex* rho, int n, const ComplexMatrix& gate,
                          std::span<const int> targets);
ComplexMatrix partial_trace(const Complex* rho, int n, std::span<const int> keep);
void pauli_transform(Complex* rho, int n);

} // namespace orqc::kernels::serial
