#pragma once

// Brute-force reference computations. Nothing here calls the optimized
// kernels it is meant to check; results are compared by run_all_oracles.

#include <span>
#include <string>
#include <vector>

#include "orqc/circuits.hpp"
#include "orqc/linalg.hpp"

namespace orqc::oracle {

struct OracleReport {
  std::string name;
  std::string instance;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Every oracle at its default size, fixed seeds. Failures are reported,
/// never thrown.
std::vector<OracleReport> run_all_oracles();

/// One line per report plus a totals line.
std::string format_report(const std::vector<OracleReport>& reports);

/// 2^n x 2^n unitary acting as `gate` on `targets`: the gate is padded with
/// identities and conjugated by the qubit permutation moving targets to the
/// front.
ComplexMatrix embed_gate(const ComplexMatrix& gate, std::span<const int> targets, int n);

/// U rho U^dagger with U from embed_gate.
ComplexMatrix conjugate_dense(const ComplexMatrix& rho, const ComplexMatrix& gate,
                              std::span<const int> targets, int n);

/// sum_b (I (x) <b|) rho (I (x) |b>) built from explicit isometries.
ComplexMatrix partial_trace_dense(const ComplexMatrix& rho, int n, std::span<const int> keep);

/// Tensor product of 2x2 Pauli matrices for the base-4 digits of `index`
/// (qubit 0 most significant; 0 = I, 1 = X, 2 = Y, 3 = Z).
ComplexMatrix pauli_string(std::size_t index, int n);

/// Tr(P rho) for all 4^n strings by explicit matrix products.
std::vector<double> pauli_spectrum_dense(const ComplexMatrix& rho, int n);

/// Magic from the explicit spectrum, base 2.
double sre2_dense(const ComplexMatrix& rho, int n);

/// rho^{T_B} rebuilt from the Pauli expansion: transposition flips the sign
/// of every Y on a transposed qubit.
ComplexMatrix partial_transpose_pauli(const ComplexMatrix& rho, int n,
                                      std::span<const int> transposed);

/// Krylov data of a trajectory from its Gram matrix: a vector joins the basis
/// when its squared residual after projection through the pseudo-inverse of
/// the accepted Gram block exceeds `accept` times its squared norm;
/// coefficients come from the Cholesky factor of that block.
struct GramKrylov {
  int dimension = 0;
  std::vector<double> complexity;
};
GramKrylov krylov_from_gram(const std::vector<ComplexMatrix>& trajectory, double accept = 1e-8);

/// Normalized traceless parts of the reduced system states of a RUC
/// trajectory, evolved with dense embeddings and the same gate draws the
/// production circuit uses.
std::vector<ComplexMatrix> ruc_trajectory_dense(const CircuitSpec& spec,
                                                const DensityMatrix& initial, int steps,
                                                CircuitStreams& streams);

} // namespace orqc::oracle
