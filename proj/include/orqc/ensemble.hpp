#pragma once

#include <cstddef>
#include <vector>

#include "orqc/linalg.hpp"

namespace orqc {

inline constexpr double kOutcomeFloor = 1e-12;
inline constexpr std::size_t kDefaultMomentCap = 4096;

struct EnsembleMember {
  double probability = 0.0;
  DensityMatrix state;
};

/// Conditional states of subsystem A after a computational-basis measurement
/// of its complement.
struct ProjectedEnsemble {
  int n_qubits_a = 0;
  std::vector<EnsembleMember> members;

  std::size_t dim() const { return dim_of(n_qubits_a); }
  double total_probability() const;
};

ProjectedEnsemble build_projected_ensemble(const DensityMatrix& state,
                                           const QubitSubset& part_a);

/// sum_b p_b (rho_b)^{(x)k}. Throws std::invalid_argument if d^k > cap.
ComplexMatrix kth_moment(const ProjectedEnsemble& ensemble, int k,
                         std::size_t cap = kDefaultMomentCap);

/// Normalized projector onto the symmetric subspace of (C^d)^{(x)k}.
ComplexMatrix haar_moment(std::size_t d, int k, std::size_t cap = kDefaultMomentCap);

/// Permutation operator |i_1 ... i_k> -> |i_perm[0] ... i_perm[k-1]>.
ComplexMatrix permutation_operator(std::size_t d, const std::vector<int>& perm);

/// 1/2 || rho_ens^(k) - rho_haar^(k) ||_1.
double design_distance(const ProjectedEnsemble& ensemble, int k,
                       std::size_t cap = kDefaultMomentCap);
double design_distance(const ComplexMatrix& ensemble_moment, std::size_t d, int k);

} // namespace orqc
