#pragma once

// Krylov complexity of a circuit trajectory. Operators on a D-dimensional
// space are vectors under (A|B) = Tr(A^dagger B) / D; the basis is grown by
// orthogonalizing each evolved state against everything seen so far.

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "orqc/circuits.hpp"
#include "orqc/linalg.hpp"

namespace orqc {

/// Thrown when the initial state has no traceless part.
class DegenerateInitialState : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);
double hs_norm(const ComplexMatrix& a);

/// rho - (Tr rho / D) I, scaled to unit HS norm.
ComplexMatrix prepare_initial(const DensityMatrix& state);

/// Orthonormal operator vectors stored contiguously.
class KrylovBasis {
public:
  explicit KrylovBasis(std::size_t dim, std::size_t reserve = 0);

  std::size_t size() const { return count_; }
  std::size_t dim() const { return dim_; }
  std::size_t vector_length() const { return dim_ * dim_; }

  /// Two modified Gram-Schmidt passes of v against the basis, in place.
  /// Returns the residual HS norm.
  double orthogonalize(ComplexMatrix& v) const;
  /// Appends v / |v|; v must already be orthogonal to the basis.
  void append(const ComplexMatrix& v);
  /// (K_n | v) for every basis vector.
  std::vector<Complex> coefficients(const ComplexMatrix& v) const;
  ComplexMatrix vector(std::size_t n) const;

  /// max |(K_i|K_j) - delta_ij|, O(K^2 D^2).
  double gram_deviation() const;

private:
  const Complex* at(std::size_t n) const { return data_.data() + n * vector_length(); }

  std::size_t dim_;
  std::size_t count_ = 0;
  std::vector<Complex> data_;
};

enum class RenormalizationOrder : std::uint8_t {
  RemoveTraceThenNormalize,
  NormalizeThenRemoveTrace,
};

struct KrylovOptions {
  int max_steps = 1000;
  double tolerance = 1e-10;
  /// Stop after this many consecutive steps without a new basis vector.
  int stall_window = 64;
  /// Ignore the stall window and always run max_steps.
  bool fixed_steps = false;
  RenormalizationOrder order = RenormalizationOrder::RemoveTraceThenNormalize;
  /// Compute the basis Gram deviation at the end of the run.
  bool check_gram = false;

  void validate() const;
};

struct KrylovResult {
  int dimension = 0;
  /// C_K(t) for t = 0..steps.
  std::vector<double> complexity;
  /// sum_n |phi_n(t)|^2 for t = 0..steps.
  std::vector<double> coefficient_norms;
  /// |traceless part of rho_t| / |traceless part of rho_0|, before renormalization.
  std::vector<double> raw_norms;
  /// Basis size after each step.
  std::vector<int> dimension_history;
  double tolerance = 0.0;
  double gram_deviation = -1.0;
};

/// Bytes of basis storage for a run that may reach D^2 - 1 vectors.
std::size_t krylov_memory_bytes(int n_system);

/// One Krylov step is one circuit layer; in same-unitary mode it is one full
/// brickwork period (odd layer then even layer) with the cached gates.
KrylovResult krylov_run(const CircuitSpec& spec, const DensityMatrix& initial,
                        const KrylovOptions& options, CircuitStreams& streams);

std::vector<std::pair<int, double>> complexity_series(const KrylovResult& result);

} // namespace orqc
