#pragma once

#include <span>

#include "orqc/linalg.hpp"

namespace orqc {

struct Bipartition {
  QubitSubset part_a;
  QubitSubset part_b;

  /// part_b is the complement of part_a in the register.
  static Bipartition split(const QubitSubset& part_a);
  void validate(int n_qubits) const;
};

/// Negativity convention for the log-negativity.
enum class NegativityConvention : std::uint8_t {
  Plain,     ///< log2(N + 1)
  Standard,  ///< log2(2N + 1) = log2 ||rho^T_B||_1
};

inline constexpr double kNegativityThreshold = -1e-10;

/// Sum of |lambda| over eigenvalues of rho^{T_B} below -1e-10.
double negativity(const DensityMatrix& state, const Bipartition& bip);

double log_negativity(const DensityMatrix& state, const Bipartition& bip,
                      NegativityConvention convention = NegativityConvention::Plain,
                      LogBase base = LogBase::Two);

double mutual_information(const DensityMatrix& state, const Bipartition& bip,
                          LogBase base = LogBase::Two);

/// Mergeable mean/variance accumulator (Chan et al. pairwise update).
class Fluctuation {
public:
  void add(double x);
  void merge(const Fluctuation& other);

  std::size_t count() const { return n_; }
  double mean() const;
  /// Population variance <O^2> - <O>^2, floored at 0.
  double variance() const;

private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct MeanVariance {
  double mean = 0.0;
  double variance = 0.0;
};

/// Throws std::invalid_argument on an empty sample list.
MeanVariance fluctuation(std::span<const double> samples);

} // namespace orqc
