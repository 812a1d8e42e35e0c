#include "orqc/resources.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace orqc {

Bipartition Bipartition::split(const QubitSubset& part_a) {
  return {part_a, part_a.complement()};
}

void Bipartition::validate(int n_qubits) const {
  if (part_a.n_qubits() != n_qubits || part_b.n_qubits() != n_qubits) {
    throw std::invalid_argument("bipartition belongs to a different register");
  }
  if (part_a.size() + part_b.size() != static_cast<std::size_t>(n_qubits)) {
    throw std::invalid_argument("bipartition does not cover the register");
  }
  for (int q : part_a.indices()) {
    if (part_b.contains(q)) throw std::invalid_argument("bipartition parts overlap");
  }
}

double negativity(const DensityMatrix& state, const Bipartition& bip) {
  bip.validate(state.n_qubits());
  const auto ev = hermitian_eigenvalues(partial_transpose(state, bip.part_b));
  double n = 0.0;
  for (double v : ev) {
    if (v < kNegativityThreshold) n -= v;
  }
  return n;
}

double log_negativity(const DensityMatrix& state, const Bipartition& bip,
                      NegativityConvention convention, LogBase base) {
  const double n = negativity(state, bip);
  const double arg = convention == NegativityConvention::Plain ? n + 1.0 : 2.0 * n + 1.0;
  return log_in(arg, base);
}

double mutual_information(const DensityMatrix& state, const Bipartition& bip,
                          LogBase base) {
  bip.validate(state.n_qubits());
  const double sa = vn_entropy(partial_trace(state, bip.part_a), base);
  const double sb = vn_entropy(partial_trace(state, bip.part_b), base);
  const double sab = vn_entropy(state, base);
  return std::max(sa + sb - sab, 0.0);
}

void Fluctuation::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void Fluctuation::merge(const Fluctuation& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const auto na = static_cast<double>(n_);
  const auto nb = static_cast<double>(other.n_);
  const double total = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * nb / total;
  m2_ += other.m2_ + delta * delta * na * nb / total;
  n_ += other.n_;
}

double Fluctuation::mean() const {
  if (n_ == 0) throw std::logic_error("mean of an empty accumulator");
  return mean_;
}

double Fluctuation::variance() const {
  if (n_ == 0) throw std::logic_error("variance of an empty accumulator");
  return std::max(m2_ / static_cast<double>(n_), 0.0);
}

MeanVariance fluctuation(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("fluctuation of an empty sample list");
  Fluctuation acc;
  for (double x : samples) acc.add(x);
  return {acc.mean(), acc.variance()};
}

} // namespace orqc
