#include <vector>

#include "kernels.hpp"

namespace orqc::kernels::serial {

namespace {

// Index of the gate-local basis state `local` inside `base`.
std::size_t scatter(std::size_t base, std::size_t local, int n, std::span<const int> targets) {
  const auto k = targets.size();
  std::size_t idx = base;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t bit = (local >> (k - 1 - j)) & 1U;
    const int shift = n - 1 - targets[j];
    idx = (idx & ~(std::size_t{1} << shift)) | (bit << shift);
  }
  return idx;
}

bool targets_clear(std::size_t idx, int n, std::span<const int> targets) {
  for (int q : targets) {
    if ((idx >> (n - 1 - q)) & 1U) return false;
  }
  return true;
}

} // namespace

void apply_gate_rows(Complex* rho, int n, const ComplexMatrix& gate,
                     std::span<const int> targets) {
  const std::size_t d = dim_of(n);
  const auto g = static_cast<std::size_t>(gate.rows());
  std::vector<Complex> in(g);
  for (std::size_t base = 0; base < d; ++base) {
    if (!targets_clear(base, n, targets)) continue;
    for (std::size_t c = 0; c < d; ++c) {
      for (std::size_t l = 0; l < g; ++l) in[l] = rho[scatter(base, l, n, targets) * d + c];
      for (std::size_t j = 0; j < g; ++j) {
        Complex s = 0.0;
        for (std::size_t l = 0; l < g; ++l) s += gate(j, l) * in[l];
        rho[scatter(base, j, n, targets) * d + c] = s;
      }
    }
  }
}

void apply_gate_cols_conj(Complex* rho, int n, const ComplexMatrix& gate,
                          std::span<const int> targets) {
  const std::size_t d = dim_of(n);
  const auto g = static_cast<std::size_t>(gate.rows());
  std::vector<Complex> in(g);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t base = 0; base < d; ++base) {
      if (!targets_clear(base, n, targets)) continue;
      for (std::size_t l = 0; l < g; ++l) in[l] = rho[r * d + scatter(base, l, n, targets)];
      for (std::size_t j = 0; j < g; ++j) {
        Complex s = 0.0;
        for (std::size_t l = 0; l < g; ++l) s += std::conj(gate(j, l)) * in[l];
        rho[r * d + scatter(base, j, n, targets)] = s;
      }
    }
  }
}

ComplexMatrix partial_trace(const Complex* rho, int n, std::span<const int> keep) {
  const std::size_t d = dim_of(n);
  const std::size_t dk = std::size_t{1} << keep.size();
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(dk),
                                          static_cast<Eigen::Index>(dk));
  for (std::size_t base = 0; base < d; ++base) {
    if (!targets_clear(base, n, keep)) continue;
    for (std::size_t i = 0; i < dk; ++i) {
      for (std::size_t j = 0; j < dk; ++j) {
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
            rho[scatter(base, i, n, keep) * d + scatter(base, j, n, keep)];
      }
    }
  }
  return out;
}

void pauli_transform(Complex* rho, int n) {
  const std::size_t d = dim_of(n);
  const Complex iu(0.0, 1.0);
  for (int q = 0; q < n; ++q) {
    const std::size_t bit = std::size_t{1} << (n - 1 - q);
    for (std::size_t r = 0; r < d; ++r) {
      if (r & bit) continue;
      for (std::size_t c = 0; c < d; ++c) {
        if (c & bit) continue;
        const Complex a = rho[r * d + c];
        const Complex b = rho[r * d + (c | bit)];
        const Complex cc = rho[(r | bit) * d + c];
        const Complex e = rho[(r | bit) * d + (c | bit)];
        rho[r * d + c] = a + e;
        rho[r * d + (c | bit)] = b + cc;
        rho[(r | bit) * d + c] = iu * (b - cc);
        rho[(r | bit) * d + (c | bit)] = a - e;
      }
    }
  }
}

} // namespace orqc::kernels::serial
