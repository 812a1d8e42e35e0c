#include "kernels.hpp"

#include <algorithm>
#include <array>
#include <cstddef>

namespace orqc::kernels {

namespace {

// Split-complex copy of a small gate so the hot loops avoid the
// NaN-checking complex multiply of libstdc++.
template <int G>
struct SplitGate {
  std::array<double, G * G> re{};
  std::array<double, G * G> im{};

  SplitGate(const ComplexMatrix& u, bool conjugate) {
    const double sign = conjugate ? -1.0 : 1.0;
    for (int i = 0; i < G; ++i) {
      for (int j = 0; j < G; ++j) {
        re[i * G + j] = u(i, j).real();
        im[i * G + j] = sign * u(i, j).imag();
      }
    }
  }
};

template <int G>
inline void mix(const SplitGate<G>& g, const double* xr, const double* xi, double* yr,
                double* yi) {
  for (int j = 0; j < G; ++j) {
    double sr = 0.0;
    double si = 0.0;
    for (int l = 0; l < G; ++l) {
      const double ur = g.re[j * G + l];
      const double ui = g.im[j * G + l];
      sr += ur * xr[l] - ui * xi[l];
      si += ur * xi[l] + ui * xr[l];
    }
    yr[j] = sr;
    yi[j] = si;
  }
}

template <int G>
void rows_fixed(Complex* rho, std::size_t d, const ComplexMatrix& gate,
                const std::vector<std::size_t>& off,
                const std::vector<std::size_t>& bases) {
  const SplitGate<G> g(gate, false);
  const auto n_groups = static_cast<std::ptrdiff_t>(bases.size());
#pragma omp parallel for schedule(static) if (d >= 128)
  for (std::ptrdiff_t m = 0; m < n_groups; ++m) {
    std::array<Complex*, G> row{};
    for (int l = 0; l < G; ++l) row[l] = rho + (bases[m] + off[l]) * d;
    double xr[G], xi[G], yr[G], yi[G];
    for (std::size_t c = 0; c < d; ++c) {
      for (int l = 0; l < G; ++l) {
        xr[l] = row[l][c].real();
        xi[l] = row[l][c].imag();
      }
      mix<G>(g, xr, xi, yr, yi);
      for (int j = 0; j < G; ++j) row[j][c] = Complex(yr[j], yi[j]);
    }
  }
}

template <int G>
void cols_fixed(Complex* rho, std::size_t d, const ComplexMatrix& gate,
                const std::vector<std::size_t>& off,
                const std::vector<std::size_t>& bases) {
  const SplitGate<G> g(gate, true);
  const auto rows = static_cast<std::ptrdiff_t>(d);
#pragma omp parallel for schedule(static) if (d >= 128)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    Complex* row = rho + static_cast<std::size_t>(r) * d;
    double xr[G], xi[G], yr[G], yi[G];
    for (std::size_t b : bases) {
      for (int l = 0; l < G; ++l) {
        xr[l] = row[b + off[l]].real();
        xi[l] = row[b + off[l]].imag();
      }
      mix<G>(g, xr, xi, yr, yi);
      for (int j = 0; j < G; ++j) row[b + off[j]] = Complex(yr[j], yi[j]);
    }
  }
}

// Fallback for gates wider than three qubits.
void rows_dynamic(Complex* rho, std::size_t d, const ComplexMatrix& gate,
                  const std::vector<std::size_t>& off,
                  const std::vector<std::size_t>& bases) {
  const auto g = static_cast<std::size_t>(gate.rows());
  const auto n_groups = static_cast<std::ptrdiff_t>(bases.size());
#pragma omp parallel for schedule(static) if (d >= 128)
  for (std::ptrdiff_t m = 0; m < n_groups; ++m) {
    std::vector<Complex> x(g);
    for (std::size_t c = 0; c < d; ++c) {
      for (std::size_t l = 0; l < g; ++l) x[l] = rho[(bases[m] + off[l]) * d + c];
      for (std::size_t j = 0; j < g; ++j) {
        Complex s = 0.0;
        for (std::size_t l = 0; l < g; ++l) s += gate(j, l) * x[l];
        rho[(bases[m] + off[j]) * d + c] = s;
      }
    }
  }
}

void cols_dynamic(Complex* rho, std::size_t d, const ComplexMatrix& gate,
                  const std::vector<std::size_t>& off,
                  const std::vector<std::size_t>& bases) {
  const auto g = static_cast<std::size_t>(gate.rows());
  const auto rows = static_cast<std::ptrdiff_t>(d);
#pragma omp parallel for schedule(static) if (d >= 128)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    Complex* row = rho + static_cast<std::size_t>(r) * d;
    std::vector<Complex> x(g);
    for (std::size_t b : bases) {
      for (std::size_t l = 0; l < g; ++l) x[l] = row[b + off[l]];
      for (std::size_t j = 0; j < g; ++j) {
        Complex s = 0.0;
        for (std::size_t l = 0; l < g; ++l) s += std::conj(gate(j, l)) * x[l];
        row[b + off[j]] = s;
      }
    }
  }
}

} // namespace

std::vector<std::size_t> local_offsets(int n, std::span<const int> targets) {
  const auto k = static_cast<int>(targets.size());
  std::vector<std::size_t> off(std::size_t{1} << k, 0);
  for (std::size_t l = 0; l < off.size(); ++l) {
    for (int j = 0; j < k; ++j) {
      if ((l >> (k - 1 - j)) & 1U) off[l] |= std::size_t{1} << (n - 1 - targets[j]);
    }
  }
  return off;
}

std::vector<std::size_t> group_bases(int n, std::span<const int> targets) {
  std::vector<int> pos;
  for (int t : targets) pos.push_back(n - 1 - t);
  std::sort(pos.begin(), pos.end());
  const std::size_t count = std::size_t{1} << (n - static_cast<int>(targets.size()));
  std::vector<std::size_t> bases(count);
  for (std::size_t m = 0; m < count; ++m) {
    std::size_t b = m;
    for (int p : pos) {
      const std::size_t low = b & ((std::size_t{1} << p) - 1);
      b = ((b >> p) << (p + 1)) | low;
    }
    bases[m] = b;
  }
  return bases;
}

void apply_gate_rows(Complex* rho, int n, const ComplexMatrix& gate,
                     std::span<const int> targets) {
  const auto d = dim_of(n);
  const auto off = local_offsets(n, targets);
  const auto bases = group_bases(n, targets);
  switch (targets.size()) {
    case 1: rows_fixed<2>(rho, d, gate, off, bases); break;
    case 2: rows_fixed<4>(rho, d, gate, off, bases); break;
    case 3: rows_fixed<8>(rho, d, gate, off, bases); break;
    default: rows_dynamic(rho, d, gate, off, bases); break;
  }
}

void apply_gate_cols_conj(Complex* rho, int n, const ComplexMatrix& gate,
                          std::span<const int> targets) {
  const auto d = dim_of(n);
  const auto off = local_offsets(n, targets);
  const auto bases = group_bases(n, targets);
  switch (targets.size()) {
    case 1: cols_fixed<2>(rho, d, gate, off, bases); break;
    case 2: cols_fixed<4>(rho, d, gate, off, bases); break;
    case 3: cols_fixed<8>(rho, d, gate, off, bases); break;
    default: cols_dynamic(rho, d, gate, off, bases); break;
  }
}

ComplexMatrix partial_trace(const Complex* rho, int n, std::span<const int> keep) {
  std::vector<int> traced;
  for (int q = 0; q < n; ++q) {
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced.push_back(q);
  }
  const auto keep_off = local_offsets(n, keep);
  const auto trace_off = local_offsets(n, traced);
  const auto dk = static_cast<std::ptrdiff_t>(keep_off.size());
  const auto d = dim_of(n);
  ComplexMatrix out(dk, dk);
#pragma omp parallel for schedule(static) if (d >= 256)
  for (std::ptrdiff_t i = 0; i < dk; ++i) {
    for (std::ptrdiff_t j = 0; j < dk; ++j) {
      double sr = 0.0;
      double si = 0.0;
      for (std::size_t t : trace_off) {
        const Complex v = rho[(keep_off[i] + t) * d + keep_off[j] + t];
        sr += v.real();
        si += v.imag();
      }
      out(i, j) = Complex(sr, si);
    }
  }
  return out;
}

void pauli_transform(Complex* rho, int n) {
  const auto d = dim_of(n);
  const Complex iu(0.0, 1.0);
  for (int q = 0; q < n; ++q) {
    const std::size_t bit = std::size_t{1} << (n - 1 - q);
#pragma omp parallel for schedule(static) if (d >= 256)
    for (std::ptrdiff_t rs = 0; rs < static_cast<std::ptrdiff_t>(d); ++rs) {
      const auto r = static_cast<std::size_t>(rs);
      if (r & bit) continue;
      Complex* top = rho + r * d;
      Complex* bottom = rho + (r | bit) * d;
      for (std::size_t c = 0; c < d; ++c) {
        if (c & bit) continue;
        const Complex a = top[c];
        const Complex b = top[c | bit];
        const Complex cc = bottom[c];
        const Complex e = bottom[c | bit];
        top[c] = a + e;
        top[c | bit] = b + cc;
        bottom[c] = iu * (b - cc);
        bottom[c | bit] = a - e;
      }
    }
  }
}

} // namespace orqc::kernels
