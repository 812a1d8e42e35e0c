#include "orqc/linalg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kernels.hpp"

namespace orqc {

namespace {

int qubits_for_dim(std::size_t d) {
  if (d == 0 || !std::has_single_bit(d)) {
    throw std::invalid_argument("matrix dimension " + std::to_string(d) +
                                " is not a power of two");
  }
  return std::countr_zero(d);
}

void require_square(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("matrix is not square");
  }
}

bool all_finite(const ComplexMatrix& m) {
  const Complex* p = m.data();
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (!std::isfinite(p[i].real()) || !std::isfinite(p[i].imag())) return false;
  }
  return true;
}

std::vector<int> validated_indices(std::span<const int> idx, int n) {
  std::vector<int> out(idx.begin(), idx.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] < 0 || out[i] >= n) {
      throw std::invalid_argument("qubit index " + std::to_string(out[i]) +
                                  " outside register of " + std::to_string(n));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (out[j] == out[i]) {
        throw std::invalid_argument("duplicate qubit index " +
                                    std::to_string(out[i]));
      }
    }
  }
  return out;
}

} // namespace

QubitSubset::QubitSubset(std::vector<int> indices, int n_qubits)
    : indices_(validated_indices(indices, n_qubits)), n_qubits_(n_qubits) {}

QubitSubset QubitSubset::complement() const {
  std::vector<int> rest;
  for (int q = 0; q < n_qubits_; ++q) {
    if (!contains(q)) rest.push_back(q);
  }
  return QubitSubset(std::move(rest), n_qubits_);
}

bool QubitSubset::contains(int q) const {
  return std::find(indices_.begin(), indices_.end(), q) != indices_.end();
}

double hermiticity_defect(const ComplexMatrix& m) {
  require_square(m);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
    }
  }
  return worst;
}

DensityMatrix::DensityMatrix(ComplexMatrix m) {
  require_square(m);
  n_qubits_ = qubits_for_dim(static_cast<std::size_t>(m.rows()));
  if (!all_finite(m)) throw std::invalid_argument("density matrix has non-finite entries");
  if (hermiticity_defect(m) > kHermitianTol) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw std::invalid_argument("density matrix trace " + std::to_string(tr) + " != 1");
  }
  const auto ev = hermitian_eigenvalues(m);
  if (ev.front() < kPsdFloor) {
    throw std::invalid_argument("density matrix is not positive semidefinite");
  }
  m_ = std::move(m);
}

DensityMatrix DensityMatrix::from_trusted(ComplexMatrix m) {
  require_square(m);
  DensityMatrix out;
  out.n_qubits_ = qubits_for_dim(static_cast<std::size_t>(m.rows()));
  out.m_ = std::move(m);
  return out;
}

DensityMatrix DensityMatrix::basis_state(int n_qubits, std::size_t index) {
  const auto d = dim_of(n_qubits);
  if (index >= d) throw std::invalid_argument("basis index out of range");
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  m(index, index) = 1.0;
  return from_trusted(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  const auto d = dim_of(n_qubits);
  ComplexMatrix m = ComplexMatrix::Identity(d, d) / static_cast<double>(d);
  return from_trusted(std::move(m));
}

DensityMatrix DensityMatrix::from_pure(const Eigen::VectorXcd& psi) {
  const double nrm = psi.norm();
  if (nrm == 0.0) throw std::invalid_argument("zero state vector");
  const Eigen::VectorXcd v = psi / nrm;
  ComplexMatrix m = v * v.adjoint();
  return from_trusted(std::move(m));
}

double DensityMatrix::purity() const {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return m_.squaredNorm();
}

double DensityMatrix::trace() const { return m_.trace().real(); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix::from_trusted(kron(a.matrix(), b.matrix()));
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  const ComplexMatrix prod = u.adjoint() * u;
  const ComplexMatrix id = ComplexMatrix::Identity(u.rows(), u.cols());
  return (prod - id).cwiseAbs().maxCoeff() <= tol;
}

void apply_gate_inplace(ComplexMatrix& rho, const ComplexMatrix& gate,
                        std::span<const int> targets) {
  require_square(rho);
  const int n = qubits_for_dim(static_cast<std::size_t>(rho.rows()));
  const auto k = static_cast<int>(targets.size());
  if (gate.rows() != gate.cols() || gate.rows() != static_cast<Eigen::Index>(dim_of(k))) {
    throw std::invalid_argument("gate dimension does not match target count");
  }
  validated_indices(targets, n);
  kernels::apply_gate_rows(rho.data(), n, gate, targets);
  kernels::apply_gate_cols_conj(rho.data(), n, gate, targets);
}

DensityMatrix apply_gate(const DensityMatrix& state, const ComplexMatrix& gate,
                         const QubitSubset& targets) {
  if (targets.n_qubits() != state.n_qubits()) {
    throw std::invalid_argument("target subset belongs to a different register");
  }
  if (!is_unitary(gate)) throw std::invalid_argument("gate is not unitary");
  ComplexMatrix m = state.matrix();
  apply_gate_inplace(m, gate, targets.indices());
  return DensityMatrix::from_trusted(std::move(m));
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, int n_qubits,
                            std::span<const int> keep) {
  if (keep.empty()) {
    throw std::invalid_argument("partial trace must keep at least one qubit");
  }
  const auto kept = validated_indices(keep, n_qubits);
  return kernels::partial_trace(rho.data(), n_qubits, kept);
}

DensityMatrix partial_trace(const DensityMatrix& state, const QubitSubset& keep) {
  if (keep.n_qubits() != state.n_qubits()) {
    throw std::invalid_argument("keep subset belongs to a different register");
  }
  return DensityMatrix::from_trusted(
      partial_trace(state.matrix(), state.n_qubits(), keep.indices()));
}

ComplexMatrix partial_transpose(const ComplexMatrix& rho, int n_qubits,
                                std::span<const int> transposed) {
  const auto t = validated_indices(transposed, n_qubits);
  std::size_t mask = 0;
  for (int q : t) mask |= std::size_t{1} << (n_qubits - 1 - q);
  const auto d = dim_of(n_qubits);
  ComplexMatrix out(d, d);
  const Complex* src = rho.data();
  Complex* dst = out.data();
#pragma omp parallel for schedule(static) if (d >= 256)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(d); ++r) {
    const auto ru = static_cast<std::size_t>(r);
    for (std::size_t c = 0; c < d; ++c) {
      const std::size_t rs = (ru & ~mask) | (c & mask);
      const std::size_t cs = (c & ~mask) | (ru & mask);
      dst[ru * d + c] = src[rs * d + cs];
    }
  }
  return out;
}

ComplexMatrix partial_transpose(const DensityMatrix& state,
                                const QubitSubset& transposed) {
  return partial_transpose(state.matrix(), state.n_qubits(), transposed.indices());
}

RealVector hermitian_eigenvalues(const ComplexMatrix& h, double tol) {
  require_square(h);
  if (hermiticity_defect(h) > tol) {
    throw std::invalid_argument("matrix is not Hermitian within tolerance");
  }
  const Eigen::MatrixXcd col_major = h;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(col_major,
                                                         Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("Hermitian eigensolver did not converge");
  }
  const auto& ev = solver.eigenvalues();
  return RealVector(ev.data(), ev.data() + ev.size());
}

double trace_norm(const ComplexMatrix& h) {
  double s = 0.0;
  for (double v : hermitian_eigenvalues(h)) s += std::abs(v);
  return s;
}

double log_in(double x, LogBase base) {
  return base == LogBase::Two ? std::log2(x) : std::log(x);
}

double entropy_from_spectrum(std::span<const double> eigenvalues, LogBase base) {
  double s = 0.0;
  for (double p : eigenvalues) {
    if (p > kEntropyClamp) s -= p * log_in(p, base);
  }
  return std::max(s, 0.0);
}

double vn_entropy(const DensityMatrix& state, LogBase base) {
  return entropy_from_spectrum(hermitian_eigenvalues(state.matrix()), base);
}

double renyi2_entropy(const DensityMatrix& state, LogBase base) {
  return std::max(-log_in(state.purity(), base), 0.0);
}

} // namespace orqc
