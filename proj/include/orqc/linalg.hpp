#pragma once

// Dense complex linear algebra for n-qubit density matrices.
//
// Qubit convention: qubit 0 is the most significant bit of a basis index, so
// the register of qubits {0, 1, ..., n-1} is ordered like rho_0 (x) rho_1 (x) ...
// Gate-local indices follow the same rule over the target list: targets[0]
// is the most significant bit of the gate's row/column index.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace orqc {

using Complex = std::complex<double>;
using ComplexMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RealVector = std::vector<double>;

enum class LogBase { Two, Natural };

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdFloor = -1e-9;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kEntropyClamp = 1e-12;

constexpr std::size_t dim_of(int n_qubits) { return std::size_t{1} << n_qubits; }

/// Ordered list of distinct qubit indices inside an n-qubit register.
class QubitSubset {
public:
  QubitSubset() = default;
  QubitSubset(std::vector<int> indices, int n_qubits);
  QubitSubset(std::initializer_list<int> indices, int n_qubits)
      : QubitSubset(std::vector<int>(indices), n_qubits) {}

  /// Every qubit of [0, n) that is not in *this, ascending.
  QubitSubset complement() const;

  std::span<const int> indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  int n_qubits() const { return n_qubits_; }
  int operator[](std::size_t i) const { return indices_[i]; }
  bool contains(int q) const;

private:
  std::vector<int> indices_;
  int n_qubits_ = 0;
};

/// Hermitian, unit-trace, PSD operator on n qubits. Construction validates the
/// invariants; `from_trusted` skips the eigenvalue check for hot paths whose
/// inputs come out of trace- and positivity-preserving kernels.
class DensityMatrix {
public:
  DensityMatrix() = default;
  explicit DensityMatrix(ComplexMatrix m);

  static DensityMatrix from_trusted(ComplexMatrix m);
  static DensityMatrix basis_state(int n_qubits, std::size_t index);
  static DensityMatrix maximally_mixed(int n_qubits);
  static DensityMatrix from_pure(const Eigen::VectorXcd& psi);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return dim_of(n_qubits_); }
  const ComplexMatrix& matrix() const { return m_; }
  /// Mutable access for in-place kernels; callers keep the invariants.
  ComplexMatrix& mutable_matrix() { return m_; }

  double purity() const;
  double trace() const;

private:
  ComplexMatrix m_;
  int n_qubits_ = 0;
};

DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

bool is_unitary(const ComplexMatrix& u, double tol = kUnitaryTol);
double hermiticity_defect(const ComplexMatrix& m);

/// In-place U rho U^dagger on the given targets. Works on any square matrix of
/// dimension 2^n (not only density matrices); the Krylov engine relies on this.
void apply_gate_inplace(ComplexMatrix& rho, const ComplexMatrix& gate,
                        std::span<const int> targets);

/// Checked variant: validates unitarity and shapes, returns a new state.
DensityMatrix apply_gate(const DensityMatrix& state, const ComplexMatrix& gate,
                         const QubitSubset& targets);

/// Reduced state on `keep`, in the order given by `keep`.
DensityMatrix partial_trace(const DensityMatrix& state, const QubitSubset& keep);
ComplexMatrix partial_trace(const ComplexMatrix& rho, int n_qubits,
                            std::span<const int> keep);

ComplexMatrix partial_transpose(const DensityMatrix& state,
                                const QubitSubset& transposed);
ComplexMatrix partial_transpose(const ComplexMatrix& rho, int n_qubits,
                                std::span<const int> transposed);

/// Ascending eigenvalues. Throws std::invalid_argument if H is not Hermitian
/// within `tol`.
RealVector hermitian_eigenvalues(const ComplexMatrix& h, double tol = 1e-8);

double trace_norm(const ComplexMatrix& h);

double vn_entropy(const DensityMatrix& state, LogBase base = LogBase::Two);
double renyi2_entropy(const DensityMatrix& state, LogBase base = LogBase::Two);
double entropy_from_spectrum(std::span<const double> eigenvalues,
                             LogBase base = LogBase::Two);

double log_in(double x, LogBase base);

} // namespace orqc
