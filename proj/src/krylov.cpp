#include "orqc/krylov.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace orqc {

namespace {

// Fixed chunking keeps the summation order independent of the thread count.
constexpr std::size_t kChunks = 32;

Complex raw_dot(const Complex* a, const Complex* b, std::size_t len) {
  std::array<double, kChunks> re{};
  std::array<double, kChunks> im{};
  const std::size_t chunk = (len + kChunks - 1) / kChunks;
#pragma omp parallel for schedule(static) if (len >= 16384)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(kChunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * chunk;
    const std::size_t hi = std::min(len, lo + chunk);
    double sr = 0.0;
    double si = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double ar = a[i].real();
      const double ai = a[i].imag();
      const double br = b[i].real();
      const double bi = b[i].imag();
      sr += ar * br + ai * bi;
      si += ar * bi - ai * br;
    }
    re[static_cast<std::size_t>(c)] = sr;
    im[static_cast<std::size_t>(c)] = si;
  }
  double sr = 0.0;
  double si = 0.0;
  for (std::size_t c = 0; c < kChunks; ++c) {
    sr += re[c];
    si += im[c];
  }
  return {sr, si};
}

// y -= alpha * x
void raw_axpy(Complex alpha, const Complex* x, Complex* y, std::size_t len) {
  const double ar = alpha.real();
  const double ai = alpha.imag();
#pragma omp parallel for schedule(static) if (len >= 16384)
  for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(len); ++s) {
    const auto i = static_cast<std::size_t>(s);
    const double xr = x[i].real();
    const double xi = x[i].imag();
    y[i] = Complex(y[i].real() - (ar * xr - ai * xi), y[i].imag() - (ar * xi + ai * xr));
  }
}

ComplexMatrix traceless_part(const ComplexMatrix& rho) {
  ComplexMatrix w = rho;
  const Complex shift = rho.trace() / static_cast<double>(rho.rows());
  for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, i) -= shift;
  return w;
}

} // namespace

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw std::invalid_argument("hs_inner: operands must be square and equally sized");
  }
  return raw_dot(a.data(), b.data(), static_cast<std::size_t>(a.size())) /
         static_cast<double>(a.rows());
}

double hs_norm(const ComplexMatrix& a) {
  return std::sqrt(a.squaredNorm() / static_cast<double>(a.rows()));
}

ComplexMatrix prepare_initial(const DensityMatrix& state) {
  ComplexMatrix w = traceless_part(state.matrix());
  const double nrm = hs_norm(w);
  if (nrm < 1e-12) {
    throw DegenerateInitialState("initial state is proportional to the identity");
  }
  w /= nrm;
  return w;
}

KrylovBasis::KrylovBasis(std::size_t dim, std::size_t reserve) : dim_(dim) {
  data_.reserve(reserve * vector_length());
}

double KrylovBasis::orthogonalize(ComplexMatrix& v) const {
  const std::size_t len = vector_length();
  const auto d = static_cast<double>(dim_);
  Complex* y = v.data();
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t n = 0; n < count_; ++n) {
      const Complex c = raw_dot(at(n), y, len) / d;
      raw_axpy(c, at(n), y, len);
    }
  }
  return hs_norm(v);
}

void KrylovBasis::append(const ComplexMatrix& v) {
  if (static_cast<std::size_t>(v.rows()) != dim_ || v.rows() != v.cols()) {
    throw std::invalid_argument("KrylovBasis::append: wrong operator dimension");
  }
  const double nrm = hs_norm(v);
  if (nrm == 0.0) throw std::invalid_argument("KrylovBasis::append: zero vector");
  const std::size_t len = vector_length();
  const std::size_t old = data_.size();
  data_.resize(old + len);
  for (std::size_t i = 0; i < len; ++i) data_[old + i] = v.data()[i] / nrm;
  ++count_;
}

std::vector<Complex> KrylovBasis::coefficients(const ComplexMatrix& v) const {
  std::vector<Complex> phi(count_);
  const auto d = static_cast<double>(dim_);
  for (std::size_t n = 0; n < count_; ++n) {
    phi[n] = raw_dot(at(n), v.data(), vector_length()) / d;
  }
  return phi;
}

ComplexMatrix KrylovBasis::vector(std::size_t n) const {
  if (n >= count_) throw std::out_of_range("KrylovBasis::vector");
  ComplexMatrix m(dim_, dim_);
  std::copy(at(n), at(n) + vector_length(), m.data());
  return m;
}

double KrylovBasis::gram_deviation() const {
  if (count_ == 0) return 0.0;
  const Eigen::Map<const Eigen::MatrixXcd> b(data_.data(),
                                             static_cast<Eigen::Index>(vector_length()),
                                             static_cast<Eigen::Index>(count_));
  Eigen::MatrixXcd gram = b.adjoint() * b;
  gram /= static_cast<double>(dim_);
  gram -= Eigen::MatrixXcd::Identity(gram.rows(), gram.cols());
  return gram.cwiseAbs().maxCoeff();
}

void KrylovOptions::validate() const {
  if (!(tolerance > 0.0 && tolerance <= 1e-6)) {
    throw std::invalid_argument("Krylov tolerance must lie in (0, 1e-6]");
  }
  if (max_steps < 1) throw std::invalid_argument("Krylov max_steps must be >= 1");
  if (stall_window < 1) throw std::invalid_argument("Krylov stall_window must be >= 1");
}

std::size_t krylov_memory_bytes(int n_system) {
  const std::size_t d = dim_of(n_system);
  return (d * d - 1) * d * d * sizeof(Complex);
}

namespace {

double complexity_of(const std::vector<Complex>& phi, double* mass_out) {
  double mass = 0.0;
  double weighted = 0.0;
  for (std::size_t n = 0; n < phi.size(); ++n) {
    const double p = std::norm(phi[n]);
    mass += p;
    weighted += static_cast<double>(n) * p;
  }
  *mass_out = mass;
  return mass > 0.0 ? weighted / mass : 0.0;
}

} // namespace

KrylovResult krylov_run(const CircuitSpec& spec, const DensityMatrix& initial,
                        const KrylovOptions& options, CircuitStreams& streams) {
  options.validate();
  spec.validate();
  const std::size_t d = initial.dim();
  const std::size_t max_dim = d * d - 1;

  KrylovResult result;
  result.tolerance = options.tolerance;

  const ComplexMatrix v0 = prepare_initial(initial);
  const double norm0 = hs_norm(traceless_part(initial.matrix()));
  KrylovBasis basis(d, std::min<std::size_t>(max_dim,
                                             static_cast<std::size_t>(options.max_steps) + 1));
  basis.append(v0);
  result.complexity.push_back(0.0);
  result.coefficient_norms.push_back(1.0);
  result.raw_norms.push_back(1.0);
  result.dimension_history.push_back(1);

  FullState state = make_full_state(spec, initial, streams);
  int stalled = 0;
  int layer = 0;
  for (int step = 1; step <= options.max_steps; ++step) {
    const int layers_per_step = spec.krylov_same_unitary_mode ? 2 : 1;
    for (int l = 0; l < layers_per_step; ++l) circuit_step(state, spec, ++layer, streams);

    const DensityMatrix sys = reduced_system_state(state);
    ComplexMatrix w;
    if (options.order == RenormalizationOrder::RemoveTraceThenNormalize) {
      w = traceless_part(sys.matrix());
      result.raw_norms.push_back(hs_norm(w) / norm0);
      const double nrm = hs_norm(w);
      if (nrm < 1e-300) throw std::runtime_error("trajectory lost its traceless part");
      w /= nrm;
    } else {
      ComplexMatrix scaled = sys.matrix() / hs_norm(sys.matrix());
      w = traceless_part(scaled);
      result.raw_norms.push_back(hs_norm(traceless_part(sys.matrix())) / norm0);
    }

    if (basis.size() < max_dim) {
      ComplexMatrix r = w;
      const double residual = basis.orthogonalize(r) / hs_norm(w);
      if (residual > options.tolerance) {
        basis.append(r);
        stalled = 0;
      } else {
        ++stalled;
      }
    } else {
      ++stalled;
    }

    double mass = 0.0;
    result.complexity.push_back(complexity_of(basis.coefficients(w), &mass));
    result.coefficient_norms.push_back(mass / std::pow(hs_norm(w), 2));
    result.dimension_history.push_back(static_cast<int>(basis.size()));
    if (!options.fixed_steps && stalled >= options.stall_window) break;
  }
  result.dimension = static_cast<int>(basis.size());
  if (options.check_gram) result.gram_deviation = basis.gram_deviation();
  return result;
}

std::vector<std::pair<int, double>> complexity_series(const KrylovResult& result) {
  std::vector<std::pair<int, double>> out;
  out.reserve(result.complexity.size());
  for (std::size_t t = 0; t < result.complexity.size(); ++t) {
    out.emplace_back(static_cast<int>(t), result.complexity[t]);
  }
  return out;
}

} // namespace orqc
