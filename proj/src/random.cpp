#include "orqc/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace orqc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

} // namespace

std::string_view to_string(StreamLabel label) {
  switch (label) {
    case StreamLabel::Gates: return "gates";
    case StreamLabel::InitialState: return "initial_state";
    case StreamLabel::Auxiliaries: return "auxiliaries";
    case StreamLabel::Coin: return "coin";
    case StreamLabel::Measurement: return "measurement";
  }
  return "unknown";
}

std::uint64_t SeedHierarchy::derived_seed() const {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ realization_index);
  h = splitmix64(h ^ (static_cast<std::uint64_t>(label) + 1));
  return h;
}

RandomStream::RandomStream(const SeedHierarchy& seeds) : seeds_(seeds) {
  const std::uint64_t s = seeds.derived_seed();
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
  engine_.seed(seq);
}

std::uint64_t RandomStream::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("empty range");
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
}

ComplexMatrix ginibre(std::size_t rows, std::size_t cols, RandomStream& stream) {
  ComplexMatrix g(rows, cols);
  const double s = std::numbers::sqrt2 / 2.0;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double re = stream.normal();
      const double im = stream.normal();
      g(i, j) = Complex(re * s, im * s);
    }
  }
  return g;
}

ComplexMatrix haar_unitary(std::size_t dim, RandomStream& stream) {
  if (dim == 0) throw std::invalid_argument("haar_unitary: dimension must be positive");
  const Eigen::MatrixXcd z = ginibre(dim, dim, stream);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const auto& r = qr.matrixQR();
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    const Complex rii = r(i, i);
    const double a = std::abs(rii);
    q.col(i) *= (a > 0.0 ? rii / a : Complex(1.0));
  }
  return q;
}

DensityMatrix haar_pure_state(int n_qubits, RandomStream& stream) {
  const auto d = dim_of(n_qubits);
  Eigen::VectorXcd psi(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double re = stream.normal();
    const double im = stream.normal();
    psi(i) = Complex(re, im);
  }
  return DensityMatrix::from_pure(psi);
}

DensityMatrix hs_random_density(int n_qubits, RandomStream& stream) {
  const auto d = dim_of(n_qubits);
  const ComplexMatrix g = ginibre(d, d, stream);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  // Symmetrize away rounding so downstream Hermiticity checks see an exact copy.
  rho = (0.5 * (rho + rho.adjoint())).eval();
  return DensityMatrix::from_trusted(std::move(rho));
}

ComplexMatrix CliffordDraw::pair_unitary() const {
  ComplexMatrix one = ComplexMatrix::Identity(2, 2);
  switch (gate) {
    case CliffordGate::Identity: return ComplexMatrix::Identity(4, 4);
    case CliffordGate::ControlledNot: {
      ComplexMatrix cx = ComplexMatrix::Zero(4, 4);
      cx(0, 0) = cx(1, 1) = cx(2, 3) = cx(3, 2) = 1.0;
      return cx;
    }
    case CliffordGate::Hadamard:
      one << 1.0, 1.0, 1.0, -1.0;
      one *= std::numbers::sqrt2 / 2.0;
      break;
    case CliffordGate::PhasePiOver4:
      one(1, 1) = std::polar(1.0, std::numbers::pi / 4.0);
      break;
  }
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  if (!target) throw std::logic_error("single-qubit Clifford draw without a target");
  return *target == TargetChoice::First ? kron(one, id) : kron(id, one);
}

CliffordDraw draw_clifford(RandomStream& stream) {
  CliffordDraw draw;
  draw.gate = static_cast<CliffordGate>(stream.below(4));
  if (draw.gate == CliffordGate::Hadamard || draw.gate == CliffordGate::PhasePiOver4) {
    draw.target = stream.below(2) == 0 ? TargetChoice::First : TargetChoice::Second;
  }
  return draw;
}

DensityMatrix magic_free_pair_state(const CliffordDraw& clifford,
                                    const std::array<double, 4>& weights) {
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("negative mixture weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("weights must sum to 1");
  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) rho(i, i) = weights[static_cast<std::size_t>(i)];
  const ComplexMatrix u = clifford.pair_unitary();
  rho = (u * rho * u.adjoint()).eval();
  return DensityMatrix::from_trusted(std::move(rho));
}

DensityMatrix magic_free_pair_state(RandomStream& stream, WeightSampling sampling) {
  std::array<double, 4> w{};
  if (sampling == WeightSampling::Vertex) {
    w[stream.below(4)] = 1.0;
  } else {
    double total = 0.0;
    for (double& x : w) total += (x = stream.exponential());
    for (double& x : w) x /= total;
  }
  return magic_free_pair_state(draw_clifford(stream), w);
}

Coin coin_toss(RandomStream& stream) {
  return (stream.engine()() >> 63) == 0 ? Coin::Heads : Coin::Tails;
}

} // namespace orqc
