#include "orqc/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "orqc/ensemble.hpp"
#include "orqc/krylov.hpp"
#include "orqc/magic.hpp"
#include "orqc/random.hpp"
#include "orqc/resources.hpp"

namespace orqc::oracle {

namespace {

using Dense = Eigen::MatrixXcd;

// P with P|x> = |y>, where y lists the bits of `front` first (in the given
// order) followed by the remaining qubits in ascending order.
Dense front_permutation(std::span<const int> front, int n) {
  std::vector<int> order(front.begin(), front.end());
  for (int q = 0; q < n; ++q) {
    if (std::find(front.begin(), front.end(), q) == front.end()) order.push_back(q);
  }
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  Dense p = Dense::Zero(d, d);
  for (Eigen::Index x = 0; x < d; ++x) {
    Eigen::Index y = 0;
    for (int pos = 0; pos < n; ++pos) {
      const auto bit = (x >> (n - 1 - order[static_cast<std::size_t>(pos)])) & 1;
      y = (y << 1) | bit;
    }
    p(y, x) = 1.0;
  }
  return p;
}

Dense to_dense(const ComplexMatrix& m) { return Dense(m); }

double max_abs(const Dense& a, const Dense& b) { return (a - b).cwiseAbs().maxCoeff(); }

Dense pauli_letter(int letter) {
  Dense m(2, 2);
  const Complex i(0.0, 1.0);
  switch (letter) {
    case 0: m << 1.0, 0.0, 0.0, 1.0; break;
    case 1: m << 0.0, 1.0, 1.0, 0.0; break;
    case 2: m << 0.0, -i, i, 0.0; break;
    default: m << 1.0, 0.0, 0.0, -1.0; break;
  }
  return m;
}

int letter_at(std::size_t index, int q, int n) {
  return static_cast<int>((index >> (2 * (n - 1 - q))) & 3U);
}

OracleReport report(std::string name, std::string instance, double deviation, double tol) {
  const bool ok = std::isfinite(deviation) && deviation <= tol;
  return {std::move(name), std::move(instance), std::abs(deviation), tol, ok};
}

RandomStream oracle_stream(std::uint64_t id) {
  return RandomStream(SeedHierarchy{0x0a0c1e5eedULL, id, StreamLabel::Measurement});
}

ComplexMatrix bell_matrix() {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = m(0, 3) = m(3, 0) = m(3, 3) = 0.5;
  return m;
}

template <typename F>
OracleReport guarded(const std::string& name, const std::string& instance, double tol, F&& f) {
  try {
    return report(name, instance, f(), tol);
  } catch (const std::exception& e) {
    OracleReport r{name, instance + " [error: " + e.what() + "]", 0.0, tol, false};
    return r;
  }
}

} // namespace

ComplexMatrix embed_gate(const ComplexMatrix& gate, std::span<const int> targets, int n) {
  const auto rest = static_cast<Eigen::Index>(dim_of(n - static_cast<int>(targets.size())));
  const Dense g = to_dense(gate);
  Dense padded = Dense::Zero(g.rows() * rest, g.cols() * rest);
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      padded.block(i * rest, j * rest, rest, rest) = g(i, j) * Dense::Identity(rest, rest);
    }
  }
  const Dense p = front_permutation(targets, n);
  return p.adjoint() * padded * p;
}

ComplexMatrix conjugate_dense(const ComplexMatrix& rho, const ComplexMatrix& gate,
                              std::span<const int> targets, int n) {
  const Dense u = to_dense(embed_gate(gate, targets, n));
  return u * to_dense(rho) * u.adjoint();
}

ComplexMatrix partial_trace_dense(const ComplexMatrix& rho, int n, std::span<const int> keep) {
  const Dense p = front_permutation(keep, n);
  const Dense moved = p * to_dense(rho) * p.adjoint();
  const auto dk = static_cast<Eigen::Index>(dim_of(static_cast<int>(keep.size())));
  const auto db = static_cast<Eigen::Index>(dim_of(n)) / dk;
  Dense out = Dense::Zero(dk, dk);
  for (Eigen::Index b = 0; b < db; ++b) {
    Dense iso = Dense::Zero(dk * db, dk);
    for (Eigen::Index i = 0; i < dk; ++i) iso(i * db + b, i) = 1.0;
    out += iso.adjoint() * moved * iso;
  }
  return out;
}

ComplexMatrix pauli_string(std::size_t index, int n) {
  Dense m = Dense::Identity(1, 1);
  for (int q = 0; q < n; ++q) {
    const Dense l = pauli_letter(letter_at(index, q, n));
    Dense next(m.rows() * 2, m.cols() * 2);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = m(i, j) * l;
    }
    m = std::move(next);
  }
  return m;
}

std::vector<double> pauli_spectrum_dense(const ComplexMatrix& rho, int n) {
  const std::size_t count = std::size_t{1} << (2 * n);
  std::vector<double> out(count);
  const Dense r = to_dense(rho);
  for (std::size_t p = 0; p < count; ++p) {
    out[p] = (to_dense(pauli_string(p, n)) * r).trace().real();
  }
  return out;
}

double sre2_dense(const ComplexMatrix& rho, int n) {
  const auto c = pauli_spectrum_dense(rho, n);
  const double d = static_cast<double>(dim_of(n));
  double s2 = 0.0;
  double s4 = 0.0;
  for (double x : c) {
    s2 += x * x;
    s4 += x * x * x * x;
  }
  return -std::log2(s4 / d) + std::log2(s2 / d);
}

ComplexMatrix partial_transpose_pauli(const ComplexMatrix& rho, int n,
                                      std::span<const int> transposed) {
  const auto c = pauli_spectrum_dense(rho, n);
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  Dense out = Dense::Zero(d, d);
  for (std::size_t p = 0; p < c.size(); ++p) {
    if (c[p] == 0.0) continue;
    int ys = 0;
    for (int q : transposed) ys += letter_at(p, q, n) == 2 ? 1 : 0;
    const double sign = ys % 2 == 0 ? 1.0 : -1.0;
    out += (sign * c[p] / static_cast<double>(d)) * to_dense(pauli_string(p, n));
  }
  return out;
}

GramKrylov krylov_from_gram(const std::vector<ComplexMatrix>& trajectory, double accept) {
  const auto m = static_cast<Eigen::Index>(trajectory.size());
  const double dim = static_cast<double>(trajectory.front().rows());
  Dense gram(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      gram(i, j) = (to_dense(trajectory[static_cast<std::size_t>(i)]).adjoint() *
                    to_dense(trajectory[static_cast<std::size_t>(j)]))
                       .trace() /
                   dim;
    }
  }

  GramKrylov out;
  std::vector<Eigen::Index> accepted;
  auto block = [&] {
    const auto k = static_cast<Eigen::Index>(accepted.size());
    Dense g(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
      for (Eigen::Index b = 0; b < k; ++b) g(a, b) = gram(accepted[a], accepted[b]);
    }
    return g;
  };
  auto column = [&](Eigen::Index t) {
    Eigen::VectorXcd g(static_cast<Eigen::Index>(accepted.size()));
    for (Eigen::Index a = 0; a < g.size(); ++a) g(a) = gram(accepted[a], t);
    return g;
  };

  for (Eigen::Index t = 0; t < m; ++t) {
    const double self = gram(t, t).real();
    double projected = 0.0;
    if (!accepted.empty()) {
      const Dense g_s = block();
      const Eigen::VectorXcd g = column(t);
      Eigen::SelfAdjointEigenSolver<Dense> eig(g_s);
      const auto& vals = eig.eigenvalues();
      const Dense& vecs = eig.eigenvectors();
      const Eigen::VectorXcd proj = vecs.adjoint() * g;
      for (Eigen::Index i = 0; i < vals.size(); ++i) {
        if (vals(i) > 1e-12 * vals.maxCoeff()) projected += std::norm(proj(i)) / vals(i);
      }
    }
    if (self - projected > accept * self) accepted.push_back(t);

    const Dense g_s = block();
    const Eigen::VectorXcd g = column(t);
    const Eigen::LLT<Dense> llt(g_s);
    const Eigen::VectorXcd phi = llt.matrixL().solve(g);
    double mass = 0.0;
    double weighted = 0.0;
    for (Eigen::Index i = 0; i < phi.size(); ++i) {
      mass += std::norm(phi(i));
      weighted += static_cast<double>(i) * std::norm(phi(i));
    }
    out.complexity.push_back(mass > 0.0 ? weighted / mass : 0.0);
  }
  out.dimension = static_cast<int>(accepted.size());
  return out;
}

std::vector<ComplexMatrix> ruc_trajectory_dense(const CircuitSpec& spec,
                                                const DensityMatrix& initial, int steps,
                                                CircuitStreams& streams) {
  if (spec.circuit != CircuitClass::RUC) {
    throw std::invalid_argument("dense trajectory oracle covers RUC only");
  }
  const int n = spec.n_system;
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  auto traceless = [&](const Dense& rho) {
    Dense w = rho - (rho.trace() / static_cast<double>(d)) * Dense::Identity(d, d);
    return Dense(w / std::sqrt(w.squaredNorm() / static_cast<double>(d)));
  };
  Dense rho = to_dense(initial.matrix());
  std::vector<ComplexMatrix> out{traceless(rho)};
  int layer = 0;
  const int layers_per_step = spec.krylov_same_unitary_mode ? 2 : 1;
  for (int t = 1; t <= steps; ++t) {
    for (int l = 0; l < layers_per_step; ++l) {
      const LayerPlan plan = layer_plan(spec, ++layer);
      for (std::size_t s = 0; s < plan.slots.size(); ++s) {
        const std::array<int, 2> pair = plan.slots[s].pair;
        rho = to_dense(conjugate_dense(rho, streams.gate(spec, plan.odd, s, 4), pair, n));
      }
    }
    out.push_back(traceless(rho));
  }
  return out;
}

std::vector<OracleReport> run_all_oracles() {
  std::vector<OracleReport> out;

  out.push_back(guarded("gate-embedding", "5 qubits, 3-qubit Haar gate on (3, 0, 2)", 1e-10, [] {
    auto s = oracle_stream(1);
    const DensityMatrix rho = hs_random_density(5, s);
    const ComplexMatrix u = haar_unitary(8, s);
    const std::vector<int> targets{3, 0, 2};
    const DensityMatrix fast = apply_gate(rho, u, QubitSubset(targets, 5));
    return max_abs(fast.matrix(), conjugate_dense(rho.matrix(), u, targets, 5));
  }));

  out.push_back(guarded("gate-embedding", "6 qubits, 2-qubit Haar gate on (5, 1)", 1e-10, [] {
    auto s = oracle_stream(2);
    const DensityMatrix rho = hs_random_density(6, s);
    const ComplexMatrix u = haar_unitary(4, s);
    const std::vector<int> targets{5, 1};
    const DensityMatrix fast = apply_gate(rho, u, QubitSubset(targets, 6));
    return max_abs(fast.matrix(), conjugate_dense(rho.matrix(), u, targets, 6));
  }));

  out.push_back(guarded("partial-trace", "5 qubits, keep (3, 1)", 1e-12, [] {
    auto s = oracle_stream(3);
    const DensityMatrix rho = hs_random_density(5, s);
    const std::vector<int> keep{3, 1};
    return max_abs(partial_trace(rho, QubitSubset(keep, 5)).matrix(),
                   partial_trace_dense(rho.matrix(), 5, keep));
  }));

  out.push_back(guarded("pauli-spectrum", "3 qubits, explicit 64-matrix enumeration", 1e-10, [] {
    auto s = oracle_stream(4);
    const DensityMatrix rho = hs_random_density(3, s);
    const auto fast = pauli_spectrum(rho).coefficients;
    const auto slow = pauli_spectrum_dense(rho.matrix(), 3);
    double dev = 0.0;
    for (std::size_t p = 0; p < slow.size(); ++p) dev = std::max(dev, std::abs(fast[p] - slow[p]));
    return dev;
  }));

  out.push_back(guarded("sre2", "3 qubits, HS-random mixed state", 1e-10, [] {
    auto s = oracle_stream(5);
    const DensityMatrix rho = hs_random_density(3, s);
    return std::abs(sre2(rho).magic - sre2_dense(rho.matrix(), 3));
  }));

  out.push_back(guarded("sre2", "T state log2(4/3)", 1e-9, [] {
    Eigen::VectorXcd psi(2);
    psi << 1.0, std::polar(1.0, std::numbers::pi / 4.0);
    psi /= std::sqrt(2.0);
    return std::abs(sre2(DensityMatrix::from_pure(psi)).magic - std::log2(4.0 / 3.0));
  }));

  out.push_back(guarded("sre2", "stabilizer and maximally mixed states are magic-free", 1e-12,
                        [] {
                          Eigen::VectorXcd bell = Eigen::VectorXcd::Zero(4);
                          bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
                          return std::max({std::abs(sre2(DensityMatrix::from_pure(bell)).magic),
                                           std::abs(sre2(DensityMatrix::basis_state(3, 5)).magic),
                                           std::abs(sre2(DensityMatrix::maximally_mixed(4)).magic)});
                        }));

  out.push_back(guarded("partial-transpose", "3 qubits, transpose (1, 2) via Y-sign flips",
                        1e-10, [] {
                          auto s = oracle_stream(6);
                          const DensityMatrix rho = hs_random_density(3, s);
                          const std::vector<int> b{1, 2};
                          return max_abs(partial_transpose(rho, QubitSubset(b, 3)),
                                         partial_transpose_pauli(rho.matrix(), 3, b));
                        }));

  out.push_back(guarded("log-negativity", "Bell state = log2(1.5)", 1e-12, [] {
    Eigen::VectorXcd bell = Eigen::VectorXcd::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    const auto rho = DensityMatrix::from_pure(bell);
    return std::abs(log_negativity(rho, Bipartition::split(QubitSubset({0}, 2))) -
                    std::log2(1.5));
  }));

  out.push_back(guarded("hs-purity", "5000 two-qubit draws, mean vs 8/17", 0.01, [] {
    auto s = oracle_stream(7);
    double sum = 0.0;
    for (int i = 0; i < 5000; ++i) sum += hs_random_density(2, s).purity();
    return std::abs(sum / 5000.0 - 8.0 / 17.0);
  }));

  out.push_back(guarded("haar-unitary", "4000 U(4) draws, E|U_00|^2 and E|U_00|^4", 0.01, [] {
    auto s = oracle_stream(8);
    double m2 = 0.0;
    double m4 = 0.0;
    for (int i = 0; i < 4000; ++i) {
      const double a = std::norm(haar_unitary(4, s)(0, 0));
      m2 += a;
      m4 += a * a;
    }
    return std::max(std::abs(m2 / 4000.0 - 0.25), std::abs(m4 / 4000.0 - 0.1));
  }));

  for (int k = 2; k <= 3; ++k) {
    out.push_back(guarded("haar-moment",
                          "20000 Haar qubit states, k = " + std::to_string(k) +
                              " moment vs symmetric projector",
                          0.01, [k] {
                            auto s = oracle_stream(9 + static_cast<std::uint64_t>(k));
                            const auto dk = static_cast<Eigen::Index>(1) << k;
                            Dense acc = Dense::Zero(dk, dk);
                            for (int i = 0; i < 20000; ++i) {
                              const Dense psi = to_dense(haar_pure_state(1, s).matrix());
                              Dense p = psi;
                              for (int j = 1; j < k; ++j) p = to_dense(kron(p, psi));
                              acc += p;
                            }
                            acc /= 20000.0;
                            return max_abs(acc, to_dense(haar_moment(2, k)));
                          }));
  }

  out.push_back(guarded("haar-moment", "d = 4, k = 2 against (I + SWAP) / (d (d + 1))", 1e-12,
                        [] {
                          const Eigen::Index d = 4;
                          Dense swap = Dense::Zero(d * d, d * d);
                          for (Eigen::Index i = 0; i < d; ++i) {
                            for (Eigen::Index j = 0; j < d; ++j) swap(j * d + i, i * d + j) = 1.0;
                          }
                          const Dense expected =
                              (Dense::Identity(d * d, d * d) + swap) / static_cast<double>(d * (d + 1));
                          return max_abs(haar_moment(4, 2), expected);
                        }));

  for (const bool same : {false, true}) {
    out.push_back(guarded(
        "krylov-gram",
        std::string("n_system = 2 RUC, 40 steps") + (same ? ", same-unitary mode" : ""), 1e-8,
        [same] {
          CircuitSpec spec;
          spec.circuit = CircuitClass::RUC;
          spec.n_system = 2;
          spec.krylov_same_unitary_mode = same;
          auto init_stream = oracle_stream(20 + (same ? 1U : 0U));
          const DensityMatrix rho0 = hs_random_density(2, init_stream);
          const int steps = 40;

          CircuitStreams dense_streams(77, same ? 1 : 0);
          const auto traj = ruc_trajectory_dense(spec, rho0, steps, dense_streams);
          const GramKrylov ref = krylov_from_gram(traj);

          CircuitStreams fast_streams(77, same ? 1 : 0);
          KrylovOptions opt;
          opt.max_steps = steps;
          opt.fixed_steps = true;
          const KrylovResult fast = krylov_run(spec, rho0, opt, fast_streams);

          double dev = std::abs(fast.dimension - ref.dimension);
          for (std::size_t t = 0; t < ref.complexity.size(); ++t) {
            dev = std::max(dev, std::abs(fast.complexity[t] - ref.complexity[t]));
          }
          return dev;
        }));
  }

  out.push_back(guarded("variance-merge", "1000 samples, 7 shards merged out of order, two-pass reference",
                        1e-12, [] {
                          auto s = oracle_stream(30);
                          std::vector<double> xs(1000);
                          for (auto& x : xs) x = 3.0 + s.normal() * 0.7;
                          const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / 1000.0;
                          double var = 0.0;
                          for (double x : xs) var += (x - mean) * (x - mean);
                          var /= 1000.0;
                          std::vector<Fluctuation> shards(7);
                          for (std::size_t i = 0; i < xs.size(); ++i) shards[i % 7].add(xs[i]);
                          Fluctuation merged;
                          for (int i : {4, 0, 6, 2, 5, 1, 3}) merged.merge(shards[static_cast<std::size_t>(i)]);
                          return std::max(std::abs(merged.mean() - mean), std::abs(merged.variance() - var));
                        }));

  out.push_back(guarded("gate-embedding", "5 qubits, 3-qubit Haar gate on (1, 3, 4)", 1e-10, [] {
    auto s = oracle_stream(31);
    const DensityMatrix rho = hs_random_density(5, s);
    const ComplexMatrix u = haar_unitary(8, s);
    const std::vector<int> targets{1, 3, 4};
    const DensityMatrix fast = apply_gate(rho, u, QubitSubset(targets, 5));
    return max_abs(fast.matrix(), conjugate_dense(rho.matrix(), u, targets, 5));
  }));

  out.push_back(guarded("partial-trace", "Bell state, one qubit traced = I/2", 1e-15, [] {
    const ComplexMatrix half = partial_trace(bell_matrix(), 2, std::vector<int>{0});
    return max_abs(half, Dense::Identity(2, 2) / 2.0);
  }));

  out.push_back(guarded("partial-transpose", "Bell state spectrum {-1/2, 1/2, 1/2, 1/2}", 1e-12, [] {
    const DensityMatrix bell = DensityMatrix::from_trusted(bell_matrix());
    const RealVector ev = hermitian_eigenvalues(partial_transpose(bell, QubitSubset({1}, 2)));
    const double expected[] = {-0.5, 0.5, 0.5, 0.5};
    double dev = 0.0;
    for (std::size_t i = 0; i < 4; ++i) dev = std::max(dev, std::abs(ev[i] - expected[i]));
    return dev;
  }));

  out.push_back(guarded("entropy", "diag(3/4, 1/4): closed-form von Neumann and Renyi-2", 1e-12, [] {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 0.75;
    m(1, 1) = 0.25;
    const DensityMatrix rho(m);
    const double vn = -(0.75 * std::log2(0.75) + 0.25 * std::log2(0.25));
    const double r2 = -std::log2(0.75 * 0.75 + 0.25 * 0.25);
    return std::max(std::abs(vn_entropy(rho) - vn), std::abs(renyi2_entropy(rho) - r2));
  }));

  out.push_back(guarded("mutual-information",
                        "GHZ(3) 1:2 split = 2 (pure), its two-qubit marginal = 1", 1e-10, [] {
                          Eigen::VectorXcd ghz = Eigen::VectorXcd::Zero(8);
                          ghz(0) = ghz(7) = 1.0 / std::sqrt(2.0);
                          const DensityMatrix rho = DensityMatrix::from_pure(ghz);
                          const double full =
                              mutual_information(rho, Bipartition::split(QubitSubset({0}, 3)));
                          // Tr_3 GHZ = (|00><00| + |11><11|) / 2: S_A = S_B = S_AB = 1.
                          ComplexMatrix pair = ComplexMatrix::Zero(4, 4);
                          pair(0, 0) = pair(3, 3) = 0.5;
                          const double marginal = mutual_information(
                              DensityMatrix(pair), Bipartition::split(QubitSubset({0}, 2)));
                          return std::max(std::abs(full - 2.0), std::abs(marginal - 1.0));
                        }));

  out.push_back(guarded("haar-unitary", "5000 U(4) draws, mean U rho U^dagger vs I/4", 0.02, [] {
    auto s = oracle_stream(32);
    Dense rho = Dense::Zero(4, 4);
    rho(1, 1) = 1.0;
    Dense acc = Dense::Zero(4, 4);
    for (int i = 0; i < 5000; ++i) {
      const Dense u = to_dense(haar_unitary(4, s));
      acc += u * rho * u.adjoint();
    }
    return max_abs(acc / 5000.0, Dense::Identity(4, 4) / 4.0);
  }));

  out.push_back(guarded("haar-unitary", "5000 U(2) draws, E|U_00|^4 vs 1/3", 0.02, [] {
    auto s = oracle_stream(33);
    double m4 = 0.0;
    for (int i = 0; i < 5000; ++i) m4 += std::pow(std::norm(haar_unitary(2, s)(0, 0)), 2);
    return std::abs(m4 / 5000.0 - 1.0 / 3.0);
  }));

  out.push_back(guarded("haar-state", "5000 qubit draws, mean Bloch vector vs 0", 0.03, [] {
    auto s = oracle_stream(34);
    double b[3] = {0.0, 0.0, 0.0};
    for (int i = 0; i < 5000; ++i) {
      const Dense psi = to_dense(haar_pure_state(1, s).matrix());
      for (int a = 0; a < 3; ++a) b[a] += (pauli_letter(a + 1) * psi).trace().real();
    }
    return std::max({std::abs(b[0]), std::abs(b[1]), std::abs(b[2])}) / 5000.0;
  }));

  out.push_back(guarded("coin", "10000 tosses, heads frequency vs 1/2", 0.02, [] {
    auto s = oracle_stream(35);
    int heads = 0;
    for (int i = 0; i < 10000; ++i) heads += coin_toss(s) == Coin::Heads ? 1 : 0;
    return std::abs(heads / 10000.0 - 0.5);
  }));

  out.push_back(guarded("mlorc-dilation", "n_system = 2, E = 1, explicit 3-qubit dilation", 1e-12, [] {
    CircuitSpec spec;
    spec.circuit = CircuitClass::MLORC;
    spec.n_system = 2;
    spec.exposure = 1;
    auto init = oracle_stream(36);
    const DensityMatrix rho0 = haar_pure_state(2, init);
    CircuitStreams fast_streams(36, 0);
    FullState state = make_full_state(spec, rho0, fast_streams);
    mlorc_step(state, spec, 1, fast_streams);

    CircuitStreams ref(36, 0);
    const DensityMatrix aux = ref.auxiliary_state(spec, true, 0);
    const ComplexMatrix gate = ref.gate(spec, true, 0, 8);
    const ComplexMatrix ext =
        conjugate_dense(kron(rho0, aux).matrix(), gate, std::vector<int>{0, 1, 2}, 3);
    return max_abs(state.rho.matrix(), partial_trace_dense(ext, 3, std::vector<int>{0, 1}));
  }));

  out.push_back(guarded("mlorc-dilation", "n_system = 4, E = 2, whole-layer dilation on 6 qubits",
                        1e-12, [] {
                          CircuitSpec spec;
                          spec.circuit = CircuitClass::MLORC;
                          spec.n_system = 4;
                          spec.exposure = 2;
                          auto init = oracle_stream(37);
                          const DensityMatrix rho0 = hs_random_density(4, init);
                          CircuitStreams fast_streams(37, 0);
                          FullState state = make_full_state(spec, rho0, fast_streams);
                          mlorc_step(state, spec, 1, fast_streams);

                          CircuitStreams ref(37, 0);
                          const DensityMatrix a0 = ref.auxiliary_state(spec, true, 0);
                          const ComplexMatrix g0 = ref.gate(spec, true, 0, 8);
                          const DensityMatrix a1 = ref.auxiliary_state(spec, true, 1);
                          const ComplexMatrix g1 = ref.gate(spec, true, 1, 8);
                          const Dense u = to_dense(embed_gate(g0, std::vector<int>{0, 1, 4}, 6)) *
                                          to_dense(embed_gate(g1, std::vector<int>{2, 3, 5}, 6));
                          const Dense big = to_dense(kron(kron(rho0, a0), a1).matrix());
                          const ComplexMatrix ext = u * big * u.adjoint();
                          return max_abs(state.rho.matrix(),
                                         partial_trace_dense(ext, 6, std::vector<int>{0, 1, 2, 3}));
                        }));

  out.push_back(guarded("first-step", "n_system = 2, 4000 runs, MLORC vs MFORC mean system purity",
                        0.02, [] {
                          double ml = 0.0;
                          double mf = 0.0;
                          for (std::uint64_t r = 0; r < 4000; ++r) {
                            CircuitSpec a;
                            a.circuit = CircuitClass::MLORC;
                            a.n_system = 2;
                            a.exposure = 1;
                            CircuitSpec b = a;
                            b.circuit = CircuitClass::MFORC;
                            b.exposure = 0;
                            const DensityMatrix zero = DensityMatrix::basis_state(2, 0);
                            CircuitStreams sa(38, r);
                            CircuitStreams sb(39, r);
                            FullState fa = make_full_state(a, zero, sa);
                            FullState fb = make_full_state(b, zero, sb);
                            mlorc_step(fa, a, 1, sa);
                            mforc_step(fb, b, 1, sb);
                            ml += fa.rho.purity();
                            const ComplexMatrix sys =
                                partial_trace_dense(fb.rho.matrix(), 3, std::vector<int>{0, 1});
                            mf += (sys * sys).trace().real();
                          }
                          return std::abs(ml - mf) / 4000.0;
                        }));

  out.push_back(guarded("haar-twirl", "n_system = 4 RUC, 400 runs x 4 steps, marginal vs I/2", 0.05,
                        [] {
                          CircuitSpec spec;
                          spec.n_system = 4;
                          Dense acc = Dense::Zero(2, 2);
                          for (std::uint64_t r = 0; r < 400; ++r) {
                            CircuitStreams streams(40, r);
                            FullState st = make_full_state(spec, DensityMatrix::basis_state(4, 0), streams);
                            for (int t = 1; t <= 4; ++t) ruc_step(st, spec, t, streams);
                            acc += to_dense(partial_trace_dense(st.rho.matrix(), 4, std::vector<int>{2}));
                          }
                          return max_abs(acc / 400.0, Dense::Identity(2, 2) / 2.0);
                        }));

  out.push_back(guarded("hs-inner", "random 8x8 pair against a double loop", 1e-13, [] {
    auto s = oracle_stream(41);
    const ComplexMatrix a = ginibre(8, 8, s);
    const ComplexMatrix b = ginibre(8, 8, s);
    Complex direct = 0.0;
    for (Eigen::Index i = 0; i < 8; ++i) {
      for (Eigen::Index j = 0; j < 8; ++j) direct += std::conj(a(i, j)) * b(i, j);
    }
    return std::abs(hs_inner(a, b) - direct / 8.0);
  }));

  out.push_back(guarded("prepare-initial", "|0><0| maps to Z with unit norm", 1e-14, [] {
    return max_abs(prepare_initial(DensityMatrix::basis_state(1, 0)), pauli_letter(3));
  }));

  out.push_back(guarded("projected-ensemble", "Bell state, A = qubit 0: p = 1/2, |0><0| and |1><1|",
                        1e-14, [] {
                          const ProjectedEnsemble ens = build_projected_ensemble(
                              DensityMatrix::from_trusted(bell_matrix()), QubitSubset({0}, 2));
                          if (ens.members.size() != 2) return 1.0;
                          double dev = 0.0;
                          for (std::size_t b = 0; b < 2; ++b) {
                            Dense expected = Dense::Zero(2, 2);
                            expected(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)) = 1.0;
                            dev = std::max({dev, std::abs(ens.members[b].probability - 0.5),
                                            max_abs(ens.members[b].state.matrix(), expected)});
                          }
                          return dev;
                        }));

  out.push_back(guarded("projected-ensemble", "4 qubits, first moment vs reduced state", 1e-13, [] {
    auto s = oracle_stream(42);
    const DensityMatrix rho = hs_random_density(4, s);
    const std::vector<int> a{1, 3};
    const ComplexMatrix m1 = kth_moment(build_projected_ensemble(rho, QubitSubset(a, 4)), 1);
    return max_abs(m1, partial_trace_dense(rho.matrix(), 4, a));
  }));

  out.push_back(guarded("symmetric-projector",
                        "rank of Pi_2 (d = 2) = 3; rank of Pi_k (d = 4) = C(k + 3, k) for k = 1..3", 0.0,
                        [] {
                          auto rank = [](std::size_t d, int k) {
                            const RealVector ev = hermitian_eigenvalues(haar_moment(d, k));
                            return static_cast<double>(
                                std::count_if(ev.begin(), ev.end(), [](double x) { return x > 1e-9; }));
                          };
                          double dev = std::abs(rank(2, 2) - 3.0);
                          double binom = 1.0;
                          for (int k = 1; k <= 3; ++k) {
                            binom = binom * (3.0 + k) / k;
                            dev = std::max(dev, std::abs(rank(4, k) - binom));
                          }
                          return dev;
                        }));

  out.push_back(guarded("design-distance", "|0><0|, d = 2, k = 1: eigenvalues +-1/2 give 1/2", 1e-14,
                        [] {
                          ProjectedEnsemble ens;
                          ens.n_qubits_a = 1;
                          ens.members.push_back({1.0, DensityMatrix::basis_state(1, 0)});
                          return std::abs(design_distance(ens, 1) - 0.5);
                        }));

  return out;
}

std::string format_report(const std::vector<OracleReport>& reports) {
  std::ostringstream os;
  int failed = 0;
  for (const auto& r : reports) {
    char dev[32];
    char tol[32];
    std::snprintf(dev, sizeof(dev), "%.3e", r.deviation);
    std::snprintf(tol, sizeof(tol), "%.1e", r.tolerance);
    os << (r.passed ? "PASS " : "FAIL ") << r.name << " [" << r.instance << "] deviation " << dev
       << " (tolerance " << tol << ")\n";
    failed += r.passed ? 0 : 1;
  }
  os << reports.size() - static_cast<std::size_t>(failed) << "/" << reports.size()
     << " oracles passed\n";
  return os.str();
}

} // namespace orqc::oracle
