#pragma once

// Every random draw in the simulator goes through a RandomStream derived from
// (master seed, realization index, stream label). Streams are plain values.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>

#include "orqc/linalg.hpp"

namespace orqc {

enum class StreamLabel : std::uint8_t { Gates, InitialState, Auxiliaries, Coin, Measurement };

std::string_view to_string(StreamLabel label);

struct SeedHierarchy {
  std::uint64_t master_seed = 0;
  std::uint64_t realization_index = 0;
  StreamLabel label = StreamLabel::Gates;

  /// 64-bit seed for this (master, realization, label) triple.
  std::uint64_t derived_seed() const;
};

class RandomStream {
public:
  explicit RandomStream(const SeedHierarchy& seeds);

  const SeedHierarchy& seeds() const { return seeds_; }
  std::mt19937_64& engine() { return engine_; }

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  double exponential() { return exponential_(engine_); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

private:
  SeedHierarchy seeds_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::exponential_distribution<double> exponential_{1.0};
};

/// rows x cols matrix of i.i.d. standard complex normals, E|z|^2 = 1.
ComplexMatrix ginibre(std::size_t rows, std::size_t cols, RandomStream& stream);

/// Haar-distributed U(dim): Ginibre, QR, then Q diag(r_ii / |r_ii|).
ComplexMatrix haar_unitary(std::size_t dim, RandomStream& stream);

DensityMatrix haar_pure_state(int n_qubits, RandomStream& stream);

/// Hilbert-Schmidt random density matrix G G^dagger / Tr(G G^dagger), G square.
DensityMatrix hs_random_density(int n_qubits, RandomStream& stream);

enum class CliffordGate : std::uint8_t { Identity, Hadamard, PhasePiOver4, ControlledNot };
enum class TargetChoice : std::uint8_t { First, Second };

struct CliffordDraw {
  CliffordGate gate = CliffordGate::Identity;
  /// Present iff `gate` is a single-qubit gate.
  std::optional<TargetChoice> target;

  /// The 4x4 unitary acting on the pair. ControlledNot uses the first qubit
  /// as control.
  ComplexMatrix pair_unitary() const;
};

CliffordDraw draw_clifford(RandomStream& stream);

/// How the four computational-basis weights of a magic-free pair are drawn.
enum class WeightSampling : std::uint8_t {
  Vertex,   ///< one basis projector chosen uniformly (pure stabilizer state)
  Simplex,  ///< uniform on the probability simplex (generic diagonal mixture)
};

DensityMatrix magic_free_pair_state(const CliffordDraw& clifford,
                                    const std::array<double, 4>& weights);
DensityMatrix magic_free_pair_state(RandomStream& stream,
                                    WeightSampling sampling = WeightSampling::Vertex);

enum class Coin : std::uint8_t { Heads, Tails };

Coin coin_toss(RandomStream& stream);

} // namespace orqc
