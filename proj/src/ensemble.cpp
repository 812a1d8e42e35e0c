#include "orqc/ensemble.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "kernels.hpp"

namespace orqc {

namespace {

std::size_t checked_power(std::size_t d, int k, std::size_t cap) {
  if (k < 1) throw std::invalid_argument("moment order k must be >= 1");
  std::size_t p = 1;
  for (int i = 0; i < k; ++i) {
    p *= d;
    if (p > cap) {
      throw std::invalid_argument("d^k = " + std::to_string(d) + "^" + std::to_string(k) +
                                  " exceeds the moment cap of " + std::to_string(cap));
    }
  }
  return p;
}

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return r;
}

} // namespace

double ProjectedEnsemble::total_probability() const {
  double s = 0.0;
  for (const auto& m : members) s += m.probability;
  return s;
}

ProjectedEnsemble build_projected_ensemble(const DensityMatrix& state,
                                           const QubitSubset& part_a) {
  const int n = state.n_qubits();
  if (part_a.n_qubits() != n) {
    throw std::invalid_argument("subsystem A belongs to a different register");
  }
  if (part_a.empty() || part_a.size() >= static_cast<std::size_t>(n)) {
    throw std::invalid_argument("subsystem A must be a non-empty proper subset");
  }
  const QubitSubset part_b = part_a.complement();
  const auto a_off = kernels::local_offsets(n, part_a.indices());
  const auto b_off = kernels::local_offsets(n, part_b.indices());
  const ComplexMatrix& rho = state.matrix();
  const auto da = static_cast<Eigen::Index>(a_off.size());

  ProjectedEnsemble ens;
  ens.n_qubits_a = static_cast<int>(part_a.size());
  for (std::size_t b : b_off) {
    double p = 0.0;
    for (std::size_t a : a_off) p += rho(a + b, a + b).real();
    if (p < kOutcomeFloor) continue;
    ComplexMatrix cond(da, da);
    for (Eigen::Index i = 0; i < da; ++i) {
      for (Eigen::Index j = 0; j < da; ++j) {
        cond(i, j) = rho(a_off[i] + b, a_off[j] + b) / p;
      }
    }
    ens.members.push_back({p, DensityMatrix::from_trusted(std::move(cond))});
  }
  return ens;
}

ComplexMatrix kth_moment(const ProjectedEnsemble& ensemble, int k, std::size_t cap) {
  const std::size_t dk = checked_power(ensemble.dim(), k, cap);
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (const auto& m : ensemble.members) {
    ComplexMatrix power = m.state.matrix();
    for (int i = 1; i < k; ++i) power = kron(power, m.state.matrix());
    out += m.probability * power;
  }
  return out;
}

ComplexMatrix permutation_operator(std::size_t d, const std::vector<int>& perm) {
  const auto k = static_cast<int>(perm.size());
  const std::size_t dk = checked_power(d, k, std::size_t(-1));
  ComplexMatrix p = ComplexMatrix::Zero(dk, dk);
  std::vector<std::size_t> digits(static_cast<std::size_t>(k));
  for (std::size_t idx = 0; idx < dk; ++idx) {
    std::size_t rest = idx;
    for (int j = k - 1; j >= 0; --j) {
      digits[static_cast<std::size_t>(j)] = rest % d;
      rest /= d;
    }
    std::size_t target = 0;
    for (int j = 0; j < k; ++j) target = target * d + digits[static_cast<std::size_t>(perm[j])];
    p(target, idx) = 1.0;
  }
  return p;
}

ComplexMatrix haar_moment(std::size_t d, int k, std::size_t cap) {
  const std::size_t dk = checked_power(d, k, cap);
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  ComplexMatrix sym = ComplexMatrix::Zero(dk, dk);
  double count = 0.0;
  do {
    sym += permutation_operator(d, perm);
    count += 1.0;
  } while (std::next_permutation(perm.begin(), perm.end()));
  sym /= count;
  sym /= binomial(d + static_cast<std::size_t>(k) - 1, static_cast<std::size_t>(k));
  return sym;
}

double design_distance(const ComplexMatrix& ensemble_moment, std::size_t d, int k) {
  const ComplexMatrix haar = haar_moment(d, k, static_cast<std::size_t>(ensemble_moment.rows()));
  if (haar.rows() != ensemble_moment.rows()) {
    throw std::invalid_argument("moment operator has the wrong dimension");
  }
  const ComplexMatrix diff = ensemble_moment - haar;
  return std::clamp(0.5 * trace_norm(diff), 0.0, 1.0);
}

double design_distance(const ProjectedEnsemble& ensemble, int k, std::size_t cap) {
  return design_distance(kth_moment(ensemble, k, cap), ensemble.dim(), k);
}

} // namespace orqc
