#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "orqc/resources.hpp"

using namespace orqc;

TEST_CASE("bipartitions") {
  const Bipartition b = Bipartition::split(QubitSubset({0, 2}, 4));
  CHECK(b.part_b.size() == 2);
  CHECK(b.part_b[0] == 1);
  CHECK_NOTHROW(b.validate(4));
  CHECK_THROWS(b.validate(5));
}

TEST_CASE("log-negativity") {
  const Bipartition half = Bipartition::split(QubitSubset({0}, 2));
  CHECK(log_negativity(test::bell_state(), half) == doctest::Approx(std::log2(1.5)).epsilon(1e-12));
  CHECK(log_negativity(test::bell_state(), half, NegativityConvention::Standard) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(negativity(test::bell_state(), half) == doctest::Approx(0.5));

  auto s = test::stream(1);
  for (int i = 0; i < 20; ++i) {
    const DensityMatrix prod = kron(hs_random_density(2, s), hs_random_density(1, s));
    CHECK(log_negativity(prod, Bipartition::split(QubitSubset({0, 1}, 3))) == 0.0);
  }
  CHECK(log_negativity(DensityMatrix::maximally_mixed(2), half) == 0.0);
}

TEST_CASE("mutual information") {
  const Bipartition half = Bipartition::split(QubitSubset({0}, 2));
  CHECK(mutual_information(test::bell_state(), half) == doctest::Approx(2.0).epsilon(1e-10));
  // Pure state: I(A:B) = 2 S_A, and every GHZ marginal carries one bit.
  CHECK(mutual_information(test::ghz_state(3), Bipartition::split(QubitSubset({0}, 3))) ==
        doctest::Approx(2.0).epsilon(1e-10));
  const DensityMatrix ghz_pair = partial_trace(test::ghz_state(3), QubitSubset({0, 1}, 3));
  CHECK(mutual_information(ghz_pair, Bipartition::split(QubitSubset({0}, 2))) ==
        doctest::Approx(1.0).epsilon(1e-10));
  auto s = test::stream(2);
  const DensityMatrix prod = kron(hs_random_density(1, s), hs_random_density(1, s));
  CHECK(std::abs(mutual_information(prod, half)) < 1e-10);
}

TEST_CASE("fluctuation") {
  const std::vector<double> constant(7, 3.25);
  const MeanVariance c = fluctuation(constant);
  CHECK(c.mean == 3.25);
  CHECK(c.variance == 0.0);

  const std::vector<double> two{0.0, 1.0};
  const MeanVariance t = fluctuation(two);
  CHECK(t.mean == 0.5);
  CHECK(t.variance == 0.25);

  CHECK_THROWS(fluctuation(std::vector<double>{}));
}

TEST_CASE("fluctuation merges are order independent") {
  auto s = test::stream(3);
  std::vector<double> xs(1000);
  for (auto& x : xs) x = s.normal() * 3.0 + 1.0;

  Fluctuation whole;
  for (double x : xs) whole.add(x);

  Fluctuation parts[4];
  for (std::size_t i = 0; i < xs.size(); ++i) parts[i % 4].add(xs[i]);
  Fluctuation merged;
  for (int p = 3; p >= 0; --p) merged.merge(parts[p]);

  CHECK(merged.count() == whole.count());
  CHECK(merged.mean() == doctest::Approx(whole.mean()).epsilon(1e-12));
  CHECK(merged.variance() == doctest::Approx(whole.variance()).epsilon(1e-12));

  Fluctuation empty;
  merged.merge(empty);
  CHECK(merged.count() == 1000);
}
