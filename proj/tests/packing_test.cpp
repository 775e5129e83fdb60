#include <instant/complexity.hpp>
#include <instant/packing.hpp>

#include <gtest/gtest.h>

#include <map>
#include <set>

using namespace instant;

TEST(Packing, SizeZeroIsTheOriginEigenvalue) {
  const PackedSpectrum s = pack_spectrum(0);
  ASSERT_EQ(s.eigenvalues.size(), 1u);
  EXPECT_EQ(s.phase(0), 0.0);
  EXPECT_EQ(s.instances[0].energy, 0.0);
}

TEST(Packing, FractionalPartsFollowTheInstanceFormula) {
  const PackedSpectrum s = pack_spectrum(4);
  for (const auto& e : s.eigenvalues) {
    const int nu = s.nu[static_cast<std::size_t>(e.n)];
    // frac / 2^R == m 2^{-n-nu} + k 2^{-nu}  (mod 1)
    const std::uint64_t expected = ((e.m + (e.k << e.n)) << (s.resolution - e.n - nu)) &
                                   ((std::uint64_t{1} << s.resolution) - 1);
    EXPECT_EQ(e.frac, expected);
  }
}

TEST(Packing, PassInvariants) {
  for (int n_max = 0; n_max <= 5; ++n_max)
    for (LiftPolicy policy : {LiftPolicy::energy_bounded, LiftPolicy::parity_strict}) {
      const PackedSpectrum s = pack_spectrum(n_max, {}, policy);
      ASSERT_EQ(s.passes.size(), static_cast<std::size_t>(n_max) + 1);
      for (const auto& p : s.passes) {
        EXPECT_TRUE(p.disjoint);
        EXPECT_TRUE(p.on_lattice);
        EXPECT_TRUE(p.count_ok);
        EXPECT_EQ(p.added, std::uint64_t{1} << (2 * p.n));
      }
      EXPECT_TRUE(s.all_disjoint());
    }
}

TEST(Packing, ExhaustivePairwiseDisjointness) {
  const PackedSpectrum s = pack_spectrum(4);
  std::vector<std::set<double>> phases;
  for (const auto& inst : s.instances) {
    std::set<double> ph;
    for (std::size_t i : inst.eigenvalues) ph.insert(s.phase(i));
    phases.push_back(std::move(ph));
  }
  for (std::size_t a = 0; a < phases.size(); ++a)
    for (std::size_t b = a + 1; b < phases.size(); ++b)
      for (double x : phases[a]) EXPECT_EQ(phases[b].count(x), 0u);
}

// Frozen against the reference implementation of the same descent.
TEST(Packing, EnergyBoundedFrozen) {
  const double energy_over_pi[] = {0.0, 3.5, 2.75, 4.0, 3.9375, 4.34375};
  const std::size_t violations[] = {0, 0, 2, 5, 27, 115};
  for (int n = 0; n <= 5; ++n) {
    const PackedSpectrum s = pack_spectrum(n);
    EXPECT_DOUBLE_EQ(s.max_energy() / pi, energy_over_pi[n]) << n;
    EXPECT_EQ(s.parity_violations(), violations[n]) << n;
  }
}

TEST(Packing, FourPiHoldsThroughSizeFour) {
  for (int n = 0; n <= 4; ++n) {
    const PackedSpectrum s = pack_spectrum(n);
    for (const auto& inst : s.instances) EXPECT_TRUE(s.within_energy_bound(inst)) << n << " " << inst.m;
  }
}

TEST(Packing, ParityStrictKeepsParityAndPaysInEnergy) {
  const PackedSpectrum s = pack_spectrum(4, {}, LiftPolicy::parity_strict);
  EXPECT_EQ(s.parity_violations(), 0u);
  EXPECT_DOUBLE_EQ(s.max_energy() / pi, 6.6875);
}

TEST(Packing, CustomNuSequence) {
  const PackedSpectrum s = pack_spectrum(3, {0, 2, 3, 5});
  EXPECT_EQ(s.eigenvalues.size(), 1u + 8u + 32u + 256u);
  EXPECT_TRUE(s.all_disjoint());
  EXPECT_EQ(s.instance(3, 7).eigenvalues.size(), 32u);
}

TEST(Packing, Preconditions) {
  EXPECT_THROW(pack_spectrum(2, {0, 1, 1}), PreconditionError);
  EXPECT_THROW(pack_spectrum(2, {1, 2, 3}), PreconditionError);
  EXPECT_THROW(pack_spectrum(12), CapacityError);
  EXPECT_THROW(parse_policy("greedy"), PreconditionError);
}

TEST(Packing, InstanceSpectraSatisfyTheComplexityBound) {
  const PackedSpectrum s = pack_spectrum(4);
  const auto grid = linear_grid(0.0, 2.0, 2000);
  for (const auto& inst : s.instances) {
    const OrbitSpectrum spec = s.spectrum(inst);
    EXPECT_NEAR(spec.total_weight(), 1.0, 1e-12);
    EXPECT_NEAR(mean_abs_phase(spec), inst.energy, 1e-12);
    EXPECT_TRUE(check_lower_bound(spec, grid).ok());
  }
}

TEST(Packing, MinimalAllocationYieldsFullConcentration) {
  // with parity k mod 2 the instance is the minimal spectrum of period 2^nu
  std::vector<std::uint64_t> intervals(16);
  for (std::uint64_t k = 0; k < 16; ++k) intervals[k] = k % 2;
  const double y = packed_halfwindow_yield(intervals, 16);
  EXPECT_NEAR(y, nu_of(halfstep_profile_periodic(16), {4, 12}), 1e-12);
}

TEST(Packing, ZetaEstimateIsReproducible) {
  const ZetaEstimate a = estimate_zeta_yield(3, 3, 200, Rng(5));
  const ZetaEstimate b = estimate_zeta_yield(3, 3, 200, Rng(5));
  EXPECT_EQ(a.mean_yield, b.mean_yield);
  EXPECT_GT(a.minimal_yield, a.mean_yield);
  EXPECT_GE(a.fraction_above, 0.0);
  EXPECT_LE(a.fraction_above, 1.0);
}
